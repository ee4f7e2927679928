#pragma once

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "lorentz_lab/characterization.hpp"
#include "lorentz_lab/rearrangement.hpp"

namespace fixtures {

using namespace lorentz_lab;

inline double uniform(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

/// Log grid with random end points around 1.
inline GridPtr random_grid(std::mt19937_64& rng, std::size_t cells) {
    return make_log_grid(std::pow(10.0, uniform(rng, -4.0, -1.0)), std::pow(10.0, uniform(rng, 1.0, 4.0)), cells);
}

/// Grid with randomly spaced edges.
inline GridPtr random_edges(std::mt19937_64& rng, std::size_t cells) {
    std::vector<double> e(cells + 1);
    double x = std::pow(10.0, uniform(rng, -3.0, -1.0));
    for (auto& v : e) {
        v = x;
        x *= std::exp(uniform(rng, 0.01, 0.2));
    }
    return make_grid(std::move(e));
}

/// Either a power-log descriptor or log-uniform samples, positive everywhere.
inline WeightSpec random_weight(std::mt19937_64& rng, const GridPtr& g) {
    if (uniform(rng, 0.0, 1.0) < 0.5) {
        PowerLog d{uniform(rng, -0.9, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, 0.5, 2.0)};
        if (uniform(rng, 0.0, 1.0) < 0.5) d.log0 = d.log_inf = 0.0;
        return WeightSpec::from_descriptor(g, d);
    }
    std::vector<double> s(g->size());
    for (auto& x : s) x = std::exp(uniform(rng, -2.0, 2.0));
    return WeightSpec::from_samples(GridFunction(g, std::move(s)));
}

/// Random non-increasing function with some zero tail.
inline MonotoneFunction random_monotone(std::mt19937_64& rng, const GridPtr& g) {
    std::vector<double> f(g->size());
    double level = std::exp(uniform(rng, 0.0, 3.0));
    const std::size_t zero_from = static_cast<std::size_t>(uniform(rng, 0.6, 1.0) * static_cast<double>(f.size()));
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (uniform(rng, 0.0, 1.0) < 0.2) level *= uniform(rng, 0.2, 1.0);
        f[k] = k >= zero_from ? 0.0 : level;
    }
    return MonotoneFunction(g, std::move(f));
}

/// (p, q) inside the given regime.
inline std::pair<double, double> random_exponents(std::mt19937_64& rng, Regime r) {
    switch (r) {
        case Regime::i: {
            const double p = uniform(rng, 1.2, 4.0);
            return {p, p + uniform(rng, 0.0, 3.0)};
        }
        case Regime::ii: return {1.0, uniform(rng, 1.0, 4.0)};
        case Regime::iii: {
            const double p = uniform(rng, 1.5, 4.0);
            return {p, uniform(rng, 0.3, p - 0.2)};
        }
        case Regime::iv: return {1.0, uniform(rng, 0.2, 0.9)};
        case Regime::v: {
            const double p = uniform(rng, 0.2, 0.9);
            return {p, p + uniform(rng, 0.0, 2.0)};
        }
        default: {
            const double p = uniform(rng, 0.3, 0.95);
            return {p, uniform(rng, 0.1, p - 0.05)};
        }
    }
}

inline constexpr Regime kSixRegimes[] = {Regime::i, Regime::ii, Regime::iii, Regime::iv, Regime::v, Regime::vi};

/// Disjoint boxes on a dyadic lattice, so every measure and sum is exact.
inline StepField random_step_field(std::mt19937_64& rng, int dim) {
    const double h = 1.0 / 64.0;
    std::vector<Box> boxes;
    const int cells = dim == 1 ? 40 : 10;
    for (int i = 0; i < cells; ++i) {
        for (int j = 0; j < (dim == 1 ? 1 : cells); ++j) {
            if (uniform(rng, 0.0, 1.0) < 0.3) continue;
            Box b;
            const double w = h * std::floor(uniform(rng, 1.0, 9.0));
            b.lo[0] = 8.0 * h * i;
            b.hi[0] = b.lo[0] + w;
            if (dim == 2) {
                b.lo[1] = 8.0 * h * j;
                b.hi[1] = b.lo[1] + h * std::floor(uniform(rng, 1.0, 9.0));
            }
            b.value = std::floor(uniform(rng, 1.0, 8.0)) * 0.25;
            boxes.push_back(b);
        }
    }
    return StepField(dim, std::move(boxes));
}

}  // namespace fixtures
