#include "lorentz_lab/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "lorentz_lab/errors.hpp"

namespace lorentz_lab {

namespace {

double overlap_len(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Sorts (value, measure) pairs by decreasing value and merges ties.
DecreasingStep collapse(std::vector<std::pair<double, double>> pieces) {
    std::erase_if(pieces, [](const auto& p) { return !(p.first > 0.0) || !(p.second > 0.0); });
    std::stable_sort(pieces.begin(), pieces.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    DecreasingStep out;
    for (const auto& [v, m] : pieces) {
        if (!out.values.empty() && out.values.back() == v) {
            out.measures.back() += m;
        } else {
            out.values.push_back(v);
            out.measures.push_back(m);
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- fields

StepField::StepField(int dim, std::vector<Box> boxes) : dim_(dim), boxes_(std::move(boxes)) {
    if (dim_ != 1 && dim_ != 2) throw parameter_error("step fields live in R^1 or R^2");
    for (const auto& b : boxes_) {
        if (!(b.value >= 0.0)) throw parameter_error("step field values must be nonnegative");
        for (int d = 0; d < dim_; ++d)
            if (!(b.hi[d] >= b.lo[d])) throw parameter_error("box with hi < lo");
    }
    if (dim_ == 1) {
        std::vector<const Box*> order;
        for (const auto& b : boxes_) order.push_back(&b);
        std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->lo[0] < b->lo[0]; });
        for (std::size_t i = 1; i < order.size(); ++i)
            if (order[i]->lo[0] < order[i - 1]->hi[0])
                throw parameter_error("step field boxes overlap");
    } else {
        for (std::size_t i = 0; i < boxes_.size(); ++i)
            for (std::size_t j = i + 1; j < boxes_.size(); ++j) {
                const auto& a = boxes_[i];
                const auto& b = boxes_[j];
                if (overlap_len(a.lo[0], a.hi[0], b.lo[0], b.hi[0]) > 0.0 &&
                    overlap_len(a.lo[1], a.hi[1], b.lo[1], b.hi[1]) > 0.0)
                    throw parameter_error("step field boxes overlap");
            }
    }
}

double StepField::measure(const Box& b) const {
    double m = 1.0;
    for (int d = 0; d < dim_; ++d) m *= b.hi[d] - b.lo[d];
    return m;
}

double StepField::max_value() const {
    double m = 0.0;
    for (const auto& b : boxes_) m = std::max(m, b.value);
    return m;
}

RadialField::RadialField(int dim, MonotoneFunction h) : dim_(dim), h_(std::move(h)) {
    if (dim_ != 1 && dim_ != 2) throw parameter_error("radial fields live in R^1 or R^2");
}

double RadialField::unit_ball() const { return dim_ == 1 ? 2.0 : std::numbers::pi; }

// ---------------------------------------------------------------- DecreasingStep

double DecreasingStep::total_measure() const {
    double m = 0.0;
    for (double x : measures) m += x;
    return m;
}

double DecreasingStep::value_at(double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc += measures[i];
        if (t < acc) return values[i];
    }
    return 0.0;
}

double DecreasingStep::integral_to(double t) const {
    double acc = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < values.size() && acc < t; ++i) {
        const double take = std::min(measures[i], t - acc);
        total += values[i] * take;
        acc += measures[i];
    }
    return total;
}

double DecreasingStep::distribution(double lambda) const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size() && values[i] > lambda; ++i) m += measures[i];
    return m;
}

// ---------------------------------------------------------------- distribution

double distribution(const StepField& f, double lambda) {
    double m = 0.0;
    for (const auto& b : f.boxes())
        if (b.value > lambda) m += f.measure(b);
    return m;
}

double distribution(const GridFunction& g, double lambda) {
    const auto& grid = *g.grid();
    double m = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g[k] > lambda) m += grid.width(k);
    return m;
}

double distribution(const MonotoneFunction& f, double lambda) {
    double m = distribution(f.as_grid_function(), lambda);
    if (f.size() > 0 && f[0] > lambda) m += f.grid()->t_min();
    return m;
}

// ---------------------------------------------------------------- rearrange

DecreasingStep rearrange_pieces(std::vector<std::pair<double, double>> pieces) {
    return collapse(std::move(pieces));
}

DecreasingStep rearrange_exact(const StepField& f) {
    std::vector<std::pair<double, double>> pieces;
    pieces.reserve(f.boxes().size());
    for (const auto& b : f.boxes()) pieces.emplace_back(b.value, f.measure(b));
    return collapse(std::move(pieces));
}

DecreasingStep rearrange_exact(const RadialField& f) {
    const auto& h = f.profile();
    const auto& g = *h.grid();
    const double omega = f.unit_ball();
    const int n = f.dim();
    auto ball = [&](double r) { return omega * (n == 1 ? r : r * r); };
    std::vector<std::pair<double, double>> pieces;
    pieces.reserve(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double inner = k == 0 ? 0.0 : ball(g.left(k));
        pieces.emplace_back(h[k], ball(g.right(k)) - inner);
    }
    return collapse(std::move(pieces));
}

MonotoneFunction resample(const DecreasingStep& s, const GridPtr& target) {
    const auto& g = *target;
    std::vector<double> out(g.size(), 0.0);
    std::size_t i = 0;
    double acc = s.measures.empty() ? 0.0 : s.measures[0];
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (k == 0) {
            out[k] = s.values.empty() ? 0.0 : s.values[0];
            continue;
        }
        // ess sup over (e_k, e_{k+1}] is f*(e_k+); breakpoints within
        // rounding of e_k count as e_k.
        const double e = g.left(k);
        while (i < s.values.size() && !(acc > e * (1.0 + 1e-12))) {
            ++i;
            if (i < s.values.size()) acc += s.measures[i];
        }
        out[k] = i < s.values.size() ? s.values[i] : 0.0;
    }
    return MonotoneFunction(target, std::move(out));
}

MonotoneFunction rearrange(const StepField& f, const GridPtr& target) {
    return resample(rearrange_exact(f), target);
}

MonotoneFunction rearrange(const RadialField& f, const GridPtr& target) {
    return resample(rearrange_exact(f), target);
}

StepField to_step_field(const MonotoneFunction& f) {
    const auto& g = *f.grid();
    std::vector<Box> boxes(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        boxes[k].lo[0] = k == 0 ? 0.0 : g.left(k);
        boxes[k].hi[0] = g.right(k);
        boxes[k].value = f[k];
    }
    return StepField(1, std::move(boxes));
}

// ---------------------------------------------------------------- f**

MonotoneFunction doublestar(const MonotoneFunction& fstar) {
    const auto& g = *fstar.grid();
    std::vector<double> out(fstar.size());
    double acc = fstar[0] * g.t_min();
    for (std::size_t k = 0; k < fstar.size(); ++k) {
        const double m = g.midpoint(k);
        double v = (acc + fstar[k] * (m - g.left(k))) / m;
        // the running average is non-increasing; clamp rounding noise
        if (k > 0) v = std::min(v, out[k - 1]);
        out[k] = v;
        acc += fstar[k] * g.width(k);
    }
    return MonotoneFunction(fstar.grid(), std::move(out));
}

MonotoneFunction doublestar(const DecreasingStep& fstar, const GridPtr& target) {
    const auto& g = *target;
    std::vector<double> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double m = g.midpoint(k);
        double v = fstar.integral_to(m) / m;
        if (k > 0) v = std::min(v, out[k - 1]);
        out[k] = v;
    }
    return MonotoneFunction(target, std::move(out));
}

}  // namespace lorentz_lab
