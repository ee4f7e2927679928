#pragma once

#include <array>
#include <string>
#include <vector>

#include "lorentz_lab/domain.hpp"
#include "lorentz_lab/rearrangement.hpp"

namespace lorentz_lab {

/// Data of M_{phi, Lambda^alpha(b)}. phi and b are needed at arbitrary
/// measures, so the sandbox works with descriptors.
struct MaximalSpec {
    PowerLog phi;
    double alpha = 1.0;
    PowerLog b;

    /// phi(t) = t, alpha = 1, b = 1: the Hardy-Littlewood maximal operator.
    static MaximalSpec classical();
    bool is_classical() const;
};

struct SandboxOptions {
    int cube_budget = 16;     // centred cubes per sample point, log-spaced sizes
    int lattice_1d = 400;     // uniform lattice points on [-R, R] in R^1
    int lattice_2d = 48;      // per axis in R^2
    double margin = 8.0;      // R = margin * support radius
    unsigned threads = 1;
    int tail_cells = 256;     // classical R^1 only: cells past the box
    double tail_factor = 1e3; // tail reaches R * tail_factor
};

/// A sampled lower estimate of M f. Sample k stands for a region of measure
/// measures[k] (its Voronoi cell); in R^1 the lattice points carry exact
/// values for the lattice family separately.
struct SampledMaximal {
    int dim = 1;
    double R = 0.0;
    std::vector<double> coords;                 // lattice coordinates (per axis)
    std::vector<std::array<double, 2>> points;  // sample points
    std::vector<double> values;
    std::vector<double> measures;
    std::vector<double> lattice_values;         // R^1: M at each lattice point
    bool tail_appended = false;

    /// (M f)* from the samples.
    DecreasingStep rearranged() const;
};

/// Max over a deterministic cube family of ||f chi_Q||_{Lambda^alpha(b)} / phi(|Q|):
/// every cube with corners on the lattice plus cube_budget centred cubes.
SampledMaximal eval_maximal(const StepField& f, const MaximalSpec& spec, const SandboxOptions& opt = {});
SampledMaximal eval_maximal(const RadialField& f, const MaximalSpec& spec, const SandboxOptions& opt = {});

/// [sup_{tau > t} phi(tau)^{-alpha} int_0^tau (f*)^alpha b]^{1/alpha} through T_{B/phi^alpha, b}.
MonotoneFunction rhs_reduction(const MonotoneFunction& fstar, const WeightSpec& phi, double alpha,
                               const WeightSpec& b);

/// Area of the disc of radius r about 0 intersected with [x0,x1] x [y0,y1].
double disc_rect_area(double r, double x0, double x1, double y0, double y1);

struct SandwichResult {
    double c_low = 0.0;
    double C_high = 0.0;
    std::vector<double> t;
    std::vector<double> lhs;    // (M f)*
    std::vector<double> rhs;
    std::vector<double> ratio;  // lhs / rhs on the trusted range, 0/0 skipped
    std::vector<std::string> warnings;
};

/// Default target grid for (M f)*: one lattice cell up to the box measure.
GridPtr sandbox_target_grid(const SampledMaximal& m, std::size_t cells = 80);

/// (M f)* against rhs_reduction for radial non-increasing f, on the middle
/// 80% of the target grid.
SandwichResult sandwich_check(const RadialField& f, const MaximalSpec& spec, const SandboxOptions& opt = {},
                              GridPtr target = nullptr);

/// (M f)* against f** for the classical operator and arbitrary step fields.
SandwichResult herz_stein_check(const StepField& f, const SandboxOptions& opt = {}, GridPtr target = nullptr);

}  // namespace lorentz_lab
