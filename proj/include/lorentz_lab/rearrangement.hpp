#pragma once

#include <array>
#include <utility>
#include <vector>

#include "lorentz_lab/domain.hpp"

namespace lorentz_lab {

/// Axis-aligned box [lo, hi] carrying a constant value. Only the first `dim`
/// coordinates are used.
struct Box {
    std::array<double, 2> lo{};
    std::array<double, 2> hi{};
    double value = 0.0;
};

/// Finite sum of pairwise disjoint boxes in R^1 or R^2.
class StepField {
public:
    StepField(int dim, std::vector<Box> boxes);

    int dim() const { return dim_; }
    const std::vector<Box>& boxes() const { return boxes_; }
    double measure(const Box& b) const;
    double max_value() const;

private:
    int dim_;
    std::vector<Box> boxes_;
};

/// f(x) = h(|x|) on R^dim with h non-increasing on a radius grid and 0 past
/// the last radius edge. h[0] extends down to radius 0.
class RadialField {
public:
    RadialField(int dim, MonotoneFunction h);

    int dim() const { return dim_; }
    const MonotoneFunction& profile() const { return h_; }
    /// Measure of the unit ball: 2 in R^1, pi in R^2.
    double unit_ball() const;

private:
    int dim_;
    MonotoneFunction h_;
};

/// Exact non-increasing rearrangement of a step function: value[i] on
/// [M_{i-1}, M_i) where M_i is the running sum of measure[], values strictly
/// decreasing and positive.
struct DecreasingStep {
    std::vector<double> values;
    std::vector<double> measures;

    double total_measure() const;
    /// f*(t), right-continuous.
    double value_at(double t) const;
    /// int_0^t f*.
    double integral_to(double t) const;
    /// |{f* > lambda}|
    double distribution(double lambda) const;
};

double distribution(const StepField& f, double lambda);
/// Measure of {g > lambda} over the grid cells only.
double distribution(const GridFunction& g, double lambda);
/// Same, with the first value extended over (0, t_min].
double distribution(const MonotoneFunction& f, double lambda);

/// Rearrangement of a finite family of (value, measure) pieces.
DecreasingStep rearrange_pieces(std::vector<std::pair<double, double>> pieces);
DecreasingStep rearrange_exact(const StepField& f);
DecreasingStep rearrange_exact(const RadialField& f);

/// Rearrangement resampled onto `target`, taking the essential sup over each
/// cell; cell 0 is read as (0, e_1].
MonotoneFunction rearrange(const StepField& f, const GridPtr& target);
MonotoneFunction rearrange(const RadialField& f, const GridPtr& target);
MonotoneFunction resample(const DecreasingStep& s, const GridPtr& target);

/// A monotone grid function viewed as a 1-d step field on (0, t_max].
StepField to_step_field(const MonotoneFunction& f);

/// f**(t) = (1/t) int_0^t f* at cell midpoints, head included.
MonotoneFunction doublestar(const MonotoneFunction& fstar);
MonotoneFunction doublestar(const DecreasingStep& fstar, const GridPtr& target);

}  // namespace lorentz_lab
