#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace lorentz_lab {

/// Partition e_0 = t_min < e_1 < ... < e_N = t_max of a truncated half-line.
/// Cell k is (e_k, e_{k+1}]; its sample point is the geometric midpoint.
class Grid {
public:
    static Grid log_uniform(double t_min, double t_max, std::size_t cells);
    static Grid from_edges(std::vector<double> edges);

    std::size_t size() const { return edges_.size() - 1; }
    double t_min() const { return edges_.front(); }
    double t_max() const { return edges_.back(); }
    double edge(std::size_t i) const { return edges_[i]; }
    double left(std::size_t k) const { return edges_[k]; }
    double right(std::size_t k) const { return edges_[k + 1]; }
    double width(std::size_t k) const { return edges_[k + 1] - edges_[k]; }
    double midpoint(std::size_t k) const { return mids_[k]; }
    std::span<const double> edges() const { return edges_; }
    std::span<const double> midpoints() const { return mids_; }

    /// Index of the cell (e_k, e_{k+1}] containing t, clamped to [0, N-1].
    std::size_t locate(double t) const;

private:
    explicit Grid(std::vector<double> edges);
    std::vector<double> edges_;
    std::vector<double> mids_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_log_grid(double t_min, double t_max, std::size_t cells);
GridPtr make_grid(std::vector<double> edges);
/// Same object or identical edges.
bool same_grid(const GridPtr& a, const GridPtr& b);

/// Nonnegative piecewise-constant function, one value per cell. +inf allowed.
class GridFunction {
public:
    GridFunction(GridPtr grid, std::vector<double> values);
    static GridFunction constant(GridPtr grid, double c);

    const GridPtr& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    std::size_t size() const { return values_.size(); }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// A GridFunction whose values are non-increasing. Wherever an integral from
/// 0 is needed, the first value is taken to extend down to 0.
class MonotoneFunction {
public:
    MonotoneFunction(GridPtr grid, std::vector<double> values);
    explicit MonotoneFunction(GridFunction g);

    const GridPtr& grid() const { return fn_.grid(); }
    std::span<const double> values() const { return fn_.values(); }
    double operator[](std::size_t k) const { return fn_[k]; }
    std::size_t size() const { return fn_.size(); }
    const GridFunction& as_grid_function() const { return fn_; }

private:
    GridFunction fn_;
};

/// w(t) = scale * t^exponent * l(t) with l(t) = (1 + |log t|)^{log0} on (0,1]
/// and (1 + |log t|)^{log_inf} on [1, inf).
struct PowerLog {
    double exponent = 0.0;
    double log0 = 0.0;
    double log_inf = 0.0;
    double scale = 1.0;

    double operator()(double t) const;
    bool pure_power() const { return log0 == 0.0 && log_inf == 0.0; }
    /// Integral over (a, b]: closed form for pure powers, adaptive
    /// Gauss-Kronrod in log t otherwise.
    double integral(double a, double b) const;
    /// Integral over (0, t]; empty when exponent <= -1.
    std::optional<double> integral_from_zero(double t) const;
};

/// A strictly positive weight sampled at cell midpoints, optionally backed by
/// an exact power-log descriptor used for cell masses.
class WeightSpec {
public:
    static WeightSpec from_samples(GridFunction samples);
    static WeightSpec from_descriptor(GridPtr grid, PowerLog d);
    /// Samples and descriptor together; they must agree to relative 1e-12.
    WeightSpec(GridFunction samples, std::optional<PowerLog> descriptor);

    const GridPtr& grid() const { return samples_.grid(); }
    const GridFunction& samples() const { return samples_; }
    const std::optional<PowerLog>& descriptor() const { return descriptor_; }
    double operator[](std::size_t k) const { return samples_[k]; }
    std::size_t size() const { return samples_.size(); }

    /// Mass of (a, b] with a, b inside the same cell k.
    double mass_within(std::size_t k, double a, double b) const;
    double cell_mass(std::size_t k) const;
    WeightSpec scaled(double c) const;

private:
    GridFunction samples_;
    std::optional<PowerLog> descriptor_;
};

enum class HeadKind {
    analytic,            // exact integral over (0, t_min] from the descriptor
    constant_extension,  // samples only: first sample extended down to 0
    truncated            // non-integrable at 0: head set to 0
};

enum class HeadPolicy { integrable_only, allow_truncation };

/// Primitive W(t) = int_0^t w of a weight, tabulated at every edge and at
/// every cell midpoint. Cell 0 absorbs the head mass on (0, t_min].
struct CumulativeWeight {
    HeadKind head_kind = HeadKind::analytic;
    double head = 0.0;
    std::vector<double> mass;     // cell mass; mass[0] includes the head
    std::vector<double> lo;       // mass of (e_k, m_k]; lo[0] includes the head
    std::vector<double> hi;       // mass of (m_k, e_{k+1}]
    std::vector<double> prefix;   // W(e_{k+1})
    std::vector<double> at_mid;   // W(m_k)
    GridPtr grid;
    std::optional<PowerLog> descriptor;  // of the base weight
    std::vector<double> samples;         // of the base weight

    bool truncated() const { return head_kind == HeadKind::truncated; }
    std::size_t size() const { return mass.size(); }
    /// W(t) for t in [t_min, t_max]; W(t_min) = head.
    double value_at(double t) const;
};

CumulativeWeight cumulative(const WeightSpec& w, HeadPolicy policy = HeadPolicy::integrable_only);

/// Exact integral over (a, b] of the piecewise-constant representation.
double integrate(const GridFunction& f, double a, double b);
/// Same, but cells are integrated through the descriptor when one exists.
double integrate(const WeightSpec& w, double a, double b);

GridFunction suffix_sup(const GridFunction& g);
GridFunction prefix_sup(const GridFunction& g);

}  // namespace lorentz_lab
