#include "lorentz_lab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lorentz_lab/errors.hpp"
#include "lorentz_lab/extended.hpp"
#include "lorentz_lab/scan.hpp"

namespace lorentz_lab {

namespace {

void check_edges(const std::vector<double>& e) {
    if (e.size() < 3) throw parameter_error("grid needs at least 2 cells");
    if (!(e.front() > 0.0) || !std::isfinite(e.back()))
        throw parameter_error("grid edges must lie in (0, inf)");
    for (std::size_t i = 1; i < e.size(); ++i)
        if (!(e[i] > e[i - 1])) throw parameter_error("grid edges must be strictly increasing");
}

// int_x^y t^a dt for 0 < x <= y, stable when a + 1 is near 0.
double power_integral(double x, double y, double a) {
    const double c = a + 1.0;
    const double l = std::log(y / x);
    if (c == 0.0) return l;
    return std::pow(x, c) * std::expm1(c * l) / c;
}

double log_factor(double t, double log0, double log_inf) {
    const double e = t <= 1.0 ? log0 : log_inf;
    if (e == 0.0) return 1.0;
    return std::pow(1.0 + std::abs(std::log(t)), e);
}

}  // namespace

// ---------------------------------------------------------------- Grid

Grid::Grid(std::vector<double> edges) : edges_(std::move(edges)) {
    check_edges(edges_);
    mids_.resize(edges_.size() - 1);
    for (std::size_t k = 0; k + 1 < edges_.size(); ++k)
        mids_[k] = std::sqrt(edges_[k] * edges_[k + 1]);
}

Grid Grid::log_uniform(double t_min, double t_max, std::size_t cells) {
    if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max))
        throw parameter_error("log grid requires 0 < t_min < t_max < inf");
    if (cells < 2) throw parameter_error("log grid requires at least 2 cells");
    std::vector<double> e(cells + 1);
    const double l0 = std::log(t_min);
    const double span = std::log(t_max) - l0;
    for (std::size_t k = 0; k <= cells; ++k)
        e[k] = std::exp(l0 + span * static_cast<double>(k) / static_cast<double>(cells));
    e.front() = t_min;
    e.back() = t_max;
    return Grid(std::move(e));
}

Grid Grid::from_edges(std::vector<double> edges) { return Grid(std::move(edges)); }

std::size_t Grid::locate(double t) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), t);
    if (it == edges_.begin()) return 0;
    const auto i = static_cast<std::size_t>(it - edges_.begin()) - 1;
    return std::min(i, size() - 1);
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
    return a == b || (a && b && a->edges().size() == b->edges().size() &&
                      std::equal(a->edges().begin(), a->edges().end(), b->edges().begin()));
}

GridPtr make_log_grid(double t_min, double t_max, std::size_t cells) {
    return std::make_shared<const Grid>(Grid::log_uniform(t_min, t_max, cells));
}

GridPtr make_grid(std::vector<double> edges) {
    return std::make_shared<const Grid>(Grid::from_edges(std::move(edges)));
}

// ---------------------------------------------------------------- functions

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw parameter_error("grid function without a grid");
    if (values_.size() != grid_->size())
        throw parameter_error("grid function has " + std::to_string(values_.size()) +
                              " values for " + std::to_string(grid_->size()) + " cells");
    for (double v : values_)
        if (!(v >= 0.0)) throw parameter_error("grid function values must be nonnegative");
}

GridFunction GridFunction::constant(GridPtr grid, double c) {
    const auto n = grid->size();
    return GridFunction(std::move(grid), std::vector<double>(n, c));
}

MonotoneFunction::MonotoneFunction(GridPtr grid, std::vector<double> values)
    : MonotoneFunction(GridFunction(std::move(grid), std::move(values))) {}

MonotoneFunction::MonotoneFunction(GridFunction g) : fn_(std::move(g)) {
    const auto v = fn_.values();
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k] > v[k - 1]) throw parameter_error("monotone function must be non-increasing");
}

// ---------------------------------------------------------------- PowerLog

double PowerLog::operator()(double t) const {
    return scale * std::pow(t, exponent) * log_factor(t, log0, log_inf);
}

double PowerLog::integral(double a, double b) const {
    if (!(a > 0.0) || b < a) throw parameter_error("PowerLog::integral needs 0 < a <= b");
    if (a == b) return 0.0;
    if (pure_power()) return scale * power_integral(a, b, exponent);
    // in s = log t the integrand e^{(exponent+1)s} l(e^s) is analytic on each
    // side of 1; fixed 15-point Gauss-Kronrod on panels at most 1/2 wide
    auto piece = [&](double x, double y) {
        const double c = exponent + 1.0;
        auto f = [&](double s) { return std::exp(c * s) * log_factor(std::exp(s), log0, log_inf); };
        const double lx = std::log(x), ly = std::log(y);
        const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * (ly - lx))));
        double sum = 0.0;
        for (int i = 0; i < panels; ++i)
            sum += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                f, lx + (ly - lx) * i / panels, i + 1 == panels ? ly : lx + (ly - lx) * (i + 1) / panels, 0);
        return sum;
    };
    double total = 0.0;
    if (a < 1.0 && b > 1.0)
        total = piece(a, 1.0) + piece(1.0, b);
    else
        total = piece(a, b);
    return scale * total;
}

std::optional<double> PowerLog::integral_from_zero(double t) const {
    const double c = exponent + 1.0;
    if (!(c > 0.0)) return std::nullopt;
    if (!(t > 0.0)) return 0.0;
    if (pure_power()) return scale * std::pow(t, c) / c;
    const double x0 = std::min(t, 1.0);
    double near_zero = 0.0;
    if (log0 == 0.0) {
        near_zero = std::pow(x0, c) / c;
    } else {
        // s = x0 e^{-y}: int_0^x0 s^a (1 - log s)^A0 ds = x0^c int_0^inf e^{-cy} (L + y)^A0 dy
        const double L = 1.0 - std::log(x0);
        boost::math::quadrature::exp_sinh<double> integrator;
        const double A0 = log0;
        const double I = integrator.integrate(
            [c, L, A0](double y) { return std::exp(-c * y) * std::pow(L + y, A0); });
        near_zero = std::pow(x0, c) * I;
    }
    double total = scale * near_zero;
    if (t > 1.0) total += integral(1.0, t);
    return total;
}

// ---------------------------------------------------------------- WeightSpec

WeightSpec WeightSpec::from_samples(GridFunction samples) {
    return WeightSpec(std::move(samples), std::nullopt);
}

WeightSpec WeightSpec::from_descriptor(GridPtr grid, PowerLog d) {
    std::vector<double> s(grid->size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = d(grid->midpoint(k));
    return WeightSpec(GridFunction(std::move(grid), std::move(s)), d);
}

WeightSpec::WeightSpec(GridFunction samples, std::optional<PowerLog> descriptor)
    : samples_(std::move(samples)), descriptor_(descriptor) {
    const auto& g = *samples_.grid();
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        const double s = samples_[k];
        if (!(s > 0.0) || !std::isfinite(s))
            throw parameter_error("weight samples must be strictly positive and finite");
        if (descriptor_) {
            const double d = (*descriptor_)(g.midpoint(k));
            if (std::abs(d - s) > 1e-12 * std::abs(d))
                throw parameter_error("weight samples disagree with descriptor");
        }
    }
}

double WeightSpec::mass_within(std::size_t k, double a, double b) const {
    if (b <= a) return 0.0;
    if (descriptor_) return descriptor_->integral(a, b);
    return samples_[k] * (b - a);
}

double WeightSpec::cell_mass(std::size_t k) const {
    const auto& g = *grid();
    return mass_within(k, g.left(k), g.right(k));
}

WeightSpec WeightSpec::scaled(double c) const {
    if (!(c > 0.0)) throw parameter_error("weight scale must be positive");
    std::vector<double> s(samples_.values().begin(), samples_.values().end());
    for (double& x : s) x *= c;
    std::optional<PowerLog> d = descriptor_;
    if (d) d->scale *= c;
    return WeightSpec(GridFunction(grid(), std::move(s)), d);
}

// ---------------------------------------------------------------- cumulative

CumulativeWeight cumulative(const WeightSpec& w, HeadPolicy policy) {
    const auto& g = *w.grid();
    const std::size_t n = g.size();
    CumulativeWeight out;
    out.grid = w.grid();
    if (w.descriptor()) {
        auto h = w.descriptor()->integral_from_zero(g.t_min());
        if (h) {
            out.head_kind = HeadKind::analytic;
            out.head = *h;
        } else if (policy == HeadPolicy::allow_truncation) {
            out.head_kind = HeadKind::truncated;
            out.head = 0.0;
        } else {
            throw configuration_error(
                "weight is not integrable at 0; pass HeadPolicy::allow_truncation to truncate");
        }
    } else {
        out.head_kind = HeadKind::constant_extension;
        out.head = w[0] * g.t_min();
    }

    out.lo.resize(n);
    out.hi.resize(n);
    out.mass.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.lo[k] = w.mass_within(k, g.left(k), g.midpoint(k));
        out.hi[k] = w.mass_within(k, g.midpoint(k), g.right(k));
    }
    out.lo[0] += out.head;
    for (std::size_t k = 0; k < n; ++k) out.mass[k] = out.lo[k] + out.hi[k];
    out.prefix = scan::prefix_sum(out.mass);
    out.at_mid.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        out.at_mid[k] = (k == 0 ? 0.0 : out.prefix[k - 1]) + out.lo[k];
    for (std::size_t k = 0; k < n; ++k)
        if (!(out.at_mid[k] > 0.0) || !std::isfinite(out.prefix[k]))
            throw parameter_error("cumulative weight must be positive and finite on the grid");

    out.descriptor = w.descriptor();
    out.samples.assign(w.samples().values().begin(), w.samples().values().end());
    return out;
}

double CumulativeWeight::value_at(double t) const {
    const auto& g = *grid;
    if (t <= g.t_min()) return head;
    if (t >= g.t_max()) return prefix.back();
    const std::size_t k = g.locate(t);
    const double left = k == 0 ? head : prefix[k - 1];
    const double part = descriptor ? descriptor->integral(g.left(k), t) : samples[k] * (t - g.left(k));
    return left + part;
}

// ---------------------------------------------------------------- integrate

namespace {

template <class CellMass>
double integrate_cells(const Grid& g, double a, double b, CellMass&& cell_mass) {
    if (a > b) throw parameter_error("integrate: a > b");
    const double tol = 1e-12 * g.t_max();
    if (a < g.t_min() - tol || b > g.t_max() + tol)
        throw parameter_error("integrate: bounds outside the grid");
    a = std::max(a, g.t_min());
    b = std::min(b, g.t_max());
    if (a == b) return 0.0;
    double total = 0.0;
    const std::size_t k0 = g.locate(a);
    const std::size_t k1 = g.locate(b);
    for (std::size_t k = k0; k <= k1; ++k) {
        const double lo = std::max(a, g.left(k));
        const double hi = std::min(b, g.right(k));
        if (hi > lo) total += cell_mass(k, lo, hi);
    }
    return total;
}

}  // namespace

double integrate(const GridFunction& f, double a, double b) {
    return integrate_cells(*f.grid(), a, b,
                           [&](std::size_t k, double lo, double hi) { return ext::mul(f[k], hi - lo); });
}

double integrate(const WeightSpec& w, double a, double b) {
    return integrate_cells(*w.grid(), a, b,
                           [&](std::size_t k, double lo, double hi) { return w.mass_within(k, lo, hi); });
}

GridFunction suffix_sup(const GridFunction& g) {
    return GridFunction(g.grid(), scan::suffix_max(g.values()));
}

GridFunction prefix_sup(const GridFunction& g) {
    return GridFunction(g.grid(), scan::prefix_max(g.values()));
}

}  // namespace lorentz_lab
