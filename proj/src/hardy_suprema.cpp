#include "lorentz_lab/hardy_suprema.hpp"

#include <algorithm>
#include <cmath>

#include "lorentz_lab/errors.hpp"
#include "lorentz_lab/extended.hpp"
#include "lorentz_lab/scan.hpp"

namespace lorentz_lab {

std::vector<double> SupOpSpec::u_over_B() const {
    std::vector<double> out(u.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = ext::div(u[k], B.at_mid[k]);
    return out;
}

SupOpSpec make_sup_op(WeightSpec u, WeightSpec b, HeadPolicy policy) {
    if (!same_grid(u.grid(), b.grid()))
        throw parameter_error("u and b must share a grid");
    auto B = cumulative(b, policy);
    return SupOpSpec{std::move(u), std::move(b), std::move(B)};
}

std::vector<double> running_integral(const CumulativeWeight& B, std::span<const double> g,
                                     bool with_head) {
    const std::size_t n = B.size();
    if (g.size() != n) throw parameter_error("function and weight sizes differ");
    std::vector<double> out(n);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double lo = B.lo[k];
        double mass = B.mass[k];
        if (k == 0 && !with_head) {
            lo -= B.head;
            mass -= B.head;
        }
        out[k] = acc + ext::mul(g[k], lo);
        acc += ext::mul(g[k], mass);
    }
    return out;
}

namespace {

std::vector<double> apply_T_values(const SupOpSpec& spec, std::span<const double> g, bool with_head) {
    const auto P = running_integral(spec.B, g, with_head);
    const auto ratio = spec.u_over_B();
    std::vector<double> m(P.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = ext::mul(ratio[k], P[k]);
    return scan::suffix_max(m);
}

}  // namespace

GridFunction apply_T(const SupOpSpec& spec, const GridFunction& g) {
    return GridFunction(spec.grid(), apply_T_values(spec, g.values(), false));
}

MonotoneFunction apply_T(const SupOpSpec& spec, const MonotoneFunction& g) {
    return MonotoneFunction(spec.grid(), apply_T_values(spec, g.values(), true));
}

double weighted_sup_norm_T(const SupOpSpec& spec, const MonotoneFunction& f, const WeightSpec& w) {
    if (w.size() != spec.u.size()) throw parameter_error("weight and operator sizes differ");
    const auto wsup = scan::prefix_max(w.samples().values());
    const auto ratio = spec.u_over_B();
    std::vector<double> h(ratio.size());
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = ext::mul(wsup[k], ratio[k]);
    const auto s = scan::suffix_max(h);
    const auto P = running_integral(spec.B, f.values(), true);
    double best = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) best = std::max(best, ext::mul(s[k], P[k]));
    return best;
}

SupOpSpec reduce_maximal_to_T(const WeightSpec& phi, double alpha, const WeightSpec& b, HeadPolicy policy) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw parameter_error("alpha must be in (0, inf)");
    auto B = cumulative(b, policy);
    std::vector<double> u(phi.size());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = B.at_mid[k] / ext::pow(phi[k], alpha);
    auto uw = WeightSpec::from_samples(GridFunction(phi.grid(), std::move(u)));
    return SupOpSpec{std::move(uw), b, std::move(B)};
}

}  // namespace lorentz_lab
