#pragma once

#include <span>
#include <vector>

#include "lorentz_lab/domain.hpp"

namespace lorentz_lab {

/// Data of the iterated supremum operator
///   (T g)(t) = sup_{t <= tau} u(tau)/B(tau) * int_0^tau g b.
struct SupOpSpec {
    WeightSpec u;
    WeightSpec b;
    CumulativeWeight B;

    const GridPtr& grid() const { return u.grid(); }
    /// u/B at cell midpoints.
    std::vector<double> u_over_B() const;
};

SupOpSpec make_sup_op(WeightSpec u, WeightSpec b, HeadPolicy policy = HeadPolicy::integrable_only);

/// int_0^{m_k} g b for every cell midpoint m_k. With `with_head` the first
/// value of g is extended over (0, t_min].
std::vector<double> running_integral(const CumulativeWeight& B, std::span<const double> g,
                                     bool with_head);

/// General g: nothing is assumed below t_min.
GridFunction apply_T(const SupOpSpec& spec, const GridFunction& g);
/// Monotone g: g(t_min+) extends over (0, t_min], so the head of B counts.
MonotoneFunction apply_T(const SupOpSpec& spec, const MonotoneFunction& g);

/// sup_t w(t) (T f)(t) evaluated through the triple-scan identity
///   sup_x ( sup_{x <= t} [sup_{tau <= t} w(tau)] u(t)/B(t) ) int_0^x f b.
double weighted_sup_norm_T(const SupOpSpec& spec, const MonotoneFunction& f, const WeightSpec& w);

/// u = B / phi^alpha, so that u/B = phi^{-alpha}.
SupOpSpec reduce_maximal_to_T(const WeightSpec& phi, double alpha, const WeightSpec& b,
                              HeadPolicy policy = HeadPolicy::integrable_only);

}  // namespace lorentz_lab
