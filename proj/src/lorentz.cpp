#include "lorentz_lab/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lorentz_lab/errors.hpp"
#include "lorentz_lab/extended.hpp"
#include "lorentz_lab/rearrangement.hpp"
#include "lorentz_lab/scan.hpp"

namespace lorentz_lab {

namespace {

void check_p(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw parameter_error("Lorentz exponent p must be in (0, inf)");
}

void check_same_grid(const MonotoneFunction& f, const WeightSpec& w) {
    if (!same_grid(f.grid(), w.grid()))
        throw parameter_error("function and weight live on different grids");
}

// Value of a sampled weight at an arbitrary point.
double evaluate(const WeightSpec& phi, double t) {
    if (phi.descriptor()) return (*phi.descriptor())(t);
    const auto& g = *phi.grid();
    return phi[g.locate(t)];
}

// phi(t)^r. With a descriptor the scale is dropped (it cancels in the Q_r
// ratio) and the power is raised first, so that t^{1/r} gives t exactly.
double unscaled_pow(const WeightSpec& phi, double t, double r) {
    if (!phi.descriptor()) return ext::pow(evaluate(phi, t), r);
    const PowerLog& d = *phi.descriptor();
    const double l = PowerLog{0.0, d.log0, d.log_inf, 1.0}(t);
    return ext::mul(ext::pow(t, d.exponent * r), ext::pow(l, r));
}

double unscaled(const WeightSpec& phi, double t) {
    if (!phi.descriptor()) return evaluate(phi, t);
    const PowerLog& d = *phi.descriptor();
    return ext::mul(ext::pow(t, d.exponent), PowerLog{0.0, d.log0, d.log_inf, 1.0}(t));
}

}  // namespace

double lambda_norm(const MonotoneFunction& fstar, const LorentzParams& prm, HeadPolicy policy) {
    check_p(prm.p);
    check_same_grid(fstar, prm.w);
    const auto W = cumulative(prm.w, policy);
    double sum = 0.0;
    for (std::size_t k = 0; k < fstar.size(); ++k)
        sum += ext::mul(ext::pow(fstar[k], prm.p), W.mass[k]);
    return ext::pow(sum, 1.0 / prm.p);
}

double weak_lambda_norm(const MonotoneFunction& fstar, const LorentzParams& prm, HeadPolicy policy) {
    check_p(prm.p);
    check_same_grid(fstar, prm.w);
    const auto W = cumulative(prm.w, policy);
    double best = 0.0;
    for (std::size_t k = 0; k < fstar.size(); ++k)
        best = std::max(best, ext::mul(fstar[k], ext::pow(W.prefix[k], 1.0 / prm.p)));
    return best;
}

double gamma_norm(const MonotoneFunction& fstar, const LorentzParams& prm, HeadPolicy policy) {
    return lambda_norm(doublestar(fstar), prm, policy);
}

CheckResult check_delta2(const CumulativeWeight& F, double cap) {
    const auto& g = *F.grid;
    double best = 0.0;
    for (std::size_t i = 0; i <= g.size(); ++i) {
        const double t = g.edge(i);
        if (2.0 * t > g.t_max()) break;
        const double base = F.value_at(t);
        if (!(base > 0.0)) continue;
        best = std::max(best, ext::div(F.value_at(2.0 * t), base));
    }
    return {best, best <= cap, cap};
}

CheckResult check_quasi_monotone(const GridFunction& phi, Monotonicity direction, double cap) {
    const auto v = phi.values();
    const auto ref = direction == Monotonicity::increasing ? scan::prefix_max(v) : scan::suffix_max(v);
    double best = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) best = std::max(best, ext::div(ref[k], v[k]));
    return {best, best <= cap, cap};
}

QrResult check_Qr(const WeightSpec& phi, double r, int trials, std::uint64_t seed, double cap) {
    if (!(r > 0.0)) throw parameter_error("Q_r check needs r > 0");
    const auto& g = *phi.grid();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> count(2, 8);
    QrResult out;
    for (int trial = 0; trial < trials; ++trial) {
        const int n = count(rng);
        // keep sums inside the grid: draw edges from [t_min, t_max / n]
        const double limit = g.t_max() / n;
        std::size_t hi = 0;
        while (hi + 1 <= g.size() && g.edge(hi + 1) <= limit) ++hi;
        std::uniform_int_distribution<std::size_t> pick(0, hi);
        double sum_t = 0.0;
        double sum_phi = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = g.edge(pick(rng));
            sum_t += t;
            sum_phi += unscaled_pow(phi, t, r);
        }
        const double ratio = ext::div(unscaled(phi, sum_t), ext::pow(sum_phi, 1.0 / r));
        out.lower_bound = std::max(out.lower_bound, ratio);
    }
    if (phi.descriptor()) {
        // phi = t^{1/r} * g with t^{1/r} in Q_r (constant 1): the Q_r constant
        // of phi is at most the quasi-decreasing constant of g.
        PowerLog rest = *phi.descriptor();
        rest.exponent -= 1.0 / r;
        std::vector<double> gv(g.size() + 1);
        for (std::size_t i = 0; i <= g.size(); ++i) gv[i] = rest(g.edge(i));
        const auto tail = scan::suffix_max(gv);
        double c = 0.0;
        for (std::size_t i = 0; i < gv.size(); ++i) c = std::max(c, ext::div(tail[i], gv[i]));
        out.structural_bound = c;
    }
    out.finite = out.lower_bound <= cap && (!out.structural_bound || *out.structural_bound <= cap);
    return out;
}

LowerEstimateResult check_lower_r_estimate(double p, const WeightSpec& w, double r, double cap,
                                           HeadPolicy policy) {
    check_p(p);
    if (!(r > 0.0)) throw parameter_error("lower estimate needs r > 0");
    const auto W = cumulative(w, policy);
    const auto& g = *w.grid();
    std::vector<double> ratio(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        ratio[k] = W.at_mid[k] / std::pow(g.midpoint(k), p / r);
    const auto q = check_quasi_monotone(GridFunction(w.grid(), std::move(ratio)), Monotonicity::increasing, cap);
    return {r >= p && q.finite, q.constant, q.finite};
}

}  // namespace lorentz_lab
