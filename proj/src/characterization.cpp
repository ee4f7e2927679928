#include "lorentz_lab/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "lorentz_lab/errors.hpp"
#include "lorentz_lab/extended.hpp"
#include "lorentz_lab/scan.hpp"

namespace lorentz_lab {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::i: return "i";
        case Regime::ii: return "ii";
        case Regime::iii: return "iii";
        case Regime::iv: return "iv";
        case Regime::v: return "v";
        case Regime::vi: return "vi";
        case Regime::G: return "G";
        case Regime::H: return "H";
        case Regime::I: return "I";
    }
    return "?";
}

std::optional<Regime> regime_from_string(const std::string& s) {
    for (Regime r : {Regime::i, Regime::ii, Regime::iii, Regime::iv, Regime::v, Regime::vi, Regime::G,
                     Regime::H, Regime::I})
        if (to_string(r) == s) return r;
    return std::nullopt;
}

std::string to_string(Target t) {
    switch (t) {
        case Target::strong: return "strong";
        case Target::weak: return "weak";
        case Target::weak_weak: return "weak-weak";
    }
    return "?";
}

Regime regime_select(double p, double q) {
    if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q))
        throw parameter_error("regime_select needs 0 < p, q < inf");
    if (p > 1.0) return p <= q ? Regime::i : Regime::iii;
    if (p == 1.0) return q >= 1.0 ? Regime::ii : Regime::iv;
    return p <= q ? Regime::v : Regime::vi;
}

bool Provenance::same_grid(const Provenance& o) const {
    return t_min == o.t_min && t_max == o.t_max && N == o.N;
}

double ConstantReport::part(const std::string& name) const {
    for (const auto& p : parts)
        if (p.name == name) return p.value;
    throw parameter_error("report has no part named " + name);
}

namespace {

using Vec = std::vector<double>;

// ---------------------------------------------------------------- vector algebra

Vec pw(const Vec& a, double e) {
    Vec out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = ext::pow(a[k], e);
    return out;
}

Vec mul(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = ext::mul(a[k], b[k]);
    return out;
}

Vec div(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = ext::div(a[k], b[k]);
    return out;
}

Vec add(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
    return out;
}

Vec suf(const Vec& a) { return scan::suffix_max(a); }
Vec pre(const Vec& a) { return scan::prefix_max(a); }

double vmax(const Vec& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, x);
    return m;
}

// int_0^{m_k} G dV, head included in cell 0.
Vec head_int(const CumulativeWeight& C, const Vec& G) { return running_integral(C, G, true); }

// int_{m_k}^{t_max} H dW.
Vec tail_int(const CumulativeWeight& C, const Vec& H) {
    const std::size_t n = H.size();
    Vec out(n);
    double acc = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        out[k] = acc + ext::mul(H[k], C.hi[k]);
        acc += ext::mul(H[k], C.mass[k]);
    }
    return out;
}

// int_{t_min-head}^{t_max} F dW.
double outer_int(const CumulativeWeight& C, const Vec& F) {
    double s = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) s += ext::mul(F[k], C.mass[k]);
    return s;
}

// (S^q W + int_x^inf S^q w)^{1/q}, the common bracket of the sup-form parts.
Vec bracket(const Vec& Sq, const Vec& W, const CumulativeWeight& Wc, double q) {
    return pw(add(mul(Sq, W), tail_int(Wc, Sq)), 1.0 / q);
}

Vec samples_of(const WeightSpec& w) { return Vec(w.samples().values().begin(), w.samples().values().end()); }

Vec mids(const Grid& g) { return Vec(g.midpoints().begin(), g.midpoints().end()); }

// ---------------------------------------------------------------- report assembly

struct Builder {
    ConstantReport rep;
    double cap;

    void add(const std::string& name, double value) {
        const bool fin = std::isfinite(value) && value <= cap;
        rep.parts.push_back({name, value, fin});
        rep.total += value;
        rep.finite = rep.finite && fin;
    }
};

Provenance make_provenance(const Grid& g, double cap, const std::vector<const CumulativeWeight*>& cs,
                           const CumulativeWeight& B) {
    Provenance p;
    p.t_min = g.t_min();
    p.t_max = g.t_max();
    p.N = g.size();
    p.cap = cap;
    for (auto* c : cs) p.truncated = p.truncated || c->truncated();
    p.B_at_t_max = B.prefix.back();
    p.B_at_one = (g.t_min() <= 1.0 && 1.0 <= g.t_max()) ? B.value_at(1.0) : 0.0;
    return p;
}

void note_truncation(Builder& b, const char* name, const CumulativeWeight& c) {
    if (c.truncated()) b.rep.warnings.push_back(std::string(name) + ": non-integrable head below t_min truncated");
    else if (c.head_kind == HeadKind::constant_extension)
        b.rep.warnings.push_back(std::string(name) + ": head below t_min from constant extension of samples");
}

void check_same(const GridPtr& a, const GridPtr& b) {
    if (!same_grid(a, b)) throw parameter_error("weights live on different grids");
}

void check_exponent(double p, const char* what) {
    if (!(p > 0.0) || !std::isfinite(p)) throw parameter_error(std::string(what) + " must be in (0, inf)");
}

}  // namespace

// ---------------------------------------------------------------- strong target

namespace {

// Data shared by every regime of the strong target.
struct TData {
    const SupOpSpec& spec;
    CumulativeWeight Vc;
    CumulativeWeight Wc;
    Vec u;
    Vec SUB;
    Vec SUV;
    Vec BV;

    TData(const SupOpSpec& s, const WeightSpec& v, const WeightSpec& w)
        : spec(s),
          Vc(cumulative(v, HeadPolicy::allow_truncation)),
          Wc(cumulative(w, HeadPolicy::allow_truncation)),
          u(samples_of(s.u)) {
        SUB = suf(div(u, s.B.at_mid));
        SUV = suf(div(u, pw(Vc.at_mid, 2.0)));
        BV = div(s.B.at_mid, Vc.at_mid);
    }
};

ConstantReport strong_report(const TData& d, double p, double q, double cap) {
    const Regime regime = regime_select(p, q);
    const auto& spec = d.spec;
    const auto& g = *spec.grid();
    const auto& Vc = d.Vc;
    const auto& Wc = d.Wc;
    const Vec& B = spec.B.at_mid;
    const Vec& V = Vc.at_mid;
    const Vec& W = Wc.at_mid;
    const Vec& u = d.u;
    const Vec& SUB = d.SUB;
    const Vec& SUV = d.SUV;
    const Vec& BV = d.BV;

    Builder bld{{}, cap};
    bld.rep.regime = regime;
    bld.rep.provenance = make_provenance(g, cap, {&spec.B, &Vc, &Wc}, spec.B);
    note_truncation(bld, "B", spec.B);
    note_truncation(bld, "V", Vc);
    note_truncation(bld, "W", Wc);

    switch (regime) {
        case Regime::i: {
            const double pp = p / (p - 1.0);
            const Vec J1 = pw(head_int(Vc, pw(BV, pp)), 1.0 / pp);
            const Vec J2 = pw(head_int(Vc, pw(V, pp)), 1.0 / pp);
            bld.add("A1", vmax(mul(bracket(pw(SUB, q), W, Wc, q), J1)));
            bld.add("A2", vmax(mul(bracket(pw(SUV, q), W, Wc, q), J2)));
            break;
        }
        case Regime::ii: {
            bld.add("B1", vmax(mul(bracket(pw(SUB, q), W, Wc, q), pre(BV))));
            bld.add("B2", vmax(mul(bracket(pw(SUV, q), W, Wc, q), V)));
            break;
        }
        case Regime::iii: {
            const double pp = p / (p - 1.0);
            const double r = p * q / (p - q);
            const Vec I1 = head_int(Vc, pw(BV, pp));
            const Vec I2 = head_int(Vc, pw(V, pp));
            const Vec SUBq = pw(SUB, q);
            const Vec SUVq = pw(SUV, q);
            const Vec Wrp = pw(W, r / p);
            bld.add("C1", std::pow(outer_int(Wc, mul(mul(pw(tail_int(Wc, SUBq), r / p), SUBq), pw(I1, r / pp))),
                                   1.0 / r));
            bld.add("C2", std::pow(outer_int(Wc, mul(Wrp, pw(suf(mul(SUB, pw(I1, 1.0 / pp))), r))), 1.0 / r));
            bld.add("C3", std::pow(outer_int(Wc, mul(mul(pw(tail_int(Wc, SUVq), r / p), SUVq), pw(I2, r / pp))),
                                   1.0 / r));
            bld.add("C4", std::pow(outer_int(Wc, mul(Wrp, pw(suf(mul(SUV, pw(I2, 1.0 / pp))), r))), 1.0 / r));
            break;
        }
        case Regime::iv: {
            const double r = q / (1.0 - q);  // p = 1
            const Vec SBV = pre(BV);
            const Vec SUBq = pw(SUB, q);
            const Vec SUVq = pw(SUV, q);
            const Vec Wr = pw(W, r);
            bld.add("D1", std::pow(outer_int(Wc, mul(mul(pw(tail_int(Wc, SUBq), r), SUBq), pw(SBV, r))), 1.0 / r));
            bld.add("D2", std::pow(outer_int(Wc, mul(Wr, pw(suf(mul(SUB, SBV)), r))), 1.0 / r));
            bld.add("D3", std::pow(outer_int(Wc, mul(mul(pw(tail_int(Wc, SUVq), r), SUVq), pw(V, r))), 1.0 / r));
            bld.add("D4", std::pow(outer_int(Wc, mul(Wr, pw(suf(mul(SUV, V)), r))), 1.0 / r));
            break;
        }
        case Regime::v: {
            bld.rep.warnings.push_back("case v: the guard p < 1 is inferred from case exhaustiveness");
            const Vec SUpV = suf(div(pw(u, p), pw(V, 2.0)));
            bld.add("E1", vmax(mul(bracket(pw(SUB, q), W, Wc, q), pre(div(B, pw(V, 1.0 / p))))));
            bld.add("E2", vmax(mul(bracket(pw(SUpV, q / p), W, Wc, q), pw(V, 1.0 / p))));
            break;
        }
        case Regime::vi: {
            bld.rep.warnings.push_back("case vi: the guard p < 1 is inferred from case exhaustiveness");
            const double r = p * q / (p - q);
            const Vec SUpV = suf(div(pw(u, p), pw(V, 2.0)));
            const Vec SBpV = pre(div(pw(B, p), V));
            const Vec SUBq = pw(SUB, q);
            const Vec SUpVqp = pw(SUpV, q / p);
            const Vec Wrp = pw(W, r / p);
            bld.add("F1", std::pow(outer_int(Wc, mul(Wrp, pw(suf(mul(pw(SUB, p), SBpV)), r / p))), 1.0 / r));
            bld.add("F2", std::pow(outer_int(Wc, mul(mul(pw(tail_int(Wc, SUBq), r / p), pw(SBpV, r / p)), SUBq)),
                                   1.0 / r));
            bld.add("F3", std::pow(outer_int(Wc, mul(Wrp, pw(suf(mul(SUpV, V)), r / p))), 1.0 / r));
            bld.add("F4", std::pow(outer_int(Wc, mul(mul(pw(tail_int(Wc, SUpVqp), r / p), SUpVqp), pw(V, r / p))),
                                   1.0 / r));
            break;
        }
        default:
            throw dispatch_error("unexpected regime");
    }
    return bld.rep;
}

void check_strong_inputs(const SupOpSpec& spec, const WeightSpec& v, const WeightSpec& w) {
    check_same(spec.grid(), v.grid());
    check_same(spec.grid(), w.grid());
}

}  // namespace

ConstantReport constants_T(const SupOpSpec& spec, const WeightSpec& v, const WeightSpec& w, double p,
                           double q, std::optional<Regime> forced, double cap) {
    check_exponent(p, "p");
    check_exponent(q, "q");
    check_strong_inputs(spec, v, w);
    const Regime regime = regime_select(p, q);
    if (forced && *forced != regime)
        throw dispatch_error("regime " + to_string(*forced) + " does not match (p, q), which select " +
                             to_string(regime));
    return strong_report(TData(spec, v, w), p, q, cap);
}

std::vector<ConstantReport> constants_T(const SupOpSpec& spec, const WeightSpec& v, const WeightSpec& w,
                                        std::span<const ExponentPair> exponents, double cap) {
    for (const auto& e : exponents) {
        check_exponent(e.p, "p");
        check_exponent(e.q, "q");
    }
    check_strong_inputs(spec, v, w);
    const TData d(spec, v, w);
    std::vector<ConstantReport> out;
    out.reserve(exponents.size());
    for (const auto& e : exponents) out.push_back(strong_report(d, e.p, e.q, cap));
    return out;
}

// ---------------------------------------------------------------- weak targets

ConstantReport constants_T_weak(const SupOpSpec& spec, const WeightSpec& v, const WeightSpec& w, double p,
                                double cap) {
    check_exponent(p, "p");
    check_same(spec.grid(), v.grid());
    check_same(spec.grid(), w.grid());
    const auto& g = *spec.grid();
    const auto Vc = cumulative(v, HeadPolicy::allow_truncation);
    const Vec& B = spec.B.at_mid;
    const Vec& V = Vc.at_mid;
    const Vec u = samples_of(spec.u);
    const Vec wsup = pre(samples_of(w));

    Builder bld{{}, cap};
    bld.rep.provenance = make_provenance(g, cap, {&spec.B, &Vc}, spec.B);
    note_truncation(bld, "B", spec.B);
    note_truncation(bld, "V", Vc);

    const Vec S = suf(mul(wsup, div(u, B)));
    if (p > 1.0) {
        bld.rep.regime = Regime::G;
        const double pp = p / (p - 1.0);
        const Vec S2 = suf(mul(wsup, div(u, pw(V, 2.0))));
        bld.add("G1", vmax(mul(S, pw(head_int(Vc, pw(div(B, V), pp)), 1.0 / pp))));
        bld.add("G2", vmax(mul(S2, pw(head_int(Vc, pw(V, pp)), 1.0 / pp))));
    } else {
        bld.rep.regime = Regime::H;
        const Vec Vp = pw(V, 1.0 / p);
        bld.add("H1", vmax(div(pre(mul(B, S)), Vp)));
        bld.add("H2", vmax(mul(S, div(B, Vp))));
    }
    return bld.rep;
}

ConstantReport constant_I(const SupOpSpec& spec, const WeightSpec& v, const WeightSpec& w, double cap) {
    check_same(spec.grid(), v.grid());
    check_same(spec.grid(), w.grid());
    const auto& g = *spec.grid();
    const Vec u = samples_of(spec.u);
    const Vec vsup = pre(samples_of(v));
    const Vec wsup = pre(samples_of(w));
    const Vec J = head_int(spec.B, pw(vsup, -1.0));

    Builder bld{{}, cap};
    bld.rep.regime = Regime::I;
    bld.rep.provenance = make_provenance(g, cap, {&spec.B}, spec.B);
    note_truncation(bld, "B", spec.B);
    bld.add("I", vmax(mul(mul(J, wsup), div(u, spec.B.at_mid))));
    return bld.rep;
}

// ---------------------------------------------------------------- maximal operator

ConstantReport constants_maximal(const MaximalProblem& P, Target target, double cap, int qr_trials,
                                 std::uint64_t seed) {
    const double a = P.alpha;
    const double p = P.p;
    const double q = P.q;
    if (!(a > 0.0) || !std::isfinite(a)) throw parameter_error("alpha must be in (0, inf)");
    check_exponent(p, "p");
    check_exponent(q, "q");
    check_exponent(P.r_est, "r");
    if (a > P.r_est) throw parameter_error("alpha must not exceed the lower-estimate parameter r");
    check_same(P.phi.grid(), P.b.grid());
    check_same(P.phi.grid(), P.v.grid());
    check_same(P.phi.grid(), P.w.grid());

    const auto& g = *P.phi.grid();
    const auto Bc = cumulative(P.b, HeadPolicy::allow_truncation);
    const auto Vc = cumulative(P.v, HeadPolicy::allow_truncation);
    const auto Wc = cumulative(P.w, HeadPolicy::allow_truncation);
    const Vec& B = Bc.at_mid;
    const Vec& V = Vc.at_mid;
    const Vec& W = Wc.at_mid;
    const Vec phi = samples_of(P.phi);
    const Vec t = mids(g);

    Builder bld{{}, cap};
    bld.rep.provenance = make_provenance(g, cap, {&Bc, &Vc, &Wc}, Bc);
    note_truncation(bld, "B", Bc);
    note_truncation(bld, "V", Vc);
    note_truncation(bld, "W", Wc);

    // hypotheses
    const auto qr = check_Qr(P.phi, P.r_est, qr_trials, seed, cap);
    if (!qr.finite) bld.rep.warnings.push_back("phi fails the Q_r check at the cap");
    if (!check_quasi_monotone(P.phi.samples(), Monotonicity::increasing, cap).finite)
        bld.rep.warnings.push_back("phi is not quasi-increasing at the cap");
    if (!check_delta2(Bc, cap).finite) bld.rep.warnings.push_back("B fails the Delta_2 check at the cap");
    if (!check_quasi_monotone(GridFunction(P.b.grid(), div(B, pw(t, a / P.r_est))), Monotonicity::increasing, cap)
             .finite)
        bld.rep.warnings.push_back("B(t)/t^{alpha/r} is not quasi-increasing at the cap");

    if (target == Target::weak_weak) {
        bld.rep.regime = Regime::I;
        const Vec J = head_int(Bc, pw(V, -a / p));
        bld.add("MI", vmax(mul(pw(J, 1.0 / a), div(pw(W, 1.0 / q), phi))));
        return bld.rep;
    }

    const Vec BV = div(B, V);
    if (target == Target::weak) {
        const Vec Y = suf(div(pw(W, 1.0 / q), phi));
        if (a < p) {
            bld.rep.regime = Regime::G;
            const double e = p / (p - a);
            const double o = (p - a) / (p * a);
            const Vec Y2 = suf(div(mul(pw(W, 1.0 / q), pw(B, 1.0 / a)), mul(phi, pw(V, 2.0 / a))));
            bld.add("MG1", vmax(mul(Y, pw(head_int(Vc, pw(BV, e)), o))));
            bld.add("MG2", vmax(mul(Y2, pw(head_int(Vc, pw(V, e)), o))));
        } else {
            bld.rep.regime = Regime::H;
            const Vec Ba = pw(B, 1.0 / a);
            const Vec Vp = pw(V, 1.0 / p);
            bld.add("MH1", vmax(div(pre(mul(Ba, Y)), Vp)));
            bld.add("MH2", vmax(mul(Y, div(Ba, Vp))));
        }
        return bld.rep;
    }

    const Regime regime = regime_select(p / a, q / a);
    bld.rep.regime = regime;
    const Vec phq = pw(phi, -q);
    const Vec pha = pw(phi, -a);
    const Vec K = suf(div(B, mul(pw(phi, a), pw(V, 2.0))));
    const Vec Kq = pw(K, q / a);
    auto strong_part = [&](const std::string& name, const Vec& Sq, const Vec& J) {
        bld.add(name, vmax(mul(bracket(Sq, W, Wc, q), J)));
    };
    const double s = q / (p - q);
    const double rho = p * q / (a * (p - q));
    const double outer = (p - q) / (p * q);
    auto integral_part = [&](const std::string& name, const Vec& F) {
        bld.add(name, std::pow(outer_int(Wc, F), outer));
    };

    switch (regime) {
        case Regime::i: {
            const double e = p / (p - a);
            const double o = (p - a) / (p * a);
            strong_part("MA1", phq, pw(head_int(Vc, pw(BV, e)), o));
            strong_part("MA2", Kq, pw(head_int(Vc, pw(V, e)), o));
            break;
        }
        case Regime::ii: {
            strong_part("MB1", phq, pw(pre(BV), 1.0 / a));
            strong_part("MB2", Kq, pw(V, 1.0 / a));
            break;
        }
        case Regime::iii: {
            const double e = p / (p - a);
            const double inner = q * (p - a) / (a * (p - q));
            const Vec I1 = head_int(Vc, pw(BV, e));
            const Vec I2 = head_int(Vc, pw(V, e));
            const Vec Ws = pw(W, s);
            integral_part("MC1", mul(mul(pw(tail_int(Wc, phq), s), phq), pw(I1, inner)));
            integral_part("MC2", mul(Ws, pw(suf(mul(pha, pw(I1, (p - a) / p))), rho)));
            integral_part("MC3", mul(mul(pw(tail_int(Wc, Kq), s), Kq), pw(I2, inner)));
            integral_part("MC4", mul(Ws, pw(suf(mul(K, pw(I2, (p - a) / p))), rho)));
            break;
        }
        case Regime::iv: {
            const Vec SBV = pre(BV);
            const Vec Ws = pw(W, s);
            integral_part("MD1", mul(mul(pw(tail_int(Wc, phq), s), phq), pw(SBV, rho)));
            integral_part("MD2", mul(Ws, pw(suf(mul(pha, SBV)), rho)));
            integral_part("MD3", mul(mul(pw(tail_int(Wc, Kq), s), Kq), pw(V, rho)));
            integral_part("MD4", mul(Ws, pw(suf(mul(K, V)), rho)));
            break;
        }
        case Regime::v: {
            bld.rep.warnings.push_back("case v: the guard p < alpha is inferred from case exhaustiveness");
            const Vec L = suf(div(pw(B, 1.0 / a), mul(phi, pw(V, 2.0 / p))));
            strong_part("ME1", phq, pre(div(pw(B, 1.0 / a), pw(V, 1.0 / p))));
            strong_part("ME2", pw(L, q), pw(V, 1.0 / p));
            break;
        }
        case Regime::vi: {
            bld.rep.warnings.push_back("case vi: the guard p < alpha is inferred from case exhaustiveness");
            const Vec L = suf(div(pw(B, 1.0 / a), mul(phi, pw(V, 2.0 / p))));
            const Vec Lq = pw(L, q);
            const Vec SBV = pre(div(B, pw(V, a / p)));
            const Vec Ws = pw(W, s);
            // phi^{-alpha} here; the printed phi^{-q} is not homogeneous in phi
            integral_part("MF1", mul(Ws, pw(suf(mul(pha, SBV)), rho)));
            integral_part("MF2", mul(mul(pw(tail_int(Wc, phq), s), pw(SBV, rho)), phq));
            integral_part("MF3", mul(Ws, pw(suf(mul(L, pw(V, 1.0 / p))), p * q / (p - q))));
            integral_part("MF4", mul(mul(pw(tail_int(Wc, Lq), s), Lq), pw(V, s)));
            break;
        }
        default:
            throw dispatch_error("unexpected regime");
    }
    return bld.rep;
}

}  // namespace lorentz_lab
