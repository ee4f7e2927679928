#include "lorentz_lab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lorentz_lab/errors.hpp"
#include "lorentz_lab/extended.hpp"
#include "lorentz_lab/parallel.hpp"
#include "lorentz_lab/scan.hpp"

namespace lorentz_lab {

// ---------------------------------------------------------------- ratio

RatioEvaluator::RatioEvaluator(const OracleProblem& prob)
    : p_(prob.p),
      q_(prob.q),
      Bc_(prob.spec.B),
      Vc_(cumulative(prob.v, HeadPolicy::allow_truncation)),
      Wc_(cumulative(prob.w, HeadPolicy::allow_truncation)),
      u_over_B_(prob.spec.u_over_B()),
      v_(prob.v.samples().values().begin(), prob.v.samples().values().end()),
      w_(prob.w.samples().values().begin(), prob.w.samples().values().end()) {
    if (!(p_ > 0.0) || !(q_ > 0.0)) throw parameter_error("oracle exponents must be in (0, inf]");
    if (v_.size() != u_over_B_.size() || w_.size() != u_over_B_.size())
        throw parameter_error("oracle weights live on different grids");
}

double RatioEvaluator::source_norm(std::span<const double> f) const {
    if (std::isinf(p_)) {
        double m = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, ext::mul(f[k], v_[k]));
        return m;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += ext::mul(ext::pow(f[k], p_), Vc_.mass[k]);
    return ext::pow(s, 1.0 / p_);
}

double RatioEvaluator::target_norm(std::span<const double> f) const {
    const auto P = running_integral(Bc_, f, true);
    // T f = suffix max of (u/B) P; fold it into the norm in one backward pass
    double run = 0.0;
    double acc = 0.0;
    const bool sup = std::isinf(q_);
    for (std::size_t k = P.size(); k-- > 0;) {
        run = std::max(run, ext::mul(u_over_B_[k], P[k]));
        if (sup)
            acc = std::max(acc, ext::mul(w_[k], run));
        else
            acc += ext::mul(ext::pow(run, q_), Wc_.mass[k]);
    }
    return sup ? acc : ext::pow(acc, 1.0 / q_);
}

double RatioEvaluator::ratio(std::span<const double> f) const {
    return ext::div(target_norm(f), source_norm(f));
}

double oracle_ratio(const OracleProblem& prob, const MonotoneFunction& f) {
    return RatioEvaluator(prob).ratio(f.values());
}

// ---------------------------------------------------------------- strategies

namespace {

struct Staircase {
    std::vector<std::size_t> cut;  // edge indices j: chi_(0, e_j]
    std::vector<double> coef;
};

std::vector<double> realize(const Staircase& s, std::size_t n) {
    // cell k lies in (0, e_j] iff k < j
    std::vector<double> jump(n + 1, 0.0);
    for (std::size_t i = 0; i < s.cut.size(); ++i) jump[s.cut[i]] += s.coef[i];
    std::vector<double> f(n);
    double run = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        run += jump[k + 1];
        f[k] = run;
    }
    return f;
}

// Edge index closest in log t to exp(x), kept in [1, N].
std::size_t nearest_edge(const Grid& g, double x) {
    const double t = std::exp(x);
    const std::size_t k = g.locate(t);
    const double dl = std::abs(std::log(g.left(k)) - x);
    const double dr = std::abs(std::log(g.right(k)) - x);
    return std::max<std::size_t>(1, dr <= dl ? k + 1 : k);
}

Staircase random_staircase(const Grid& g, std::uint64_t seed, std::size_t index, int breakpoints) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> logt(std::log(g.t_min()), std::log(g.t_max()));
    std::normal_distribution<double> logc(0.0, 1.5);
    Staircase s;
    for (int i = 0; i < breakpoints; ++i) {
        s.cut.push_back(nearest_edge(g, logt(rng)));
        s.coef.push_back(std::exp(logc(rng)));
    }
    return s;
}

struct Incumbent {
    double ratio = -1.0;
    std::vector<double> f;

    void offer(double r, std::vector<double> cand) {
        if (r > ratio) {
            ratio = r;
            f = std::move(cand);
        }
    }
};

// Coordinate ascent on the nonnegative coefficients; never decreases the ratio.
std::pair<double, Staircase> ascend(const RatioEvaluator& ev, Staircase s, std::size_t n, double tol) {
    static constexpr double kFactors[] = {0.0, 0.25, 0.5, 0.8, 0.95, 1.05, 1.25, 2.0, 4.0};
    double best = ev.ratio(realize(s, n));
    for (int sweep = 0; sweep < 200; ++sweep) {
        bool improved = false;
        for (std::size_t i = 0; i < s.coef.size(); ++i) {
            const double base = s.coef[i];
            double best_c = base;
            double best_r = best;
            for (double fac : kFactors) {
                const double c = base == 0.0 ? fac : base * fac;
                if (c == base) continue;
                s.coef[i] = c;
                const double r = ev.ratio(realize(s, n));
                if (r > best_r) {
                    best_r = r;
                    best_c = c;
                }
            }
            s.coef[i] = best_c;
            if (best_r > best * (1.0 + tol)) improved = true;
            best = best_r;
        }
        if (!improved) break;
    }
    return {best, std::move(s)};
}

Provenance provenance_of(const Grid& g) {
    Provenance p;
    p.t_min = g.t_min();
    p.t_max = g.t_max();
    p.N = g.size();
    return p;
}

}  // namespace

OracleResult oracle_T_norm(const OracleProblem& prob, const OracleOptions& opt) {
    if (opt.budget < 1) throw parameter_error("oracle budget must be at least 1");
    const RatioEvaluator ev(prob);
    const auto& grid = prob.spec.grid();
    const Grid& g = *grid;
    const std::size_t n = g.size();
    std::vector<std::pair<std::string, double>> log;
    Incumbent inc;

    // (a) indicators chi_(0, e_j], j = 1..N
    {
        const auto r = parallel_map(n, opt.threads, [&](std::size_t i) {
            std::vector<double> f(n, 0.0);
            std::fill(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(i + 1), 1.0);
            return ev.ratio(f);
        });
        const auto it = std::max_element(r.begin(), r.end());
        const auto j = static_cast<std::size_t>(it - r.begin());
        std::vector<double> f(n, 0.0);
        std::fill(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(j + 1), 1.0);
        inc.offer(*it, std::move(f));
        log.emplace_back("indicators", *it);
    }

    // (b) random staircases
    const auto budget = static_cast<std::size_t>(opt.budget);
    const auto stair_r = parallel_map(budget, opt.threads, [&](std::size_t i) {
        return ev.ratio(realize(random_staircase(g, opt.seed, i, opt.breakpoints), n));
    });
    std::vector<std::size_t> order(budget);
    for (std::size_t i = 0; i < budget; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return stair_r[a] > stair_r[b]; });
    {
        const auto s = random_staircase(g, opt.seed, order[0], opt.breakpoints);
        inc.offer(stair_r[order[0]], realize(s, n));
        log.emplace_back("staircases", stair_r[order[0]]);
    }

    // (c) coordinate ascent from the best few staircases
    {
        const std::size_t starts = std::min<std::size_t>(budget, static_cast<std::size_t>(std::max(1, opt.ascent_starts)));
        const auto refined = parallel_map(starts, opt.threads, [&](std::size_t i) {
            return ascend(ev, random_staircase(g, opt.seed, order[i], opt.breakpoints), n, opt.ascent_tolerance);
        });
        double best = 0.0;
        for (const auto& [r, s] : refined) {
            best = std::max(best, r);
            inc.offer(r, realize(s, n));
        }
        log.emplace_back("coordinate_ascent", best);
    }

    // (d) truncated power profiles min(1, (t/s)^-beta) on (0, c]
    if (opt.power_profiles) {
        std::vector<double> betas;
        for (int i = 1; i <= 30; ++i) betas.push_back(0.05 * i);
        for (double b : {2.0, 3.0}) betas.push_back(b);
        const std::size_t K = 6;
        std::vector<std::size_t> starts, cuts;
        for (std::size_t i = 0; i < K; ++i) {
            starts.push_back(i * (n / 2) / K);
            cuts.push_back(n - i * (n / 2) / K);
        }
        const std::size_t total = betas.size() * K * K;
        auto profile = [&](std::size_t idx) {
            const double beta = betas[idx / (K * K)];
            const double s = g.edge(starts[(idx / K) % K]);
            const double c = g.edge(cuts[idx % K]);
            std::vector<double> f(n, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                const double m = g.midpoint(k);
                if (m > c) break;
                f[k] = m <= s ? 1.0 : std::pow(m / s, -beta);
            }
            return f;
        };
        const auto r = parallel_map(total, opt.threads, [&](std::size_t i) { return ev.ratio(profile(i)); });
        const auto it = std::max_element(r.begin(), r.end());
        inc.offer(*it, profile(static_cast<std::size_t>(it - r.begin())));
        log.emplace_back("power_profiles", *it);
    }

    MonotoneFunction argmax(grid, inc.f);
    const double best = ev.ratio(argmax.values());
    return OracleResult{best, std::move(argmax), std::move(log), opt.seed, provenance_of(g)};
}

OracleResult oracle_weak_norms(const SupOpSpec& spec, const WeightSpec& v, const WeightSpec& w, double p,
                               Target target, const OracleOptions& opt) {
    if (target == Target::strong) throw parameter_error("oracle_weak_norms needs a weak target");
    const double src = target == Target::weak ? p : kInfExponent;
    return oracle_T_norm(OracleProblem{spec, v, w, src, kInfExponent}, opt);
}

// ---------------------------------------------------------------- equivalence

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::consistent: return "consistent";
        case Verdict::consistent_unbounded: return "consistent: both unbounded";
        case Verdict::inconsistent: return "inconsistent";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

EquivalenceReport verify_equivalence(const ConstantReport& report, const OracleResult& oracle,
                                     const EquivalenceOptions& opt) {
    const EquivalenceLevel level{report, oracle};
    return verify_equivalence(std::span<const EquivalenceLevel>(&level, 1), opt);
}

EquivalenceReport verify_equivalence(std::span<const EquivalenceLevel> levels, const EquivalenceOptions& opt) {
    if (levels.empty()) throw parameter_error("verify_equivalence needs at least one level");
    EquivalenceReport out;
    out.regime = to_string(levels.front().report.regime);
    for (const auto& lv : levels) {
        const auto& pr = lv.report.provenance;
        if (!pr.same_grid(lv.oracle.provenance))
            throw parameter_error("report and oracle were computed on different grids");
        if (to_string(lv.report.regime) != out.regime) throw parameter_error("levels mix regimes");
        out.N.push_back(pr.N);
        out.t_max.push_back(pr.t_max);
        out.totals.push_back(lv.report.total);
        out.oracle_ratios.push_back(lv.oracle.best_ratio);
        out.rho.push_back(ext::div(lv.oracle.best_ratio, lv.report.total));
    }
    const std::size_t L = levels.size();
    const double cap = levels.back().report.provenance.cap;
    const bool formula_finite = levels.back().report.finite;

    // oracle divergence: growth >= opt.growth at every step, or above the cap
    bool oracle_diverges = L > 1;
    bool oracle_stable = true;
    for (std::size_t i = 1; i < L; ++i) {
        const double gr = ext::div(out.oracle_ratios[i], out.oracle_ratios[i - 1]);
        if (!(gr >= opt.growth)) oracle_diverges = false;
        if (!(gr < 1.0 + opt.max_drift)) oracle_stable = false;
        out.drift = std::max(out.drift, std::abs(ext::div(out.rho[i], out.rho[i - 1]) - 1.0));
    }
    if (!(out.oracle_ratios.back() <= cap)) oracle_diverges = true;
    const bool oracle_finite = !oracle_diverges;
    out.finiteness_agree = formula_finite == oracle_finite;

    if (!formula_finite) {
        if (oracle_diverges) {
            out.verdict = Verdict::consistent_unbounded;
        } else if (L > 1 && oracle_stable) {
            out.verdict = Verdict::inconsistent;
            out.note = "formula exceeds the cap while the oracle is stable";
        } else {
            out.verdict = Verdict::inconclusive;
            out.note = "formula exceeds the cap; oracle trend undecided";
        }
        return out;
    }
    if (oracle_diverges) {
        out.verdict = Verdict::inconsistent;
        out.note = "formula finite but the oracle diverges under refinement";
        return out;
    }
    bool in_window = true;
    for (double r : out.rho) in_window = in_window && r >= opt.rho_low && r <= opt.rho_high;
    if (!in_window) {
        out.verdict = Verdict::inconsistent;
        out.note = "oracle/formula ratio outside the equivalence window";
    } else if (out.drift >= opt.max_drift) {
        out.verdict = Verdict::inconclusive;
        out.note = "ratio drifts under refinement";
    } else {
        out.verdict = Verdict::consistent;
    }
    return out;
}

}  // namespace lorentz_lab
