#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "lorentz_lab/errors.hpp"
#include "lorentz_lab/oracle.hpp"
#include "reference.hpp"

using namespace lorentz_lab;

namespace {

WeightSpec power(const GridPtr& g, double a) { return WeightSpec::from_descriptor(g, PowerLog{a, 0.0, 0.0, 1.0}); }

OracleProblem hardy(const GridPtr& g, double p, double q) {
    return {make_sup_op(power(g, 0.0), power(g, 0.0)), power(g, 0.0), power(g, 0.0), p, q};
}

std::vector<double> indicator(const GridPtr& g, std::size_t upto) {
    std::vector<double> f(g->size(), 0.0);
    for (std::size_t k = 0; k <= upto; ++k) f[k] = 1.0;
    return f;
}

Provenance prov(std::size_t N) {
    Provenance p;
    p.t_min = 1e-3;
    p.t_max = 1e3;
    p.N = N;
    return p;
}

EquivalenceLevel level(std::size_t N, double total, bool finite, double best) {
    ConstantReport rep;
    rep.regime = Regime::i;
    rep.total = total;
    rep.finite = finite;
    rep.parts = {{"A1", total, finite}};
    rep.provenance = prov(N);
    const auto g = make_log_grid(1e-3, 1e3, 2);
    OracleResult o{best, MonotoneFunction(g, {1.0, 0.0}), {}, 1, prov(N)};
    return {rep, o};
}

}  // namespace

TEST_CASE("indicator ratio for the Hardy average with p = q = 1") {
    // ||f**||_1 / ||f||_1 = 1 + log(t_max / s) for f = chi_(0, s]
    const auto g = make_log_grid(1e-3, 1e3, 2000);
    const RatioEvaluator ev(hardy(g, 1.0, 1.0));
    for (std::size_t j : {100u, 800u, 1500u}) {
        const double s = g->right(j);
        CHECK(ev.ratio(indicator(g, j)) == doctest::Approx(1.0 + std::log(1e3 / s)).epsilon(2e-3));
    }
}

TEST_CASE("the zero function has ratio 0") {
    const auto g = make_log_grid(1e-2, 1e2, 50);
    const RatioEvaluator ev(hardy(g, 2.0, 2.0));
    CHECK(ev.ratio(std::vector<double>(g->size(), 0.0)) == 0.0);
}

TEST_CASE("oracle bounds for the Hardy inequality with p = q = 2") {
    // indicators already give almost sqrt 2; the sharp constant is 2
    const auto g = make_log_grid(1e-3, 1e3, 400);
    const auto res = oracle_T_norm(hardy(g, 2.0, 2.0), {.budget = 100, .seed = 3});
    CHECK(res.best_ratio >= std::sqrt(2.0) * 0.99);
    CHECK(res.best_ratio <= 2.0);
    CHECK_FALSE(res.strategy_log.empty());
}

TEST_CASE("oracle results are reproducible and recomputable") {
    std::mt19937_64 rng(61);
    for (int c = 0; c < 6; ++c) {
        const auto g = fixtures::random_grid(rng, 200);
        const OracleProblem prob{make_sup_op(fixtures::random_weight(rng, g), fixtures::random_weight(rng, g),
                                             HeadPolicy::allow_truncation),
                                 fixtures::random_weight(rng, g), fixtures::random_weight(rng, g),
                                 fixtures::uniform(rng, 0.4, 3.0), fixtures::uniform(rng, 0.4, 3.0)};
        OracleOptions opt{.budget = 60, .seed = 17};
        const auto a = oracle_T_norm(prob, opt);
        opt.threads = 4;
        const auto b = oracle_T_norm(prob, opt);
        CHECK(a.best_ratio == b.best_ratio);
        CHECK(a.seed == 17);
        CHECK(ref::rel(oracle_ratio(prob, a.argmax), a.best_ratio) <= 1e-12);
        const auto f = a.argmax.values();
        for (std::size_t k = 0; k < f.size(); ++k) {
            CHECK(f[k] >= 0.0);
            if (k > 0) CHECK(f[k] <= f[k - 1]);
        }
        CHECK(a.provenance.N == 200);
    }
}

TEST_CASE("weak oracle examples") {
    const auto g = make_log_grid(1e-3, 1e3, 300);
    const auto one = power(g, 0.0);
    const auto spec = make_sup_op(one, one);
    // sup f** / sup f = 1 on the monotone cone
    const auto ww = oracle_weak_norms(spec, one, one, 1.0, Target::weak_weak, {.budget = 40});
    CHECK(ww.best_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(oracle_weak_norms(spec, one, one, 1.0, Target::strong), parameter_error);
}

TEST_CASE("oracle and formula stay within the window for weak targets with p <= 1") {
    std::mt19937_64 rng(62);
    for (int c = 0; c < 10; ++c) {
        const auto g = fixtures::random_grid(rng, 150);
        const auto spec = make_sup_op(fixtures::random_weight(rng, g), fixtures::random_weight(rng, g),
                                      HeadPolicy::allow_truncation);
        const auto v = fixtures::random_weight(rng, g);
        const auto w = fixtures::random_weight(rng, g);
        const double p = fixtures::uniform(rng, 0.3, 1.0);
        const auto rep = constants_T_weak(spec, v, w, p, 1e300);
        const auto res = oracle_weak_norms(spec, v, w, p, Target::weak, {.budget = 60, .seed = 5});
        const double rho = res.best_ratio / rep.total;
        CHECK(rho >= 0.01);
        CHECK(rho <= 100.0);
    }
}

TEST_CASE("verify_equivalence verdicts") {
    const double inf = std::numeric_limits<double>::infinity();
    {
        const std::vector<EquivalenceLevel> lv{level(100, 2.0, true, 1.0), level(200, 2.0, true, 1.05)};
        const auto r = verify_equivalence(lv);
        CHECK(r.verdict == Verdict::consistent);
        CHECK(r.drift == doctest::Approx(0.05));
        CHECK(r.finiteness_agree);
        CHECK(r.rho == std::vector<double>{0.5, 0.525});
    }
    {
        const std::vector<EquivalenceLevel> lv{level(100, inf, false, 10.0), level(200, inf, false, 25.0)};
        CHECK(verify_equivalence(lv).verdict == Verdict::consistent_unbounded);
    }
    {
        const std::vector<EquivalenceLevel> lv{level(100, inf, false, 3.0), level(200, inf, false, 3.1)};
        const auto r = verify_equivalence(lv);
        CHECK(r.verdict == Verdict::inconsistent);
        CHECK_FALSE(r.finiteness_agree);
    }
    {
        const std::vector<EquivalenceLevel> lv{level(100, 2.0, true, 1.0), level(200, 2.0, true, 4.0)};
        CHECK(verify_equivalence(lv).verdict == Verdict::inconsistent);
    }
    {
        const std::vector<EquivalenceLevel> lv{level(100, 1000.0, true, 1.0), level(200, 1000.0, true, 1.0)};
        CHECK(verify_equivalence(lv).verdict == Verdict::inconsistent);
    }
    {
        const std::vector<EquivalenceLevel> lv{level(100, 2.0, true, 1.0), level(200, 1.0, true, 1.0)};
        CHECK(verify_equivalence(lv).verdict == Verdict::inconclusive);
    }
    {
        // one level cannot show a trend for an infinite formula
        const auto r = verify_equivalence(level(100, inf, false, 3.0).report, level(100, inf, false, 3.0).oracle);
        CHECK(r.verdict == Verdict::inconclusive);
    }
}

TEST_CASE("verify_equivalence rejects mismatched inputs") {
    auto lv = level(100, 2.0, true, 1.0);
    lv.oracle.provenance.N = 101;
    CHECK_THROWS_AS(verify_equivalence(lv.report, lv.oracle), parameter_error);
    CHECK_THROWS_AS(verify_equivalence(std::span<const EquivalenceLevel>{}), parameter_error);
    auto other = level(200, 2.0, true, 1.0);
    other.report.regime = Regime::ii;
    const std::vector<EquivalenceLevel> mixed{level(100, 2.0, true, 1.0), other};
    CHECK_THROWS_AS(verify_equivalence(mixed), parameter_error);
}
