#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "lorentz_lab/characterization.hpp"
#include "lorentz_lab/errors.hpp"
#include "reference.hpp"

using namespace lorentz_lab;

namespace {

WeightSpec power(const GridPtr& g, double a, double c = 1.0) {
    return WeightSpec::from_descriptor(g, PowerLog{a, 0.0, 0.0, c});
}

/// Part letter of the strong constants in each regime.
char letter(Regime r) {
    switch (r) {
        case Regime::i: return 'A';
        case Regime::ii: return 'B';
        case Regime::iii: return 'C';
        case Regime::iv: return 'D';
        case Regime::v: return 'E';
        default: return 'F';
    }
}

}  // namespace

TEST_CASE("regime_select examples") {
    CHECK(regime_select(2.0, 2.0) == Regime::i);
    CHECK(regime_select(2.0, 3.0) == Regime::i);
    CHECK(regime_select(1.0, 1.0) == Regime::ii);
    CHECK(regime_select(1.0, 4.0) == Regime::ii);
    CHECK(regime_select(2.0, 1.0) == Regime::iii);
    CHECK(regime_select(1.0, 0.5) == Regime::iv);
    CHECK(regime_select(0.5, 0.5) == Regime::v);
    CHECK(regime_select(0.5, 2.0) == Regime::v);
    CHECK(regime_select(0.5, 0.25) == Regime::vi);
    for (auto r : fixtures::kSixRegimes) CHECK(regime_from_string(to_string(r)) == r);
    CHECK_FALSE(regime_from_string("vii").has_value());
}

TEST_CASE("regime_select is total and agrees with the defining inequalities") {
    std::mt19937_64 rng(51);
    for (int c = 0; c < 20000; ++c) {
        const double p = std::exp(fixtures::uniform(rng, -3.0, 3.0));
        const double q = std::exp(fixtures::uniform(rng, -3.0, 3.0));
        Regime expect;
        if (p > 1.0)
            expect = p <= q ? Regime::i : Regime::iii;
        else if (p == 1.0)
            expect = q >= 1.0 ? Regime::ii : Regime::iv;
        else
            expect = p <= q ? Regime::v : Regime::vi;
        CHECK(regime_select(p, q) == expect);
    }
    for (double q : {0.3, 1.0, 5.0}) CHECK(regime_select(1.0, q) == (q < 1.0 ? Regime::iv : Regime::ii));
}

TEST_CASE("A1 closed form for u = t, b = v = w = 1, p = q = 2") {
    const auto g = make_log_grid(1e-3, 10.0, 200);
    const auto spec = make_sup_op(power(g, 1.0), power(g, 0.0));
    const auto rep = constants_T(spec, power(g, 0.0), power(g, 0.0), 2.0, 2.0);
    CHECK(rep.regime == Regime::i);
    CHECK(rep.part("A1") == doctest::Approx(std::sqrt(10.0 * g->midpoint(199))).epsilon(1e-12));
    CHECK(rep.provenance.N == 200);
    CHECK(rep.provenance.t_max == 10.0);
    CHECK_THROWS_AS(rep.part("Z9"), parameter_error);
}

TEST_CASE("a forced regime must agree with the exponents") {
    const auto g = make_log_grid(1e-2, 1e2, 32);
    const auto spec = make_sup_op(power(g, 0.0), power(g, 0.0));
    CHECK_THROWS_AS(constants_T(spec, power(g, 0.0), power(g, 0.0), 2.0, 2.0, Regime::iii), dispatch_error);
    CHECK_NOTHROW(constants_T(spec, power(g, 0.0), power(g, 0.0), 2.0, 2.0, Regime::i));
    CHECK_THROWS_AS(constants_T(spec, power(g, 0.0), power(g, 0.0), -1.0, 2.0), parameter_error);
}

TEST_CASE("every part agrees with the nested-loop formulas") {
    std::mt19937_64 rng(52);
    for (auto r : fixtures::kSixRegimes) {
        for (int c = 0; c < 8; ++c) {
            const auto g = fixtures::random_grid(rng, 60);
            const auto spec = make_sup_op(fixtures::random_weight(rng, g), fixtures::random_weight(rng, g),
                                          HeadPolicy::allow_truncation);
            const auto v = fixtures::random_weight(rng, g);
            const auto w = fixtures::random_weight(rng, g);
            const auto [p, q] = fixtures::random_exponents(rng, r);
            const auto rep = constants_T(spec, v, w, p, q, std::nullopt, 1e300);
            const auto naive = ref::constants_T(spec, v, w, p, q);
            REQUIRE(rep.parts.size() == naive.size());
            for (const auto& part : rep.parts) CHECK(ref::rel(part.value, naive.at(part.name)) <= 1e-10);
        }
    }
}

TEST_CASE("refining the grid tenfold moves a finite constant by under 2%") {
    // u / B = t^{-1/2} with b = 1, v = t^{-1/2}, w = t^{-3/2}, p = 2, q = 4
    auto constant = [](std::size_t n) {
        const auto g = make_log_grid(1e-3, 1e3, n);
        const auto spec = make_sup_op(power(g, 0.5), power(g, 0.0));
        return constants_T(spec, power(g, -0.5), power(g, -1.5), 2.0, 4.0).total;
    };
    const double coarse = constant(400);
    const double fine = constant(4000);
    CHECK(std::isfinite(coarse));
    CHECK(ref::rel(coarse, fine) <= 0.02);
}

TEST_CASE("weak and weak-weak examples") {
    const auto g = make_log_grid(1e-3, 1e3, 300);
    const auto one = power(g, 0.0);
    // u = B: u / B = 1, so H1 = sup B / V and H2 = sup B / V, both 1 for b = v
    const auto B = cumulative(one);
    const auto flat = make_sup_op(WeightSpec::from_samples(GridFunction(g, B.at_mid)), one);
    const auto h = constants_T_weak(flat, one, one, 1.0);
    CHECK(h.regime == Regime::H);
    CHECK(h.part("H1") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.part("H2") == doctest::Approx(1.0).epsilon(1e-12));

    // u = b = v = w = 1: I = sup (int_0^t 1) / t = 1
    const auto hardy = make_sup_op(one, one);
    const auto i = constant_I(hardy, one, one);
    CHECK(i.regime == Regime::I);
    CHECK(i.part("I") == doctest::Approx(1.0).epsilon(1e-12));

    // u = B, b = v = w = 1, p = 2: G1 = sup_t (int_0^t 1)^{1/2} = sqrt(t_max)
    const auto gw = constants_T_weak(flat, one, one, 2.0);
    CHECK(gw.regime == Regime::G);
    CHECK(gw.part("G1") == doctest::Approx(std::sqrt(g->midpoint(299))).epsilon(1e-12));
}

TEST_CASE("scaling w by c scales every strong part by c^{1/q}") {
    std::mt19937_64 rng(53);
    for (auto r : fixtures::kSixRegimes) {
        const auto g = fixtures::random_grid(rng, 80);
        const auto spec = make_sup_op(fixtures::random_weight(rng, g), fixtures::random_weight(rng, g),
                                      HeadPolicy::allow_truncation);
        const auto v = fixtures::random_weight(rng, g);
        const auto w = fixtures::random_weight(rng, g);
        const auto [p, q] = fixtures::random_exponents(rng, r);
        const double c = fixtures::uniform(rng, 0.1, 10.0);
        const auto a = constants_T(spec, v, w, p, q, std::nullopt, 1e300);
        const auto b = constants_T(spec, v, w.scaled(c), p, q, std::nullopt, 1e300);
        for (std::size_t k = 0; k < a.parts.size(); ++k)
            CHECK(ref::rel(b.parts[k].value, std::pow(c, 1.0 / q) * a.parts[k].value) <= 1e-10);
    }
}

TEST_CASE("the batch call equals single calls") {
    std::mt19937_64 rng(54);
    const auto g = fixtures::random_grid(rng, 120);
    const auto spec = make_sup_op(fixtures::random_weight(rng, g), fixtures::random_weight(rng, g),
                                  HeadPolicy::allow_truncation);
    const auto v = fixtures::random_weight(rng, g);
    const auto w = fixtures::random_weight(rng, g);
    std::vector<ExponentPair> pairs;
    for (int k = 0; k < 4; ++k)
        for (auto r : fixtures::kSixRegimes) {
            const auto [p, q] = fixtures::random_exponents(rng, r);
            pairs.push_back({p, q});
        }
    const auto batch = constants_T(spec, v, w, pairs);
    REQUIRE(batch.size() == pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto one = constants_T(spec, v, w, pairs[k].p, pairs[k].q);
        CHECK(batch[k].regime == one.regime);
        CHECK(batch[k].total == one.total);
        CHECK(batch[k].finite == one.finite);
        for (std::size_t j = 0; j < one.parts.size(); ++j) CHECK(batch[k].parts[j].value == one.parts[j].value);
    }
}

TEST_CASE("maximal constants reduce to the operator constants by substitution") {
    // (maximal part)^alpha equals the operator part for u = B / phi^alpha at (p / alpha, q / alpha)
    std::mt19937_64 rng(55);
    for (auto r : fixtures::kSixRegimes) {
        for (int c = 0; c < 3; ++c) {
            const auto g = fixtures::random_grid(rng, 100);
            const double alpha = fixtures::uniform(rng, 0.3, 1.0);
            const auto [pt, qt] = fixtures::random_exponents(rng, r);
            const auto phi = power(g, fixtures::uniform(rng, 0.2, 1.0));
            const auto b = fixtures::random_weight(rng, g);
            const auto v = fixtures::random_weight(rng, g);
            const auto w = fixtures::random_weight(rng, g);
            const MaximalProblem prob{phi, alpha, b, v, w, pt * alpha, qt * alpha, alpha};
            const auto m = constants_maximal(prob, Target::strong, 1e300, 50);
            const auto spec = reduce_maximal_to_T(phi, alpha, b, HeadPolicy::allow_truncation);
            const auto t = constants_T(spec, v, w, pt, qt, std::nullopt, 1e300);
            CHECK(m.regime == r);
            REQUIRE(m.parts.size() == t.parts.size());
            for (std::size_t k = 0; k < t.parts.size(); ++k) {
                CHECK(m.parts[k].name == "M" + t.parts[k].name);
                CHECK(t.parts[k].name[0] == letter(r));
                CHECK(ref::rel(std::pow(m.parts[k].value, alpha), t.parts[k].value) <= 1e-10);
            }
        }
    }
}

TEST_CASE("weak maximal constants reduce to the weak operator constants") {
    // w_T = W^{alpha/q} is increasing, so its running sup is itself
    std::mt19937_64 rng(56);
    for (int c = 0; c < 10; ++c) {
        const auto g = fixtures::random_grid(rng, 100);
        const double alpha = fixtures::uniform(rng, 0.3, 1.0);
        const double p = alpha * fixtures::uniform(rng, 0.5, 3.0);
        const double q = fixtures::uniform(rng, 0.5, 3.0);
        const auto phi = power(g, fixtures::uniform(rng, 0.2, 1.0));
        const auto b = fixtures::random_weight(rng, g);
        const auto v = fixtures::random_weight(rng, g);
        const auto w = fixtures::random_weight(rng, g);
        const auto W = cumulative(w, HeadPolicy::allow_truncation);
        std::vector<double> wt(g->size());
        for (std::size_t k = 0; k < wt.size(); ++k) wt[k] = std::pow(W.at_mid[k], alpha / q);
        const auto m = constants_maximal({phi, alpha, b, v, w, p, q, alpha}, Target::weak, 1e300, 50);
        const auto spec = reduce_maximal_to_T(phi, alpha, b, HeadPolicy::allow_truncation);
        const auto t = constants_T_weak(spec, v, WeightSpec::from_samples(GridFunction(g, wt)), p / alpha, 1e300);
        CHECK(m.regime == t.regime);
        REQUIRE(m.parts.size() == t.parts.size());
        for (std::size_t k = 0; k < t.parts.size(); ++k)
            CHECK(ref::rel(std::pow(m.parts[k].value, alpha), t.parts[k].value) <= 1e-10);
    }
}

TEST_CASE("maximal weak examples") {
    // phi = t, alpha = p = q = 1, b = v = w = 1: W / phi = 1 and B / V = 1
    const auto g = make_log_grid(1e-3, 1e3, 200);
    const MaximalProblem prob{power(g, 1.0), 1.0, power(g, 0.0), power(g, 0.0), power(g, 0.0), 1.0, 1.0, 1.0};
    const auto rep = constants_maximal(prob, Target::weak, kDefaultCap, 100);
    CHECK(rep.regime == Regime::H);
    CHECK(rep.part("MH1") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.part("MH2") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("maximal weak-weak exponent calculus") {
    // b = v = w = 1, alpha < p: int_0^t V^{-alpha/p} dB = t^{1 - alpha/p} / (1 - alpha/p); with
    // phi = t^{1/alpha - 1/p + 1/q} the constant is (1 - alpha/p)^{-1/alpha}
    const double alpha = 0.5, p = 2.0, q = 3.0;
    const auto g = make_log_grid(1e-3, 1e3, 4000);
    const auto one = power(g, 0.0);
    const MaximalProblem prob{power(g, 1.0 / alpha - 1.0 / p + 1.0 / q), alpha, one, one, one, p, q, 1.0};
    const auto rep = constants_maximal(prob, Target::weak_weak, kDefaultCap, 100);
    CHECK(rep.regime == Regime::I);
    CHECK(rep.part("MI") == doctest::Approx(std::pow(1.0 - alpha / p, -1.0 / alpha)).epsilon(1e-2));
}

TEST_CASE("maximal inputs are validated") {
    const auto g = make_log_grid(1e-2, 1e2, 32);
    const auto one = power(g, 0.0);
    CHECK_THROWS_AS(constants_maximal({one, 2.0, one, one, one, 2.0, 2.0, 1.0}, Target::strong), parameter_error);
    CHECK_THROWS_AS(constants_maximal({one, 0.0, one, one, one, 2.0, 2.0, 1.0}, Target::strong), parameter_error);
}
