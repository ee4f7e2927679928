#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fixtures.hpp"
#include "lorentz_lab/errors.hpp"
#include "lorentz_lab/maximal_sandbox.hpp"
#include "reference.hpp"

using namespace lorentz_lab;

namespace {

Box box1(double lo, double hi, double v) {
    Box b;
    b.lo[0] = lo;
    b.hi[0] = hi;
    b.value = v;
    return b;
}

WeightSpec power(const GridPtr& g, double a) { return WeightSpec::from_descriptor(g, PowerLog{a, 0.0, 0.0, 1.0}); }

}  // namespace

TEST_CASE("classical maximal function of chi_[-1/2, 1/2]") {
    // M f = 1 on the interval and 1 / (|x| + 1/2) outside
    const StepField f(1, {box1(-0.5, 0.5, 1.0)});
    const auto m = eval_maximal(f, MaximalSpec::classical());
    REQUIRE(m.lattice_values.size() == m.coords.size());
    for (std::size_t i = 0; i < m.coords.size(); ++i) {
        const double x = m.coords[i];
        const double exact = std::abs(x) <= 0.5 ? 1.0 : 1.0 / (std::abs(x) + 0.5);
        CHECK(m.lattice_values[i] == doctest::Approx(exact).epsilon(1e-12));
    }
    for (double v : m.values) CHECK(v <= 1.0 + 1e-12);
}

TEST_CASE("the zero field has a zero maximal function") {
    const StepField f(1, {box1(-1.0, 1.0, 0.0)});
    const auto m = eval_maximal(f, MaximalSpec::classical());
    for (double v : m.values) CHECK(v == 0.0);
    CHECK(m.rearranged().values.empty());
}

TEST_CASE("phi = t^{1/2} at the centre of chi_[-1/2, 1/2]") {
    // sup_Q |Q cap I| / |Q|^{1/2} is 1, reached at Q = I
    const StepField f(1, {box1(-0.5, 0.5, 1.0)});
    const MaximalSpec spec{PowerLog{0.5, 0.0, 0.0, 1.0}, 1.0, PowerLog{}};
    const auto m = eval_maximal(f, spec);
    const auto mid = std::min_element(m.coords.begin(), m.coords.end(),
                                      [](double a, double b) { return std::abs(a) < std::abs(b); });
    CHECK(m.lattice_values[static_cast<std::size_t>(mid - m.coords.begin())] == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : m.lattice_values) CHECK(v <= 1.0 + 1e-12);
}

TEST_CASE("rhs_reduction is f** for the classical data") {
    std::mt19937_64 rng(71);
    for (int c = 0; c < 20; ++c) {
        const auto g = fixtures::random_grid(rng, 100);
        const auto f = fixtures::random_monotone(rng, g);
        const auto r = rhs_reduction(f, power(g, 1.0), 1.0, power(g, 0.0));
        const auto fss = doublestar(f);
        for (std::size_t k = 0; k < g->size(); ++k) CHECK(ref::rel(r[k], fss[k]) <= 1e-12);
    }
}

TEST_CASE("rhs_reduction is homogeneous of degree one") {
    std::mt19937_64 rng(72);
    const auto g = fixtures::random_grid(rng, 80);
    const auto f = fixtures::random_monotone(rng, g);
    std::vector<double> twice(f.values().begin(), f.values().end());
    for (auto& x : twice) x *= 2.0;
    const auto phi = power(g, 0.7);
    const auto b = power(g, -0.3);
    const auto a = rhs_reduction(f, phi, 0.6, b);
    const auto d = rhs_reduction(MonotoneFunction(g, twice), phi, 0.6, b);
    for (std::size_t k = 0; k < g->size(); ++k) CHECK(ref::rel(d[k], 2.0 * a[k]) <= 1e-12);
}

TEST_CASE("dilating the field dilates the classical maximal function") {
    std::mt19937_64 rng(73);
    for (int c = 0; c < 5; ++c) {
        const auto f = fixtures::random_step_field(rng, 1);
        std::vector<Box> wide;
        for (auto b : f.boxes()) {
            b.lo[0] *= 2.0;
            b.hi[0] *= 2.0;
            wide.push_back(b);
        }
        const SandboxOptions opt{.cube_budget = 8, .lattice_1d = 120};
        const auto a = eval_maximal(f, MaximalSpec::classical(), opt);
        const auto b = eval_maximal(StepField(1, wide), MaximalSpec::classical(), opt);
        REQUIRE(a.lattice_values.size() == b.lattice_values.size());
        for (std::size_t i = 0; i < a.lattice_values.size(); ++i) {
            CHECK(b.coords[i] == doctest::Approx(2.0 * a.coords[i]).epsilon(1e-12));
            CHECK(ref::rel(a.lattice_values[i], b.lattice_values[i]) <= 1e-12);
        }
    }
}

TEST_CASE("disc_rect_area examples") {
    CHECK(disc_rect_area(1.0, -2.0, 2.0, -2.0, 2.0) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(disc_rect_area(2.0, 0.0, 3.0, 0.0, 3.0) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(disc_rect_area(1.0, -1.0, 1.0, 0.0, 5.0) == doctest::Approx(0.5 * std::numbers::pi).epsilon(1e-15));
    CHECK(disc_rect_area(1.0, 2.0, 3.0, -1.0, 1.0) == 0.0);
    CHECK(disc_rect_area(10.0, 0.0, 1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(disc_rect_area(0.0, 0.0, 1.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("disc_rect_area against numerical integration") {
    std::mt19937_64 rng(74);
    for (int c = 0; c < 200; ++c) {
        const double r = fixtures::uniform(rng, 0.1, 2.0);
        double x0 = fixtures::uniform(rng, -2.5, 2.5), x1 = fixtures::uniform(rng, -2.5, 2.5);
        double y0 = fixtures::uniform(rng, -2.5, 2.5), y1 = fixtures::uniform(rng, -2.5, 2.5);
        if (x0 > x1) std::swap(x0, x1);
        if (y0 > y1) std::swap(y0, y1);
        auto chord = [&](double x) {
            const double s = std::sqrt(std::max(0.0, r * r - x * x));
            return std::max(0.0, std::min(y1, s) - std::max(y0, -s));
        };
        const double lo = std::max(x0, -r), hi = std::min(x1, r);
        const double numeric =
            lo < hi ? boost::math::quadrature::gauss_kronrod<double, 61>::integrate(chord, lo, hi, 20, 1e-12) : 0.0;
        CHECK(std::abs(disc_rect_area(r, x0, x1, y0, y1) - numeric) <= 1e-8);
    }
}

TEST_CASE("two separated bumps sit inside the classical sandwich") {
    // (M f)* and f** are comparable: f** <= (M f)* up to the sampling, and (M f)* <= 2 f** in R^1
    const StepField f(1, {box1(-3.0, -2.0, 1.0), box1(2.0, 2.5, 3.0)});
    const auto res = herz_stein_check(f);
    CHECK(res.warnings.empty());
    CHECK(res.c_low > 0.5);
    CHECK(res.C_high <= 2.0 + 1e-12);
    CHECK(res.c_low <= res.C_high);
    REQUIRE_FALSE(res.ratio.empty());
    for (std::size_t k = 0; k < res.t.size(); ++k)
        if (k > 0) CHECK(res.lhs[k] <= res.lhs[k - 1]);
}

TEST_CASE("radial sandwich for a ball indicator") {
    const RadialField f(2, MonotoneFunction(make_grid({0.25, 0.5, 1.0}), {1.0, 1.0}));
    const auto res = sandwich_check(f, MaximalSpec::classical());
    CHECK(res.c_low > 0.0);
    CHECK(std::isfinite(res.C_high));
    CHECK(res.c_low <= res.C_high);
}

TEST_CASE("sandbox options are validated") {
    const StepField f(1, {box1(0.0, 1.0, 1.0)});
    CHECK_THROWS_AS(eval_maximal(f, MaximalSpec::classical(), {.lattice_1d = 1}), parameter_error);
}
