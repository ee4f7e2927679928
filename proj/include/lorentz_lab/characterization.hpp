#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorentz_lab/domain.hpp"
#include "lorentz_lab/hardy_suprema.hpp"
#include "lorentz_lab/lorentz.hpp"

namespace lorentz_lab {

/// Parameter cases of the characterization. i..vi are the strong-target
/// cases; G/H the weak target (p > 1 / p <= 1); I the weak-weak case.
enum class Regime { i, ii, iii, iv, v, vi, G, H, I };

std::string to_string(Regime r);
std::optional<Regime> regime_from_string(const std::string& s);

/// Total on (0, inf)^2; the six strong cases are pairwise disjoint. Cases v
/// and vi carry an explicit p < 1 guard.
Regime regime_select(double p, double q);

struct Part {
    std::string name;
    double value = 0.0;
    bool finite = true;
};

/// Grid and truncation metadata attached to every report.
struct Provenance {
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t N = 0;
    double cap = kDefaultCap;
    bool truncated = false;      // some primitive lost its head below t_min
    double B_at_t_max = 0.0;     // proxy for B(inf)
    double B_at_one = 0.0;       // 0 when 1 is outside the grid

    bool same_grid(const Provenance& o) const;
};

struct ConstantReport {
    Regime regime = Regime::i;
    std::vector<Part> parts;
    double total = 0.0;
    bool finite = true;
    Provenance provenance;
    std::vector<std::string> warnings;

    /// Value of the named part; throws parameter_error when absent.
    double part(const std::string& name) const;
};

/// Constants of the strong inequality ||T f||_{q,w} <= c ||f||_{p,v} on the
/// monotone cone. `forced` must agree with regime_select(p, q).
ConstantReport constants_T(const SupOpSpec& spec, const WeightSpec& v, const WeightSpec& w, double p,
                           double q, std::optional<Regime> forced = std::nullopt,
                           double cap = kDefaultCap);

struct ExponentPair {
    double p;
    double q;
};

/// constants_T for several (p, q) on the same data; the weight integrals and
/// the suprema shared by all regimes are computed once.
std::vector<ConstantReport> constants_T(const SupOpSpec& spec, const WeightSpec& v, const WeightSpec& w,
                                        std::span<const ExponentPair> exponents, double cap = kDefaultCap);

/// Weak target ||T f||_{inf,w} <= c ||f||_{p,v}: G1, G2 (p > 1) or H1, H2.
ConstantReport constants_T_weak(const SupOpSpec& spec, const WeightSpec& v, const WeightSpec& w,
                                double p, double cap = kDefaultCap);

/// ||T f||_{inf,w} <= c ||f||_{inf,v}: the single constant I.
ConstantReport constant_I(const SupOpSpec& spec, const WeightSpec& v, const WeightSpec& w,
                          double cap = kDefaultCap);

enum class Target { strong, weak, weak_weak };

std::string to_string(Target t);

struct MaximalProblem {
    WeightSpec phi;
    double alpha;
    WeightSpec b;
    WeightSpec v;
    WeightSpec w;
    double p;
    double q;
    double r_est;  // lower-estimate parameter, alpha <= r_est
};

/// Constants for M_{phi, Lambda^alpha(b)} from Lambda^p(v) (or its weak
/// version) into Lambda^q(w) or Lambda^{q,inf}(w). Hypothesis failures are
/// reported as warnings.
ConstantReport constants_maximal(const MaximalProblem& prob, Target target, double cap = kDefaultCap,
                                 int qr_trials = 2000, std::uint64_t seed = 1);

}  // namespace lorentz_lab
