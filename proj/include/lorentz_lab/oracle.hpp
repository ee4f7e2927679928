#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lorentz_lab/characterization.hpp"
#include "lorentz_lab/hardy_suprema.hpp"

namespace lorentz_lab {

/// The reduced inequality ||T f||_{q,w} <= c ||f||_{p,v} over the monotone
/// cone, p and q in (0, inf]. Norms with exponent inf are sup f(t) v(t).
struct OracleProblem {
    SupOpSpec spec;
    WeightSpec v;
    WeightSpec w;
    double p;
    double q;
};

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

/// Precomputed masses for repeated ratio evaluation.
class RatioEvaluator {
public:
    explicit RatioEvaluator(const OracleProblem& prob);

    /// ||T f||_{q,w} / ||f||_{p,v} with 0/0 = 0.
    double ratio(std::span<const double> f) const;
    double source_norm(std::span<const double> f) const;
    double target_norm(std::span<const double> f) const;

private:
    double p_;
    double q_;
    CumulativeWeight Bc_;
    CumulativeWeight Vc_;
    CumulativeWeight Wc_;
    std::vector<double> u_over_B_;
    std::vector<double> v_;
    std::vector<double> w_;
};

double oracle_ratio(const OracleProblem& prob, const MonotoneFunction& f);

struct OracleOptions {
    int budget = 200;              // random staircases
    std::uint64_t seed = 1;
    unsigned threads = 1;
    int breakpoints = 8;           // per staircase
    double ascent_tolerance = 1e-6;
    int ascent_starts = 3;         // best staircases refined by coordinate ascent
    bool power_profiles = true;
};

struct OracleResult {
    double best_ratio = 0.0;
    MonotoneFunction argmax;
    std::vector<std::pair<std::string, double>> strategy_log;
    std::uint64_t seed = 0;
    Provenance provenance;
};

/// Brute-force lower bound for the best constant of the reduced inequality on
/// the grid. Strategies: all edge indicators, random staircases, coordinate
/// ascent on their coefficients, and truncated power profiles.
OracleResult oracle_T_norm(const OracleProblem& prob, const OracleOptions& opt = {});

/// The weak forms: ||T psi||_{inf,w} against ||psi||_{p,v} (weak) or
/// ||psi||_{inf,v} (weak_weak).
OracleResult oracle_weak_norms(const SupOpSpec& spec, const WeightSpec& v, const WeightSpec& w, double p,
                               Target target, const OracleOptions& opt = {});

enum class Verdict { consistent, consistent_unbounded, inconsistent, inconclusive };

std::string to_string(Verdict v);

struct EquivalenceOptions {
    double rho_low = 1.0 / 100.0;
    double rho_high = 100.0;
    double max_drift = 0.2;     // relative change of rho between levels
    double growth = 2.0;        // oracle growth per level read as divergence
};

/// One refinement level: a report and an oracle run on the same grid.
struct EquivalenceLevel {
    ConstantReport report;
    OracleResult oracle;
};

struct EquivalenceReport {
    Verdict verdict = Verdict::inconclusive;
    std::string regime;
    std::vector<std::size_t> N;
    std::vector<double> t_max;
    std::vector<double> totals;
    std::vector<double> oracle_ratios;
    std::vector<double> rho;
    double drift = 0.0;             // max relative change of rho between levels
    bool finiteness_agree = true;
    std::string note;
};

EquivalenceReport verify_equivalence(const ConstantReport& report, const OracleResult& oracle,
                                     const EquivalenceOptions& opt = {});
EquivalenceReport verify_equivalence(std::span<const EquivalenceLevel> levels,
                                     const EquivalenceOptions& opt = {});

}  // namespace lorentz_lab
