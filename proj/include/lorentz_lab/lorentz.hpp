#pragma once

#include <cstdint>
#include <optional>

#include "lorentz_lab/domain.hpp"

namespace lorentz_lab {

inline constexpr double kDefaultCap = 1e6;

struct LorentzParams {
    double p;
    WeightSpec w;
};

/// ||f||_{Lambda^p(w)} = (int (f*)^p w)^{1/p}, head mass included.
double lambda_norm(const MonotoneFunction& fstar, const LorentzParams& prm,
                   HeadPolicy policy = HeadPolicy::allow_truncation);
/// sup_t f*(t) W(t)^{1/p}, exact for the step representation.
double weak_lambda_norm(const MonotoneFunction& fstar, const LorentzParams& prm,
                        HeadPolicy policy = HeadPolicy::allow_truncation);
/// ||f**||_{p,w}.
double gamma_norm(const MonotoneFunction& fstar, const LorentzParams& prm,
                  HeadPolicy policy = HeadPolicy::allow_truncation);

/// A grid-limited constant together with its verdict against the cap. The
/// grid cannot tell "large" from "infinite", so `finite` means "<= cap".
struct CheckResult {
    double constant = 0.0;
    bool finite = true;
    double cap = kDefaultCap;
};

/// sup over representable t of F(2t)/F(t).
CheckResult check_delta2(const CumulativeWeight& F, double cap = kDefaultCap);

enum class Monotonicity { increasing, decreasing };

/// Smallest C with phi(t1) <= C phi(t2) for grid samples t1 <= t2
/// (increasing), or phi(t2) <= C phi(t1) (decreasing).
CheckResult check_quasi_monotone(const GridFunction& phi, Monotonicity direction,
                                 double cap = kDefaultCap);

struct QrResult {
    /// max of phi(sum t_i) / (sum phi(t_i)^r)^{1/r} over the random trials.
    double lower_bound = 0.0;
    /// For power-log phi: quasi-decreasing constant of phi / t^{1/r}, which
    /// bounds the Q_r constant from above.
    std::optional<double> structural_bound;
    bool finite = true;
};

/// Randomized lower bound for the Q_r constant. Points are drawn from the
/// grid edges, 2..8 per trial, with sums kept inside the grid.
QrResult check_Qr(const WeightSpec& phi, double r, int trials, std::uint64_t seed,
                  double cap = kDefaultCap);

struct LowerEstimateResult {
    bool verdict = false;
    double constant = 0.0;  // quasi-increasing constant of W(t)/t^{p/r}
    bool finite = true;
};

/// Lambda^p(w) has a lower r-estimate iff r >= p and W(t)/t^{p/r} is
/// quasi-increasing.
LowerEstimateResult check_lower_r_estimate(double p, const WeightSpec& w, double r,
                                           double cap = kDefaultCap,
                                           HeadPolicy policy = HeadPolicy::allow_truncation);

}  // namespace lorentz_lab
