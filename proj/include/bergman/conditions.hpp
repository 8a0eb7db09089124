#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bergman/weight.hpp"
#include "bergman/weight_classes.hpp"

namespace bergman {

enum class Criterion { dp, ap, mp };
enum class Trend { bounded, diverging, inconclusive };

std::string to_string(Criterion c);
std::string to_string(Trend t);

/// Knobs for the trend heuristics. Divergence needs monotone growth over the
/// last window, a sustained log-slope, and clearing the ceiling relative to
/// the first value. These are heuristics, never proofs.
struct TrendConfig {
    int window = 20;
    double bounded_variation = 0.01;  ///< max relative spread over the window
    double slope_min = 1e-4;          ///< log growth per sample
    double ceiling_factor = 1e6;      ///< value must reach this multiple of the start
};

/// Context config used inside the criterion profiles: the D_p values of the
/// exponential-weight races grow like exp(c n^{beta/(beta+1)}) with small c,
/// so the profile trend uses a 3x ceiling to detect them at desk scale.
TrendConfig condition_trend_config();

struct TrendVerdict {
    Trend trend = Trend::inconclusive;
    double slope = 0.0;  ///< fitted log growth per sample over the window
    std::string reason;
};

struct ConditionProfile {
    Criterion criterion = Criterion::dp;
    std::vector<double> axis;        ///< n (dp) or r (ap, mp)
    std::vector<double> log_values;  ///< log-scale storage of the quotient
    double log_sup = -std::numeric_limits<double>::infinity();
    double sup_estimate = 0.0;       ///< exp(log_sup); +inf when sigma fails
    TrendVerdict trend;
    bool sigma_is_weight = true;
    std::string note;
    double p = 0.0;
    std::string omega;
    std::string nu;

    double value(std::size_t i) const { return std::exp(log_values[i]); }
};

TrendVerdict classify_trend(const std::vector<double>& log_values, const TrendConfig& cfg = {});
TrendVerdict classify_trend(const ConditionProfile& profile, const TrendConfig& cfg = {});

/// D_p quotient (nu_{np+1})^{1/p} (sigma_{np'+1})^{1/p'} / omega_{2n+1} for
/// n = 0..N. Short-circuits to a diverging profile when sigma is not a weight.
/// `step` = 1 follows the paper's integer supremum; fractional steps sample the
/// dense-n variant.
ConditionProfile dp_sequence(const WeightPtr& omega, const WeightPtr& nu, double p, int N,
                             const QuadratureSpec& spec = {}, double step = 1.0);

/// A_p quotient over a radii grid using the t dt tail measures.
ConditionProfile ap_profile(const WeightPtr& omega, const WeightPtr& nu, double p,
                            const std::vector<double>& radii, const QuadratureSpec& spec = {});

/// M_p quotient: (inner(r)+1)^{1/p} (int_r^1 sigma t dt)^{1/p'} with the
/// cumulative inner integral computed in log scale.
ConditionProfile mp_profile(const WeightPtr& omega, const WeightPtr& nu, double p,
                            const std::vector<double>& radii, const QuadratureSpec& spec = {});

/// Radii grid for a pair: the exponential floor applies when any of omega, nu
/// or sigma decays exponentially.
std::vector<double> pair_radii_grid(const WeightPtr& omega, const WeightPtr& nu, double p,
                                    const ClassConfig& cfg = {});

/// Worst slack of the two Hoelder floors: min over the grid of the A_p
/// quotient minus 1, and min over n of the D_p(omega,omega) quotient minus 1.
struct HolderSlack {
    double ap_slack = 0.0;
    double dp_slack = 0.0;
    double worst = 0.0;
};
HolderSlack holder_floor_check(const WeightPtr& omega, const WeightPtr& nu, double p,
                               const std::vector<double>& radii, int N = 100,
                               const QuadratureSpec& spec = {});

/// Max relative discrepancy between  int_t^1 (omega/h)^{p'} s ds  and
/// p' (int_t^1 sigma s ds)^{1/p'}  over the t grid, where
/// h = nu^{1/p} (int_{|.|}^1 sigma s ds)^{1/(pp')}.
double integration_identity_check(const WeightPtr& omega, const WeightPtr& nu, double p,
                                  const std::vector<double>& t_grid,
                                  const QuadratureSpec& spec = {});

/// Cross-module consistency: (a) dp/ap trends agree when omega is likely in
/// Dhat, (b) Dhat verdicts transfer between omega and nu when dp is bounded,
/// (c) M membership transfers nu -> omega when dp is bounded.
struct TransferReport {
    bool dp_ap_checked = false, dp_ap_agree = true;
    bool dhat_checked = false, dhat_agree = true;
    bool m_checked = false, m_transfers = true;
    Trend dp_trend = Trend::inconclusive;
    Trend ap_trend = Trend::inconclusive;
    Verdict omega_dhat = Verdict::inconclusive, nu_dhat = Verdict::inconclusive;
    Verdict omega_m = Verdict::inconclusive, nu_m = Verdict::inconclusive;
    bool all_pass() const {
        return (!dp_ap_checked || dp_ap_agree) && (!dhat_checked || dhat_agree) &&
               (!m_checked || m_transfers);
    }
};
TransferReport class_transfer_checks(const WeightPtr& omega, const WeightPtr& nu, double p,
                                     const QuadratureSpec& spec = {});

} // namespace bergman
