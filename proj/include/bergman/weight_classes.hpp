#pragma once

#include <string>
#include <vector>

#include "bergman/weight.hpp"

namespace bergman {

enum class WeightClass { dhat, dcheck, mclass, d };
enum class Verdict { likely_member, likely_nonmember, inconclusive };

std::string to_string(WeightClass c);
std::string to_string(Verdict v);

/// Grids and decision thresholds for the class diagnostics. Membership in
/// these classes is a limsup/liminf statement; finite grids can only produce
/// "likely" verdicts, and the thresholds below are documented heuristics.
struct ClassConfig {
    double grid_outer = 0.5;              ///< grids start at 1-r = 0.5
    double grid_floor = 1e-6;             ///< ... down to this 1-r
    double grid_floor_exponential = 1e-3; ///< exponential kinds underflow earlier
    int points_per_decade = 20;
    double x_min = 1.0;                   ///< exponent grid for the moment classes
    double x_max = 1e4;
    double plateau_slope = 0.05;    ///< relative ratio drift per decade accepted as plateau
    double growth_factor = 10.0;    ///< ratio growth per decade declaring divergence
    double excess_delta = 0.1;      ///< inf(ratio)-1 needed for a lower-class membership
    double excess_decay_keep = 0.93;///< last-decade excess must keep this fraction of the previous
    std::vector<double> k_ladder{2.0, 4.0, 8.0, 16.0};
};

struct ClassMembershipReport {
    WeightClass class_name = WeightClass::dhat;
    Verdict verdict = Verdict::inconclusive;
    double c_hat = 0.0;       ///< Dhat: sup ratio; Dcheck/M: the witnessed C > 1
    double k_used = 0.0;      ///< Dcheck/M: K that produced the verdict
    double eta = 0.0;         ///< M: exponent of the moment growth fit
    double tail_power = 0.0;  ///< Dcheck: power alpha of the weighted-tail fit
    std::vector<double> grid;    ///< evidence: radii or exponents
    std::vector<double> ratios;  ///< evidence: quotient values (parallel to grid)
    std::string note;
    std::string weight;
};

/// Geometric radii grid in 1-r, floor chosen by the weight's decay class.
std::vector<double> default_radii_grid(const RadialWeight& w, const ClassConfig& cfg = {});
std::vector<double> default_exponent_grid(const ClassConfig& cfg = {});

/// Upper doubling: ratio(r) = what(r)/what((1+r)/2). Grid must be strictly
/// increasing with max >= 0.999.
ClassMembershipReport dhat_profile(const WeightPtr& w, const std::vector<double>& radii,
                                   const ClassConfig& cfg = {}, const QuadratureSpec& spec = {});

/// Lower doubling: ratio(r) = what(r)/what(1-(1-r)/K); ladder search over
/// cfg.k_ladder when the given K fails.
ClassMembershipReport dcheck_profile(const WeightPtr& w, double K,
                                     const std::vector<double>& radii,
                                     const ClassConfig& cfg = {}, const QuadratureSpec& spec = {});

/// Moment class M: ratio(x) = w_x / w_{Kx} on the exponent grid.
ClassMembershipReport m_profile(const WeightPtr& w, double K, const std::vector<double>& xs,
                                const ClassConfig& cfg = {}, const QuadratureSpec& spec = {});

/// Dhat through moments: ratio(x) = w_x / w_{qx} (the moment characterization).
ClassMembershipReport moment_doubling_profile(const WeightPtr& w, double q,
                                              const std::vector<double>& xs,
                                              const ClassConfig& cfg = {},
                                              const QuadratureSpec& spec = {});

struct FullClassReport {
    ClassMembershipReport dhat;
    ClassMembershipReport dcheck;
    ClassMembershipReport m;
    ClassMembershipReport moment_doubling;
    Verdict d = Verdict::inconclusive;  ///< conjunction of dhat and dcheck
    bool dhat_tests_agree = false;      ///< tail-ratio vs moment-ratio cross-check
};

/// Runs all four diagnostics on default grids; D = Dhat and Dcheck.
FullClassReport classify_weight(const WeightPtr& w, const ClassConfig& cfg = {},
                                const QuadratureSpec& spec = {});

} // namespace bergman
