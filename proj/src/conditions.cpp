#include "bergman/conditions.hpp"

#include <algorithm>
#include <cmath>

namespace bergman {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double x, double y) {
    if (x == -kInf) return y;
    if (y == -kInf) return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}

void finalize(ConditionProfile& prof, const TrendConfig& cfg) {
    prof.log_sup = -kInf;
    for (double lv : prof.log_values) prof.log_sup = std::max(prof.log_sup, lv);
    prof.sup_estimate = std::exp(prof.log_sup);
    if (prof.log_values.size() >= 30)
        prof.trend = classify_trend(prof.log_values, cfg);
    else if (prof.note.empty())
        prof.trend = {Trend::inconclusive, 0.0, "profile too short for a trend verdict"};
}

ConditionProfile sigma_short_circuit(Criterion c, const WeightPtr& omega, const WeightPtr& nu,
                                     double p, const std::string& reason) {
    ConditionProfile prof;
    prof.criterion = c;
    prof.p = p;
    prof.omega = omega->describe();
    prof.nu = nu->describe();
    prof.sigma_is_weight = false;
    prof.note = "sigma is not a weight: " + reason;
    prof.trend = {Trend::diverging, kInf, prof.note};
    prof.log_sup = kInf;
    prof.sup_estimate = kInf;
    return prof;
}

} // namespace

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::dp: return "Dp";
        case Criterion::ap: return "Ap";
        case Criterion::mp: return "Mp";
    }
    return "?";
}

std::string to_string(Trend t) {
    switch (t) {
        case Trend::bounded: return "bounded";
        case Trend::diverging: return "diverging";
        case Trend::inconclusive: return "inconclusive";
    }
    return "?";
}

TrendConfig condition_trend_config() {
    TrendConfig cfg;
    cfg.ceiling_factor = 3.0;
    return cfg;
}

TrendVerdict classify_trend(const std::vector<double>& log_values, const TrendConfig& cfg) {
    if (log_values.size() < 30)
        throw DomainError("classify_trend: need at least 30 samples");
    const std::size_t n = log_values.size();
    const std::size_t w = std::min<std::size_t>(cfg.window, n);
    const std::size_t lo = n - w;

    bool monotone = true;
    double wmin = kInf, wmax = -kInf;
    for (std::size_t i = lo; i < n; ++i) {
        if (i > lo && !(log_values[i] >= log_values[i - 1])) monotone = false;
        wmin = std::min(wmin, log_values[i]);
        wmax = std::max(wmax, log_values[i]);
    }
    const double slope = (log_values[n - 1] - log_values[lo]) / double(w - 1);
    TrendVerdict v;
    v.slope = slope;
    const bool cleared_ceiling = log_values[n - 1] - log_values[0] >= std::log(cfg.ceiling_factor);
    if (monotone && slope >= cfg.slope_min && cleared_ceiling) {
        v.trend = Trend::diverging;
        v.reason = "monotone growth over the last window clearing the ceiling";
    } else if (wmax - wmin < std::log1p(cfg.bounded_variation)) {
        v.trend = Trend::bounded;
        v.reason = "last-window variation below 1%";
    } else {
        v.trend = Trend::inconclusive;
        v.reason = "neither sustained growth nor a plateau";
    }
    return v;
}

TrendVerdict classify_trend(const ConditionProfile& profile, const TrendConfig& cfg) {
    if (!profile.sigma_is_weight)
        return {Trend::diverging, kInf, profile.note};
    return classify_trend(profile.log_values, cfg);
}

ConditionProfile dp_sequence(const WeightPtr& omega, const WeightPtr& nu, double p, int N,
                             const QuadratureSpec& spec, double step) {
    if (!(p > 1.0 && std::isfinite(p))) throw DomainError("dp_sequence: p must lie in (1,inf)");
    if (N < 0 || !(step > 0.0)) throw DomainError("dp_sequence: bad N or step");
    SigmaWeight sigma = sigma_weight(omega, nu, p);
    if (!sigma.is_weight)
        return sigma_short_circuit(Criterion::dp, omega, nu, p, sigma.reason);

    const double pp = p / (p - 1.0);
    ConditionProfile prof;
    prof.criterion = Criterion::dp;
    prof.p = p;
    prof.omega = omega->describe();
    prof.nu = nu->describe();
    MomentTable mnu(nu, spec), msigma(sigma.weight, spec), momega(omega, spec);
    try {
        for (double n = 0.0; n <= double(N); n += step) {
            const double lv = mnu.log_at(n * p + 1.0) / p + msigma.log_at(n * pp + 1.0) / pp -
                              momega.log_at(2.0 * n + 1.0);
            prof.axis.push_back(n);
            prof.log_values.push_back(lv);
        }
    } catch (const AccuracyError& e) {
        prof.note = std::string("moment evaluation stalled: ") + e.what();
        prof.trend = {Trend::inconclusive, 0.0, prof.note};
    }
    finalize(prof, condition_trend_config());
    return prof;
}

ConditionProfile ap_profile(const WeightPtr& omega, const WeightPtr& nu, double p,
                            const std::vector<double>& radii, const QuadratureSpec& spec) {
    if (!(p > 1.0 && std::isfinite(p))) throw DomainError("ap_profile: p must lie in (1,inf)");
    SigmaWeight sigma = sigma_weight(omega, nu, p);
    if (!sigma.is_weight)
        return sigma_short_circuit(Criterion::ap, omega, nu, p, sigma.reason);

    const double pp = p / (p - 1.0);
    ConditionProfile prof;
    prof.criterion = Criterion::ap;
    prof.p = p;
    prof.omega = omega->describe();
    prof.nu = nu->describe();
    try {
        for (double r : radii) {
            const double lv = log_weighted_tail_integral(*nu, r, spec) / p +
                              log_weighted_tail_integral(*sigma.weight, r, spec) / pp -
                              log_weighted_tail_integral(*omega, r, spec);
            prof.axis.push_back(r);
            prof.log_values.push_back(lv);
        }
    } catch (const AccuracyError& e) {
        prof.note = std::string("tail evaluation stalled: ") + e.what();
        prof.trend = {Trend::inconclusive, 0.0, prof.note};
    }
    finalize(prof, condition_trend_config());
    return prof;
}

ConditionProfile mp_profile(const WeightPtr& omega, const WeightPtr& nu, double p,
                            const std::vector<double>& radii, const QuadratureSpec& spec) {
    if (!(p > 1.0 && std::isfinite(p))) throw DomainError("mp_profile: p must lie in (1,inf)");
    SigmaWeight sigma = sigma_weight(omega, nu, p);
    if (!sigma.is_weight)
        return sigma_short_circuit(Criterion::mp, omega, nu, p, sigma.reason);

    const double pp = p / (p - 1.0);
    ConditionProfile prof;
    prof.criterion = Criterion::mp;
    prof.p = p;
    prof.omega = omega->describe();
    prof.nu = nu->describe();
    // inner(r) = int_0^r nu(s) s / (int_s^1 omega t dt)^p ds, accumulated in log
    // scale piece by piece along the grid
    auto log_inner_integrand = [&](double s) {
        if (s <= 0.0) return -kInf;
        return nu->log_density(s) + std::log(s) -
               p * log_weighted_tail_integral(*omega, s, spec);
    };
    double log_inner = -kInf;
    double prev = 0.0;
    try {
        for (double r : radii) {
            if (r > prev) {
                std::vector<double> seeds;
                for (int i = 0; i <= 8; ++i) seeds.push_back(prev + (r - prev) * i / 8.0);
                LogIntegralResult piece =
                    log_integrate(log_inner_integrand, prev, r, find_log_peak(log_inner_integrand, seeds), spec);
                log_inner = log_add(log_inner, piece.log_value);
                prev = r;
            }
            const double lv = log_add(log_inner, 0.0) / p +
                              log_weighted_tail_integral(*sigma.weight, r, spec) / pp;
            prof.axis.push_back(r);
            prof.log_values.push_back(lv);
        }
    } catch (const AccuracyError& e) {
        prof.note = std::string("inner integral stalled: ") + e.what();
        prof.trend = {Trend::inconclusive, 0.0, prof.note};
    }
    finalize(prof, condition_trend_config());
    return prof;
}

std::vector<double> pair_radii_grid(const WeightPtr& omega, const WeightPtr& nu, double p,
                                    const ClassConfig& cfg) {
    bool exponential = omega->decay_class() == DecayClass::exponential ||
                       nu->decay_class() == DecayClass::exponential;
    SigmaWeight sigma = sigma_weight(omega, nu, p);
    if (sigma.is_weight && sigma.weight->decay_class() == DecayClass::exponential)
        exponential = true;
    ClassConfig grid_cfg = cfg;
    if (exponential) grid_cfg.grid_floor = grid_cfg.grid_floor_exponential;
    return default_radii_grid(*omega, grid_cfg);
}

HolderSlack holder_floor_check(const WeightPtr& omega, const WeightPtr& nu, double p,
                               const std::vector<double>& radii, int N,
                               const QuadratureSpec& spec) {
    SigmaWeight sigma = sigma_weight(omega, nu, p);
    const double pp = p / (p - 1.0);
    HolderSlack out;
    out.ap_slack = kInf;
    if (!sigma.is_weight) {
        // the sigma tail is +inf, so the A_p quotient sits at +inf > 1 trivially
    } else {
        for (double r : radii) {
            const double lv = log_weighted_tail_integral(*nu, r, spec) / p +
                              log_weighted_tail_integral(*sigma.weight, r, spec) / pp -
                              log_weighted_tail_integral(*omega, r, spec);
            out.ap_slack = std::min(out.ap_slack, std::expm1(lv));
        }
    }
    out.dp_slack = kInf;
    MomentTable momega(omega, spec);
    for (int n = 0; n <= N; ++n) {
        const double lv = momega.log_at(n * p + 1.0) / p + momega.log_at(n * pp + 1.0) / pp -
                          momega.log_at(2.0 * n + 1.0);
        out.dp_slack = std::min(out.dp_slack, std::expm1(lv));
    }
    out.worst = std::min(out.ap_slack, out.dp_slack);
    return out;
}

double integration_identity_check(const WeightPtr& omega, const WeightPtr& nu, double p,
                                  const std::vector<double>& t_grid,
                                  const QuadratureSpec& spec) {
    SigmaWeight sigma = sigma_weight(omega, nu, p);
    if (!sigma.is_weight)
        throw DomainError("integration_identity_check: sigma is not a weight for this pair");
    const double pp = p / (p - 1.0);
    const RadialWeight& sg = *sigma.weight;

    double worst = 0.0;
    for (double t : t_grid) {
        // LHS = int_t^1 (omega/h)^{p'} s ds with h = nu^{1/p} (sigma t-tail)^{1/(pp')}
        auto f = [&](double u) {
            if (u < 1e-15) return 0.0;  // 1-u collapses to 1 at double resolution
            const double s = 1.0 - u;
            if (s <= 0.0) return 0.0;
            const double log_h = nu->log_density(s) / p +
                                 log_weighted_tail_integral(sg, s, spec) / (p * pp);
            const double lv = pp * (omega->log_density(s) - log_h) + std::log(s);
            return lv > -745.0 ? std::exp(lv) : 0.0;
        };
        QuadratureSpec inner = spec;
        inner.rel_tol = std::max(spec.rel_tol, 1e-9);
        const double lhs = integrate(f, 0.0, 1.0 - t, inner).value;
        const double rhs = pp * std::exp(log_weighted_tail_integral(sg, t, spec) / pp);
        worst = std::max(worst, std::abs(lhs / rhs - 1.0));
    }
    return worst;
}

TransferReport class_transfer_checks(const WeightPtr& omega, const WeightPtr& nu, double p,
                                     const QuadratureSpec& spec) {
    TransferReport rep;
    const ClassConfig cfg;
    const auto omega_classes = classify_weight(omega, cfg, spec);
    const auto nu_classes = classify_weight(nu, cfg, spec);
    rep.omega_dhat = omega_classes.dhat.verdict;
    rep.nu_dhat = nu_classes.dhat.verdict;
    rep.omega_m = omega_classes.m.verdict;
    rep.nu_m = nu_classes.m.verdict;

    const auto radii = pair_radii_grid(omega, nu, p, cfg);
    const auto dp = dp_sequence(omega, nu, p, 150, spec);
    const auto ap = ap_profile(omega, nu, p, radii, spec);
    rep.dp_trend = dp.trend.trend;
    rep.ap_trend = ap.trend.trend;

    if (rep.omega_dhat == Verdict::likely_member) {
        rep.dp_ap_checked = true;
        rep.dp_ap_agree = dp.trend.trend == ap.trend.trend;
    }
    if (dp.trend.trend == Trend::bounded) {
        rep.dhat_checked = true;
        rep.dhat_agree = rep.omega_dhat == rep.nu_dhat;
        if (rep.nu_m == Verdict::likely_member) {
            rep.m_checked = true;
            rep.m_transfers = rep.omega_m == Verdict::likely_member;
        }
    }
    return rep;
}

} // namespace bergman
