#include "bergman/weight_classes.hpp"

#include <algorithm>
#include <cmath>

namespace bergman {

std::string to_string(WeightClass c) {
    switch (c) {
        case WeightClass::dhat: return "Dhat";
        case WeightClass::dcheck: return "Dcheck";
        case WeightClass::mclass: return "M";
        case WeightClass::d: return "D";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::likely_member: return "likely_member";
        case Verdict::likely_nonmember: return "likely_nonmember";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

bool exponential_decay(const RadialWeight& w) {
    return w.decay_class() == DecayClass::exponential;
}

/// index of the first grid entry within the last decade of the scale variable
std::size_t last_decade_start(const std::vector<double>& scale) {
    const double top = scale.back();
    std::size_t i = scale.size();
    while (i > 0 && scale[i - 1] > top / 10.0) --i;
    return i;
}

struct DecadeStats {
    double inf_excess_last = 0.0;   // inf over last decade of ratio-1
    double inf_excess_prev = 0.0;   // ... over the decade before
    double first = 0.0, last = 0.0; // ratio at the window edges (last decade)
    bool monotone_growth = true;
};

/// scale must be increasing (decades are taken in it); ratios parallel
DecadeStats decade_stats(const std::vector<double>& scale, const std::vector<double>& ratios) {
    DecadeStats st;
    const std::size_t lo = last_decade_start(scale);
    std::vector<double> prev_scale(scale.begin(), scale.begin() + lo);
    const std::size_t lo2 = prev_scale.empty() ? 0 : last_decade_start(prev_scale);
    auto inf_over = [&](std::size_t a, std::size_t b) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = a; i < b; ++i) m = std::min(m, ratios[i] - 1.0);
        return m;
    };
    st.inf_excess_last = inf_over(lo, scale.size());
    st.inf_excess_prev = lo > 0 ? inf_over(lo2, lo) : st.inf_excess_last;
    st.first = ratios[lo];
    st.last = ratios.back();
    for (std::size_t i = lo; i + 1 < ratios.size(); ++i)
        if (ratios[i + 1] < ratios[i]) st.monotone_growth = false;
    return st;
}

/// plateau-vs-growth rule shared by the two Dhat-style diagnostics
Verdict dhat_style_verdict(const DecadeStats& st, const ClassConfig& cfg) {
    if (st.monotone_growth && st.last >= cfg.growth_factor * st.first)
        return Verdict::likely_nonmember;
    if (std::abs(st.last / st.first - 1.0) < cfg.plateau_slope)
        return Verdict::likely_member;
    return Verdict::inconclusive;
}

/// inf-excess rule shared by Dcheck and M: membership needs a uniform excess
/// over the last decade that is not draining away decade over decade
bool dcheck_style_member(const DecadeStats& st, const ClassConfig& cfg) {
    if (st.inf_excess_last < cfg.excess_delta) return false;
    if (st.inf_excess_prev > 0.0 &&
        st.inf_excess_last < cfg.excess_decay_keep * st.inf_excess_prev)
        return false;
    return true;
}

bool dcheck_style_draining(const DecadeStats& st, const ClassConfig& cfg) {
    // excess positive but shrinking toward 0, or simply below the bar and shrinking
    return st.inf_excess_prev > 0.0 &&
           st.inf_excess_last < cfg.excess_decay_keep * st.inf_excess_prev;
}

} // namespace

std::vector<double> default_radii_grid(const RadialWeight& w, const ClassConfig& cfg) {
    const double floor = exponential_decay(w) ? cfg.grid_floor_exponential : cfg.grid_floor;
    std::vector<double> radii;
    const double step = std::pow(10.0, -1.0 / cfg.points_per_decade);
    for (double u = cfg.grid_outer;; u *= step) {
        radii.push_back(1.0 - u);
        if (u <= floor) break;  // one point at or just below the floor
    }
    return radii;
}

std::vector<double> default_exponent_grid(const ClassConfig& cfg) {
    std::vector<double> xs;
    const double step = std::pow(10.0, 1.0 / cfg.points_per_decade);
    for (double x = cfg.x_min; x <= cfg.x_max * 1.001; x *= step) xs.push_back(x);
    return xs;
}

ClassMembershipReport dhat_profile(const WeightPtr& w, const std::vector<double>& radii,
                                   const ClassConfig& cfg, const QuadratureSpec& spec) {
    if (radii.size() < 3 || !std::is_sorted(radii.begin(), radii.end()))
        throw DomainError("dhat_profile: need an increasing radii grid");
    if (radii.back() < 0.999) throw DomainError("dhat_profile: grid must reach r >= 0.999");
    ClassMembershipReport rep;
    rep.class_name = WeightClass::dhat;
    rep.weight = w->describe();
    std::vector<double> scale;
    for (double r : radii) {
        const double ratio =
            std::exp(log_tail_integral(*w, r, spec) - log_tail_integral(*w, (1.0 + r) / 2.0, spec));
        rep.grid.push_back(r);
        rep.ratios.push_back(ratio);
        scale.push_back(1.0 / (1.0 - r));
    }
    const DecadeStats st = decade_stats(scale, rep.ratios);
    rep.verdict = dhat_style_verdict(st, cfg);
    rep.c_hat = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    return rep;
}

namespace {

ClassMembershipReport lower_class_profile(
    WeightClass cls, const WeightPtr& w, double K0, const std::vector<double>& grid,
    const ClassConfig& cfg, const std::function<double(double, double)>& log_ratio,
    bool grid_is_radii) {
    if (!(K0 > 1.0)) throw DomainError("profile requires K > 1");
    ClassMembershipReport rep;
    rep.class_name = cls;
    rep.weight = w->describe();

    std::vector<double> ladder{K0};
    for (double k : cfg.k_ladder)
        if (k != K0) ladder.push_back(k);

    std::vector<double> scale;
    scale.reserve(grid.size());
    for (double g : grid) scale.push_back(grid_is_radii ? 1.0 / (1.0 - g) : g);

    bool all_draining = true;
    for (double K : ladder) {
        std::vector<double> ratios;
        ratios.reserve(grid.size());
        for (double g : grid) ratios.push_back(std::exp(log_ratio(g, K)));
        const DecadeStats st = decade_stats(scale, ratios);
        if (rep.ratios.empty() || K == K0) {
            rep.grid = grid;
            rep.ratios = ratios;
        }
        if (dcheck_style_member(st, cfg)) {
            rep.verdict = Verdict::likely_member;
            rep.k_used = K;
            rep.c_hat = 1.0 + st.inf_excess_last;
            rep.grid = grid;
            rep.ratios = ratios;
            return rep;
        }
        if (!dcheck_style_draining(st, cfg)) all_draining = false;
    }
    rep.k_used = ladder.back();
    rep.verdict = all_draining ? Verdict::likely_nonmember : Verdict::inconclusive;
    if (rep.verdict == Verdict::likely_nonmember)
        rep.note = "excess ratio drains toward 1 for every K in the ladder";
    return rep;
}

} // namespace

ClassMembershipReport dcheck_profile(const WeightPtr& w, double K,
                                     const std::vector<double>& radii, const ClassConfig& cfg,
                                     const QuadratureSpec& spec) {
    auto log_ratio = [&](double r, double k) {
        return log_tail_integral(*w, r, spec) -
               log_tail_integral(*w, 1.0 - (1.0 - r) / k, spec);
    };
    auto rep = lower_class_profile(WeightClass::dcheck, w, K, radii, cfg, log_ratio, true);
    // weighted-tail power fit over the last decade: int_r^1 w s ds ~ (1-r)^alpha
    const std::size_t lo = last_decade_start([&] {
        std::vector<double> s;
        for (double r : radii) s.push_back(1.0 / (1.0 - r));
        return s;
    }());
    const double r1 = radii[lo], r2 = radii.back();
    rep.tail_power = (log_weighted_tail_integral(*w, r1, spec) -
                      log_weighted_tail_integral(*w, r2, spec)) /
                     (std::log1p(-r1) - std::log1p(-r2));
    return rep;
}

ClassMembershipReport m_profile(const WeightPtr& w, double K, const std::vector<double>& xs,
                                const ClassConfig& cfg, const QuadratureSpec& spec) {
    if (!std::is_sorted(xs.begin(), xs.end()) || xs.size() < 3)
        throw DomainError("m_profile: need an increasing exponent grid");
    MomentTable table(w, spec);
    auto log_ratio = [&](double x, double k) { return table.log_at(x) - table.log_at(k * x); };
    auto rep = lower_class_profile(WeightClass::mclass, w, K, xs, cfg, log_ratio, false);
    // growth-fit exponent eta: w_x >= C (y/x)^eta w_y with y = Kx
    const double k_for_eta = rep.k_used > 1.0 ? rep.k_used : K;
    std::vector<double> etas;
    const std::size_t lo = last_decade_start(xs);
    for (std::size_t i = lo; i < xs.size(); ++i)
        etas.push_back(log_ratio(xs[i], k_for_eta) / std::log(k_for_eta));
    std::nth_element(etas.begin(), etas.begin() + etas.size() / 2, etas.end());
    rep.eta = etas[etas.size() / 2];
    return rep;
}

ClassMembershipReport moment_doubling_profile(const WeightPtr& w, double q,
                                              const std::vector<double>& xs,
                                              const ClassConfig& cfg,
                                              const QuadratureSpec& spec) {
    if (!(q > 1.0)) throw DomainError("moment_doubling_profile requires q > 1");
    if (!std::is_sorted(xs.begin(), xs.end()) || xs.size() < 3)
        throw DomainError("moment_doubling_profile: need an increasing exponent grid");
    ClassMembershipReport rep;
    rep.class_name = WeightClass::dhat;
    rep.weight = w->describe();
    rep.note = "moment characterization (w_x <= C w_{qx})";
    MomentTable table(w, spec);
    for (double x : xs) {
        rep.grid.push_back(x);
        rep.ratios.push_back(std::exp(table.log_at(x) - table.log_at(q * x)));
    }
    const DecadeStats st = decade_stats(xs, rep.ratios);
    rep.verdict = dhat_style_verdict(st, cfg);
    rep.c_hat = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    return rep;
}

FullClassReport classify_weight(const WeightPtr& w, const ClassConfig& cfg,
                                const QuadratureSpec& spec) {
    FullClassReport full;
    const auto radii = default_radii_grid(*w, cfg);
    const auto xs = default_exponent_grid(cfg);
    full.dhat = dhat_profile(w, radii, cfg, spec);
    full.dcheck = dcheck_profile(w, 2.0, radii, cfg, spec);
    full.m = m_profile(w, 2.0, xs, cfg, spec);
    full.moment_doubling = moment_doubling_profile(w, 2.0, xs, cfg, spec);
    full.dhat_tests_agree = full.dhat.verdict == full.moment_doubling.verdict;
    if (full.dhat.verdict == Verdict::likely_member &&
        full.dcheck.verdict == Verdict::likely_member)
        full.d = Verdict::likely_member;
    else if (full.dhat.verdict == Verdict::likely_nonmember ||
             full.dcheck.verdict == Verdict::likely_nonmember)
        full.d = Verdict::likely_nonmember;
    else
        full.d = Verdict::inconclusive;
    return full;
}

} // namespace bergman
