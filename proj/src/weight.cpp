#include "bergman/weight.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bergman {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogNormalMin = -708.0;  // ~ln(DBL_MIN); below it the plain value underflows

double log_add(double x, double y) {
    if (x == -kInf) return y;
    if (y == -kInf) return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}

/// ln(1 - r^2) without cancellation.
double log_one_minus_sq(double r) {
    return std::log1p(-r) + std::log1p(r);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// geometric seed ladder in u = 1-s over (u_min, u_max], plus the endpoint
std::vector<double> geometric_seeds(double u_min, double u_max, int per_decade = 10) {
    std::vector<double> seeds;
    const double step = std::pow(10.0, -1.0 / per_decade);
    for (double u = u_max; u > u_min; u *= step) seeds.push_back(u);
    std::sort(seeds.begin(), seeds.end());
    return seeds;
}

} // namespace

double log_one_minus_pow(double r, double l) {
    if (r <= 0.0) return 0.0;
    return std::log(-std::expm1(l * std::log(r)));
}

double log_radial_integral(const std::function<double(double)>& log_f, double r,
                           const QuadratureSpec& spec) {
    const double u_hi = 1.0 - r;
    const double u_split = std::min(u_hi, 0.5);
    auto log_f_u = [&](double u) { return log_f(1.0 - u); };

    // boundary panel (0, u_split] in u = 1-s with a geometric peak scan
    auto seeds = geometric_seeds(1e-16, u_split);
    const double peak_u = find_log_peak(log_f_u, seeds);
    LogIntegralResult right = log_integrate(log_f_u, 0.0, u_split, peak_u, spec);

    double total = right.log_value;
    if (u_hi > 0.5) {
        // inner panel [r, 1/2] directly in s
        std::vector<double> s_seeds;
        for (int i = 0; i <= 32; ++i) s_seeds.push_back(r + (0.5 - r) * i / 32.0);
        const double peak_s = find_log_peak(log_f, s_seeds);
        LogIntegralResult left = log_integrate(log_f, r, 0.5, peak_s, spec);
        total = log_add(total, left.log_value);
    }
    if (!right.converged && right.rel_error > 1e-4)
        throw AccuracyError("radial integral did not converge", std::exp(total),
                            right.rel_error);
    return total;
}

bool radial_tail_divergent(const std::function<double(double)>& log_f) {
    auto v = [&](int k) { return log_f(1.0 - std::pow(2.0, -k)) - k * std::log(2.0); };
    const double v40 = v(40), v45 = v(45);
    return v45 > 5.0 && v45 > v40 + 0.5;
}

// ---- RadialWeight defaults -------------------------------------------------

double RadialWeight::density(double r) const {
    const double ld = log_density(r);
    return ld == -kInf ? 0.0 : std::exp(ld);
}

double RadialWeight::generic_log_power_tail(double r, double q, const QuadratureSpec& spec) const {
    auto log_f = [&](double s) {
        const double base = log_density(s);
        if (q == 0.0 || base == -kInf) return base;
        return s > 0.0 ? q * std::log(s) + base : -kInf;
    };
    return log_radial_integral(log_f, r, spec);
}

double RadialWeight::blowup_log_power_tail(double r, double q, const QuadratureSpec& spec) const {
    auto f = [&](double u) {
        const double s = 1.0 - u;
        return (q != 0.0 ? std::pow(s, q) : 1.0) * density(s);
    };
    IntegralResult res = integrate(f, 0.0, 1.0 - r, spec);
    if (!res.converged && res.abs_error > 1e-4 * std::abs(res.value))
        throw AccuracyError("tail quadrature did not converge for " + describe(),
                            res.value, res.abs_error);
    return std::log(res.value);
}

double RadialWeight::log_power_tail(double r, double q, const QuadratureSpec& spec) const {
    if (decay_class() == DecayClass::blowup) return blowup_log_power_tail(r, q, spec);
    return generic_log_power_tail(r, q, spec);
}

double RadialWeight::quadrature_log_moment(double x, const QuadratureSpec& spec) const {
    if (decay_class() == DecayClass::blowup) return blowup_log_power_tail(0.0, x, spec);
    return generic_log_power_tail(0.0, x, spec);
}

MomentValue RadialWeight::moment_value(double x, const QuadratureSpec& spec) const {
    MomentValue mv;
    mv.log_value = log_power_tail(0.0, x, spec);
    mv.backend = MomentBackend::quadrature;
    mv.rel_error = spec.rel_tol * 10;
    mv.underflow = mv.log_value < kLogNormalMin;
    mv.value = mv.underflow ? 0.0 : std::exp(mv.log_value);
    return mv;
}

// ---- Standard ---------------------------------------------------------------

namespace {

class StandardWeight final : public RadialWeight {
public:
    explicit StandardWeight(double alpha) : alpha_(alpha) {
        if (!(alpha > -1.0)) throw DomainError("standard weight requires alpha > -1");
    }

    WeightKind kind() const override { return WeightKind::standard; }
    DecayClass decay_class() const override {
        return alpha_ >= 0.0 ? DecayClass::polynomial : DecayClass::blowup;
    }
    std::string describe() const override { return "std:alpha=" + fmt(alpha_); }

    double log_density(double r) const override {
        if (alpha_ == 0.0) return 0.0;
        return std::log1p(alpha_) + alpha_ * log_one_minus_sq(r);
    }

    // ln of (alpha+1)/2 * B((q+1)/2, alpha+1), the Beta-function moment
    double log_moment_closed(double q) const {
        return std::log1p(alpha_) - std::log(2.0) + std::lgamma((q + 1.0) / 2.0)
             + std::lgamma(alpha_ + 1.0) - std::lgamma((q + 1.0) / 2.0 + alpha_ + 1.0);
    }

    double log_power_tail(double r, double q, const QuadratureSpec& spec) const override {
        if (r == 0.0) return log_moment_closed(q);
        if (q == 1.0) return (alpha_ + 1.0) * log_one_minus_sq(r) - std::log(2.0);
        auto f = [&](double u) {
            const double s = 1.0 - u;
            const double core = std::log1p(alpha_) + (alpha_ != 0.0 ? alpha_ * std::log(u * (2.0 - u)) : 0.0);
            return std::exp(core + (q != 0.0 ? q * std::log(s) : 0.0));
        };
        IntegralResult res = integrate(f, 0.0, 1.0 - r, spec);
        if (!res.converged && res.abs_error > 1e-4 * std::abs(res.value))
            throw AccuracyError("standard tail quadrature stalled", res.value, res.abs_error);
        return std::log(res.value);
    }

    MomentValue moment_value(double x, const QuadratureSpec&) const override {
        MomentValue mv;
        mv.log_value = log_moment_closed(x);
        mv.backend = MomentBackend::closed_form;
        mv.rel_error = 5e-15;
        mv.underflow = mv.log_value < kLogNormalMin;
        mv.value = mv.underflow ? 0.0 : std::exp(mv.log_value);
        return mv;
    }

    double alpha() const { return alpha_; }

private:
    double alpha_;
};

// ---- Exponential ------------------------------------------------------------

class ExponentialWeight final : public RadialWeight {
public:
    ExponentialWeight(double a, double b, double l) : a_(a), b_(b), l_(l) {
        if (!(a > 0.0)) throw DomainError("exponential weight requires alpha > 0");
        if (!(b > 0.0 && b <= 1.0)) throw DomainError("exponential weight requires beta in (0,1]");
        if (!(l > 0.0)) throw DomainError("exponential weight requires l > 0");
    }

    WeightKind kind() const override { return WeightKind::exponential; }
    DecayClass decay_class() const override { return DecayClass::exponential; }
    std::string describe() const override {
        return "exp:alpha=" + fmt(a_) + ",beta=" + fmt(b_) + ",l=" + fmt(l_);
    }

    double log_density(double r) const override {
        return -a_ * std::exp(-b_ * log_one_minus_pow(r, l_));
    }

    /// saddle point of x ln s - a (1-s^l)^{-b} in u = 1-s^l
    double saddle_u(double x) const {
        auto h = [&](double u) {
            return std::log(a_ * b_ * l_) + std::log1p(-u) - (b_ + 1.0) * std::log(u) - std::log(x);
        };
        return bisect(h, 1e-300, 1.0 - 1e-16, 300);
    }

    double asymptotic_log_moment(double x) const {
        const double u = saddle_u(x);
        const double ln_s = std::log1p(-u) / l_;
        const double s = std::exp(ln_s);
        const double phi = x * ln_s - a_ * std::pow(u, -b_);
        const double d2 = -x / (s * s)
            - a_ * b_ * l_ * ((l_ - 1.0) * std::exp((l_ - 2.0) * ln_s) * std::pow(u, -b_ - 1.0)
                              + (b_ + 1.0) * l_ * std::exp(2.0 * (l_ - 1.0) * ln_s) * std::pow(u, -b_ - 2.0));
        return phi + 0.5 * std::log(2.0 * M_PI / (-d2));
    }

    /// v = (1-s^l)^{-b} substitution for int_{r0}^1 s^q w ds with r0 >= 1/2;
    /// maps the boundary layer onto an exponential-decay half-line integrand.
    LogIntegralResult v_integral(double r0, double q, const QuadratureSpec& spec) const {
        const double v_lo = std::exp(-b_ * log_one_minus_pow(r0, l_));
        auto psi = [&](double v) {
            const double ln_s = std::log1p(-std::exp(-std::log(v) / b_)) / l_;
            return -a_ * v + (q + 1.0 - l_) * ln_s - (b_ + 1.0) / b_ * std::log(v)
                 - std::log(b_ * l_);
        };
        double peak = v_lo;
        if (q > 0.0) {
            const double u_star = saddle_u(q);
            peak = std::max(peak, std::pow(u_star, -b_));
        }
        const double drift = 0.7 * std::max(0.0, q + 1.0 - l_);
        const double limit = peak + (780.0 + drift) / a_ + peak;
        return log_integrate(psi, v_lo, limit, peak, spec);
    }

    double log_power_tail(double r, double q, const QuadratureSpec& spec) const override {
        if (r >= 0.5) {
            LogIntegralResult res = v_integral(r, q, spec);
            if (!res.converged && res.rel_error > 1e-4)
                throw AccuracyError("exponential tail quadrature stalled",
                                    std::exp(res.log_value), res.rel_error);
            return res.log_value;
        }
        LogIntegralResult right = v_integral(0.5, q, spec);
        // inner panel [r, 1/2] directly in s
        auto log_f = [&](double s) {
            const double base = log_density(s);
            if (q == 0.0) return base;
            return s > 0.0 ? q * std::log(s) + base : -kInf;
        };
        std::vector<double> seeds;
        for (int i = 0; i <= 32; ++i) seeds.push_back(r + (0.5 - r) * i / 32.0);
        LogIntegralResult left = log_integrate(log_f, r, 0.5, find_log_peak(log_f, seeds), spec);
        return log_add(left.log_value, right.log_value);
    }

    MomentValue quadrature_moment(double x, const QuadratureSpec& spec) const {
        MomentValue mv;
        LogIntegralResult right = v_integral(0.5, x, spec);
        auto log_f = [&](double s) {
            return s > 0.0 ? (x != 0.0 ? x * std::log(s) : 0.0) + log_density(s) : -kInf;
        };
        std::vector<double> seeds;
        for (int i = 0; i <= 32; ++i) seeds.push_back(0.5 * i / 32.0);
        LogIntegralResult left = log_integrate(log_f, 0.0, 0.5, find_log_peak(log_f, seeds), spec);
        mv.log_value = log_add(left.log_value, right.log_value);
        mv.backend = MomentBackend::quadrature;
        mv.rel_error = std::max(right.converged ? spec.rel_tol * 10 : right.rel_error,
                                left.converged ? spec.rel_tol * 10 : left.rel_error);
        mv.underflow = mv.log_value < kLogNormalMin;
        mv.value = mv.underflow ? 0.0 : std::exp(mv.log_value);
        return mv;
    }

    MomentValue moment_value(double x, const QuadratureSpec& spec) const override {
        if (x >= 8.0) {
            const double asym = asymptotic_log_moment(x);
            if (asym < kLogNormalMin) return asymptotic_moment(x);
            MomentValue mv = quadrature_moment(x, spec);
            if (mv.rel_error > 1e-4) return asymptotic_moment(x);
            return mv;
        }
        return quadrature_moment(x, spec);
    }

    MomentValue asymptotic_moment(double x) const {
        MomentValue mv;
        mv.log_value = asymptotic_log_moment(x);
        mv.backend = MomentBackend::asymptotic;
        // Laplace leading term; empirical accuracy decays roughly like x^{-1/3}
        mv.rel_error = std::min(0.05, 0.5 * std::pow(x + 1.0, -1.0 / 3.0));
        mv.underflow = mv.log_value < kLogNormalMin;
        mv.value = mv.underflow ? 0.0 : std::exp(mv.log_value);
        return mv;
    }

    double a() const { return a_; }
    double b() const { return b_; }
    double l() const { return l_; }

private:
    double a_, b_, l_;
};

// ---- Rapidly increasing -----------------------------------------------------

// density 1/((1-r^2) L^alpha) with L = ln(e/(1-r^2)); the substitution m = L
// turns every tail into  int_M^inf s(m)^{q-1} m^{-alpha}/2 dm  with
// s(m) = sqrt(1-e^{1-m}), whose heavy tail is integrated analytically.
class RapidlyIncreasingWeight final : public RadialWeight {
public:
    explicit RapidlyIncreasingWeight(double alpha) : alpha_(alpha) {
        if (!(alpha > 1.0)) throw DomainError("rapidly increasing weight requires alpha > 1");
    }

    WeightKind kind() const override { return WeightKind::rapidly_increasing; }
    DecayClass decay_class() const override { return DecayClass::blowup; }
    std::string describe() const override { return "ri:alpha=" + fmt(alpha_); }

    double log_density(double r) const override {
        const double lg = log_one_minus_sq(r);   // ln(1-r^2) <= 0
        return -lg - alpha_ * std::log1p(-lg);
    }

    double log_power_tail(double r, double q, const QuadratureSpec& spec) const override {
        const double log1msq = log_one_minus_sq(r);
        const double M = 1.0 - log1msq;
        if (q == 1.0)
            return (1.0 - alpha_) * std::log(M) - std::log(2.0 * (alpha_ - 1.0));
        // regular s-panel up to 1-s^2 = (1-r^2)/e, then the m-panel m in [M+1, Mc]
        // (where s is bounded away from 0 and 1), then the analytic power tail
        const double s_hi = std::sqrt(-std::expm1(log1msq - 1.0));
        auto fs = [&](double s) {
            return std::exp((q != 0.0 && s > 0.0 ? q * std::log(s) : 0.0) + log_density(s));
        };
        const double s_piece = integrate_or_throw(fs, r, s_hi, spec);
        const double Mc = std::max(M + 1.0, 1.0 + std::log(std::max(q - 1.0, 1.0))) + 55.0;
        auto fm = [&](double m) {
            const double ln_s2 = std::log1p(-std::exp(1.0 - m));
            return std::exp(0.5 * (q - 1.0) * ln_s2) * std::pow(m, -alpha_) * 0.5;
        };
        const double m_piece = integrate_or_throw(fm, M + 1.0, Mc, spec);
        const double analytic = std::pow(Mc, 1.0 - alpha_) / (2.0 * (alpha_ - 1.0));
        return std::log(s_piece + m_piece + analytic);
    }

    double alpha() const { return alpha_; }

private:
    double alpha_;
};

// ---- Tabulated ---------------------------------------------------------------

// Fritsch-Carlson monotone cubic through the samples, constant beyond the last.
class TabulatedWeight final : public RadialWeight {
public:
    TabulatedWeight(std::vector<double> radii, std::vector<double> values)
        : r_(std::move(radii)), f_(std::move(values)) {
        if (r_.size() < 2 || r_.size() != f_.size())
            throw DomainError("tabulated weight needs >= 2 matching samples");
        for (std::size_t i = 0; i < r_.size(); ++i) {
            if (r_[i] < 0.0 || r_[i] >= 1.0) throw DomainError("tabulated radius outside [0,1)");
            if (i > 0 && r_[i] <= r_[i - 1]) throw DomainError("tabulated radii must increase");
            if (f_[i] < 0.0) throw DomainError("tabulated density must be nonnegative");
        }
        build_slopes();
    }

    WeightKind kind() const override { return WeightKind::tabulated; }
    DecayClass decay_class() const override { return DecayClass::generic; }
    std::string describe() const override {
        return "tab:n=" + std::to_string(r_.size()) + ",r0=" + fmt(r_.front()) + ",rn=" +
               fmt(r_.back()) + ",f0=" + fmt(f_.front()) + ",fn=" + fmt(f_.back());
    }
    bool strictly_positive() const override {
        return *std::min_element(f_.begin(), f_.end()) > 0.0;
    }

    double density(double r) const override {
        if (r <= r_.front()) return f_.front();
        if (r >= r_.back()) return f_.back();
        auto it = std::upper_bound(r_.begin(), r_.end(), r);
        const std::size_t i = std::distance(r_.begin(), it) - 1;
        const double h = r_[i + 1] - r_[i];
        const double t = (r - r_[i]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        const double v = h00 * f_[i] + h10 * h * d_[i] + h01 * f_[i + 1] + h11 * h * d_[i + 1];
        return std::max(v, 0.0);
    }

    double log_density(double r) const override {
        const double v = density(r);
        return v > 0.0 ? std::log(v) : -kInf;
    }

    double log_power_tail(double r, double q, const QuadratureSpec& spec) const override {
        double total = 0.0;
        auto f = [&](double s) { return (q != 0.0 ? std::pow(s, q) : 1.0) * density(s); };
        for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
            const double a = std::max(r, r_[i]);
            const double b = r_[i + 1];
            if (a < b) total += integrate_or_throw(f, a, b, spec);
        }
        const double start = std::max(r, r_.back());
        // constant extension: f_last * int_start^1 s^q ds
        total += f_.back() * (1.0 - std::pow(start, q + 1.0)) / (q + 1.0);
        return std::log(total);
    }

private:
    void build_slopes() {
        const std::size_t n = r_.size();
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = r_[i + 1] - r_[i];
            delta[i] = (f_[i + 1] - f_[i]) / h[i];
        }
        d_.assign(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2 * h[i] + h[i - 1];
                const double w2 = h[i] + 2 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        auto edge = [](double h0, double h1, double d0, double d1) {
            double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (d * d0 <= 0) return 0.0;
            if (d0 * d1 <= 0 && std::abs(d) > 3 * std::abs(d0)) return 3 * d0;
            return d;
        };
        d_[0] = edge(h[0], h[n > 2 ? 1 : 0], delta[0], delta[n > 2 ? 1 : 0]);
        d_[n - 1] = edge(h[n - 2], h[n > 2 ? n - 3 : n - 2], delta[n - 2],
                         delta[n > 2 ? n - 3 : n - 2]);
    }

    std::vector<double> r_, f_;
    std::vector<double> d_;
};

// ---- Scaled ------------------------------------------------------------------

class ScaledWeight final : public RadialWeight {
public:
    ScaledWeight(double factor, WeightPtr base) : c_(factor), base_(std::move(base)) {
        if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
        if (!base_) throw DomainError("scaled weight needs a base");
    }

    WeightKind kind() const override { return WeightKind::scaled; }
    DecayClass decay_class() const override { return base_->decay_class(); }
    std::string describe() const override {
        return "scale(" + fmt(c_) + ")*" + base_->describe();
    }
    bool strictly_positive() const override { return base_->strictly_positive(); }

    double log_density(double r) const override { return std::log(c_) + base_->log_density(r); }

    double log_power_tail(double r, double q, const QuadratureSpec& spec) const override {
        return std::log(c_) + base_->log_power_tail(r, q, spec);
    }

    MomentValue moment_value(double x, const QuadratureSpec& spec) const override {
        MomentValue mv = base_->moment_value(x, spec);
        mv.log_value += std::log(c_);
        mv.underflow = mv.log_value < kLogNormalMin;
        mv.value = mv.underflow ? 0.0 : std::exp(mv.log_value);
        return mv;
    }

    double factor() const { return c_; }
    const WeightPtr& base() const { return base_; }

private:
    double c_;
    WeightPtr base_;
};

// ---- Power product (sigma composites) ----------------------------------------

class PowerProductWeight final : public RadialWeight {
public:
    PowerProductWeight(WeightPtr a, double ea, WeightPtr b, double eb)
        : a_(std::move(a)), ea_(ea), b_(std::move(b)), eb_(eb) {
        if (!a_ || !b_) throw DomainError("power product needs two weights");
        probe();
    }

    WeightKind kind() const override { return WeightKind::power_product; }
    DecayClass decay_class() const override { return decay_; }
    std::string describe() const override {
        return "(" + a_->describe() + ")^" + fmt(ea_) + "*(" + b_->describe() + ")^" + fmt(eb_);
    }

    double log_density(double r) const override {
        return ea_ * a_->log_density(r) + eb_ * b_->log_density(r);
    }

    bool integrable() const override { return integrable_; }

private:
    // tail-growth probe at 1-r = 2^-k: flags densities with density*(1-r)
    // unbounded (divergent tail) and classifies the decay
    void probe() {
        auto g = [&](int k) { return log_density(1.0 - std::pow(2.0, -k)); };
        const double g10 = g(10), g40 = g(40), g45 = g(45);
        const double v45 = g45 - 45 * std::log(2.0);
        const double v40 = g40 - 40 * std::log(2.0);
        integrable_ = !(v45 > 5.0 && v45 > v40 + 0.5);
        if (g45 < -500.0)
            decay_ = DecayClass::exponential;
        else if (g45 > g10 + 5.0)
            decay_ = DecayClass::blowup;
        else
            decay_ = DecayClass::polynomial;
    }

    WeightPtr a_;
    double ea_;
    WeightPtr b_;
    double eb_;
    DecayClass decay_ = DecayClass::generic;
    bool integrable_ = true;
};

// ---- Custom ------------------------------------------------------------------

class CustomWeight final : public RadialWeight {
public:
    CustomWeight(std::function<double(double)> log_density, DecayClass dc, std::string desc)
        : fn_(std::move(log_density)), decay_(dc), desc_(std::move(desc)) {}

    WeightKind kind() const override { return WeightKind::custom; }
    DecayClass decay_class() const override { return decay_; }
    std::string describe() const override { return desc_; }
    double log_density(double r) const override { return fn_(r); }

private:
    std::function<double(double)> fn_;
    DecayClass decay_;
    std::string desc_;
};

// ---- form extraction for sigma simplification --------------------------------

struct StdForm { double log_coeff; double alpha; };   // exp(log_coeff)*(1-r^2)^alpha
struct ExpForm { double log_coeff; double a, b, l; }; // exp(log_coeff)*exp(-a/(1-r^l)^b)

std::optional<StdForm> std_form(const WeightPtr& w) {
    if (auto* s = dynamic_cast<const StandardWeight*>(w.get()))
        return StdForm{std::log1p(s->alpha()), s->alpha()};
    if (auto* sc = dynamic_cast<const ScaledWeight*>(w.get())) {
        if (auto inner = std_form(sc->base()))
            return StdForm{inner->log_coeff + std::log(sc->factor()), inner->alpha};
    }
    return std::nullopt;
}

std::optional<ExpForm> exp_form(const WeightPtr& w) {
    if (auto* e = dynamic_cast<const ExponentialWeight*>(w.get()))
        return ExpForm{0.0, e->a(), e->b(), e->l()};
    if (auto* sc = dynamic_cast<const ScaledWeight*>(w.get())) {
        if (auto inner = exp_form(sc->base()))
            return ExpForm{inner->log_coeff + std::log(sc->factor()), inner->a, inner->b, inner->l};
    }
    return std::nullopt;
}

} // namespace

// ---- factories ----------------------------------------------------------------

WeightPtr make_standard(double alpha) { return std::make_shared<StandardWeight>(alpha); }

WeightPtr make_exponential(double alpha, double beta, double l) {
    return std::make_shared<ExponentialWeight>(alpha, beta, l);
}

WeightPtr make_rapidly_increasing(double alpha) {
    return std::make_shared<RapidlyIncreasingWeight>(alpha);
}

WeightPtr make_tabulated(std::vector<double> radii, std::vector<double> values) {
    return std::make_shared<TabulatedWeight>(std::move(radii), std::move(values));
}

WeightPtr make_scaled(double factor, WeightPtr base) {
    return std::make_shared<ScaledWeight>(factor, std::move(base));
}

WeightPtr make_power_product(WeightPtr a, double ea, WeightPtr b, double eb) {
    return std::make_shared<PowerProductWeight>(std::move(a), ea, std::move(b), eb);
}

WeightPtr make_custom(std::function<double(double)> log_density, DecayClass dc,
                      std::string description) {
    return std::make_shared<CustomWeight>(std::move(log_density), dc, std::move(description));
}

// ---- operations -----------------------------------------------------------------

double evaluate(const RadialWeight& w, double r) {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("evaluate: radius must lie in [0,1)");
    return w.density(r);
}

double log_tail_integral(const RadialWeight& w, double r, const QuadratureSpec& spec) {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("tail_integral: radius must lie in [0,1)");
    return w.log_power_tail(r, 0.0, spec);
}

double tail_integral(const RadialWeight& w, double r, const QuadratureSpec& spec) {
    return std::exp(log_tail_integral(w, r, spec));
}

double log_weighted_tail_integral(const RadialWeight& w, double r, const QuadratureSpec& spec) {
    if (!(r >= 0.0 && r < 1.0))
        throw DomainError("weighted_tail_integral: radius must lie in [0,1)");
    return w.log_power_tail(r, 1.0, spec);
}

double weighted_tail_integral(const RadialWeight& w, double r, const QuadratureSpec& spec) {
    return std::exp(log_weighted_tail_integral(w, r, spec));
}

MomentValue moment(const RadialWeight& w, double x, const QuadratureSpec& spec) {
    if (!(x >= 0.0)) throw DomainError("moment: exponent must be >= 0");
    return w.moment_value(x, spec);
}

double log_moment(const RadialWeight& w, double x, const QuadratureSpec& spec) {
    return moment(w, x, spec).log_value;
}

MomentValue moment_with_backend(const RadialWeight& w, double x, MomentBackend backend,
                                const QuadratureSpec& spec) {
    if (!(x >= 0.0)) throw DomainError("moment: exponent must be >= 0");
    switch (backend) {
        case MomentBackend::closed_form: {
            auto* s = dynamic_cast<const StandardWeight*>(&w);
            if (!s) throw DomainError("closed-form moments only available for standard weights");
            return s->moment_value(x, spec);
        }
        case MomentBackend::asymptotic: {
            auto* e = dynamic_cast<const ExponentialWeight*>(&w);
            if (!e) throw DomainError("asymptotic moments only available for exponential weights");
            return e->asymptotic_moment(x);
        }
        case MomentBackend::quadrature: {
            if (auto* e = dynamic_cast<const ExponentialWeight*>(&w))
                return e->quadrature_moment(x, spec);
            MomentValue mv;
            mv.log_value = w.kind() == WeightKind::standard
                               ? w.quadrature_log_moment(x, spec)
                               : w.log_power_tail(0.0, x, spec);
            mv.backend = MomentBackend::quadrature;
            mv.rel_error = spec.rel_tol * 10;
            mv.underflow = mv.log_value < kLogNormalMin;
            mv.value = mv.underflow ? 0.0 : std::exp(mv.log_value);
            return mv;
        }
    }
    throw DomainError("unknown moment backend");
}

SigmaWeight sigma_weight(const WeightPtr& omega, const WeightPtr& nu, double p) {
    if (!omega || !nu) throw DomainError("sigma_weight: null weight");
    if (!(p > 1.0 && std::isfinite(p))) throw DomainError("sigma_weight: p must lie in (1,inf)");
    if (!nu->strictly_positive())
        throw DomainError("sigma_weight: nu must be strictly positive on [0,1)");
    const double pp = p / (p - 1.0);

    if (omega->describe() == nu->describe()) return {omega, true, ""};

    if (auto so = std_form(omega)) {
        if (auto sn = std_form(nu)) {
            const double gamma = pp * so->alpha - (pp / p) * sn->alpha;
            const double log_coeff = pp * so->log_coeff - (pp / p) * sn->log_coeff;
            if (gamma <= -1.0)
                return {nullptr, false,
                        "sigma ~ (1-r^2)^" + fmt(gamma) + " has divergent tail integral"};
            const double scale = std::exp(log_coeff) / (gamma + 1.0);
            WeightPtr base = make_standard(gamma);
            return {scale == 1.0 ? base : make_scaled(scale, base), true, ""};
        }
    }
    if (auto eo = exp_form(omega)) {
        if (auto en = exp_form(nu)) {
            if (eo->b == en->b && eo->l == en->l) {
                const double c = pp * eo->a - (pp / p) * en->a;
                const double log_coeff = pp * eo->log_coeff - (pp / p) * en->log_coeff;
                if (c < 0.0)
                    return {nullptr, false, "sigma grows like exp(+" + fmt(-c) +
                                                "/(1-r^l)^beta); not a weight"};
                WeightPtr base = c == 0.0 ? make_standard(0.0)
                                          : make_exponential(c, eo->b, eo->l);
                return {log_coeff == 0.0 ? base : make_scaled(std::exp(log_coeff), base), true, ""};
            }
        }
    }
    WeightPtr generic = make_power_product(omega, pp, nu, -pp / p);
    if (!generic->integrable())
        return {nullptr, false, "tail-growth probe: sigma density * (1-r) diverges"};
    return {generic, true, ""};
}

// ---- MomentTable ----------------------------------------------------------------

MomentTable::MomentTable(WeightPtr w, QuadratureSpec spec) : w_(std::move(w)), spec_(spec) {
    if (!w_) throw DomainError("MomentTable: null weight");
}

MomentValue MomentTable::at(double x) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(x);
        if (it != cache_.end()) return it->second;
    }
    MomentValue mv = moment(*w_, x, spec_);
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(x, mv).first->second;
}

double MomentTable::log_at(double x) const { return at(x).log_value; }

std::size_t MomentTable::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.size();
}

// ---- mini-language ---------------------------------------------------------------

namespace {

double parse_number(const std::string& tok) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed number '" + tok + "' in weight spec");
    }
    if (pos != tok.size())
        throw std::invalid_argument("malformed number '" + tok + "' in weight spec");
    return v;
}

std::unordered_map<std::string, double> parse_kv(const std::string& body,
                                                 const std::vector<std::string>& allowed) {
    std::unordered_map<std::string, double> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::invalid_argument("unknown key '" + key + "' in weight spec");
        out[key] = parse_number(item.substr(eq + 1));
    }
    for (const auto& k : allowed)
        if (!out.count(k))
            throw std::invalid_argument("missing key '" + k + "' in weight spec");
    return out;
}

} // namespace

WeightPtr parse_weight_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("weight spec '" + text + "' lacks a kind prefix");
    const std::string kind = text.substr(0, colon);
    const std::string body = text.substr(colon + 1);
    if (kind == "std") {
        auto kv = parse_kv(body, {"alpha"});
        return make_standard(kv["alpha"]);
    }
    if (kind == "exp") {
        auto kv = parse_kv(body, {"alpha", "beta", "l"});
        return make_exponential(kv["alpha"], kv["beta"], kv["l"]);
    }
    if (kind == "ri") {
        auto kv = parse_kv(body, {"alpha"});
        return make_rapidly_increasing(kv["alpha"]);
    }
    if (kind == "tab") {
        std::ifstream in(body);
        if (!in) throw std::invalid_argument("cannot open tabulated weight file '" + body + "'");
        std::vector<double> radii, values;
        std::string line;
        while (std::getline(in, line)) {
            const auto h = line.find('#');
            if (h != std::string::npos) line = line.substr(0, h);
            std::stringstream ls(line);
            double r, v;
            if (ls >> r >> v) {
                radii.push_back(r);
                values.push_back(v);
            }
        }
        return make_tabulated(std::move(radii), std::move(values));
    }
    throw std::invalid_argument("unknown weight kind '" + kind + "'");
}

} // namespace bergman
