#include "bergman/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace bergman {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

KernelSeries::KernelSeries(WeightPtr w, QuadratureSpec spec, int max_terms)
    : w_(std::move(w)), spec_(spec), max_terms_(max_terms) {
    if (!w_) throw DomainError("KernelSeries: null weight");
}

double KernelSeries::log_coefficient(std::size_t n) const {
    std::lock_guard<std::mutex> lock(mu_);
    while (log_c_.size() <= n) {
        const double x = 2.0 * double(log_c_.size()) + 1.0;
        log_c_.push_back(-std::log(2.0) - w_->moment_value(x, spec_).log_value);
    }
    return log_c_[n];
}

namespace {

void check_arguments(Complex z, Complex zeta) {
    if (!(std::abs(z) < 1.0) || !(std::abs(zeta) < 1.0))
        throw DomainError("kernel arguments must lie in the open unit disc");
    if (std::abs(z) * std::abs(zeta) > 0.99)
        throw DomainError("kernel evaluation capped at |z||zeta| <= 0.99");
}

} // namespace

KernelValue kernel_eval(const KernelSeries& series, Complex z, Complex zeta, double tol) {
    check_arguments(z, zeta);
    const Complex w = std::conj(z) * zeta;
    const double rho = std::abs(w);
    KernelValue out;
    if (rho == 0.0) {
        out.value = std::exp(series.log_coefficient(0));
        out.terms = 1;
        return out;
    }
    const double log_rho = std::log(rho);
    const Complex rot = w / rho;
    Complex phase{1.0, 0.0};
    Complex sum{0.0, 0.0};
    double log_c_next = series.log_coefficient(0);
    for (int n = 0; n < series.max_terms(); ++n) {
        const double log_c = log_c_next;
        const double mag = std::exp(log_c + n * log_rho);
        sum += mag * phase;
        phase *= rot;
        log_c_next = series.log_coefficient(n + 1);
        // geometric majorant from the last coefficient ratio
        const double growth = std::exp(log_c_next - log_c);
        if (growth * rho < 1.0) {
            const double tail = std::exp(log_c_next + (n + 1) * log_rho) / (1.0 - growth * rho);
            if (tail <= tol) {
                out.value = sum;
                out.error_bound = tail;
                out.terms = n + 1;
                return out;
            }
        }
    }
    throw AccuracyError("kernel series budget exhausted before tolerance",
                        std::abs(sum), kInf);
}

KernelValue kernel_eval(const WeightPtr& w, Complex z, Complex zeta, double tol,
                        const QuadratureSpec& spec) {
    KernelSeries series(w, spec);
    return kernel_eval(series, z, zeta, tol);
}

KernelValue kernel_derivative_eval(const KernelSeries& series, Complex zeta, Complex z, int k,
                                   double tol) {
    if (k < 0 || k > 8) throw DomainError("kernel derivative order must lie in [0, 8]");
    if (k == 0) return kernel_eval(series, zeta, z, tol);
    check_arguments(z, zeta);
    KernelValue out;
    const double rho_zeta = std::abs(zeta);
    if (rho_zeta == 0.0) {
        out.terms = 0;
        return out;  // every term carries zeta^n with n >= k >= 1
    }
    const double rho_z = std::abs(z);
    const Complex rot_zeta = std::conj(zeta) / rho_zeta;

    if (rho_z == 0.0) {
        // only the n = k term survives
        double log_fact = 0.0;
        for (int j = 1; j <= k; ++j) log_fact += std::log(double(j));
        const double mag = std::exp(series.log_coefficient(k) + log_fact + k * std::log(rho_zeta));
        out.value = mag * std::pow(rot_zeta, k);
        out.terms = 1;
        return out;
    }

    const double log_rz = std::log(rho_z);
    const double log_rzeta = std::log(rho_zeta);
    const Complex rot = rot_zeta * (z / rho_z);
    Complex phase = std::pow(rot_zeta, k);  // n = k: conj(zeta)^k z^0
    Complex sum{0.0, 0.0};
    auto log_term_mag = [&](int n) {
        double lf = 0.0;
        for (int j = 0; j < k; ++j) lf += std::log(double(n - j));
        return series.log_coefficient(n) + lf + n * log_rzeta + (n - k) * log_rz;
    };
    for (int n = k; n < series.max_terms(); ++n) {
        sum += std::exp(log_term_mag(n)) * phase;
        phase *= rot;
        const double log_next = log_term_mag(n + 1);
        const double q = std::exp(log_term_mag(n + 2) - log_next);
        if (q < 1.0) {
            const double tail = std::exp(log_next) / (1.0 - q);
            if (tail <= tol) {
                out.value = sum;
                out.error_bound = tail;
                out.terms = n - k + 1;
                return out;
            }
        }
    }
    throw AccuracyError("kernel derivative series budget exhausted before tolerance",
                        std::abs(sum), kInf);
}

KernelValue kernel_derivative_eval(const WeightPtr& w, Complex zeta, Complex z, int k, double tol,
                                   const QuadratureSpec& spec) {
    KernelSeries series(w, spec);
    return kernel_derivative_eval(series, zeta, z, k, tol);
}

double integral_mean_M1(const std::function<Complex(Complex)>& f, double r, double tol) {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("integral_mean_M1: radius must lie in [0,1)");
    double prev = -1.0;
    for (int m = 16; m <= (1 << 20); m *= 2) {
        double sum = 0.0;
        for (int i = 0; i < m; ++i) {
            const double theta = 2.0 * M_PI * i / m;
            sum += std::abs(f(Complex(r * std::cos(theta), r * std::sin(theta))));
        }
        sum /= m;
        if (prev >= 0.0 && std::abs(sum - prev) <= tol * std::max(std::abs(sum), 1e-30))
            return sum;
        prev = sum;
    }
    throw AccuracyError("integral mean did not stabilize", prev, kInf);
}

double kernel_mean_estimate(const RadialWeight& w, double z_abs, int k,
                            const QuadratureSpec& spec) {
    if (!(z_abs >= 0.0 && z_abs < 1.0))
        throw DomainError("kernel_mean_estimate: |z| must lie in [0,1)");
    if (z_abs == 0.0) return 1.0;
    auto f = [&](double t) {
        return std::exp(-(k + 1) * std::log1p(-t) - log_weighted_tail_integral(w, t, spec));
    };
    return integrate_or_throw(f, 0.0, z_abs, spec) + 1.0;
}

} // namespace bergman
