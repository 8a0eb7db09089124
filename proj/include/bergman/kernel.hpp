#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <mutex>

#include "bergman/weight.hpp"

namespace bergman {

using Complex = std::complex<double>;

struct KernelValue {
    Complex value{0.0, 0.0};
    double error_bound = 0.0;  ///< certified bound on the dropped tail
    int terms = 0;             ///< number of series terms summed
};

/// The reproducing-kernel series of a radial weight: coefficients
/// c_n = 1/(2 w_{2n+1}), cached in log scale. Evaluation is re-entrant; the
/// coefficient cache is synchronized.
class KernelSeries {
public:
    explicit KernelSeries(WeightPtr w, QuadratureSpec spec = {}, int max_terms = 400000);

    /// ln c_n
    double log_coefficient(std::size_t n) const;
    const RadialWeight& weight() const { return *w_; }
    const WeightPtr& weight_ptr() const { return w_; }
    int max_terms() const { return max_terms_; }

private:
    WeightPtr w_;
    QuadratureSpec spec_;
    int max_terms_;
    mutable std::mutex mu_;
    mutable std::vector<double> log_c_;
};

/// B^w_z(zeta) = sum (conj(z) zeta)^n c_n with a certified truncation bound.
/// Pre: |z| < 1, |zeta| < 1 and |z||zeta| <= 0.99. Throws AccuracyError when
/// the term budget runs out before the tail bound reaches tol.
KernelValue kernel_eval(const KernelSeries& series, Complex z, Complex zeta, double tol = 1e-10);
KernelValue kernel_eval(const WeightPtr& w, Complex z, Complex zeta, double tol = 1e-10,
                        const QuadratureSpec& spec = {});

/// (B^w_zeta)^{(k)}(z) = sum_{n>=k} n!/(n-k)! c_n conj(zeta)^n z^{n-k};
/// k = 0 reduces to kernel_eval with swapped roles. Pre: k <= 8.
KernelValue kernel_derivative_eval(const KernelSeries& series, Complex zeta, Complex z, int k,
                                   double tol = 1e-10);
KernelValue kernel_derivative_eval(const WeightPtr& w, Complex zeta, Complex z, int k,
                                   double tol = 1e-10, const QuadratureSpec& spec = {});

/// M_1(r, f) = (1/2pi) int |f(r e^{i theta})| d theta by the periodic
/// trapezoid rule with doubling refinement (spectrally accurate).
double integral_mean_M1(const std::function<Complex(Complex)>& f, double r, double tol = 1e-8);

/// E(w, |z|, k) = int_0^{|z|} dt / ((1-t)^{k+1} int_t^1 w(s) s ds) + 1,
/// the comparability bound for the integral means of the kernel derivative.
double kernel_mean_estimate(const RadialWeight& w, double z_abs, int k,
                            const QuadratureSpec& spec = {});

} // namespace bergman
