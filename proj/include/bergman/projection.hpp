#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "bergman/kernel.hpp"
#include "bergman/weight.hpp"

namespace bergman {

/// Complex-valued samples on a polar grid of the disc: geometric radial panels
/// toward the boundary with Gauss nodes, uniform angles per ring, quadrature
/// weights consistent with the normalized area measure (disc of radius R has
/// area R^2). Immutable once built.
struct PolarGridFunction {
    std::vector<double> ring_radius;      ///< one entry per ring
    std::vector<int> ring_resolution;     ///< angular sample count per ring
    std::vector<double> ring_weight;      ///< quadrature weight per sample of the ring
    std::vector<Complex> values;          ///< ring-major samples
    double covered_area = 0.0;            ///< sum of all weights (normalized measure)

    std::size_t size() const { return values.size(); }
    std::size_t ring_count() const { return ring_radius.size(); }
    Complex point(std::size_t ring, int i) const {
        const double th = 2.0 * M_PI * i / ring_resolution[ring];
        return Complex(ring_radius[ring] * std::cos(th), ring_radius[ring] * std::sin(th));
    }
};

struct PolarGridSpec {
    double u_min = 1e-4;        ///< innermost panel boundary in u = 1-r
    int panels_per_decade = 8;  ///< geometric panels toward the boundary
    int gauss_per_panel = 4;
    int angular_base = 32;      ///< angles on the innermost ring
    int angular_growth = 4;     ///< extra angles per ring index
};

/// Samples f on the default grid layout.
PolarGridFunction sample_on_grid(const std::function<Complex(Complex)>& f,
                                 const PolarGridSpec& spec = {});

/// Columnar round-trip: header carries the ring structure; data rows are
/// radius, angle, re, im.
void save_polar(const PolarGridFunction& grid, const std::string& path);
PolarGridFunction load_polar(const std::string& path);

/// f(zeta) = zeta^n phi(|zeta|) with a nonnegative radial profile given in log
/// scale (log_phi may return -inf where phi vanishes).
struct MonomialRadialFunction {
    int degree = 0;
    std::function<double(double)> log_phi;
    std::string description;
};

/// The extremal profile phi(r) = (r^{(2-p)n} omega(r)/nu(r))^{1/(p-1)} that
/// realizes the D_p quotient as a norm ratio.
MonomialRadialFunction extremal_test_function(const WeightPtr& omega, const WeightPtr& nu,
                                              double p, int n);

struct AnalyticPolynomial {
    std::vector<Complex> coeffs;  ///< a_0 + a_1 z + ... + a_d z^d

    Complex eval(Complex z) const {
        Complex acc{0.0, 0.0};
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
        return acc;
    }
    AnalyticPolynomial derivative(int k = 1) const;
    int degree() const { return coeffs.empty() ? 0 : int(coeffs.size()) - 1; }
};

/// A norm that may be infinite (divergent radial integral).
struct NormValue {
    double value = 0.0;
    double log_value = -std::numeric_limits<double>::infinity();
    bool finite = true;
};

NormValue lp_norm(const MonomialRadialFunction& f, const WeightPtr& nu, double p,
                  const QuadratureSpec& spec = {});
NormValue lp_norm(const AnalyticPolynomial& f, const WeightPtr& nu, double p,
                  const QuadratureSpec& spec = {});
NormValue lp_norm(const PolarGridFunction& f, const WeightPtr& nu, double p);

/// P_w(zeta^n phi) = (int_0^1 w phi s^{2n+1} ds / w_{2n+1}) z^n, the exact
/// closed form; no kernel truncation involved.
struct ProjectedMonomial {
    int degree = 0;
    double coefficient = 0.0;
    double log_coefficient = -std::numeric_limits<double>::infinity();
    bool finite = true;
};
ProjectedMonomial project_monomial_radial(const WeightPtr& omega, const MonomialRadialFunction& f,
                                          const QuadratureSpec& spec = {});

/// ||P_w f_n|| / ||f_n|| for the extremal family, n = 0..N; equals the D_p
/// quotient identically. Ratios are reported in log scale as well.
struct LowerBoundSequence {
    std::vector<double> n;
    std::vector<double> ratio;
    std::vector<double> log_ratio;
};
LowerBoundSequence operator_norm_lower_bound(const WeightPtr& omega, const WeightPtr& nu,
                                             double p, int N, const QuadratureSpec& spec = {});

/// Quadrature of the defining projection integral against the grid samples.
struct ProjectionResult {
    std::vector<Complex> values;
    double kernel_error = 0.0;       ///< accumulated certified kernel tails
    double resolution_error = 0.0;   ///< angular-halving convergence probe
};
ProjectionResult project_grid(const WeightPtr& omega, const PolarGridFunction& f,
                              const std::vector<Complex>& targets, double tol = 1e-8,
                              const QuadratureSpec& spec = {});

/// P^+_w: same integral with |kernel|; requires nonnegative real samples.
ProjectionResult maximal_project_grid(const WeightPtr& omega, const PolarGridFunction& f,
                                      const std::vector<Complex>& targets, double tol = 1e-8,
                                      const QuadratureSpec& spec = {});

/// T^+_{w,k}(f)(z) = (1-|z|)^k int f |(B_zeta)^{(k)}(z)| w dA; f >= 0, k <= 8.
ProjectionResult t_plus_k(const WeightPtr& omega, int k, const PolarGridFunction& f,
                          const std::vector<Complex>& targets, double tol = 1e-8,
                          const QuadratureSpec& spec = {});

/// Dirichlet-type norm: (sum_{j<k} |f^(j)(0)|^p
///                       + int |f^(k)|^p (1-|z|)^{kp} nu dA)^{1/p}.
double dirichlet_norm(const AnalyticPolynomial& f, const WeightPtr& nu, int k, double p,
                      const QuadratureSpec& spec = {});

/// Ratio of ||f||_{A^p_nu}^p to the k=1 Dirichlet functional over monomials
/// z^d, d in [d_min, d_max], plus seeded random polynomials; returns the
/// observed bracket.
struct LittlewoodPaleyBracket {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::vector<double> degree;
    std::vector<double> ratio;
};
LittlewoodPaleyBracket littlewood_paley_check(const WeightPtr& nu, double p, int d_min, int d_max,
                                              int random_polys = 3, unsigned seed = 12345,
                                              const QuadratureSpec& spec = {});

} // namespace bergman
