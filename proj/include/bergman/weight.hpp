#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bergman/quadrature.hpp"

namespace bergman {

enum class WeightKind { standard, exponential, rapidly_increasing, tabulated, scaled, power_product, custom };

/// Steers the endpoint substitution used for integrals over [r, 1).
enum class DecayClass { polynomial, exponential, blowup, generic };

enum class MomentBackend { quadrature, closed_form, asymptotic };

/// A moment with its provenance. `value` is 0 with `underflow` set when the
/// true value is below the normal double range; `log_value` is always usable.
struct MomentValue {
    double value = 0.0;
    double log_value = -std::numeric_limits<double>::infinity();
    double rel_error = 0.0;
    MomentBackend backend = MomentBackend::quadrature;
    bool underflow = false;
};

class RadialWeight;
using WeightPtr = std::shared_ptr<const RadialWeight>;

/// A radial weight on the unit disc: a nonnegative integrable density depending
/// only on |z|, with positive tail integral on all of [0, 1). Instances are
/// immutable after construction.
class RadialWeight {
public:
    virtual ~RadialWeight() = default;

    virtual WeightKind kind() const = 0;
    virtual DecayClass decay_class() const = 0;
    /// Canonical description; doubles as the structural-equality key.
    virtual std::string describe() const = 0;
    virtual bool strictly_positive() const { return true; }

    /// PowerProduct composites can fail integrability (the sigma of a bad pair);
    /// everything else is a weight by construction.
    virtual bool integrable() const { return true; }

    /// ln density(r), -inf where the density vanishes. Pre: 0 <= r < 1.
    virtual double log_density(double r) const = 0;
    virtual double density(double r) const;

    /// ln of  int_r^1 s^q w(s) ds  for q >= 0. Tails are q=0, the t dt measure
    /// q=1, moments r=0. Closed forms per kind where available, otherwise the
    /// decay-class substitution drives the generic engine.
    virtual double log_power_tail(double r, double q, const QuadratureSpec& spec) const;

    virtual MomentValue moment_value(double x, const QuadratureSpec& spec) const;

    /// Moment through the generic quadrature engine regardless of closed forms;
    /// backs the forced-backend path used by crossover tests.
    double quadrature_log_moment(double x, const QuadratureSpec& spec) const;

protected:
    /// Generic [r,1) integral of s^q w(s) ds in log scale: split at 1/2, boundary
    /// panel in u = 1-s with a peak scan. Works for any decay class except blowup.
    double generic_log_power_tail(double r, double q, const QuadratureSpec& spec) const;
    /// Linear-space fallback for integrable endpoint blowups.
    double blowup_log_power_tail(double r, double q, const QuadratureSpec& spec) const;
};

// ---- constructors -------------------------------------------------------

/// (alpha+1)(1-r^2)^alpha, alpha > -1.
WeightPtr make_standard(double alpha);
/// exp(-alpha/(1-r^l)^beta), alpha > 0, beta in (0,1], l > 0.
WeightPtr make_exponential(double alpha, double beta, double l);
/// 1/((1-r^2) ln(e/(1-r^2))^alpha), alpha > 1.
WeightPtr make_rapidly_increasing(double alpha);
/// Monotone piecewise-cubic interpolant through (radius, density) samples;
/// constant extension beyond the last sample.
WeightPtr make_tabulated(std::vector<double> radii, std::vector<double> values);
/// factor * base(r), factor > 0.
WeightPtr make_scaled(double factor, WeightPtr base);
/// a(r)^ea * b(r)^eb composite (the sigma form). May be non-integrable; see
/// sigma_weight for the flagged construction.
WeightPtr make_power_product(WeightPtr a, double ea, WeightPtr b, double eb);
/// Arbitrary log-density; used for test oracles and derived weights.
WeightPtr make_custom(std::function<double(double)> log_density, DecayClass dc,
                      std::string description);

/// Parses the weight mini-language: std:alpha=<a> | exp:alpha=<a>,beta=<b>,l=<l>
/// | ri:alpha=<a> | tab:<path>. Unknown keys or malformed numbers throw
/// std::invalid_argument naming the offending token.
WeightPtr parse_weight_spec(const std::string& text);

// ---- operations ----------------------------------------------------------

/// Density value at r; throws DomainError outside [0, 1).
double evaluate(const RadialWeight& w, double r);

/// omega-hat(r) = int_r^1 w(s) ds.
double tail_integral(const RadialWeight& w, double r, const QuadratureSpec& spec = {});
double log_tail_integral(const RadialWeight& w, double r, const QuadratureSpec& spec = {});

/// int_r^1 w(t) t dt, the measure inside the A_p and M_p conditions.
double weighted_tail_integral(const RadialWeight& w, double r, const QuadratureSpec& spec = {});
double log_weighted_tail_integral(const RadialWeight& w, double r, const QuadratureSpec& spec = {});

/// omega_x = int_0^1 r^x w(r) dr, x >= 0.
MomentValue moment(const RadialWeight& w, double x, const QuadratureSpec& spec = {});
double log_moment(const RadialWeight& w, double x, const QuadratureSpec& spec = {});

/// Forces a specific backend (tests and crossover diagnostics). Throws
/// DomainError when the weight does not support the requested backend.
MomentValue moment_with_backend(const RadialWeight& w, double x, MomentBackend backend,
                                const QuadratureSpec& spec = {});

/// sigma = (omega / nu^{1/p})^{p'}. Not every pair yields an integrable sigma;
/// callers must check is_weight before using the result.
struct SigmaWeight {
    WeightPtr weight;  ///< null when !is_weight
    bool is_weight = false;
    std::string reason;  ///< diagnostic for the NotAWeight case
};
SigmaWeight sigma_weight(const WeightPtr& omega, const WeightPtr& nu, double p);

/// Caching moment table for one weight. Reads are synchronized; entries record
/// the backend that produced them.
class MomentTable {
public:
    explicit MomentTable(WeightPtr w, QuadratureSpec spec = {});

    MomentValue at(double x) const;
    double log_at(double x) const;
    const RadialWeight& weight() const { return *w_; }
    std::size_t size() const;

private:
    WeightPtr w_;
    QuadratureSpec spec_;
    mutable std::mutex mu_;
    mutable std::unordered_map<double, MomentValue> cache_;
};

/// ln(1 - r^l) evaluated without cancellation near r = 1.
double log_one_minus_pow(double r, double l);

/// ln of int_r^1 exp(log_f(s)) ds for radial integrands: peak-scanned split
/// integration that tolerates boundary concentration. log_f must return -inf
/// (never NaN) outside its support.
double log_radial_integral(const std::function<double(double)>& log_f, double r,
                           const QuadratureSpec& spec = {});

/// Tail-growth probe: true when exp(log_f)(1-r) is unbounded as r -> 1, a
/// sufficient condition for the radial integral to diverge.
bool radial_tail_divergent(const std::function<double(double)>& log_f);

} // namespace bergman
