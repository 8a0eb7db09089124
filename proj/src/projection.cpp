#include "bergman/projection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace bergman {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauss-Legendre 4 on [-1, 1]
constexpr double kGlx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                            0.8611363115940526};
constexpr double kGlw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                            0.3478548451374538};

struct GridLayout {
    std::vector<double> radius;
    std::vector<int> resolution;
    std::vector<double> weight;  // per sample of the ring
};

GridLayout build_layout(const PolarGridSpec& spec) {
    if (spec.gauss_per_panel != 4)
        throw DomainError("polar grids use 4-point Gauss panels");
    GridLayout out;
    // geometric panel boundaries in u = 1-r from 1 down to u_min, plus a
    // closing panel [1-u_min, 1] so the whole disc is covered (Gauss nodes
    // stay strictly inside r < 1)
    std::vector<double> bounds{1.0};
    const double step = std::pow(10.0, -1.0 / spec.panels_per_decade);
    for (double u = step; u > spec.u_min * 1.0000001; u *= step) bounds.push_back(u);
    bounds.push_back(spec.u_min);
    bounds.push_back(0.0);
    int ring_index = 0;
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
        const double r_lo = 1.0 - bounds[j];
        const double r_hi = 1.0 - bounds[j + 1];
        const double mid = 0.5 * (r_lo + r_hi), half = 0.5 * (r_hi - r_lo);
        for (int g = 0; g < 4; ++g) {
            const double r = mid + half * kGlx[g];
            const int m = spec.angular_base + spec.angular_growth * ring_index;
            out.radius.push_back(r);
            out.resolution.push_back(m);
            out.weight.push_back(2.0 * r * kGlw[g] * half / m);
            ++ring_index;
        }
    }
    return out;
}

/// term magnitudes c_n rho^n (or the derivative variant) up to a certified
/// tail <= tol; returns the achieved bound
std::vector<double> ring_term_mags(const KernelSeries& series, double rho, double tol,
                                   double& tail_bound) {
    std::vector<double> mags;
    tail_bound = 0.0;
    if (rho == 0.0) {
        mags.push_back(std::exp(series.log_coefficient(0)));
        return mags;
    }
    const double log_rho = std::log(rho);
    double log_c_next = series.log_coefficient(0);
    for (int n = 0; n < series.max_terms(); ++n) {
        const double log_c = log_c_next;
        mags.push_back(std::exp(log_c + n * log_rho));
        log_c_next = series.log_coefficient(n + 1);
        const double growth = std::exp(log_c_next - log_c);
        if (growth * rho < 1.0) {
            const double tail = std::exp(log_c_next + (n + 1) * log_rho) / (1.0 - growth * rho);
            if (tail <= tol) {
                tail_bound = tail;
                return mags;
            }
        }
    }
    throw AccuracyError("kernel series budget exhausted on a grid ring", 0.0, kInf);
}

std::vector<double> ring_term_mags_derivative(const KernelSeries& series, double r_zeta,
                                              double rho_z, int k, double tol,
                                              double& tail_bound) {
    // magnitudes of n!/(n-k)! c_n r_zeta^n rho_z^{n-k} for n = k, k+1, ...
    std::vector<double> mags;
    tail_bound = 0.0;
    const double log_rz = rho_z > 0.0 ? std::log(rho_z) : -kInf;
    const double log_rzeta = std::log(r_zeta);
    auto log_term = [&](int n) {
        double lf = 0.0;
        for (int j = 0; j < k; ++j) lf += std::log(double(n - j));
        return series.log_coefficient(n) + lf + n * log_rzeta +
               (rho_z > 0.0 ? (n - k) * log_rz : (n == k ? 0.0 : -kInf));
    };
    for (int n = k; n < series.max_terms(); ++n) {
        mags.push_back(std::exp(log_term(n)));
        if (rho_z == 0.0) return mags;  // single term
        const double log_next = log_term(n + 1);
        const double q = std::exp(log_term(n + 2) - log_next);
        if (q < 1.0) {
            const double tail = std::exp(log_next) / (1.0 - q);
            if (tail <= tol) {
                tail_bound = tail;
                return mags;
            }
        }
    }
    throw AccuracyError("kernel derivative series budget exhausted on a grid ring", 0.0, kInf);
}

/// sum of mags[n] e^{i n phi} by a stable phase recurrence
Complex phase_sum(const std::vector<double>& mags, double phi) {
    const Complex rot(std::cos(phi), std::sin(phi));
    Complex phase(1.0, 0.0);
    Complex acc(0.0, 0.0);
    for (double m : mags) {
        acc += m * phase;
        phase *= rot;
    }
    return acc;
}

enum class KernelMode { plain, absolute, derivative_abs };

ProjectionResult grid_transform(const WeightPtr& omega, const PolarGridFunction& f,
                                const std::vector<Complex>& targets, double tol,
                                const QuadratureSpec& spec, KernelMode mode, int k) {
    if (f.ring_count() == 0) throw DomainError("projection: empty grid");
    double r_max = 0.0;
    for (double r : f.ring_radius) r_max = std::max(r_max, r);
    for (Complex z : targets)
        if (std::abs(z) * r_max > 0.99)
            throw DomainError("projection target violates the |z||zeta| <= 0.99 kernel cap");
    if (mode != KernelMode::plain) {
        for (const Complex& v : f.values)
            if (v.imag() != 0.0 || v.real() < 0.0)
                throw DomainError("maximal operators require nonnegative real samples");
    }

    KernelSeries series(omega, spec);
    // per-ring density and |f| mass for the kernel tolerance budget
    std::vector<double> dens(f.ring_count());
    double mass = 0.0;
    {
        std::size_t idx = 0;
        for (std::size_t ring = 0; ring < f.ring_count(); ++ring) {
            dens[ring] = omega->density(f.ring_radius[ring]);
            for (int i = 0; i < f.ring_resolution[ring]; ++i, ++idx)
                mass += f.ring_weight[ring] * std::abs(f.values[idx]) * dens[ring];
        }
    }
    const double tol_kernel = tol / std::max(mass, 1e-30);

    ProjectionResult out;
    out.values.assign(targets.size(), Complex(0.0, 0.0));
    std::vector<Complex> half(targets.size(), Complex(0.0, 0.0));

    for (std::size_t t = 0; t < targets.size(); ++t) {
        const Complex z = targets[t];
        const double rho_z = std::abs(z);
        const double theta_z = rho_z > 0.0 ? std::arg(z) : 0.0;
        double kernel_err = 0.0;
        std::size_t idx = 0;
        for (std::size_t ring = 0; ring < f.ring_count(); ++ring) {
            const double r = f.ring_radius[ring];
            const int m = f.ring_resolution[ring];
            const double w_cell = f.ring_weight[ring] * dens[ring];
            double tail = 0.0;
            std::vector<double> mags;
            if (mode == KernelMode::derivative_abs)
                mags = ring_term_mags_derivative(series, r, rho_z, k, tol_kernel, tail);
            else
                mags = ring_term_mags(series, r * rho_z, tol_kernel, tail);
            Complex ring_sum(0.0, 0.0);
            Complex ring_sum_half(0.0, 0.0);
            for (int i = 0; i < m; ++i, ++idx) {
                const double theta = 2.0 * M_PI * i / m;
                Complex kernel_value;
                if (mode == KernelMode::derivative_abs) {
                    // |(B_zeta)^{(k)}(z)|: phases n(theta_z - theta) - k theta_z
                    const double phi = theta_z - theta;
                    const Complex base = phase_sum(mags, phi);
                    // leading phase e^{i(k(phi) ... )} has unit modulus; only |.| is used
                    kernel_value = std::abs(base);
                } else {
                    const Complex v = phase_sum(mags, theta_z - theta);
                    kernel_value = (mode == KernelMode::absolute) ? Complex(std::abs(v), 0.0) : v;
                }
                const Complex contrib = w_cell * f.values[idx] * kernel_value;
                ring_sum += contrib;
                if (m % 2 == 0 && i % 2 == 0) ring_sum_half += 2.0 * contrib;
                kernel_err += w_cell * std::abs(f.values[idx]) * tail;
            }
            out.values[t] += ring_sum;
            half[t] += (m % 2 == 0) ? ring_sum_half : ring_sum;
        }
        out.kernel_error = std::max(out.kernel_error, kernel_err);
        if (mode == KernelMode::derivative_abs) {
            const double factor = std::pow(1.0 - rho_z, k);
            out.values[t] *= factor;
            half[t] *= factor;
        }
        out.resolution_error =
            std::max(out.resolution_error, std::abs(out.values[t] - half[t]));
    }
    return out;
}

/// log of  2 int_0^1 exp(log_f(s)) ds, the radial reduction of a disc integral
double log_disc_radial(const std::function<double(double)>& log_f, const QuadratureSpec& spec) {
    return std::log(2.0) + log_radial_integral(log_f, 0.0, spec);
}

NormValue norm_from_log_p(double log_p_norm_p, double p) {
    NormValue out;
    out.log_value = log_p_norm_p / p;
    out.value = std::exp(out.log_value);
    return out;
}

} // namespace

PolarGridFunction sample_on_grid(const std::function<Complex(Complex)>& f,
                                 const PolarGridSpec& spec) {
    GridLayout layout = build_layout(spec);
    PolarGridFunction grid;
    grid.ring_radius = layout.radius;
    grid.ring_resolution = layout.resolution;
    grid.ring_weight = layout.weight;
    for (std::size_t ring = 0; ring < grid.ring_radius.size(); ++ring) {
        for (int i = 0; i < grid.ring_resolution[ring]; ++i)
            grid.values.push_back(f(grid.point(ring, i)));
        grid.covered_area += grid.ring_weight[ring] * grid.ring_resolution[ring];
    }
    return grid;
}

void save_polar(const PolarGridFunction& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.precision(17);
    out << "# bergman polar grid v1\n";
    out << "# rings " << grid.ring_count() << "\n";
    for (std::size_t ring = 0; ring < grid.ring_count(); ++ring)
        out << "# ring " << grid.ring_radius[ring] << " " << grid.ring_resolution[ring] << " "
            << grid.ring_weight[ring] << "\n";
    out << "# columns: radius angle re im\n";
    std::size_t idx = 0;
    for (std::size_t ring = 0; ring < grid.ring_count(); ++ring)
        for (int i = 0; i < grid.ring_resolution[ring]; ++i, ++idx)
            out << grid.ring_radius[ring] << " " << (2.0 * M_PI * i / grid.ring_resolution[ring])
                << " " << grid.values[idx].real() << " " << grid.values[idx].imag() << "\n";
}

PolarGridFunction load_polar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    PolarGridFunction grid;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::stringstream ss(line);
            std::string hash, tag;
            ss >> hash >> tag;
            if (tag == "ring") {
                double r, w;
                int m;
                ss >> r >> m >> w;
                grid.ring_radius.push_back(r);
                grid.ring_resolution.push_back(m);
                grid.ring_weight.push_back(w);
                grid.covered_area += w * m;
            }
            continue;
        }
        std::stringstream ss(line);
        double r, th, re, im;
        if (ss >> r >> th >> re >> im) grid.values.push_back(Complex(re, im));
    }
    std::size_t expected = 0;
    for (std::size_t ring = 0; ring < grid.ring_count(); ++ring)
        expected += grid.ring_resolution[ring];
    if (expected != grid.values.size())
        throw std::runtime_error("polar grid file '" + path + "' is inconsistent");
    return grid;
}

MonomialRadialFunction extremal_test_function(const WeightPtr& omega, const WeightPtr& nu,
                                              double p, int n) {
    if (!(p > 1.0)) throw DomainError("extremal test function requires p > 1");
    if (n < 0) throw DomainError("extremal test function requires n >= 0");
    MonomialRadialFunction f;
    f.degree = n;
    f.description = "extremal(p=" + std::to_string(p) + ",n=" + std::to_string(n) + ")";
    const double c = (2.0 - p) * n;
    f.log_phi = [omega, nu, p, c](double r) {
        if (r <= 0.0) return c > 0.0 ? -kInf : (c == 0.0 ? (omega->log_density(r) - nu->log_density(r)) / (p - 1.0) : kInf);
        return (c * std::log(r) + omega->log_density(r) - nu->log_density(r)) / (p - 1.0);
    };
    return f;
}

AnalyticPolynomial AnalyticPolynomial::derivative(int k) const {
    AnalyticPolynomial d;
    if (int(coeffs.size()) <= k) return d;
    d.coeffs.resize(coeffs.size() - k);
    for (std::size_t m = k; m < coeffs.size(); ++m) {
        double fact = 1.0;
        for (int j = 0; j < k; ++j) fact *= double(m - j);
        d.coeffs[m - k] = coeffs[m] * fact;
    }
    return d;
}

NormValue lp_norm(const MonomialRadialFunction& f, const WeightPtr& nu, double p,
                  const QuadratureSpec& spec) {
    if (!(p > 0.0)) throw DomainError("lp_norm requires p > 0");
    const double q = f.degree * p + 1.0;
    auto log_f = [&](double s) {
        if (s <= 0.0 || s >= 1.0) return -kInf;
        const double lphi = f.log_phi(s);
        if (lphi == -kInf) return -kInf;
        return p * lphi + nu->log_density(s) + q * std::log(s);
    };
    NormValue out;
    if (radial_tail_divergent(log_f)) {
        out.finite = false;
        out.value = kInf;
        out.log_value = kInf;
        return out;
    }
    return norm_from_log_p(log_disc_radial(log_f, spec), p);
}

NormValue lp_norm(const AnalyticPolynomial& f, const WeightPtr& nu, double p,
                  const QuadratureSpec& spec) {
    if (!(p > 0.0)) throw DomainError("lp_norm requires p > 0");
    const int m_theta = std::max(64, 8 * (f.degree() + 1));
    auto radial = [&](double s) {
        double acc = 0.0;
        for (int i = 0; i < m_theta; ++i) {
            const double th = 2.0 * M_PI * i / m_theta;
            acc += std::pow(std::abs(f.eval(Complex(s * std::cos(th), s * std::sin(th)))), p);
        }
        return 2.0 * s * (acc / m_theta) * nu->density(s);
    };
    const double val = integrate_or_throw(radial, 0.0, 1.0, spec);
    NormValue out;
    out.value = std::pow(val, 1.0 / p);
    out.log_value = std::log(val) / p;
    return out;
}

NormValue lp_norm(const PolarGridFunction& f, const WeightPtr& nu, double p) {
    if (!(p > 0.0)) throw DomainError("lp_norm requires p > 0");
    double acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t ring = 0; ring < f.ring_count(); ++ring) {
        const double d = nu->density(f.ring_radius[ring]);
        for (int i = 0; i < f.ring_resolution[ring]; ++i, ++idx)
            acc += f.ring_weight[ring] * d * std::pow(std::abs(f.values[idx]), p);
    }
    NormValue out;
    out.value = std::pow(acc, 1.0 / p);
    out.log_value = std::log(acc) / p;
    return out;
}

ProjectedMonomial project_monomial_radial(const WeightPtr& omega, const MonomialRadialFunction& f,
                                          const QuadratureSpec& spec) {
    const int n = f.degree;
    auto log_num = [&](double s) {
        if (s <= 0.0 || s >= 1.0) return -kInf;
        const double lphi = f.log_phi(s);
        if (lphi == -kInf) return -kInf;
        return omega->log_density(s) + lphi + (2.0 * n + 1.0) * std::log(s);
    };
    ProjectedMonomial out;
    out.degree = n;
    if (radial_tail_divergent(log_num)) {
        out.finite = false;
        out.coefficient = kInf;
        out.log_coefficient = kInf;
        return out;
    }
    out.log_coefficient =
        log_radial_integral(log_num, 0.0, spec) - log_moment(*omega, 2.0 * n + 1.0, spec);
    out.coefficient = std::exp(out.log_coefficient);
    return out;
}

LowerBoundSequence operator_norm_lower_bound(const WeightPtr& omega, const WeightPtr& nu,
                                             double p, int N, const QuadratureSpec& spec) {
    if (!(p > 1.0 && std::isfinite(p)))
        throw DomainError("operator_norm_lower_bound: p must lie in (1,inf)");
    LowerBoundSequence seq;
    for (int n = 0; n <= N; ++n) {
        MonomialRadialFunction f = extremal_test_function(omega, nu, p, n);
        const ProjectedMonomial c = project_monomial_radial(omega, f, spec);
        MonomialRadialFunction zn;
        zn.degree = n;
        zn.log_phi = [](double) { return 0.0; };
        const NormValue image = lp_norm(zn, nu, p, spec);
        const NormValue source = lp_norm(f, nu, p, spec);
        seq.n.push_back(n);
        if (!c.finite || !source.finite) {
            seq.log_ratio.push_back(kInf);
            seq.ratio.push_back(kInf);
            continue;
        }
        const double lr = c.log_coefficient + image.log_value - source.log_value;
        seq.log_ratio.push_back(lr);
        seq.ratio.push_back(std::exp(lr));
    }
    return seq;
}

ProjectionResult project_grid(const WeightPtr& omega, const PolarGridFunction& f,
                              const std::vector<Complex>& targets, double tol,
                              const QuadratureSpec& spec) {
    return grid_transform(omega, f, targets, tol, spec, KernelMode::plain, 0);
}

ProjectionResult maximal_project_grid(const WeightPtr& omega, const PolarGridFunction& f,
                                      const std::vector<Complex>& targets, double tol,
                                      const QuadratureSpec& spec) {
    return grid_transform(omega, f, targets, tol, spec, KernelMode::absolute, 0);
}

ProjectionResult t_plus_k(const WeightPtr& omega, int k, const PolarGridFunction& f,
                          const std::vector<Complex>& targets, double tol,
                          const QuadratureSpec& spec) {
    if (k < 1 || k > 8) throw DomainError("t_plus_k: order k must lie in [1, 8]");
    return grid_transform(omega, f, targets, tol, spec, KernelMode::derivative_abs, k);
}

double dirichlet_norm(const AnalyticPolynomial& f, const WeightPtr& nu, int k, double p,
                      const QuadratureSpec& spec) {
    if (k < 1) throw DomainError("dirichlet_norm requires k >= 1");
    if (!(p > 0.0)) throw DomainError("dirichlet_norm requires p > 0");
    double jet = 0.0;
    double fact = 1.0;
    for (int j = 0; j < k; ++j) {
        if (j < int(f.coeffs.size())) jet += std::pow(std::abs(f.coeffs[j]) * fact, p);
        fact *= double(j + 1);
    }
    const AnalyticPolynomial fk = f.derivative(k);
    if (fk.coeffs.empty()) return std::pow(jet, 1.0 / p);
    const int m_theta = std::max(64, 8 * (fk.degree() + 1));
    auto radial = [&](double s) {
        double acc = 0.0;
        for (int i = 0; i < m_theta; ++i) {
            const double th = 2.0 * M_PI * i / m_theta;
            acc += std::pow(std::abs(fk.eval(Complex(s * std::cos(th), s * std::sin(th)))), p);
        }
        return 2.0 * s * (acc / m_theta) * nu->density(s) * std::pow(1.0 - s, k * p);
    };
    const double integral = integrate_or_throw(radial, 0.0, 1.0, spec);
    return std::pow(jet + integral, 1.0 / p);
}

LittlewoodPaleyBracket littlewood_paley_check(const WeightPtr& nu, double p, int d_min, int d_max,
                                              int random_polys, unsigned seed,
                                              const QuadratureSpec& spec) {
    if (d_min < 0 || d_max < d_min) throw DomainError("littlewood_paley_check: bad degree range");
    LittlewoodPaleyBracket out;
    out.min_ratio = kInf;
    out.max_ratio = -kInf;
    auto record = [&](double degree, const AnalyticPolynomial& f) {
        const NormValue num = lp_norm(f, nu, p, spec);
        const double den = dirichlet_norm(f, nu, 1, p, spec);
        const double ratio = std::pow(num.value / den, p);
        out.degree.push_back(degree);
        out.ratio.push_back(ratio);
        out.min_ratio = std::min(out.min_ratio, ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
    };
    for (int d = d_min; d <= d_max; ++d) {
        AnalyticPolynomial mono;
        mono.coeffs.assign(d + 1, Complex(0.0, 0.0));
        mono.coeffs[d] = 1.0;
        record(d, mono);
    }
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int i = 0; i < random_polys; ++i) {
        AnalyticPolynomial f;
        const int d = std::min(d_max, 5 + i);
        for (int j = 0; j <= d; ++j) f.coeffs.push_back(Complex(unif(rng), unif(rng)));
        record(d, f);
    }
    return out;
}

} // namespace bergman
