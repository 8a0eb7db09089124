#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <random>

#include "bergman/conditions.hpp"
#include "bergman/projection.hpp"

using namespace bergman;

namespace {
WeightPtr one() { return make_standard(0.0); }

MonomialRadialFunction monomial(int n) {
    MonomialRadialFunction f;
    f.degree = n;
    f.log_phi = [](double) { return 0.0; };
    f.description = "z^" + std::to_string(n);
    return f;
}
} // namespace

TEST_CASE("grid quadrature weights sum to the disc area") {
    auto grid = sample_on_grid([](Complex) { return Complex(1.0, 0.0); });
    CHECK(grid.covered_area == doctest::Approx(1.0).epsilon(1e-9));
    std::size_t expected = 0;
    for (int m : grid.ring_resolution) expected += m;
    CHECK(grid.values.size() == expected);
}

TEST_CASE("polar grid round-trips through the columnar file") {
    auto grid = sample_on_grid([](Complex z) { return z * z - Complex(0, 0.25); });
    const char* path = "grid_roundtrip_test.txt";
    save_polar(grid, path);
    auto back = load_polar(path);
    REQUIRE(back.ring_count() == grid.ring_count());
    REQUIRE(back.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(back.values[i] - grid.values[i]) < 1e-15);
    for (std::size_t r = 0; r < grid.ring_count(); ++r) {
        CHECK(back.ring_radius[r] == doctest::Approx(grid.ring_radius[r]).epsilon(1e-15));
        CHECK(back.ring_resolution[r] == grid.ring_resolution[r]);
    }
    std::remove(path);
}

TEST_CASE("lp_norm of monomial-radial functions") {
    CHECK(lp_norm(monomial(0), one(), 2.0).value == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(lp_norm(monomial(1), one(), 2.0).value ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-11));
    // f = zeta^2 (1-s), nu = Standard 1, p = 2: norm^2 = 2 int (1-s)^2 2(1-s^2) s^5
    MonomialRadialFunction f;
    f.degree = 2;
    f.log_phi = [](double s) { return std::log1p(-s); };
    CHECK(lp_norm(f, make_standard(1.0), 2.0).value ==
          doctest::Approx(std::sqrt(0.012698412698412698)).epsilon(1e-10));
}

TEST_CASE("lp_norm: polynomial and grid routes agree with the radial reduction") {
    AnalyticPolynomial cube;
    cube.coeffs = {0, 0, 0, Complex(1.0, 0.0)};
    auto nu = make_standard(1.0);
    const double direct = lp_norm(monomial(3), nu, 2.0).value;
    CHECK(lp_norm(cube, nu, 2.0).value == doctest::Approx(direct).epsilon(1e-9));
    auto grid = sample_on_grid([](Complex z) { return z * z * z; });
    CHECK(lp_norm(grid, nu, 2.0).value == doctest::Approx(direct).epsilon(1e-7));
}

TEST_CASE("lp_norm flags divergent radial integrals") {
    // phi(s) = (1-s)^{-2} against the constant weight: integral diverges
    MonomialRadialFunction f;
    f.degree = 0;
    f.log_phi = [](double s) { return -2.0 * std::log1p(-s); };
    auto norm = lp_norm(f, one(), 2.0);
    CHECK_FALSE(norm.finite);
    CHECK(norm.value == std::numeric_limits<double>::infinity());
}

TEST_CASE("project_monomial_radial: reproducing coefficients") {
    for (const auto& w : {make_standard(1.0), make_exponential(1, 1, 1),
                          make_rapidly_increasing(2.0)}) {
        CAPTURE(w->describe());
        for (int n : {0, 3, 17, 50}) {
            auto c = project_monomial_radial(w, monomial(n));
            CHECK(c.coefficient == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("project_monomial_radial: polynomial profile example") {
    MonomialRadialFunction f;
    f.degree = 1;
    f.log_phi = [](double s) { return std::log(s); };
    auto c = project_monomial_radial(one(), f);
    CHECK(c.coefficient == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("extremal profile turns the projection into the moment quotient") {
    auto om = make_standard(1.0);
    auto nu = one();
    const double p = 2.0, pp = 2.0;
    auto sigma = sigma_weight(om, nu, p);
    REQUIRE(sigma.is_weight);
    for (int n : {0, 3, 10}) {
        auto c = project_monomial_radial(om, extremal_test_function(om, nu, p, n));
        const double expect =
            std::exp(log_moment(*sigma.weight, n * pp + 1) - log_moment(*om, 2.0 * n + 1));
        CHECK(c.coefficient == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("operator norm lower bound reproduces the D_p quotient") {
    struct Case {
        WeightPtr om, nu;
        double p;
    };
    std::vector<Case> cases = {
        {make_standard(1.0), make_standard(1.0), 2.0},
        {make_standard(1.0), one(), 2.0},
        {make_standard(2.5), make_standard(1.0), 3.0},
    };
    for (const auto& c : cases) {
        CAPTURE(c.om->describe());
        CAPTURE(c.nu->describe());
        CAPTURE(c.p);
        auto seq = operator_norm_lower_bound(c.om, c.nu, c.p, 20);
        auto dp = dp_sequence(c.om, c.nu, c.p, 20);
        REQUIRE(seq.log_ratio.size() == dp.log_values.size());
        for (std::size_t i = 0; i < seq.log_ratio.size(); ++i)
            CHECK(seq.log_ratio[i] == doctest::Approx(dp.log_values[i]).epsilon(1e-10));
    }
    // omega = nu collapses to ratio 1 for every n
    auto seq = operator_norm_lower_bound(make_exponential(1, 1, 1), make_exponential(1, 1, 1),
                                         2.0, 10);
    for (double r : seq.ratio) CHECK(r == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("project_grid reproduces analytic polynomials at interior targets") {
    auto grid = sample_on_grid([](Complex z) { return z * z; });
    auto res = project_grid(one(), grid, {Complex(0.3, 0.0), Complex(-0.2, 0.4)}, 1e-8);
    CHECK(std::abs(res.values[0] - Complex(0.09, 0.0)) < 1e-6);
    CHECK(std::abs(res.values[1] - Complex(-0.2, 0.4) * Complex(-0.2, 0.4)) < 1e-6);

    // degree-5 polynomial against a standard weight
    AnalyticPolynomial f;
    f.coeffs = {Complex(0.5, 0.1), Complex(0, 0), Complex(1, -1), Complex(0, 0), Complex(0, 0),
                Complex(0.25, 0.5)};
    auto g2 = sample_on_grid([&](Complex z) { return f.eval(z); });
    const Complex target(0.35, -0.2);
    auto res2 = project_grid(make_standard(1.0), g2, {target}, 1e-8);
    CHECK(std::abs(res2.values[0] - f.eval(target)) < 1e-6);
}

TEST_CASE("project_grid annihilates the antianalytic part") {
    auto grid = sample_on_grid([](Complex z) { return std::conj(z); });
    auto res = project_grid(one(), grid, {Complex(0.4, 0.1), Complex(0.0, 0.0)}, 1e-8);
    CHECK(std::abs(res.values[0]) < 1e-6);
    CHECK(std::abs(res.values[1]) < 1e-6);
}

TEST_CASE("project_grid cross-validates the closed monomial projection") {
    // f = zeta^1 (1-s): closed coefficient from project_monomial_radial
    auto om = make_standard(1.0);
    MonomialRadialFunction f;
    f.degree = 1;
    f.log_phi = [](double s) { return std::log1p(-s); };
    auto c = project_monomial_radial(om, f);
    auto grid = sample_on_grid([](Complex z) { return z * (1.0 - std::abs(z)); });
    for (Complex target : {Complex(0.3, 0.0), Complex(-0.1, 0.5), Complex(0.0, -0.6)}) {
        auto res = project_grid(om, grid, {target}, 1e-8);
        CHECK(std::abs(res.values[0] - c.coefficient * target) < 1e-5);
    }
}

TEST_CASE("maximal projection: unit function at the origin, dominance, rejection") {
    auto grid = sample_on_grid([](Complex) { return Complex(1.0, 0.0); });
    auto res = maximal_project_grid(one(), grid, {Complex(0, 0)}, 1e-9);
    CHECK(res.values[0].real() == doctest::Approx(1.0).epsilon(1e-9));

    // grid-vs-series consistency at z = 0.5 (spec example)
    auto res2 = maximal_project_grid(one(), grid, {Complex(0.5, 0.0)}, 1e-9);
    // radial-series oracle: int |1 - 0.5 zeta|^{-2} dA = sum (0.25)^n/(n+1)
    double series = 0.0;
    for (int n = 0; n < 200; ++n) series += std::pow(0.25, n) / (n + 1);
    CHECK(res2.values[0].real() == doctest::Approx(series).epsilon(1e-5));

    // pointwise domination |P f| <= P+ |f| for nonnegative f
    auto g = sample_on_grid([](Complex z) { return Complex(std::abs(z * z - 0.3), 0.0); });
    for (Complex z : {Complex(0.2, 0.3), Complex(-0.5, 0.1)}) {
        auto plain = project_grid(one(), g, {z}, 1e-8);
        auto maximal = maximal_project_grid(one(), g, {z}, 1e-8);
        CHECK(std::abs(plain.values[0]) <= maximal.values[0].real() + 1e-9);
    }

    auto signed_grid = sample_on_grid([](Complex z) { return z; });
    CHECK_THROWS_AS((void)maximal_project_grid(one(), signed_grid, {Complex(0, 0)}, 1e-8),
                    DomainError);
}

TEST_CASE("projection linearity on random samples") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto f = sample_on_grid([&](Complex) { return Complex(u(rng), u(rng)); });
    auto g = sample_on_grid([&](Complex) { return Complex(u(rng), u(rng)); });
    PolarGridFunction combo = f;
    const Complex a(0.7, -0.3), b(-1.1, 0.2);
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = a * f.values[i] + b * g.values[i];
    const Complex z(0.25, 0.35);
    auto om = make_standard(1.0);
    auto pf = project_grid(om, f, {z}, 1e-9);
    auto pg = project_grid(om, g, {z}, 1e-9);
    auto pc = project_grid(om, combo, {z}, 1e-9);
    CHECK(std::abs(pc.values[0] - (a * pf.values[0] + b * pg.values[0])) < 1e-9);
}

TEST_CASE("T+ operator: trivial cases, frozen value, rotation invariance") {
    auto zero = sample_on_grid([](Complex) { return Complex(0.0, 0.0); });
    auto res0 = t_plus_k(one(), 1, zero, {Complex(0.3, 0.0)}, 1e-9);
    CHECK(res0.values[0].real() == doctest::Approx(0.0));

    auto unit = sample_on_grid([](Complex) { return Complex(1.0, 0.0); });
    // z=0, k=1: int_D |(B_zeta)'(0)| dA = int_D 2|zeta| dA = 4/3
    auto res1 = t_plus_k(one(), 1, unit, {Complex(0, 0)}, 1e-9);
    CHECK(res1.values[0].real() == doctest::Approx(4.0 / 3.0).epsilon(1e-7));

    auto ra = t_plus_k(one(), 1, unit, {Complex(0.5, 0.0)}, 1e-9);
    auto rb = t_plus_k(one(), 1, unit, {Complex(0.0, 0.5)}, 1e-9);
    CHECK(ra.values[0].real() == doctest::Approx(rb.values[0].real()).epsilon(1e-10));

    CHECK_THROWS_AS((void)t_plus_k(one(), 0, unit, {Complex(0, 0)}, 1e-8), DomainError);
    CHECK_THROWS_AS((void)t_plus_k(one(), 9, unit, {Complex(0, 0)}, 1e-8), DomainError);
}

TEST_CASE("projection cap on |z| max |zeta|") {
    auto grid = sample_on_grid([](Complex) { return Complex(1.0, 0.0); });
    CHECK_THROWS_AS((void)project_grid(one(), grid, {Complex(0.995, 0.0)}, 1e-8), DomainError);
}

TEST_CASE("dirichlet norm: jets and the weighted derivative integral") {
    AnalyticPolynomial id;
    id.coeffs = {Complex(0, 0), Complex(1, 0)};
    CHECK(dirichlet_norm(id, one(), 1, 2.0) == doctest::Approx(std::sqrt(1.0 / 6)).epsilon(1e-10));

    AnalyticPolynomial constant;
    constant.coeffs = {Complex(3, 4)};
    CHECK(dirichlet_norm(constant, one(), 1, 2.0) == doctest::Approx(5.0).epsilon(1e-12));

    // k = 2 on f = z: derivative vanishes, jet carries |f(0)| and |f'(0)|
    CHECK(dirichlet_norm(id, one(), 2, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Littlewood-Paley bracket: doubling weights stay bracketed") {
    auto br = littlewood_paley_check(one(), 2.0, 1, 30, 0);
    // monomial ratios (2n+1)/n decrease from 3 to 2
    CHECK(br.max_ratio == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(br.min_ratio > 2.0);
    for (std::size_t i = 0; i < br.degree.size(); ++i) {
        const double d = br.degree[i];
        CHECK(br.ratio[i] == doctest::Approx((2 * d + 1) / d).epsilon(1e-7));
    }
}

TEST_CASE("Littlewood-Paley bracket: exponential weight drifts with degree") {
    auto br = littlewood_paley_check(make_exponential(1, 1, 1), 2.0, 1, 20, 0);
    // no finite bracket: the ratio grows monotonically with the degree
    CHECK(br.ratio.back() > 2.0 * br.ratio.front());
    for (std::size_t i = 1; i < br.ratio.size(); ++i) CHECK(br.ratio[i] >= br.ratio[i - 1]);
}
