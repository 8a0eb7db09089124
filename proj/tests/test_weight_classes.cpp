#include "doctest.h"

#include <cmath>

#include "bergman/weight_classes.hpp"

using namespace bergman;

namespace {

WeightPtr one() { return make_standard(0.0); }

WeightPtr power_one_minus(double alpha) {
    return make_custom(
        [alpha](double r) { return std::log1p(alpha) + alpha * std::log1p(-r); },
        DecayClass::polynomial, "pow1m:alpha=" + std::to_string(alpha));
}

} // namespace

TEST_CASE("dhat: constant weight has ratio 2 everywhere") {
    auto w = one();
    auto rep = dhat_profile(w, default_radii_grid(*w));
    CHECK(rep.verdict == Verdict::likely_member);
    CHECK(rep.c_hat == doctest::Approx(2.0).epsilon(1e-10));
    for (double v : rep.ratios) CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("dhat: pure power weight has ratio 2^(alpha+1) identically") {
    auto w = power_one_minus(1.0);
    auto rep = dhat_profile(w, default_radii_grid(*w));
    CHECK(rep.verdict == Verdict::likely_member);
    for (double v : rep.ratios) CHECK(v == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("dhat: exponential weight diverges out of the class") {
    auto w = make_exponential(1, 1, 1);
    auto rep = dhat_profile(w, default_radii_grid(*w));
    CHECK(rep.verdict == Verdict::likely_nonmember);
}

TEST_CASE("dhat: grid preconditions") {
    auto w = one();
    CHECK_THROWS_AS((void)dhat_profile(w, {0.1, 0.5, 0.9}), DomainError);  // max < 0.999
    CHECK_THROWS_AS((void)dhat_profile(w, {0.9, 0.5, 0.9995}), DomainError);
}

TEST_CASE("dcheck: constant weight is a member with C = 2 at K = 2") {
    auto w = one();
    auto rep = dcheck_profile(w, 2.0, default_radii_grid(*w));
    CHECK(rep.verdict == Verdict::likely_member);
    CHECK(rep.k_used == 2.0);
    CHECK(rep.c_hat == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep.tail_power == doctest::Approx(1.0).epsilon(1e-3));  // t dt tail ~ (1-r)
}

TEST_CASE("dcheck: exponential weights belong") {
    auto rep = dcheck_profile(make_exponential(1, 1, 1), 2.0,
                              default_radii_grid(*make_exponential(1, 1, 1)));
    CHECK(rep.verdict == Verdict::likely_member);
}

TEST_CASE("dcheck: rapidly increasing weights fail every K in the ladder") {
    auto w = make_rapidly_increasing(2.0);
    auto rep = dcheck_profile(w, 2.0, default_radii_grid(*w));
    CHECK(rep.verdict == Verdict::likely_nonmember);
}

TEST_CASE("m profile: constant weight ratio (2x+1)/(x+1)") {
    auto w = one();
    std::vector<double> xs;
    for (double x = 1.0; x <= 200.0; x *= 1.2) xs.push_back(x);
    xs.push_back(9.0);
    std::sort(xs.begin(), xs.end());
    auto rep = m_profile(w, 2.0, xs);
    CHECK(rep.verdict == Verdict::likely_member);
    for (std::size_t i = 0; i < rep.grid.size(); ++i) {
        const double x = rep.grid[i];
        CHECK(rep.ratios[i] == doctest::Approx((2 * x + 1) / (x + 1)).epsilon(1e-10));
    }
}

TEST_CASE("m profile: exponential in, rapidly increasing out") {
    auto xs = default_exponent_grid();
    CHECK(m_profile(make_exponential(1, 1, 1), 2.0, xs).verdict == Verdict::likely_member);
    CHECK(m_profile(make_rapidly_increasing(2.0), 2.0, xs).verdict ==
          Verdict::likely_nonmember);
}

TEST_CASE("moment doubling (Dhat via moments)") {
    auto xs = default_exponent_grid();
    auto w1 = moment_doubling_profile(one(), 2.0, xs);
    CHECK(w1.verdict == Verdict::likely_member);
    CHECK(w1.ratios.front() == doctest::Approx(1.5).epsilon(1e-10));  // x=1: (2x+1)/(x+1)

    auto std1 = moment_doubling_profile(make_standard(1.0), 2.0, xs);
    CHECK(std1.verdict == Verdict::likely_member);
    CHECK(std1.ratios.back() == doctest::Approx(4.0).epsilon(2e-2));  // -> 2^(alpha+1)

    CHECK(moment_doubling_profile(make_exponential(1, 1, 1), 2.0, xs).verdict ==
          Verdict::likely_nonmember);
}

TEST_CASE("classify_weight: the suite verdicts and Dhat-test agreement") {
    struct Expected {
        WeightPtr w;
        Verdict dhat, dcheck, m, d;
    };
    const Verdict in = Verdict::likely_member, out = Verdict::likely_nonmember;
    std::vector<Expected> suite = {
        {make_standard(0.0), in, in, in, in},
        {make_standard(1.0), in, in, in, in},
        {make_standard(2.5), in, in, in, in},
        {make_exponential(1, 1, 1), out, in, in, out},
        {make_exponential(1, 0.5, 1), out, in, in, out},
        {make_rapidly_increasing(2.0), in, out, out, out},
    };
    for (const auto& e : suite) {
        CAPTURE(e.w->describe());
        auto full = classify_weight(e.w);
        CHECK(full.dhat.verdict == e.dhat);
        CHECK(full.dcheck.verdict == e.dcheck);
        CHECK(full.m.verdict == e.m);
        CHECK(full.d == e.d);
        CHECK(full.dhat_tests_agree);
        // Dcheck subset of M on the suite
        if (full.dcheck.verdict == Verdict::likely_member)
            CHECK(full.m.verdict == Verdict::likely_member);
    }
}

TEST_CASE("scale invariance: ratios and verdicts ignore constant factors") {
    auto base = make_standard(1.0);
    auto scaled = make_scaled(37.5, base);
    auto grid = default_radii_grid(*base);
    auto a = dhat_profile(base, grid);
    auto b = dhat_profile(scaled, grid);
    CHECK(a.verdict == b.verdict);
    for (std::size_t i = 0; i < a.ratios.size(); ++i)
        CHECK(a.ratios[i] == doctest::Approx(b.ratios[i]).epsilon(1e-11));
}

TEST_CASE("membership invariant: member verdict implies ratios bounded by c_hat") {
    auto w = make_standard(2.5);
    auto rep = dhat_profile(w, default_radii_grid(*w));
    REQUIRE(rep.verdict == Verdict::likely_member);
    for (double v : rep.ratios) CHECK(v <= rep.c_hat * (1 + 1e-12));
}
