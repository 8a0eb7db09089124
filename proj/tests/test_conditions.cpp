#include "doctest.h"

#include <cmath>

#include "bergman/conditions.hpp"
#include "oracles.hpp"

using namespace bergman;

namespace {
WeightPtr one() { return make_standard(0.0); }
}

TEST_CASE("classify_trend: the three rule archetypes") {
    SUBCASE("constant sequence is bounded") {
        std::vector<double> logs(40, 0.0);
        CHECK(classify_trend(logs).trend == Trend::bounded);
    }
    SUBCASE("exp(0.1 sqrt(n)) diverges once it clears the default ceiling") {
        std::vector<double> logs;
        for (int n = 0; n <= 20000; ++n) logs.push_back(0.1 * std::sqrt(double(n)));
        CHECK(classify_trend(logs).trend == Trend::diverging);
    }
    SUBCASE("oscillation without drift is inconclusive") {
        std::vector<double> logs;
        for (int n = 0; n < 60; ++n) logs.push_back(std::log(1.0 + 0.2 * std::sin(double(n))));
        CHECK(classify_trend(logs).trend == Trend::inconclusive);
    }
    SUBCASE("too few samples is a domain error") {
        std::vector<double> logs(10, 0.0);
        CHECK_THROWS_AS((void)classify_trend(logs), DomainError);
    }
}

TEST_CASE("dp_sequence: omega = nu makes every value 1") {
    auto prof = dp_sequence(one(), one(), 2.0, 60);
    REQUIRE(prof.log_values.size() == 61);
    for (double lv : prof.log_values) CHECK(lv == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(prof.trend.trend == Trend::bounded);
    CHECK(prof.sup_estimate == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dp_sequence: standard self-pair is bounded at p != 2") {
    auto std1 = make_standard(1.0);
    auto prof = dp_sequence(std1, std1, 1.5, 200);
    CHECK(prof.trend.trend == Trend::bounded);
    // limit (2 / (p^{1/p} p'^{1/p'}))^{alpha+1}
    const double p = 1.5, pp = 3.0;
    const double limit = std::pow(2.0 / (std::pow(p, 1 / p) * std::pow(pp, 1 / pp)), 2.0);
    CHECK(prof.sup_estimate < limit * 1.01);
    CHECK(std::exp(prof.log_values.back()) == doctest::Approx(limit).epsilon(1e-2));
}

TEST_CASE("dp_sequence: sigma failure short-circuits to diverging") {
    auto prof = dp_sequence(one(), make_standard(2.0), 2.0, 50);
    CHECK_FALSE(prof.sigma_is_weight);
    CHECK(prof.trend.trend == Trend::diverging);
    CHECK(prof.sup_estimate == std::numeric_limits<double>::infinity());
    CHECK(prof.log_values.empty());
}

TEST_CASE("dp_sequence: the beta-mismatch race diverges by n <= 200") {
    auto nu = make_exponential(1, 0.5, 1);
    auto om = make_exponential(1, 0.75, 1);
    auto prof = dp_sequence(om, nu, 2.0, 200);
    CHECK(prof.sigma_is_weight);
    CHECK(prof.trend.trend == Trend::diverging);
}

TEST_CASE("ap_profile: omega = nu gives the constant-1 profile") {
    auto std1 = make_standard(1.0);
    auto prof = ap_profile(std1, std1, 2.0, pair_radii_grid(std1, std1, 2.0));
    for (double lv : prof.log_values) CHECK(lv == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(prof.trend.trend == Trend::bounded);
}

TEST_CASE("ap_profile: bounded standard pair, r = 0 matches the L1-norm quotient") {
    auto om = make_standard(1.0);
    auto nu = one();
    std::vector<double> radii{0.0};
    auto grid = pair_radii_grid(om, nu, 2.0);
    radii.insert(radii.end(), grid.begin(), grid.end());
    auto prof = ap_profile(om, nu, 2.0, radii);
    CHECK(prof.trend.trend == Trend::bounded);
    // sigma = 4(1-r^2)^2; the r=0 value is ||nu||^{1/2} ||sigma||^{1/2} / ||omega||
    // in the t dt measure: (1/2)^{1/2} (2/3)^{1/2} / (1/2)
    const double expected = std::sqrt(0.5) * std::sqrt(2.0 / 3.0) / 0.5;
    CHECK(prof.value(0) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("mp_profile: closed-form values for the constant weight") {
    std::vector<double> radii{0.0, 0.5};
    for (double u = 0.45; u > 1e-6; u *= 0.75) radii.push_back(1.0 - u);
    auto prof = mp_profile(one(), one(), 2.0, radii);
    CHECK(prof.value(0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
    // inner(0.5) = 2/3 by the antiderivative d/ds 1/(1-s^2); tail = 0.375
    CHECK(prof.value(1) == doctest::Approx(std::sqrt(5.0 / 3.0) * std::sqrt(0.375)).epsilon(1e-9));
    CHECK(prof.trend.trend == Trend::bounded);
}

TEST_CASE("mp_profile: bounded whenever the A_p profile is bounded (suite spot checks)") {
    auto om = make_standard(1.0);
    auto nu = one();
    auto radii = pair_radii_grid(om, nu, 2.0);
    auto ap = ap_profile(om, nu, 2.0, radii);
    auto mp = mp_profile(om, nu, 2.0, radii);
    REQUIRE(ap.trend.trend == Trend::bounded);
    CHECK(mp.trend.trend == Trend::bounded);
}

TEST_CASE("holder floors: equality case and generic pairs") {
    auto std1 = make_standard(1.0);
    SUBCASE("omega = nu has zero slack") {
        auto slack = holder_floor_check(std1, std1, 2.0, pair_radii_grid(std1, std1, 2.0));
        CHECK(std::abs(slack.ap_slack) < 1e-10);
        CHECK(std::abs(slack.dp_slack) < 1e-10);
    }
    SUBCASE("standard pair keeps nonnegative slack") {
        auto nu = make_standard(2.0);
        auto slack = holder_floor_check(one(), nu, 2.0, pair_radii_grid(one(), nu, 2.0));
        CHECK(slack.worst >= -1e-9);
    }
    SUBCASE("exponential self-pair at p = 3 stays above the floor for n <= 100") {
        auto e = make_exponential(1, 1, 1);
        auto slack = holder_floor_check(e, e, 3.0, pair_radii_grid(e, e, 3.0), 100);
        CHECK(slack.dp_slack >= -1e-9);
        CHECK(slack.ap_slack >= -1e-9);
    }
}

TEST_CASE("integration identity: exact-calculus cross-check by quadrature") {
    SUBCASE("constant pair at t = 0 equals sqrt(2) on both sides") {
        CHECK(integration_identity_check(one(), one(), 2.0, {0.0}) < 1e-6);
    }
    SUBCASE("suite pairs at t in {0, 0.5, 0.9}") {
        const std::vector<double> ts{0.0, 0.5, 0.9};
        CHECK(integration_identity_check(make_standard(1.0), make_standard(1.0), 3.0, ts) < 1e-6);
        CHECK(integration_identity_check(make_standard(1.0), one(), 2.0, ts) < 1e-6);
        auto e = make_exponential(1, 0.5, 1);
        CHECK(integration_identity_check(e, e, 2.0, ts) < 1e-6);
        CHECK(integration_identity_check(make_exponential(2.0 / 3.0, 0.5, 1),
                                         make_exponential(1, 0.5, 1), 3.0, ts) < 1e-6);
    }
}

TEST_CASE("dp uses real-valued moment exponents (no integer rounding)") {
    // p = 1.5: indices np+1 = 1.5n+1 and np'+1 = 3n+1 must be used as-is;
    // cross-check value(3) against directly computed moments
    auto om = make_standard(1.0);
    auto nu = make_standard(0.5);
    auto sigma = sigma_weight(om, nu, 1.5);
    REQUIRE(sigma.is_weight);
    auto prof = dp_sequence(om, nu, 1.5, 40);
    const double n = 3.0, p = 1.5, pp = 3.0;
    const double direct = log_moment(*nu, n * p + 1) / p + log_moment(*sigma.weight, n * pp + 1) / pp
                        - log_moment(*om, 2 * n + 1);
    CHECK(prof.log_values[3] == doctest::Approx(direct).epsilon(1e-12));
    // dense-n mode samples fractional indices
    auto dense = dp_sequence(om, nu, 1.5, 40, {}, 0.5);
    CHECK(dense.axis.size() == 81);
    CHECK(dense.axis[1] == doctest::Approx(0.5));
}

TEST_CASE("class transfer checks on representative pairs") {
    SUBCASE("standard self-pair: everything checked and passing") {
        auto std1 = make_standard(1.0);
        auto rep = class_transfer_checks(std1, std1, 2.0);
        CHECK(rep.dp_ap_checked);
        CHECK(rep.dp_ap_agree);
        CHECK(rep.dhat_checked);
        CHECK(rep.dhat_agree);
        CHECK(rep.all_pass());
    }
    SUBCASE("bounded standard pair transfers Dhat and M") {
        auto rep = class_transfer_checks(make_standard(1.0), one(), 2.0);
        CHECK(rep.dp_ap_agree);
        CHECK(rep.dhat_checked);
        CHECK(rep.dhat_agree);
        CHECK(rep.m_checked);
        CHECK(rep.m_transfers);
    }
    SUBCASE("sigma failure keeps dp and ap in agreement") {
        auto rep = class_transfer_checks(one(), make_standard(2.0), 2.0);
        CHECK(rep.dp_ap_checked);
        CHECK(rep.dp_trend == Trend::diverging);
        CHECK(rep.ap_trend == Trend::diverging);
        CHECK(rep.dp_ap_agree);
    }
}
