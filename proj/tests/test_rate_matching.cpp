#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <qprov/rate_matching.hpp>

using namespace qprov;

namespace {
constexpr double kCapacityAnchor = 1.4449;  // service-side effective capacity used throughout
}

TEST_CASE("zero capacity supports zero traffic in every family") {
    CHECK(max_arrival_dtms(0.5, 0.5, 0.0, {1.0}).lambda_on_star == 0.0);
    CHECK(max_arrival_dtms_simplified({0.5}, 0.0, {1.0}).lambda_avg_star == 0.0);
    CHECK(max_arrival_mfs(5.0, 5.0, 0.0, {1.0}).lambda_on_star == 0.0);
    CHECK(max_arrival_mmps(5.0, 5.0, 0.0, {1.0}).lambda_on_star == 0.0);
    CHECK(invert_bandwidth(SourceModel{MfsSource{5.0, 5.0, 0.0}}, 0.0, {1.0}).lambda_on_star ==
          0.0);
}

TEST_CASE("constant-rate sources pass exactly the effective capacity") {
    const auto r = max_arrival_dtms(0.0, 1.0, kCapacityAnchor, {1.0});
    CHECK(r.lambda_on_star == doctest::Approx(kCapacityAnchor).epsilon(1e-12));
    CHECK(r.lambda_avg_star == doctest::Approx(kCapacityAnchor).epsilon(1e-12));
    const auto rs = max_arrival_dtms_simplified({1.0}, kCapacityAnchor, {1.0});
    CHECK(rs.lambda_avg_star == doctest::Approx(kCapacityAnchor).epsilon(1e-12));
    const auto rf = max_arrival_mfs(5.0, 0.0, kCapacityAnchor, {1.0});
    CHECK(rf.lambda_avg_star == doctest::Approx(kCapacityAnchor).epsilon(1e-12));
}

TEST_CASE("DTMS matching anchor and residual") {
    const auto r = max_arrival_dtms(0.5, 0.5, kCapacityAnchor, {1.0});
    CHECK(r.lambda_avg_star == doctest::Approx(1.0063072658159181).epsilon(1e-12));
    CHECK(r.lambda_on_star == doctest::Approx(2.0126145316318362).epsilon(1e-12));
    CHECK(r.method == MatchMethod::closed_form);
    CHECK(std::abs(r.residual) <= 1e-8 * std::max(1.0, kCapacityAnchor));
    CHECK(r.lambda_avg_star ==
          doctest::Approx(r.lambda_on_star * steady_state_on(DtmsSource{0.5, 0.5, 0.0}))
              .epsilon(1e-12));
}

TEST_CASE("burstiness form equals the general DTMS form") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double s = 0.02 + u(gen) * 0.98;
        const double c = u(gen) * 3.0;
        const double th = std::exp(u(gen) * 6.0 - 3.0);
        const auto a = max_arrival_dtms(1.0 - s, s, c, {th});
        const auto b = max_arrival_dtms_simplified({s}, c, {th});
        CHECK(b.lambda_avg_star ==
              doctest::Approx(a.lambda_avg_star).epsilon(1e-12));
    }
    const auto r = max_arrival_dtms_simplified({0.5}, kCapacityAnchor, {1.0});
    CHECK(r.lambda_avg_star == doctest::Approx(1.0063072658159181).epsilon(1e-12));
}

TEST_CASE("vanishing burstiness parameter: average collapses, peak explodes") {
    const auto tiny = max_arrival_dtms_simplified({1e-6}, kCapacityAnchor, {1.0});
    const auto unit = max_arrival_dtms_simplified({1.0}, kCapacityAnchor, {1.0});
    CHECK(tiny.lambda_avg_star > 0.0);
    CHECK(tiny.lambda_avg_star < 1e-4 * unit.lambda_avg_star * 20.0);
    CHECK(tiny.lambda_on_star > 10.0);
}

TEST_CASE("MFS matching anchor and residual") {
    const auto r = max_arrival_mfs(5.0, 5.0, kCapacityAnchor, {1.0});
    CHECK(r.lambda_avg_star == doctest::Approx(1.2829319314496734).epsilon(1e-12));
    CHECK(std::abs(r.residual) <= 1e-8 * std::max(1.0, kCapacityAnchor));
}

TEST_CASE("MMPS matching is solved by bisection") {
    const auto r = max_arrival_mmps(5.0, 5.0, kCapacityAnchor, {1.0});
    CHECK(r.method == MatchMethod::bisection);
    CHECK(r.lambda_on_star == doctest::Approx(1.4932730012051707).epsilon(1e-9));
    CHECK(r.lambda_avg_star == doctest::Approx(0.7466365006025854).epsilon(1e-9));
    CHECK(std::abs(r.residual) <= 1e-10 * std::max(1.0, kCapacityAnchor));
}

TEST_CASE("the quoted MMPS closed form violates the matching condition") {
    const auto printed = max_arrival_mmps_closed_form(5.0, 5.0, kCapacityAnchor, {1.0});
    CHECK(printed.lambda_avg_star == doctest::Approx(1.1049912228198888).epsilon(1e-12));
    CHECK(std::abs(printed.residual) > 0.01);  // way off the matching point
    // and it collapses at loose exponents instead of recovering the capacity
    const auto loose = max_arrival_mmps_closed_form(5.0, 5.0, kCapacityAnchor, {1e-8});
    CHECK(loose.lambda_avg_star < 0.01 * kCapacityAnchor);
}

TEST_CASE("loose-exponent limit recovers the capacity in every family") {
    const QosExponent q{1e-8};
    CHECK(std::abs(max_arrival_dtms(0.5, 0.5, kCapacityAnchor, q).lambda_avg_star -
                   kCapacityAnchor) /
              kCapacityAnchor <
          1e-4);
    CHECK(std::abs(max_arrival_mfs(5.0, 5.0, kCapacityAnchor, q).lambda_avg_star -
                   kCapacityAnchor) /
              kCapacityAnchor <
          1e-4);
    CHECK(std::abs(max_arrival_mmps(5.0, 5.0, kCapacityAnchor, q).lambda_avg_star -
                   kCapacityAnchor) /
              kCapacityAnchor <
          1e-4);
}

TEST_CASE("generic inversion agrees with the closed forms") {
    const auto dt = invert_bandwidth(SourceModel{DtmsSource{0.5, 0.5, 0.0}}, kCapacityAnchor,
                                     {1.0});
    CHECK(dt.lambda_avg_star == doctest::Approx(1.0063072658159181).epsilon(1e-8));
    const auto mf = invert_bandwidth(SourceModel{MfsSource{5.0, 5.0, 0.0}}, kCapacityAnchor,
                                     {1.0});
    CHECK(mf.lambda_avg_star == doctest::Approx(1.2829319314496734).epsilon(1e-8));
    CHECK(dt.method == MatchMethod::bisection);
}

TEST_CASE("matching consistency on random instances") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double c = 0.05 + u(gen) * 3.0;
        const double th = std::exp(u(gen) * (std::log(5.0) - std::log(0.01)) + std::log(0.01));
        const QosExponent q{th};
        const int family = i % 3;
        MatchResult r{};
        if (family == 0) {
            r = max_arrival_dtms(0.05 + u(gen) * 0.9, 0.05 + u(gen) * 0.9, c, q);
        } else if (family == 1) {
            r = max_arrival_mfs(0.2 + u(gen) * 10.0, u(gen) * 10.0, c, q);
        } else {
            r = max_arrival_mmps(0.2 + u(gen) * 10.0, u(gen) * 10.0, c, q);
        }
        CHECK(std::abs(r.residual) <= 1e-8 * std::max(1.0, c));
        CHECK(std::isfinite(r.lambda_on_star));
        CHECK(r.lambda_on_star >= 0.0);
    }
}

TEST_CASE("average rate is nonincreasing in theta") {
    for (double c : {0.5, kCapacityAnchor}) {
        double prev[3] = {1e300, 1e300, 1e300};
        for (double th : logspace(1e-3, 20.0, 20)) {
            const QosExponent q{th};
            const double vals[3] = {
                max_arrival_dtms(0.5, 0.5, c, q).lambda_avg_star,
                max_arrival_mfs(5.0, 5.0, c, q).lambda_avg_star,
                max_arrival_mmps(5.0, 5.0, c, q).lambda_avg_star,
            };
            for (int j = 0; j < 3; ++j) {
                CHECK(vals[j] <= prev[j] * (1.0 + 1e-10));
                prev[j] = vals[j];
            }
        }
    }
}

TEST_CASE("family ordering at matched symmetric parameters") {
    // equal P_ON = 1/2 (s = 0.5, p11 = p22 = 0.5, alpha = beta): the Poisson-
    // modulated family supports the least traffic once theta >= 1
    for (double c : {0.5, kCapacityAnchor, 3.0}) {
        for (double th : logspace(1.0, 20.0, 10)) {
            const QosExponent q{th};
            const double dt = max_arrival_dtms(0.5, 0.5, c, q).lambda_avg_star;
            const double mf = max_arrival_mfs(5.0, 5.0, c, q).lambda_avg_star;
            const double mm = max_arrival_mmps(5.0, 5.0, c, q).lambda_avg_star;
            CHECK(mm <= dt * (1.0 + 1e-10));
            CHECK(mm <= mf * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(max_arrival_dtms(1.0, 1.0, 1.0, {1.0}), degenerate_chain);
    CHECK_THROWS_AS(max_arrival_dtms(0.5, 0.5, -1.0, {1.0}), invalid_parameter);
    CHECK_THROWS_AS(max_arrival_dtms(0.5, 0.5, 1.0, {0.0}), invalid_parameter);
    CHECK_THROWS_AS(max_arrival_mfs(0.0, 5.0, 1.0, {1.0}), invalid_parameter);
    CHECK_THROWS_AS(max_arrival_dtms_simplified({0.0}, 1.0, {1.0}), invalid_parameter);
}
