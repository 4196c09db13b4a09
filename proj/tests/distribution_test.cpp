#include "qmclab/distribution.hpp"

#include <cmath>
#include <doctest.h>

#include "oracles.hpp"
#include "qmclab/numerics.hpp"
#include "qmclab/rng.hpp"

using namespace qmclab;

namespace {

const double kLn99 = std::log(99.0);

ContinuousDistribution normal_unit() { return truncate(Family::Normal, 0.0, 1.0, 1e-9); }

}  // namespace

TEST_CASE("truncate exponential: natural lower bound, closed-form upper quantile") {
    const auto d = truncate(Family::Exponential, 1.0, 0.0, 1e-9);
    CHECK(d.lower == 0.0);
    CHECK(d.upper == doctest::Approx(-std::log(1e-9)).epsilon(1e-14));
    CHECK(d.upper == doctest::Approx(20.7232658369).epsilon(1e-9));
    CHECK(d.shift == 0.0);
    CHECK(d.family_cdf(d.lower) <= 1e-9);
    CHECK(d.family_survival(d.upper) <= 1e-9 * (1 + 1e-12));
}

TEST_CASE("truncate normal: support width and mean shift match the quantile oracle") {
    const auto d = normal_unit();
    // Work in the lower tail, where both oracle and library keep precision.
    const double q = -oracles::bisect_normal_quantile(1e-9);
    CHECK(d.lower == 0.0);
    CHECK(d.width() == doctest::Approx(2.0 * q).epsilon(1e-12));
    CHECK(d.shift == doctest::Approx(q).epsilon(1e-12));  // mean sits at q after the shift
    CHECK(d.family_cdf(d.lower) <= 1e-9 * (1 + 1e-9));
    CHECK(d.family_survival(d.upper) <= 1e-9 * (1 + 1e-9));
}

TEST_CASE("truncate logistic at 0.01 tails: width 2 ln 99") {
    const auto d = truncate(Family::Logistic, 0.0, 1.0, 0.01);
    CHECK(d.width() == doctest::Approx(2.0 * kLn99).epsilon(1e-13));
    CHECK(d.width() == doctest::Approx(9.1902397).epsilon(1e-8));
    CHECK(d.lower == 0.0);
}

TEST_CASE("truncate rejects bad parameters and tolerances") {
    CHECK_THROWS_AS(truncate(Family::Normal, 0.0, -1.0, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(truncate(Family::Exponential, 0.0, 0.0, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(truncate(Family::Normal, std::nan(""), 1.0, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(truncate(Family::Normal, 0.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(truncate(Family::Normal, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("density is log-concave on a fine probe grid") {
    for (const auto& d : {normal_unit(), truncate(Family::Exponential, 1.0, 0.0, 1e-9),
                          truncate(Family::Logistic, 0.0, 1.0, 1e-9)}) {
        CHECK(log_concavity_probe(d));
    }
}

TEST_CASE("beta dominates the probe-grid slope of the density") {
    for (const auto& d : {normal_unit(), truncate(Family::Exponential, 2.0, 0.0, 1e-9),
                          truncate(Family::Logistic, 0.0, 0.5, 1e-6)}) {
        CHECK(d.beta >= estimate_slope_bound(d));
        CHECK(d.beta > 0.0);
    }
}

TEST_CASE("discretize uniform density on [0,1) with n=2") {
    const auto d = truncate(Family::Uniform, 0.0, 1.0, 1e-9);
    const auto disc = discretize(d, 2);
    REQUIRE(disc.size() == 4);
    for (double p : disc.probs) CHECK(p == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("discretize exponential at n=1: two-cell ratio has closed form") {
    const auto d = truncate(Family::Exponential, 1.0, 0.0, 1e-9);
    const auto disc = discretize(d, 1);
    const double ratio = disc.probs[0] / (disc.probs[0] + disc.probs[1]);
    CHECK(ratio == doctest::Approx(1.0 / (1.0 + std::exp(-d.width() / 2.0))).epsilon(1e-13));
}

TEST_CASE("discretize truncated normal n=10 matches per-cell quadrature") {
    const auto d = normal_unit();
    const auto disc = discretize(d, 10);
    const auto oracle = oracles::quadrature_cell_masses(d, 10, 1024);
    for (std::size_t i = 0; i < disc.size(); ++i) {
        CHECK(std::abs(disc.probs[i] - oracle[i]) <= 1e-3 * oracle[i]);
    }
}

TEST_CASE("discretize output is normalized and log-concave for all families") {
    for (const auto& d : {normal_unit(), truncate(Family::Exponential, 1.0, 0.0, 1e-9),
                          truncate(Family::Logistic, 0.0, 1.0, 1e-9)}) {
        for (int n : {1, 4, 10, 16, 20}) {
            const auto disc = discretize(d, n);
            CHECK(std::abs(compensated_sum(disc.probs) - 1.0) <= 1e-12);
            CHECK(disc.is_log_concave());
            for (double p : disc.probs) CHECK(p >= 0.0);
        }
    }
}

TEST_CASE("discretize refinement: n+1 aggregated in pairs reproduces n") {
    for (const auto& d : {normal_unit(), truncate(Family::Exponential, 1.0, 0.0, 1e-9),
                          truncate(Family::Logistic, 0.0, 1.0, 1e-9)}) {
        for (int n : {2, 6, 10}) {
            const auto coarse = discretize(d, n);
            const auto fine = discretize(d, n + 1);
            for (std::size_t i = 0; i < coarse.size(); ++i) {
                const double pair = fine.probs[2 * i] + fine.probs[2 * i + 1];
                CHECK(std::abs(pair - coarse.probs[i]) <= 1e-3);
            }
        }
    }
}

TEST_CASE("discretize enforces the qubit range") {
    const auto d = normal_unit();
    CHECK_THROWS_AS(discretize(d, 0), std::invalid_argument);
    CHECK_THROWS_AS(discretize(d, 21), std::invalid_argument);
}

TEST_CASE("exact_mean: uniform and point-mass cases") {
    CHECK(exact_mean(DiscretizedDistribution::uniform(2)) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(exact_mean(DiscretizedDistribution::point_mass(2, 3)) == 3.0);
}

TEST_CASE("exact_mean: truncated normal n=12 against direct summation") {
    const auto disc = discretize(normal_unit(), 12);
    const double oracle = static_cast<double>(oracles::brute_mean_index(disc.probs));
    CHECK(std::abs(exact_mean(disc) - oracle) <= 1e-12);
}

TEST_CASE("exact_mean equals brute-force summation on random pmfs") {
    Rng rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(8));
        const auto probs = oracles::random_log_concave_pmf(rng, n);
        const auto disc = DiscretizedDistribution::from_probs(n, probs);
        CHECK(std::abs(exact_mean(disc) - static_cast<double>(oracles::brute_mean_index(probs))) <=
              1e-12);
    }
}

TEST_CASE("left_mass: uniform is exactly one half") {
    CHECK(left_mass(DiscretizedDistribution::uniform(3)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("left_mass: symmetric truncated normal is 0.5 at every n") {
    const auto d = normal_unit();
    for (int n = 1; n <= 12; ++n) {
        CHECK(std::abs(left_mass(discretize(d, n)) - 0.5) <= 1e-12);
    }
}

TEST_CASE("left_mass: truncated exponential n=8 matches CDF ratio and brute force") {
    const auto d = truncate(Family::Exponential, 1.0, 0.0, 1e-9);
    const auto disc = discretize(d, 8);
    const double mid = d.lower + d.width() / 2.0;
    const double cdf_ratio = (d.family_cdf(mid) - d.family_cdf(d.lower)) /
                             (d.family_cdf(d.upper) - d.family_cdf(d.lower));
    const double brute = static_cast<double>(oracles::brute_left_mass(disc.probs));
    CHECK(left_mass(disc) == doctest::Approx(brute).epsilon(1e-14));
    CHECK(left_mass(disc) == doctest::Approx(cdf_ratio).epsilon(1e-12));
}

TEST_CASE("half_gap_k: uniform cases have closed forms") {
    const auto disc2 = DiscretizedDistribution::uniform(2);
    CHECK(half_gap_k(disc2) == doctest::Approx(2.0).epsilon(1e-14));
    for (int n : {1, 3, 5, 8}) {
        CHECK(half_gap_k(DiscretizedDistribution::uniform(n)) ==
              doctest::Approx(std::pow(2.0, n - 1)).epsilon(1e-12));
    }
}

TEST_CASE("half_gap_k: truncated normal n=10 against brute conditional means") {
    const auto disc = discretize(normal_unit(), 10);
    const auto cm = oracles::brute_conditional_means(disc.probs);
    CHECK(std::abs(half_gap_k(disc) - static_cast<double>(cm.right - cm.left)) <= 1e-12);
}

TEST_CASE("half_gap_k rejects degenerate halves") {
    CHECK_THROWS_AS(half_gap_k(DiscretizedDistribution::point_mass(2, 3)), std::domain_error);
    CHECK_THROWS_AS(half_gap_k(DiscretizedDistribution::point_mass(2, 0)), std::domain_error);
}

TEST_CASE("symmetric families: mean sits at the grid center") {
    for (const auto& d : {normal_unit(), truncate(Family::Logistic, 0.0, 1.0, 1e-9)}) {
        for (int n : {4, 8, 10}) {
            const auto disc = discretize(d, n);
            const double center = (std::pow(2.0, n) - 1.0) / 2.0;
            CHECK(std::abs(exact_mean(disc) - center) <= 1e-9);
        }
    }
}

TEST_CASE("discretization error report: uniform density is represented exactly") {
    const auto d = truncate(Family::Uniform, 0.0, 1.0, 1e-9);
    const auto report = discretization_error_report(d, 4);
    CHECK(report.measured <= 1e-12);
    CHECK(report.bound >= 0.0);
}

TEST_CASE("discretization error report: bound formula plug-in") {
    CHECK(riemann_mean_error_bound(0.4, 12.0, 1024.0) ==
          doctest::Approx(2.747e-5).epsilon(2e-4));
    CHECK(riemann_mean_error_bound(0.4, 12.0, 1024.0) ==
          doctest::Approx(0.2 * (12.0 / 1024.0) * (12.0 / 1024.0)).epsilon(1e-15));
}

TEST_CASE("discretization error decays with exponent >= 1 for smooth families") {
    // Symmetric families decay at exactly N^-1 (half-cell offset of the
    // left-Riemann pmf), so a float-noise guard keeps the boundary case
    // deterministic; the exponential decays at N^-2.
    for (const auto& d : {normal_unit(), truncate(Family::Exponential, 1.0, 0.0, 1e-9),
                          truncate(Family::Logistic, 0.0, 1.0, 1e-9)}) {
        std::vector<double> xs, ys;
        for (int n = 6; n <= 14; ++n) {
            const auto report = discretization_error_report(d, n);
            REQUIRE(report.measured > 0.0);
            xs.push_back(n * std::log10(2.0));
            ys.push_back(std::log10(report.measured));
        }
        const LinearFit fit = ols_fit(xs, ys);
        CHECK(-fit.slope >= 1.0 - 1e-6);
    }
    const auto expo = truncate(Family::Exponential, 1.0, 0.0, 1e-9);
    std::vector<double> xs, ys;
    for (int n = 6; n <= 14; ++n) {
        xs.push_back(n * std::log10(2.0));
        ys.push_back(std::log10(discretization_error_report(expo, n).measured));
    }
    CHECK(-ols_fit(xs, ys).slope == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("mean_by_quadrature agrees with closed-form truncated means") {
    for (const auto& d :
         {normal_unit(), truncate(Family::Exponential, 1.0, 0.0, 1e-9),
          truncate(Family::Logistic, 0.0, 1.0, 1e-9), truncate(Family::Uniform, 0.0, 1.0, 1e-9),
          truncate(Family::Normal, 3.0, 0.5, 1e-6), truncate(Family::Exponential, 4.0, 0.0, 1e-4)}) {
        const double closed = oracles::closed_form_truncated_mean(d);
        CHECK(d.mean_by_quadrature() == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("from_probs validates shape, sign, normalization, log-concavity") {
    CHECK_THROWS_AS(DiscretizedDistribution::from_probs(2, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretizedDistribution::from_probs(1, {0.7, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretizedDistribution::from_probs(1, {1.2, -0.2}), std::invalid_argument);
    // 0.4, 0.1, 0.4 bulges: 0.1^2 < 0.4 * 0.4
    CHECK_THROWS_AS(DiscretizedDistribution::from_probs(2, {0.4, 0.1, 0.4, 0.1}),
                    std::invalid_argument);
    CHECK_NOTHROW(DiscretizedDistribution::from_probs(2, {0.1, 0.4, 0.4, 0.1}));
}

TEST_CASE("grid mapping matches x_l + i * dx / N") {
    const auto d = truncate(Family::Exponential, 1.0, 0.0, 1e-9);
    const auto disc = discretize(d, 3);
    const double dx = d.width() / 8.0;
    for (std::size_t i = 0; i < disc.size(); ++i) {
        CHECK(disc.grid_x(i) == doctest::Approx(d.lower + dx * i).epsilon(1e-15));
    }
}
