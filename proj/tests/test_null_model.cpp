#include "nrfdr/null_model.hpp"

#include "nrfdr/density.hpp"
#include "nrfdr/kde.hpp"
#include "nrfdr/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

using namespace nrfdr;

TEST_CASE("log density of the standard normal") {
    Eigen::VectorXd z1 = Eigen::VectorXd::Zero(1);
    CHECK(log_standard_normal(z1) == doctest::Approx(-0.9189385).epsilon(1e-6));
    Eigen::VectorXd z2 = Eigen::VectorXd::Zero(2);
    CHECK(log_standard_normal(z2) == doctest::Approx(-1.8378771).epsilon(1e-6));
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd z(3);
        z << rng.normal(), rng.normal(), rng.normal();
        REQUIRE(log_standard_normal(z) ==
                doctest::Approx(log_standard_normal((-z).eval())).epsilon(1e-14));
    }
}

TEST_CASE("ball radius for a given tail mass") {
    CHECK(ball_radius_for_tail(2, 0.01) ==
          doctest::Approx(std::sqrt(-2.0 * std::log(0.01))).epsilon(1e-10));
    CHECK(ball_radius_for_tail(2, 0.01) == doctest::Approx(3.03485).epsilon(1e-5));
    CHECK(ball_radius_for_tail(1, 0.05) == doctest::Approx(1.95996).epsilon(1e-5));
    CHECK(ball_radius_for_tail(3, 0.999999) < 0.05);  // full-mass limit
    CHECK_THROWS_AS(ball_radius_for_tail(2, 0.0), InputError);
    CHECK_THROWS_AS(ball_radius_for_tail(2, 1.0), InputError);
    CHECK_THROWS_AS(ball_radius_for_tail(0, 0.5), InputError);
}

TEST_CASE("null pool determinism and moments") {
    const NullSamplePool a(3, 20000, 99);
    const NullSamplePool b(3, 20000, 99);
    CHECK(a.samples() == b.samples());

    const double m = static_cast<double>(a.size());
    for (int j = 0; j < 3; ++j) {
        const double mean = a.samples().col(j).mean();
        REQUIRE(std::abs(mean) < 4.0 / std::sqrt(m));
        const double var = (a.samples().col(j).array() - mean).square().sum() / m;
        REQUIRE(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / m));
    }
}

TEST_CASE("estimate_f0 basics") {
    const NullSamplePool pool(2, 100000, 7);
    CHECK(estimate_f0(pool, Region(2)) == 0.0);
    CHECK(estimate_f0(pool, Region(2).extended(BallComplement{0.0})) == 1.0);
    const double tail =
        estimate_f0(pool, Region(2).extended(BallComplement{3.03485}));
    CHECK(std::abs(tail - 0.01) < 0.003);
    const NullSamplePool pool3(3, 100, 7);
    CHECK_THROWS_AS(estimate_f0(pool3, Region(2)), InputError);
}

TEST_CASE("radius and estimator are mutually consistent") {
    const NullSamplePool pool(4, 100000, 17);
    for (double q_prime : {0.2, 0.05, 0.01}) {
        const double lambda = ball_radius_for_tail(4, q_prime);
        const double est =
            estimate_f0(pool, Region(4).extended(BallComplement{lambda}));
        const double se = std::sqrt(q_prime * (1 - q_prime) / 100000.0);
        REQUIRE(std::abs(est - q_prime) < 4.0 * se);
    }
}

TEST_CASE("estimator is monotone over nested regions") {
    const NullSamplePool pool(2, 30000, 23);
    Region small = Region(2).extended(BallComplement{2.5});
    Region large = small.extended(BallComplement{2.0});
    CHECK(estimate_f0(pool, small) <= estimate_f0(pool, large));
}

TEST_CASE("tracker equals a fresh recount at every step") {
    const NullSamplePool pool(2, 20000, 31);
    RegionF0Tracker tracker(pool);

    Rng rng(32);
    Eigen::MatrixXd support(15, 2);
    for (int i = 0; i < 15; ++i) {
        support(i, 0) = rng.normal() + 1.2;
        support(i, 1) = rng.normal() - 0.4;
    }
    const auto kde = std::make_shared<ProductKernelDensity>(
        support, kde_bandwidths(support), 15.0);

    Region region(2);
    std::vector<Stage> stages{
        BallComplement{3.2},
        LikelihoodLevelSet::from_log_threshold(kde, 1.5),
        LikelihoodLevelSet::from_log_threshold(kde, 0.5),
        LikelihoodLevelSet::from_log_threshold(kde, -0.5),
        BallComplement{2.4},
    };
    for (const Stage& stage : stages) {
        region = region.extended(stage);
        const double cached = tracker.update(region);
        const double fresh = estimate_f0(pool, region);
        REQUIRE(cached == fresh);  // exact equality, same comparisons
    }
}

TEST_CASE("tracker rejects shrinking regions") {
    const NullSamplePool pool(2, 100, 3);
    RegionF0Tracker tracker(pool);
    Region region = Region(2).extended(BallComplement{1.0});
    tracker.update(region);
    CHECK_THROWS_AS(tracker.update(Region(2)), InputError);
}

TEST_CASE("whitening leaves already-white data unchanged") {
    // Columns exactly orthogonal with unit sample variance.
    Eigen::MatrixXd x(4, 2);
    const double a = 1.0 / std::sqrt(4.0 / 3.0);  // sample sd 1 for +/-1 pattern
    x << -a, -a, -a, a, a, -a, a, a;
    const ZMatrix out = whiten(ZMatrix(x));
    CHECK((out.values() - x).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("whitening forces identity sample correlation") {
    Rng rng(41);
    const int n = 400;
    Eigen::MatrixXd x(n, 2);
    for (int i = 0; i < n; ++i) {
        const double u = rng.normal();
        const double v = rng.normal();
        x(i, 0) = u;
        x(i, 1) = 0.9 * u + std::sqrt(1 - 0.81) * v;  // correlation 0.9
    }
    const ZMatrix out = whiten(ZMatrix(x));

    const Eigen::RowVectorXd mean = out.values().colwise().mean();
    const Eigen::MatrixXd centered = out.values().rowwise() - mean;
    Eigen::MatrixXd cov = centered.transpose() * centered / double(n - 1);
    Eigen::VectorXd inv_sd = cov.diagonal().array().rsqrt();
    const Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
    CHECK((corr - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("whitening preconditions") {
    CHECK_THROWS_AS(whiten(ZMatrix(Eigen::MatrixXd::Random(2, 2))), InputError);
    Eigen::MatrixXd constant_col(5, 2);
    constant_col.col(0) = Eigen::VectorXd::LinSpaced(5, -1, 1);
    constant_col.col(1).setConstant(2.0);
    CHECK_THROWS_AS(whiten(ZMatrix(constant_col)), NumericalError);
    // Perfectly collinear columns make the correlation singular.
    Eigen::MatrixXd collinear(6, 2);
    collinear.col(0) = Eigen::VectorXd::LinSpaced(6, -1, 1);
    collinear.col(1) = 2.0 * collinear.col(0);
    CHECK_THROWS_AS(whiten(ZMatrix(collinear)), NumericalError);
}
