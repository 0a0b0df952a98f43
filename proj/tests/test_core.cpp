#include "nrfdr/core.hpp"
#include "nrfdr/rng.hpp"

#include <doctest.h>

#include <limits>

using namespace nrfdr;

namespace {

RejectionOutcome outcome_from(std::initializer_list<int> flags) {
    RejectionOutcome out;
    for (int f : flags) out.rejected.push_back(f ? 1 : 0);
    return out;
}

HypothesisLabels labels_from(std::initializer_list<int> flags) {
    HypothesisLabels out;
    for (int f : flags) out.theta.push_back(f ? 1 : 0);
    return out;
}

}  // namespace

TEST_CASE("ZMatrix validates shape and finiteness") {
    CHECK_NOTHROW(ZMatrix(Eigen::MatrixXd::Zero(3, 2)));
    CHECK_THROWS_AS(ZMatrix(Eigen::MatrixXd(0, 2)), InputError);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ZMatrix{bad}, InputError);
    bad(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(ZMatrix{bad}, InputError);
}

TEST_CASE("confusion_counts on the worked examples") {
    SUBCASE("all rejected, all null") {
        const auto c = confusion_counts(labels_from({0, 0, 0, 0}),
                                        outcome_from({1, 1, 1, 1}));
        CHECK(c.v == 4);
        CHECK(c.u == 0);
        CHECK(c.s == 0);
        CHECK(c.t == 0);
    }
    SUBCASE("nothing rejected") {
        const auto c = confusion_counts(labels_from({0, 1, 0, 1, 0}),
                                        outcome_from({0, 0, 0, 0, 0}));
        CHECK(c.u == 3);
        CHECK(c.t == 2);
        CHECK(c.v == 0);
        CHECK(c.s == 0);
    }
    SUBCASE("mixed hand enumeration") {
        const auto c = confusion_counts(labels_from({0, 1, 0, 1}),
                                        outcome_from({1, 1, 0, 0}));
        CHECK(c.v == 1);
        CHECK(c.s == 1);
        CHECK(c.u == 1);
        CHECK(c.t == 1);
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(
            confusion_counts(labels_from({0, 1}), outcome_from({1})),
            InputError);
    }
}

TEST_CASE("fdp examples") {
    CHECK(fdp({0, 0, 0, 0}) == 0.0);  // r v 1 guard
    CHECK(fdp({.u = 0, .v = 1, .t = 0, .s = 9}) == doctest::Approx(0.1));
    CHECK(fdp({.u = 0, .v = 4, .t = 0, .s = 0}) == 1.0);
}

TEST_CASE("fnp examples") {
    CHECK(fnp({.u = 5, .v = 0, .t = 0, .s = 0}, 5) == 0.0);
    // T=2, n=10, R=5.
    CHECK(fnp({.u = 3, .v = 2, .t = 2, .s = 3}, 10) == doctest::Approx(0.4));
    // Everything rejected: divisor guard.
    CHECK(fnp({.u = 0, .v = 4, .t = 0, .s = 6}, 10) == 0.0);
    CHECK_THROWS_AS(fnp({.u = 1, .v = 1, .t = 1, .s = 1}, 5), InputError);
}

TEST_CASE("counts reconcile and rates stay in [0,1] on random pairs") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 40);
        HypothesisLabels labels;
        RejectionOutcome outcome;
        for (std::size_t i = 0; i < n; ++i) {
            labels.theta.push_back(rng.bernoulli(0.3) ? 1 : 0);
            outcome.rejected.push_back(rng.bernoulli(0.4) ? 1 : 0);
        }
        const auto c = confusion_counts(labels, outcome);
        REQUIRE(c.total() == n);
        REQUIRE(c.u + c.v == labels.null_count());
        const double a = fdp(c);
        const double b = fnp(c, n);
        REQUIRE(a >= 0.0);
        REQUIRE(a <= 1.0);
        REQUIRE(b >= 0.0);
        REQUIRE(b <= 1.0);
    }
}
