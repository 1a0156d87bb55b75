#include "doctest.h"

#include <random>

#include "aoii/errors.hpp"
#include "aoii/push.hpp"
#include "aoii/sources.hpp"
#include "support/random_chains.hpp"

using namespace aoii;

namespace {

PushPolicy uniform_policy(int k, double theta, int n) {
    return PushPolicy{k, Vec::Constant(n, theta)};
}

} // namespace

TEST_CASE("two-state cycle chain matches the hand assembly") {
    const GeneratorMatrix q = bench::q3();
    const AbsorbingChain c =
        build_push_cycle_chain(q, 0, uniform_policy(1, 1.0, 2), ChannelModel{1.0});

    REQUIRE(c.transient_count() == 2);
    REQUIRE(c.absorbing_count() == 2);
    Mat a(2, 2), b(2, 2);
    a << -1.75, 1, 0, -1.75;
    b << 0.75, 0, 0.75, 1;
    CHECK((c.a - a).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((c.b - b).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(c.beta[0] == 1.0);
    CHECK(c.beta[1] == 0.0);
    REQUIRE(c.transient_labels.size() == 2);
    CHECK(c.transient_labels[0] == "(j=1,l=0)");
    CHECK(c.transient_labels[1] == "(j=1,l=1)");
    CHECK(c.absorbing_labels[0] == "S0");
}

TEST_CASE("second-order threshold expands the stage blocks") {
    const GeneratorMatrix q = bench::q3();
    const AbsorbingChain c =
        build_push_cycle_chain(q, 0, uniform_policy(2, 1.0, 2), ChannelModel{1.0});

    REQUIRE(c.transient_count() == 3); // (k+1)(N-1)
    Mat a(3, 3), b(3, 2);
    a << -2.75, 2, 0, 0, -2.75, 2, 0, 0, -1.75;
    b << 0.75, 0, 0.75, 0, 0.75, 1;
    CHECK((c.a - a).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((c.b - b).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(c.beta[0] == 1.0);
}

TEST_CASE("five-state dimensions and conservation") {
    const GeneratorMatrix q = bench::q1();
    const AbsorbingChain c =
        build_push_cycle_chain(q, 2, uniform_policy(3, 0.7, 5), ChannelModel{1.0});
    REQUIRE(c.transient_count() == 16); // (3+1)(5-1)
    REQUIRE(c.absorbing_count() == 5);
    CHECK(c.beta.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 0; i < 16; ++i)
        CHECK(c.a.row(i).sum() + c.b.row(i).sum() ==
              doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("cycle statistics for the two-state source") {
    const GeneratorMatrix q = bench::q3();
    const CycleStats s =
        push_cycle_stats(q, 0, uniform_policy(1, 1.0, 2), ChannelModel{1.0});
    CHECK(s.duration == doctest::Approx(44.0 / 49 + 2.0).epsilon(1e-14));
    CHECK(s.aoii_area == doctest::Approx(240.0 / 343).epsilon(1e-14));
    CHECK(s.sp_row[0] == doctest::Approx(33.0 / 49).epsilon(1e-14));
    CHECK(s.sp_row[1] == doctest::Approx(16.0 / 49).epsilon(1e-14));
    CHECK(s.samples == doctest::Approx(4.0 / 7).epsilon(1e-14));
}

TEST_CASE("huge thresholds never sample") {
    // As the mean threshold grows the excursion is resolved by the source
    // returning on its own: the cycle ends at the starting sync value and
    // no transmission ever starts.
    const GeneratorMatrix q = bench::q2();
    for (int i = 0; i < 3; ++i) {
        const CycleStats s =
            push_cycle_stats(q, i, uniform_policy(1, 1e9, 3), ChannelModel{1.0});
        CHECK(std::abs(s.sp_row[i] - 1.0) <= 1e-6);
        CHECK(s.samples <= 1e-6);
    }
}

TEST_CASE("area and duration grow with the mean threshold") {
    const GeneratorMatrix q = bench::q2();
    double prev_a = 0, prev_d = 0;
    for (double theta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const CycleStats s =
            push_cycle_stats(q, 1, uniform_policy(2, theta, 3), ChannelModel{1.0});
        CHECK(s.aoii_area >= prev_a);
        CHECK(s.duration >= prev_d);
        prev_a = s.aoii_area;
        prev_d = s.duration;
    }
}

TEST_CASE("randomized conservation properties") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> theta_draw(0.2, 5.0);
    std::uniform_real_distribution<double> mu_draw(0.3, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + int(rng() % 5);
        const GeneratorMatrix q =
            validate_generator(oracle::random_generator(rng, n));
        const int k = 1 + int(rng() % 3);
        Vec theta(n);
        for (int i = 0; i < n; ++i)
            theta[i] = theta_draw(rng);
        const ChannelModel channel{mu_draw(rng)};
        const int i = int(rng() % n);

        const CycleStats s = push_cycle_stats(q, i, PushPolicy{k, theta}, channel);
        CHECK(s.sp_row.sum() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(s.sp_row.minCoeff() >= -1e-12);
        CHECK(s.duration > 1.0 / q.sigma(i));
        CHECK(s.aoii_area > 0);
        // Every absorption at a foreign sync value rode a completed
        // transmission, so the sample count dominates that probability mass.
        CHECK(s.samples >= 1.0 - s.sp_row[i] - 1e-12);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(ChannelModel{0.0}), ValidationError);
    CHECK_THROWS_AS(validate(ChannelModel{-1.0}), ValidationError);
    CHECK_NOTHROW(validate(ChannelModel{2.5}));

    CHECK_THROWS_AS(validate(uniform_policy(0, 1.0, 2), 2), ValidationError);
    CHECK_THROWS_AS(validate(uniform_policy(1, 0.0, 2), 2), ValidationError);
    CHECK_THROWS_AS(validate(uniform_policy(1, -2.0, 2), 2), ValidationError);
    CHECK_THROWS_AS(validate(uniform_policy(1, 1.0, 3), 2), ValidationError);
    Vec nan_theta = Vec::Constant(2, std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(validate(PushPolicy{1, nan_theta}, 2), ValidationError);
    CHECK_NOTHROW(validate(uniform_policy(3, 0.5, 2), 2));
}
