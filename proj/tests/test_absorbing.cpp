#include "doctest.h"

#include <random>

#include "aoii/absorbing.hpp"
#include "aoii/errors.hpp"
#include "support/expm.hpp"
#include "support/random_chains.hpp"

using namespace aoii;

namespace {

AbsorbingChain exp2_chain() {
    Mat a(1, 1), b(1, 1);
    a << -2;
    b << 2;
    RowVec beta(1);
    beta << 1;
    return make_absorbing_chain(a, b, beta);
}

AbsorbingChain erlang2_rate3() {
    Mat a(2, 2), b(2, 1);
    a << -3, 3, 0, -3;
    b << 0, 3;
    RowVec beta(2);
    beta << 1, 0;
    return make_absorbing_chain(a, b, beta);
}

// Out-of-sync excursion chain of cycle 1 of the two-state benchmark source
// at unit request/stage and service rates.
AbsorbingChain q3_cycle1() {
    Mat a(2, 2), b(2, 2);
    a << -1.75, 1, 0, -1.75;
    b << 0.75, 0, 0.75, 1;
    RowVec beta(2);
    beta << 1, 0;
    return make_absorbing_chain(a, b, beta);
}

} // namespace

TEST_CASE("construction checks structural invariants") {
    Mat a(1, 1), b(1, 1);
    a << -2;
    b << 1; // row of [A|B] sums to -1
    RowVec beta(1);
    beta << 1;
    CHECK_THROWS_AS(make_absorbing_chain(a, b, beta), ValidationError);

    b << 2;
    RowVec bad_beta(1);
    bad_beta << 0.5;
    CHECK_THROWS_AS(make_absorbing_chain(a, b, bad_beta), ValidationError);

    Mat neg(1, 1);
    neg << -2;
    Mat bneg(1, 1);
    bneg << 2;
    RowVec nbeta(1);
    nbeta << -1;
    CHECK_THROWS_AS(make_absorbing_chain(neg, bneg, nbeta), ValidationError);

    Mat a2(2, 2), b1(1, 1);
    a2 << -1, 1, 1, -1;
    b1 << 1;
    RowVec beta2(2);
    beta2 << 1, 0;
    CHECK_THROWS_AS(make_absorbing_chain(a2, b1, beta2), ValidationError);
}

TEST_CASE("mean absorption time") {
    CHECK(mean_absorption_time(exp2_chain()) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mean_absorption_time(erlang2_rate3()) ==
          doctest::Approx(2.0 / 3).epsilon(1e-14));
    CHECK(mean_absorption_time(q3_cycle1()) ==
          doctest::Approx(44.0 / 49).epsilon(1e-14));
}

TEST_CASE("half second moment of absorption time") {
    CHECK(half_second_moment_absorption_time(exp2_chain()) ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK(half_second_moment_absorption_time(erlang2_rate3()) ==
          doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(half_second_moment_absorption_time(q3_cycle1()) ==
          doctest::Approx(240.0 / 343).epsilon(1e-14));
}

TEST_CASE("absorption probabilities") {
    const RowVec single = absorption_probabilities(exp2_chain());
    CHECK(single.size() == 1);
    CHECK(single[0] == doctest::Approx(1.0).epsilon(1e-14));

    Mat a(1, 1), b(1, 2);
    a << -2;
    b << 1, 1;
    RowVec beta(1);
    beta << 1;
    const RowVec both =
        absorption_probabilities(make_absorbing_chain(a, b, beta));
    CHECK(both[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(both[1] == doctest::Approx(0.5).epsilon(1e-14));

    const RowVec p = absorption_probabilities(q3_cycle1());
    CHECK(p[0] == doctest::Approx(33.0 / 49).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(16.0 / 49).epsilon(1e-14));
}

TEST_CASE("embedded jump chain normalizes by the departing row") {
    Mat a(2, 2), b(2, 1);
    a << -2, 1, 0, -3;
    b << 1, 3;
    RowVec beta(2);
    beta << 1, 0;
    const EmbeddedDtmc dtmc = embed_dtmc(make_absorbing_chain(a, b, beta));
    CHECK(dtmc.d(0, 0) == 0.0);
    CHECK(dtmc.d(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dtmc.d(1, 0) == 0.0);
    CHECK(dtmc.d(1, 1) == 0.0);
    CHECK(dtmc.e(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dtmc.e(1, 0) == doctest::Approx(1.0).epsilon(1e-15));

    const EmbeddedDtmc erl = embed_dtmc(erlang2_rate3());
    CHECK(erl.d(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(erl.e(1, 0) == doctest::Approx(1.0).epsilon(1e-15));

    const EmbeddedDtmc pull = embed_dtmc(q3_cycle1());
    CHECK(pull.d(0, 1) == doctest::Approx(4.0 / 7).epsilon(1e-15));
}

TEST_CASE("fundamental matrix") {
    EmbeddedDtmc zero{Mat::Zero(3, 3), Mat()};
    CHECK((fundamental_matrix(zero) - Mat::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);

    EmbeddedDtmc one_step{Mat(2, 2), Mat()};
    one_step.d << 0, 0.5, 0, 0;
    const Mat f = fundamental_matrix(one_step);
    CHECK(f(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f(1, 1) == doctest::Approx(1.0).epsilon(1e-14));

    const double p = 0.3, q = 0.8;
    EmbeddedDtmc cyc{Mat(2, 2), Mat()};
    cyc.d << 0, p, q, 0;
    const Mat fc = fundamental_matrix(cyc);
    const double scale = 1.0 / (1.0 - p * q);
    CHECK(fc(0, 0) == doctest::Approx(scale).epsilon(1e-13));
    CHECK(fc(0, 1) == doctest::Approx(scale * p).epsilon(1e-13));
    CHECK(fc(1, 0) == doctest::Approx(scale * q).epsilon(1e-13));
}

TEST_CASE("expected visits") {
    CHECK(expected_visits(exp2_chain(), Vec::Ones(1)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(expected_visits(exp2_chain(), Vec::Zero(1)) == 0.0);
    Vec stage2(2);
    stage2 << 0, 1;
    CHECK(expected_visits(erlang2_rate3(), stage2) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("singular transient block is a reported error") {
    Mat a(2, 2), b(2, 1);
    a << -1, 1, 1, -1; // conservative: no absorption possible
    b << 0, 0;
    RowVec beta(2);
    beta << 1, 0;
    const AbsorbingChain chain = make_absorbing_chain(a, b, beta);
    CHECK_THROWS_AS(mean_absorption_time(chain), SingularTransientBlock);
    CHECK_THROWS_AS(absorption_probabilities(chain), SingularTransientBlock);
}

TEST_CASE("randomized structural properties") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + int(rng() % 8);
        const int k = 1 + int(rng() % 4);
        const auto raw = oracle::random_absorbing(rng, m, k);
        const AbsorbingChain chain =
            make_absorbing_chain(raw.a, raw.b, raw.beta);

        const RowVec p = absorption_probabilities(chain);
        CHECK(p.minCoeff() >= -1e-12);
        CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-10));

        const double mean = mean_absorption_time(chain);
        const double half = half_second_moment_absorption_time(chain);
        CHECK(mean > 0);
        CHECK(2 * half >= mean * mean); // variance nonnegativity

        const EmbeddedDtmc dtmc = embed_dtmc(chain);
        CHECK(dtmc.d.diagonal().cwiseAbs().maxCoeff() == 0.0);
        for (int i = 0; i < m; ++i)
            CHECK(dtmc.d.row(i).sum() + dtmc.e.row(i).sum() ==
                  doctest::Approx(1.0).epsilon(1e-12));

        const Mat f = fundamental_matrix(dtmc);
        CHECK((f - (Mat::Identity(m, m) + dtmc.d * f)).cwiseAbs().maxCoeff() <=
              1e-10);
        CHECK(f.minCoeff() >= -1e-12);
        for (int i = 0; i < m; ++i)
            CHECK(f(i, i) >= 1.0 - 1e-12);
    }
}

TEST_CASE("moments agree with the quadrature oracle on a spot sample") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 1 + int(rng() % 6);
        const auto raw = oracle::random_absorbing(rng, m, 1 + int(rng() % 3));
        const AbsorbingChain chain =
            make_absorbing_chain(raw.a, raw.b, raw.beta);
        const auto q = oracle::phase_type_moments_quadrature(raw.beta, raw.a);
        CHECK(mean_absorption_time(chain) ==
              doctest::Approx(q.mean).epsilon(1e-6));
        CHECK(2 * half_second_moment_absorption_time(chain) ==
              doctest::Approx(q.second).epsilon(1e-6));
    }
}
