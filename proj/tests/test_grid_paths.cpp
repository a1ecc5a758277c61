#include <doctest.h>

#include <cmath>

#include "fwdint/brownian.hpp"
#include "fwdint/grid.hpp"

using namespace fwdint;

TEST_CASE("make_grid produces the uniform node set") {
    const TimeGrid g = make_grid(1.0, 4, 2);
    const double expected[] = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
    REQUIRE(g.node_count() == 7);
    for (long j = 0; j < 7; ++j) CHECK(g.node(j) == expected[j]);

    const TimeGrid fine = make_grid(1.0, 1024, 256);
    CHECK(fine.dt == 0x1p-10);
    CHECK(fine.node(fine.last_index()) == 1.25);

    const TimeGrid two = make_grid(2.0, 8, 0);
    CHECK(two.node(8) == 2.0);
}

TEST_CASE("make_grid rejects bad arguments") {
    CHECK_THROWS_AS(make_grid(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1.0, 8, -1), std::invalid_argument);
}

TEST_CASE("aligned_lag accepts divisible shifts and rejects the rest") {
    const TimeGrid g = make_grid(1.0, 1024, 0);
    CHECK(aligned_lag(g, 4) == 256);
    CHECK(aligned_lag(g, 1024) == 1);
    CHECK_THROWS_AS(aligned_lag(g, 3), AlignmentError);
    const TimeGrid odd = make_grid(2.0, 8, 0);
    CHECK(aligned_lag(odd, 1) == 4);  // shift 1 = 4 steps of dt = 1/4
    CHECK_THROWS_AS(aligned_lag(odd, 3), AlignmentError);
}

TEST_CASE("brownian bundle starts at zero and is bitwise reproducible") {
    const TimeGrid g = make_grid(1.0, 128, 32);
    const BrownianBundle a = sample_brownian(g, 3, 42, 7);
    const BrownianBundle b = sample_brownian(g, 3, 42, 7);
    for (long k = 0; k < 3; ++k) CHECK(a.values(0, k) == 0.0);
    CHECK(a.values == b.values);

    const BrownianBundle other_stream = sample_brownian(g, 3, 42, 8);
    CHECK(a.values != other_stream.values);
    const BrownianBundle other_seed = sample_brownian(g, 3, 43, 7);
    CHECK(a.values != other_seed.values);

    CHECK_THROWS_AS(sample_brownian(g, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("increment sample variance sits near dt") {
    // 2^14 independent N(0, dt) draws; the sample variance concentrates
    // within a few percent (chi-square), so [0.9 dt, 1.1 dt] is a wide net
    const long N = 1 << 14;
    const TimeGrid g = make_grid(1.0, N, 0);
    const BrownianBundle w = sample_brownian(g, 1, 2024, 0);
    double sum = 0.0, sum_sq = 0.0;
    for (long j = 0; j < N; ++j) {
        const double inc = w.values(j + 1, 0) - w.values(j, 0);
        sum += inc;
        sum_sq += inc * inc;
    }
    const double mean = sum / N;
    const double var = sum_sq / N - mean * mean;
    CHECK(var > 0.9 * g.dt);
    CHECK(var < 1.1 * g.dt);
}

TEST_CASE("shifted increments read stored values") {
    const TimeGrid g = make_grid(1.0, 64, 16);
    const BrownianBundle w = sample_brownian(g, 2, 5, 0);
    CHECK(shifted_increment(w, 0, 10, 0) == 0.0);
    CHECK(shifted_increment(w, 1, 10, 5) == w.values(15, 1) - w.values(10, 1));
    CHECK_THROWS_AS(shifted_increment(w, 0, 70, 16), std::out_of_range);
    CHECK_THROWS_AS(shifted_increment(w, 2, 0, 1), std::out_of_range);

    // telescoping: one-step increments sum back to W(T), up to the one
    // rounding a stored-value subtraction can introduce per step
    for (long k = 0; k < 2; ++k) {
        double acc = 0.0;
        for (long j = 0; j < g.steps; ++j) acc += shifted_increment(w, k, j, 1);
        CHECK(std::abs(acc - w.values(g.steps, k)) <= 1e-13);
    }
}

TEST_CASE("terminal variance over many replicates matches the horizon") {
    // smoke-scale version of the Ito isometry study run by the acceptance
    // suite at 10^4 replicates
    const long reps = 3000;
    const TimeGrid g = make_grid(1.0, 64, 0);
    double sum = 0.0, sum_sq = 0.0;
    for (long r = 0; r < reps; ++r) {
        const BrownianBundle w = sample_brownian(g, 1, 99, r);
        const double wt = w.values(g.steps, 0);
        sum += wt;
        sum_sq += wt * wt;
    }
    const double mean = sum / reps;
    const double var = sum_sq / reps - mean * mean;
    CHECK(var > 0.9);
    CHECK(var < 1.1);
}
