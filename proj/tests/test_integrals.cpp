#include <doctest.h>

#include <cmath>

#include "fwdint/experiments.hpp"
#include "fwdint/integrals.hpp"
#include "fwdint/presets.hpp"

using namespace fwdint;

namespace {

BrownianBundle bundle(long N, long lookahead, long m = 1, std::uint64_t stream = 0) {
    return sample_brownian(make_grid(1.0, N, lookahead), m, 31, stream);
}

} // namespace

TEST_CASE("ito integral of the constant integrand telescopes to W(T)") {
    const BrownianBundle w = bundle(256, 0);
    const OperatorProcess one = materialize(make_process_preset("constant", {}, 1), w);
    const Eigen::VectorXd i = ito_integral(one, w);
    CHECK(std::abs(i[0] - w.values(w.grid.steps, 0)) <= 1e-13);

    const OperatorProcess zero = materialize(make_process_preset("constant", {{"value", 0}}, 1), w);
    CHECK(ito_integral(zero, w)[0] == 0.0);
}

TEST_CASE("ito integral rejects non-adapted integrands") {
    const BrownianBundle w = bundle(64, 0);
    const OperatorProcess g = materialize(make_process_preset("brownian_terminal", {}, 1), w);
    CHECK_THROWS_AS(ito_integral(g, w), AdaptednessError);
    CHECK_THROWS_AS(ito_path(g, w), AdaptednessError);
    CHECK_THROWS_AS(tail_integrals(g, w), AdaptednessError);
}

TEST_CASE("ito path prefixes are consistent with the full integral") {
    const BrownianBundle w = bundle(128, 0);
    const OperatorProcess one = materialize(make_process_preset("constant", {}, 1), w);
    const VectorPath j = ito_path(one, w);
    CHECK(j.values(0, 0) == 0.0);
    for (long i = 1; i <= w.grid.steps; ++i)
        CHECK(std::abs(j.values(i, 0) - w.values(i, 0)) <= 1e-13);
    CHECK(j.values(w.grid.steps, 0) == ito_integral(one, w)[0]);  // same loop, bitwise
}

TEST_CASE("ito isometry at smoke scale") {
    const long reps = 4000;
    double sum = 0.0, sum_sq = 0.0;
    for (long r = 0; r < reps; ++r) {
        const BrownianBundle w = bundle(256, 0, 1, r);
        const OperatorProcess one = materialize(make_process_preset("constant", {}, 1), w);
        const double v = ito_integral(one, w)[0];
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / reps;
    const double var = sum_sq / reps - mean * mean;
    CHECK(var > 0.9);
    CHECK(var < 1.1);
}

TEST_CASE("forward approximant matches the brute-force boundary rearrangement for G = 1") {
    // For G = 1 the double sum telescopes to
    //     n [ dt * sum_{i=N}^{N+L-1} W(t_i) - dt * sum_{i=0}^{L-1} W(t_i) ],
    // the discrete analogue of n(int_T^{T+1/n} W - int_0^{1/n} W).
    const long N = 512;
    for (long n : {4L, 16L, 64L}) {
        const BrownianBundle w = bundle(N, N / 4);
        const OperatorProcess one = materialize(make_process_preset("constant", {}, 1), w);
        const long L = aligned_lag(w.grid, n);
        double upper = 0.0, lower = 0.0;
        for (long i = N; i < N + L; ++i) upper += w.values(i, 0) * w.grid.dt;
        for (long i = 0; i < L; ++i) lower += w.values(i, 0) * w.grid.dt;
        const double brute = static_cast<double>(n) * (upper - lower);
        const double fa = forward_approx(one, w, n)[0];
        CHECK(fa == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("forward approximant of G = 1 approaches W(T) as n grows") {
    const long N = 1024;
    double err4 = 0.0, err64 = 0.0;
    const long reps = 20;
    std::vector<double> e4, e64;
    for (long r = 0; r < reps; ++r) {
        const BrownianBundle w = bundle(N, 256, 1, r);
        const OperatorProcess one = materialize(make_process_preset("constant", {}, 1), w);
        const double wt = w.values(N, 0);
        e4.push_back(std::abs(forward_approx(one, w, 4)[0] - wt));
        e64.push_back(std::abs(forward_approx(one, w, 64)[0] - wt));
    }
    err4 = summarize(e4).median;
    err64 = summarize(e64).median;
    CHECK(err64 < err4);
}

TEST_CASE("non-adapted scalar factors pull out of the forward sum") {
    const BrownianBundle w = bundle(256, 64);
    const OperatorProcess one = materialize(make_process_preset("constant", {}, 1), w);
    const OperatorProcess gt = materialize(make_process_preset("brownian_terminal", {}, 1), w);
    const double wt = w.values(w.grid.steps, 0);
    const double lhs = forward_approx(gt, w, 16)[0];
    const double rhs = wt * forward_approx(one, w, 16)[0];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("discrete rearrangement identity holds to 1e-10 relative") {
    const long N = 256;
    const BrownianBundle w = bundle(N, 64);
    for (const char* preset : {"constant", "brownian_adapted"}) {
        const OperatorProcess g = materialize(make_process_preset(preset, {}, 1), w);
        for (long n : {4L, 16L}) CHECK(fubini_residual(g, w, n) <= 1e-10);
    }
}

TEST_CASE("forward operations demand alignment and lookahead") {
    const BrownianBundle w = bundle(256, 2);
    const OperatorProcess one = materialize(make_process_preset("constant", {}, 1), w);
    CHECK_THROWS_AS(forward_approx(one, w, 3), AlignmentError);   // 256/3 not integral
    CHECK_THROWS_AS(forward_approx(one, w, 4), AlignmentError);   // L = 64 > lookahead = 2
    CHECK_NOTHROW(forward_approx(one, w, 128));                   // L = 2 fits
    CHECK_THROWS_AS(smooth(one, 3), AlignmentError);
}

TEST_CASE("dimension mismatches are rejected up front") {
    const BrownianBundle w = bundle(64, 16);
    const BrownianBundle w2 = bundle(64, 16, 2);
    const OperatorProcess wide = materialize(make_process_preset("constant", {}, 2), w2);
    CHECK_THROWS_AS(ito_integral(wide, w), std::invalid_argument);
    CHECK_THROWS_AS(forward_approx(wide, w, 4), std::invalid_argument);
}

TEST_CASE("forward path starts at zero and ends at the approximant, bitwise") {
    const BrownianBundle w = bundle(256, 64);
    const OperatorProcess g = materialize(make_process_preset("brownian_adapted", {}, 1), w);
    const VectorPath jp = forward_path(g, w, 4);
    CHECK(jp.values(0, 0) == 0.0);
    CHECK(jp.values(w.grid.steps, 0) == forward_approx(g, w, 4)[0]);
}

TEST_CASE("forward path increments obey the square-root cell bound") {
    // one cell contributes n dt G(t_i) (W(t_i + 1/n) - W(t_i)); for G = 1 the
    // increment is bounded by 2 dt^{1/2} sup |W| times the stretch n sqrt(T)
    const long N = 512;
    const long n = 8;
    const BrownianBundle w = bundle(N, N / n);
    const OperatorProcess one = materialize(make_process_preset("constant", {}, 1), w);
    const VectorPath jp = forward_path(one, w, n);
    const double sup_w = w.values.cwiseAbs().maxCoeff();
    const double bound =
        2.0 * std::sqrt(w.grid.dt) * sup_w * static_cast<double>(n) * std::sqrt(w.grid.horizon);
    for (long i = 0; i < N; ++i)
        CHECK(std::abs(jp.values(i + 1, 0) - jp.values(i, 0)) <= bound + 1e-15);
}

TEST_CASE("tail integrals satisfy the suffix identity") {
    const BrownianBundle w = bundle(128, 0);
    const OperatorProcess g = materialize(make_process_preset("brownian_adapted", {}, 1), w);
    const VectorPath tail = tail_integrals(g, w);
    const VectorPath j = ito_path(g, w);
    const Eigen::VectorXd total = ito_integral(g, w);
    CHECK(tail.values(w.grid.steps, 0) == 0.0);
    CHECK(tail.values(0, 0) == total[0]);
    for (long i = 0; i <= w.grid.steps; ++i)
        CHECK(tail.values(i, 0) == total[0] - j.values(i, 0));  // defining relation, bitwise
}

TEST_CASE("forward sum is linear and commutes with matrices and functionals") {
    const long N = 128;
    const BrownianBundle w = bundle(N, 32, 2);
    const OperatorProcess f = materialize(make_process_preset("matrix_smooth", {{"d", 3}}, 2), w);
    const OperatorProcess g = materialize(make_process_preset("matrix_adapted", {{"d", 3}}, 2), w);
    const long n = 8;

    OperatorProcess combo;
    combo.grid = f.grid;
    combo.adapted = true;
    combo.values.resize(f.values.size());
    for (size_t j = 0; j < f.values.size(); ++j)
        combo.values[j] = 0.7 * f.values[j] - 1.3 * g.values[j];
    const Eigen::VectorXd fa_f = forward_approx(f, w, n);
    const Eigen::VectorXd fa_g = forward_approx(g, w, n);
    const Eigen::VectorXd fa_c = forward_approx(combo, w, n);
    CHECK((fa_c - (0.7 * fa_f - 1.3 * fa_g)).norm() <= 1e-12 * (1.0 + fa_c.norm()));

    Eigen::MatrixXd a(2, 3);
    a << 1.0, -2.0, 0.5, 0.25, 3.0, -1.0;
    OperatorProcess ag;
    ag.grid = g.grid;
    ag.adapted = g.adapted;
    ag.values.resize(g.values.size());
    for (size_t j = 0; j < g.values.size(); ++j) ag.values[j] = a * g.values[j];
    CHECK((forward_approx(ag, w, n) - a * fa_g).norm() <= 1e-12 * (1.0 + fa_g.norm()));

    Eigen::VectorXd xstar(3);
    xstar << 0.3, -0.9, 1.7;
    OperatorProcess gx;
    gx.grid = g.grid;
    gx.adapted = g.adapted;
    gx.values.resize(g.values.size());
    for (size_t j = 0; j < g.values.size(); ++j)
        gx.values[j] = xstar.transpose() * g.values[j];
    CHECK(std::abs(forward_approx(gx, w, n)[0] - xstar.dot(fa_g)) <=
          1e-12 * (1.0 + std::abs(xstar.dot(fa_g))));

    // locality: a 0/1 gate on the whole process gates the output exactly
    OperatorProcess gated;
    gated.grid = g.grid;
    gated.adapted = g.adapted;
    gated.values.resize(g.values.size());
    for (size_t j = 0; j < g.values.size(); ++j) gated.values[j] = 0.0 * g.values[j];
    CHECK(forward_approx(gated, w, n).norm() == 0.0);
}
