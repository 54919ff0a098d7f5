#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lhvprobe/lp.hpp"
#include "lhvprobe/rng.hpp"

using namespace lhvprobe;

namespace {

LpProblem make_problem(std::size_t m, std::size_t n) {
    LpProblem p;
    p.rows = m;
    p.cols = n;
    p.matrix.assign(m * n, 0.0);
    p.rhs.assign(m, 0.0);
    p.objective.assign(n, 0.0);
    return p;
}

double farkas_gap(const LpProblem& p, const std::vector<double>& y) {
    // y certifies infeasibility when y.A <= 0 columnwise but y.b > 0
    double yb = 0.0;
    for (std::size_t r = 0; r < p.rows; ++r) yb += y[r] * p.rhs[r];
    double worst_col = -1e300;
    for (std::size_t c = 0; c < p.cols; ++c) {
        double ya = 0.0;
        for (std::size_t r = 0; r < p.rows; ++r) ya += y[r] * p.at(r, c);
        worst_col = std::max(worst_col, ya);
    }
    return yb - std::max(0.0, worst_col);
}

}  // namespace

TEST_CASE("simple maximization") {
    LpProblem p = make_problem(1, 2);
    p.matrix = {1.0, 1.0};
    p.rhs = {1.0};
    p.objective = {1.0, 0.0};

    const LpOutcome out = solve(p);
    REQUIRE(out.status == LpStatus::FeasibleOptimal);
    CHECK(out.objective_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.solution[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.solution[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.residual <= 1e-9);
}

TEST_CASE("contradictory rows produce a Farkas dual") {
    LpProblem p = make_problem(2, 2);
    p.matrix = {1.0, 1.0, 1.0, 1.0};
    p.rhs = {1.0, 2.0};

    const LpOutcome out = solve(p);
    REQUIRE(out.status == LpStatus::Infeasible);
    REQUIRE(out.farkas_dual.size() == 2);

    // normalized to max-abs 1, the dual is (-1, 1) exactly
    CHECK(out.farkas_dual[0] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(out.farkas_dual[1] == doctest::Approx(1.0).epsilon(1e-9));

    for (std::size_t c = 0; c < 2; ++c) {
        double ya = 0.0;
        for (std::size_t r = 0; r < 2; ++r) {
            ya += out.farkas_dual[r] * p.at(r, c);
        }
        CHECK(ya <= 1e-9);
    }
    double yb = 0.0;
    for (std::size_t r = 0; r < 2; ++r) yb += out.farkas_dual[r] * p.rhs[r];
    CHECK(yb >= 1e-7);
}

TEST_CASE("random feasible instances are solved with small residuals") {
    Rng rng(61);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t m = 1 + static_cast<std::size_t>(rng.next_u64() % 40);
        const std::size_t n =
            m + static_cast<std::size_t>(rng.next_u64() % (101 - m));
        LpProblem p = make_problem(m, n);
        for (double& v : p.matrix) v = rng.uniform(-1.0, 1.0);

        std::vector<double> x_star(n, 0.0);
        for (std::size_t c = 0; c < n; ++c) {
            if (rng.next_double() < 0.5) x_star[c] = rng.uniform(0.0, 2.0);
        }
        for (std::size_t r = 0; r < m; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < n; ++c) acc += p.at(r, c) * x_star[c];
            p.rhs[r] = acc;
        }

        const LpOutcome out = solve(p);
        REQUIRE(out.status == LpStatus::FeasibleOptimal);
        CHECK(out.residual <= 1e-9);
        for (double v : out.solution) CHECK(v >= -1e-9);
    }
}

TEST_CASE("infeasible instances carry verified certificates") {
    Rng rng(62);
    int infeasible_seen = 0;
    for (int rep = 0; rep < 300; ++rep) {
        // random system with rhs far outside the attainable cone
        const std::size_t m = 2 + static_cast<std::size_t>(rng.next_u64() % 10);
        const std::size_t n = 1 + static_cast<std::size_t>(rng.next_u64() % 6);
        LpProblem p = make_problem(m, n);
        for (double& v : p.matrix) v = rng.uniform(0.0, 1.0);
        for (std::size_t r = 0; r < m; ++r) p.rhs[r] = rng.uniform(-2.0, -1.0);

        const LpOutcome out = solve(p);
        if (out.status != LpStatus::Infeasible) continue;
        ++infeasible_seen;
        CHECK(farkas_gap(p, out.farkas_dual) >= 1e-7);
    }
    CHECK(infeasible_seen > 100);
}

TEST_CASE("unbounded objective is reported as such") {
    LpProblem p = make_problem(1, 2);
    p.matrix = {0.0, 1.0};
    p.rhs = {1.0};
    p.objective = {1.0, 0.0};
    CHECK(solve(p).status == LpStatus::Unbounded);
}

TEST_CASE("variable upper bounds participate in optimization") {
    LpProblem p = make_problem(1, 2);
    p.matrix = {1.0, 1.0};
    p.rhs = {1.0};
    p.objective = {1.0, 0.0};
    p.upper_bounds = {0.25, std::numeric_limits<double>::infinity()};

    const LpOutcome out = solve(p);
    REQUIRE(out.status == LpStatus::FeasibleOptimal);
    CHECK(out.objective_value == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(out.solution[0] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(out.solution[1] == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("dependent consistent rows are tolerated") {
    LpProblem p = make_problem(3, 2);
    p.matrix = {1.0, 1.0, 1.0, 1.0, 1.0, -1.0};
    p.rhs = {1.0, 1.0, 0.0};

    const LpOutcome out = solve(p);
    REQUIRE(out.status == LpStatus::FeasibleOptimal);
    CHECK(out.solution[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(out.solution[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("status is invariant under positive row scaling") {
    Rng rng(63);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng.next_u64() % 6);
        const std::size_t n = 2 + static_cast<std::size_t>(rng.next_u64() % 10);
        LpProblem p = make_problem(m, n);
        for (double& v : p.matrix) v = rng.uniform(-1.0, 1.0);
        for (double& v : p.rhs) v = rng.uniform(-1.0, 1.0);

        LpProblem scaled = p;
        for (std::size_t r = 0; r < m; ++r) {
            const double s = rng.uniform(0.1, 10.0);
            for (std::size_t c = 0; c < n; ++c) {
                scaled.matrix[r * n + c] *= s;
            }
            scaled.rhs[r] *= s;
        }

        const LpOutcome a = solve(p);
        const LpOutcome b = solve(scaled);
        CHECK(a.status == b.status);
    }
}

TEST_CASE("solves are deterministic") {
    Rng rng(64);
    LpProblem p = make_problem(8, 20);
    for (double& v : p.matrix) v = rng.uniform(-1.0, 1.0);
    std::vector<double> x_star(20, 0.5);
    for (std::size_t r = 0; r < 8; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < 20; ++c) acc += p.at(r, c) * x_star[c];
        p.rhs[r] = acc;
    }
    for (double& v : p.objective) v = rng.uniform(-1.0, 1.0);

    const LpOutcome a = solve(p);
    const LpOutcome b = solve(p);
    REQUIRE(a.status == b.status);
    CHECK(a.objective_value == b.objective_value);
    REQUIRE(a.solution.size() == b.solution.size());
    for (std::size_t c = 0; c < a.solution.size(); ++c) {
        CHECK(a.solution[c] == b.solution[c]);
    }
}

TEST_CASE("malformed problems are rejected") {
    LpProblem empty;
    CHECK_THROWS_AS(solve(empty), std::invalid_argument);

    LpProblem bad = make_problem(2, 2);
    bad.matrix[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve(bad), std::invalid_argument);

    LpProblem short_rhs = make_problem(2, 2);
    short_rhs.rhs.pop_back();
    CHECK_THROWS_AS(solve(short_rhs), std::invalid_argument);
}
