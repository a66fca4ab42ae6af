#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "opfcut/lp.hpp"
#include "opfcut/network.hpp"
#include "opfcut/perturb.hpp"
#include "support/oracles.hpp"

using namespace opfcut;
using lp::LinearModel;
using lp::Sense;
using lp::SolveStatus;
using lp::VarRef;

TEST_CASE("random boxed models agree with vertex enumeration") {
    SplitMix64 rng(2024);
    int infeasible_seen = 0, optimal_seen = 0;
    for (int trial = 0; trial < 300; ++trial) {
        CAPTURE(trial);
        LinearModel m;
        const int nv = 1 + static_cast<int>(rng.next() % 3);
        std::vector<VarRef> xs;
        for (int j = 0; j < nv; ++j) {
            double lb = -3.0 * rng.uniform01();
            double ub = 3.0 * rng.uniform01();
            VarRef v = m.add_variable("x" + std::to_string(j), lb, ub);
            m.set_objective_coeff(v, 4.0 * rng.uniform01() - 2.0);
            xs.push_back(v);
        }
        m.add_objective_constant(2.0 * rng.uniform01() - 1.0);
        const int nr = static_cast<int>(rng.next() % 6);
        for (int i = 0; i < nr; ++i) {
            std::vector<lp::LinearTerm> terms;
            for (int j = 0; j < nv; ++j)
                if (rng.uniform01() < 0.8)
                    terms.push_back({xs[j], 4.0 * rng.uniform01() - 2.0});
            if (terms.empty()) terms.push_back({xs[0], 1.0});
            Sense s = rng.uniform01() < 0.4  ? Sense::LE
                      : rng.uniform01() < 0.6 ? Sense::GE
                                              : Sense::EQ;
            m.add_constraint(terms, s, 4.0 * rng.uniform01() - 2.0);
        }

        auto oracle = testsup::brute_force_lp_min(m);
        lp::Solution sol = lp::solve(m);
        if (!oracle) {
            REQUIRE(sol.status == SolveStatus::Infeasible);
            ++infeasible_seen;
        } else {
            REQUIRE(sol.status == SolveStatus::Optimal);
            REQUIRE(sol.objective ==
                    doctest::Approx(*oracle).epsilon(1e-7).scale(1.0));
            ++optimal_seen;
        }
    }
    // the sampler must exercise both outcomes or the test proves little
    CHECK(infeasible_seen > 20);
    CHECK(optimal_seen > 100);
}

TEST_CASE("infeasible systems come with a Farkas certificate") {
    LinearModel m;
    VarRef x = m.add_variable("x", 0.0, 10.0);
    VarRef y = m.add_variable("y", 0.0, 10.0);
    m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::GE, 4.0);
    m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::LE, 2.0);
    m.set_objective_coeff(x, 1.0);

    lp::Solution sol = lp::solve(m);
    REQUIRE(sol.status == SolveStatus::Infeasible);
    REQUIRE(sol.farkas.size() == 2);
    // the multipliers must oppose the two rows: y1*(x+y) >= 4*y1 and
    // y2*(x+y) <= 2*y2 can only clash when y1 and y2 pull together
    CHECK(sol.farkas[0] * sol.farkas[1] != 0.0);
}

TEST_CASE("unbounded objectives are detected") {
    LinearModel m;
    VarRef x = m.add_variable("x", -lp::kInf, 5.0);
    m.set_objective_coeff(x, 1.0);
    lp::Solution sol = lp::solve(m);
    CHECK(sol.status == SolveStatus::Unbounded);
}

TEST_CASE("equalities pin variables and removals relax them") {
    LinearModel m;
    VarRef x = m.add_variable("x", 0.0, 10.0);
    m.set_objective_coeff(x, 1.0);
    lp::ConstrRef r = m.add_constraint({{x, 2.0}}, Sense::EQ, 4.0);
    CHECK(m.num_rows_alive() == 1);
    CHECK(lp::solve(m).objective == doctest::Approx(2.0));

    m.remove_constraint(r);
    CHECK(m.num_rows_alive() == 0);
    CHECK(lp::solve(m).objective == doctest::Approx(0.0));
    CHECK_THROWS_AS(m.remove_constraint(r), std::exception);
}

TEST_CASE("row handles stay valid across other removals") {
    LinearModel m;
    VarRef x = m.add_variable("x", 0.0, 10.0);
    m.set_objective_coeff(x, 1.0);
    lp::ConstrRef r1 = m.add_constraint({{x, 1.0}}, Sense::GE, 1.0);
    lp::ConstrRef r2 = m.add_constraint({{x, 1.0}}, Sense::GE, 5.0);
    lp::ConstrRef r3 = m.add_constraint({{x, 1.0}}, Sense::GE, 3.0);
    m.remove_constraint(r2);
    CHECK(m.row(r3).rhs == 3.0);
    CHECK(lp::solve(m).objective == doctest::Approx(3.0));
    m.remove_constraint(r3);
    CHECK(lp::solve(m).objective == doctest::Approx(1.0));
    CHECK(m.row(r1).alive);
}

TEST_CASE("quadratic epigraph tangents bound the cost from below") {
    CostFunction f;
    f.c2 = 1.0;

    SUBCASE("single tangent sits at the midpoint") {
        LinearModel m;
        VarRef p = m.add_variable("p", 0.0, 1.0);
        VarRef t = add_convex_cost_epigraph(m, p, f, 1);
        REQUIRE(t.valid());
        m.set_bounds(p, 1.0, 1.0);
        lp::Solution sol = lp::solve(m);
        REQUIRE(sol.status == SolveStatus::Optimal);
        // t >= p - 1/4, so the worst-case gap at p = 1 is exactly 1/4
        CHECK(sol.objective == doctest::Approx(0.75).epsilon(1e-12));
    }

    SUBCASE("dense tangents shrink the gap quadratically") {
        const int segments = 100;
        const double worst_gap = f.c2 * 0.25 / (segments * double(segments));
        for (double pbar : {0.0, 0.137, 0.5, 0.85, 1.0}) {
            CAPTURE(pbar);
            LinearModel m;
            VarRef p = m.add_variable("p", 0.0, 1.0);
            add_convex_cost_epigraph(m, p, f, segments);
            m.set_bounds(p, pbar, pbar);
            lp::Solution sol = lp::solve(m);
            REQUIRE(sol.status == SolveStatus::Optimal);
            CHECK(sol.objective <= pbar * pbar + 1e-9);
            CHECK(sol.objective >= pbar * pbar - worst_gap - 1e-9);
        }
    }

    SUBCASE("linear costs fold into the objective") {
        CostFunction lin;
        lin.c1 = 3.0;
        lin.c0 = 2.0;
        LinearModel m;
        VarRef p = m.add_variable("p", 0.0, 1.0);
        VarRef t = add_convex_cost_epigraph(m, p, lin, 5);
        CHECK(!t.valid());
        m.set_bounds(p, 0.5, 0.5);
        CHECK(lp::solve(m).objective == doctest::Approx(3.5));
    }
}

TEST_CASE("piecewise epigraphs are exact at and between breakpoints") {
    CostFunction f;
    f.kind = CostFunction::Kind::PiecewiseLinear;
    f.points = {{0.0, 0.0}, {1.0, 2.0}, {2.0, 6.0}};
    for (double pbar : {0.0, 0.4, 1.0, 1.5, 2.0}) {
        CAPTURE(pbar);
        LinearModel m;
        VarRef p = m.add_variable("p", 0.0, 2.0);
        add_convex_cost_epigraph(m, p, f, 1);
        m.set_bounds(p, pbar, pbar);
        lp::Solution sol = lp::solve(m);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective == doctest::Approx(f.eval(pbar)).epsilon(1e-12));
    }
}

TEST_CASE("lp text export names sections and sanitizes identifiers") {
    LinearModel m;
    VarRef x = m.add_variable("pg_1", 0.0, 2.0);
    VarRef y = m.add_variable("v2@17", 0.5, 1.5);
    m.set_objective_coeff(x, 3.0);
    m.add_constraint({{x, 1.0}, {y, -2.0}}, Sense::LE, 1.0);
    std::string text = lp::write_lp_text(m);
    CHECK(text.find("Minimize") != std::string::npos);
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find("Bounds") != std::string::npos);
    CHECK(text.find("End") != std::string::npos);
    CHECK(text.find("pg_1") != std::string::npos);
    CHECK(text.find("v2_17") != std::string::npos);  // '@' is not LP-safe
    CHECK(text.find('@') == std::string::npos);
}

TEST_CASE("solution files parse by name with comments") {
    LinearModel m;
    VarRef x = m.add_variable("pg_1", 0.0, 2.0);
    VarRef y = m.add_variable("qg_1", -1.0, 1.0);
    std::vector<double> vals =
        lp::read_solution_file(m, "# a comment\npg_1 1.25\n\nqg_1 -0.5 # tail\n");
    CHECK(vals[static_cast<std::size_t>(x.id)] == 1.25);
    CHECK(vals[static_cast<std::size_t>(y.id)] == -0.5);

    CHECK_THROWS_WITH_AS(lp::read_solution_file(m, "pg_1 huh\n"),
                         "line 1: malformed solution entry", std::runtime_error);
    try {
        lp::read_solution_file(m, "pg_1 1\nmystery 2\n");
        FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("mystery") != std::string::npos);
    }
}

TEST_CASE("repeat solves are bit identical") {
    LinearModel m;
    SplitMix64 rng(99);
    std::vector<VarRef> xs;
    for (int j = 0; j < 3; ++j)
        xs.push_back(m.add_variable("x" + std::to_string(j), -2.0, 2.0));
    for (int j = 0; j < 3; ++j) m.set_objective_coeff(xs[j], rng.uniform01() - 0.5);
    for (int i = 0; i < 4; ++i)
        m.add_constraint({{xs[0], rng.uniform01()},
                          {xs[1], rng.uniform01() - 0.3},
                          {xs[2], rng.uniform01() - 0.7}},
                         i % 2 ? Sense::LE : Sense::GE, rng.uniform01());

    lp::Solution first = lp::solve(m);
    REQUIRE(first.status == SolveStatus::Optimal);
    for (int rep = 0; rep < 4; ++rep) {
        lp::Solution again = lp::solve(m);
        CHECK(again.iterations == first.iterations);
        CHECK(std::memcmp(&again.objective, &first.objective, sizeof(double)) == 0);
        REQUIRE(again.values.size() == first.values.size());
        CHECK(std::memcmp(again.values.data(), first.values.data(),
                          sizeof(double) * first.values.size()) == 0);
    }
}

TEST_CASE("quadratic objectives must be convexified first") {
    LinearModel m;
    VarRef x = m.add_variable("x", 0.0, 1.0);
    m.set_quadratic_coeff(x, 1.0);
    CHECK(m.has_quadratic());
    CHECK_THROWS_AS(lp::solve(m), std::invalid_argument);
}

TEST_CASE("iteration cap never fakes optimality") {
    LinearModel m;
    SplitMix64 rng(5);
    std::vector<VarRef> xs;
    for (int j = 0; j < 3; ++j)
        xs.push_back(m.add_variable("x" + std::to_string(j), 0.0, 4.0));
    for (int j = 0; j < 3; ++j) m.set_objective_coeff(xs[j], -1.0 - rng.uniform01());
    for (int i = 0; i < 6; ++i)
        m.add_constraint({{xs[0], 1.0 + rng.uniform01()},
                          {xs[1], 1.0 + rng.uniform01()},
                          {xs[2], 1.0 + rng.uniform01()}},
                         Sense::LE, 3.0 + rng.uniform01());

    lp::SolveLimits limits;
    limits.iteration_limit = 1;
    lp::Solution sol = lp::solve(m, limits, {});
    CHECK((sol.status == SolveStatus::TimeLimit ||
           sol.status == SolveStatus::SuboptimalFeasible));
}

TEST_CASE("model rejects broken references and NaN input") {
    LinearModel m;
    VarRef x = m.add_variable("x", 0.0, 1.0);
    VarRef bogus;
    bogus.id = 57;
    CHECK_THROWS_AS(m.add_constraint({{bogus, 1.0}}, Sense::LE, 1.0), std::exception);
    CHECK_THROWS_AS(
        m.add_constraint({{x, std::nan("")}}, Sense::LE, 1.0), std::exception);
    CHECK_THROWS_AS(m.var(bogus), std::exception);
}

TEST_CASE("objective constant flows through solves") {
    LinearModel m;
    VarRef x = m.add_variable("x", 1.0, 2.0);
    m.set_objective_coeff(x, 1.0);
    m.add_objective_constant(10.0);
    CHECK(lp::solve(m).objective == doctest::Approx(11.0));
    CHECK(m.objective_value({1.5}) == doctest::Approx(11.5));
}
