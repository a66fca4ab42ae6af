#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "opfcut/network.hpp"

namespace opfcut::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct VarRef {
    int id = -1;
    bool valid() const { return id >= 0; }
    friend bool operator==(VarRef a, VarRef b) { return a.id == b.id; }
};

struct ConstrRef {
    int id = -1;
    bool valid() const { return id >= 0; }
    friend bool operator==(ConstrRef a, ConstrRef b) { return a.id == b.id; }
};

enum class Sense { LE, EQ, GE };

struct LinearTerm {
    VarRef var;
    double coeff = 0.0;
};

enum class SolveStatus {
    Optimal,
    SuboptimalFeasible,
    Infeasible,
    Unbounded,
    NumericTrouble,
    TimeLimit,
};

const char* to_string(SolveStatus s);

/// Mutable LP with named variables, box bounds, linear rows identified by
/// stable handles and a linear (plus optional separable convex quadratic)
/// objective. Row handles stay valid across removals of other rows.
class LinearModel {
public:
    struct Var {
        std::string name;
        double lb = -kInf, ub = kInf;
        double obj = 0.0;
        double qobj = 0.0;  // coefficient of x^2, must be >= 0
    };
    struct Row {
        std::vector<std::pair<int, double>> terms;  // (var id, coeff)
        Sense sense = Sense::LE;
        double rhs = 0.0;
        bool alive = false;
    };

    VarRef add_variable(std::string name, double lb, double ub);
    void set_bounds(VarRef v, double lb, double ub);
    void set_objective_coeff(VarRef v, double linear);
    void set_quadratic_coeff(VarRef v, double quad);
    void add_objective_constant(double c) { obj_constant_ += c; }

    /// Rejects NaN coefficients and stale variable references.
    ConstrRef add_constraint(const std::vector<LinearTerm>& terms, Sense sense,
                             double rhs);
    /// Throws on a handle that was never issued or was already removed.
    void remove_constraint(ConstrRef r);

    int num_vars() const { return static_cast<int>(vars_.size()); }
    int num_rows_alive() const { return rows_alive_; }
    const Var& var(VarRef v) const;
    const Row& row(ConstrRef r) const;
    const std::vector<Var>& vars() const { return vars_; }
    const std::vector<Row>& rows() const { return rows_; }
    double objective_constant() const { return obj_constant_; }
    bool has_quadratic() const;

    /// Objective value of a candidate point, including the constant term.
    double objective_value(const std::vector<double>& x) const;

private:
    void check_var(VarRef v) const;
    std::vector<Var> vars_;
    std::vector<Row> rows_;
    int rows_alive_ = 0;
    double obj_constant_ = 0.0;
};

struct SolveLimits {
    double time_limit = kInf;       // seconds
    long iteration_limit = 500000;  // simplex pivots across both phases
};

struct SolveTolerances {
    double feasibility = 1e-6;
    double optimality = 1e-6;
};

struct Solution {
    SolveStatus status = SolveStatus::NumericTrouble;
    std::vector<double> values;  // indexed by VarRef id
    double objective = 0.0;
    long iterations = 0;
    /// Farkas certificate over alive rows (solve order) when Infeasible.
    std::vector<double> farkas;

    double value(VarRef v) const { return values.at(static_cast<std::size_t>(v.id)); }
};

/// Bundled deterministic bounded-variable primal simplex (two phases, Bland
/// fallback). Infeasible is reported only with a verified Farkas certificate;
/// when verification fails the status degrades to NumericTrouble. Feasible
/// results are re-checked against the stored model independently of the
/// backend. Quadratic objectives are not supported here; convexify first.
Solution solve(const LinearModel& m, const SolveLimits& limits = {},
               const SolveTolerances& tol = {});

/// Oracle signature the cutting-plane driver consumes; defaults to solve().
using SolveOracle =
    std::function<Solution(const LinearModel&, const SolveLimits&, const SolveTolerances&)>;

/// Replaces a convex cost on variable x by an epigraph variable t bounded
/// below by tangent (or segment) lines: K tangents at uniform midpoints for
/// quadratics, one row per segment for piecewise-linear costs, plain linear
/// objective untouched. Returns the epigraph variable, or an invalid ref
/// when no auxiliary variable was needed. The rewritten objective never
/// exceeds the true cost anywhere on the variable's box.
VarRef add_convex_cost_epigraph(LinearModel& m, VarRef x, const CostFunction& f,
                                int segments);

/// Standard LP text (objective, rows, bounds sections), 17 significant
/// digits, variable names sanitized to the format's charset.
std::string write_lp_text(const LinearModel& m);

/// Reads "name value" lines produced by an external solver back into a
/// vector indexed by VarRef id. Unknown names are an error, missing
/// variables default to 0.
std::vector<double> read_solution_file(const LinearModel& m, const std::string& text);

}  // namespace opfcut::lp
