#pragma once

#include <string>
#include <vector>

#include "opfcut/cuts.hpp"
#include "opfcut/lp.hpp"
#include "opfcut/network.hpp"

namespace opfcut {

/// Linear coefficients of the squared from-side current magnitude:
/// i2 = alpha*v2_from + beta*v2_to + gamma*c + zeta*s.
struct I2Coefficients {
    double alpha = 0, beta = 0, gamma = 0, zeta = 0;
};

/// Exact closed-form coefficients from the branch admittances. For a line
/// with tau=1, sigma=0 and no shunt they reduce to (g^2+b^2)*(1,1,-2,0).
I2Coefficients i2_coefficients(const BranchParams& p);

struct BuildOptions {
    /// Tangent count per quadratic cost term in the epigraph objective.
    int cost_segments = 10;
};

/// Variable handles of one branch; inactive slots carry invalid refs.
struct BranchVars {
    bool active = false;
    lp::VarRef c, s, Pf, Qf, Pt, Qt, i2;
};

/// The linear lower-bound model plus the handle maps needed to address its
/// variables by network entity. `net` aliases the case passed to
/// build_base_model and must outlive the bundle.
struct ModelBundle {
    lp::LinearModel model;
    const NetworkCase* net = nullptr;
    BuildOptions opts;
    std::vector<lp::VarRef> v2;      // per bus, bus order
    std::vector<BranchVars> branch;  // per branch, case order
    std::vector<lp::VarRef> pg, qg;  // per generator; invalid when off

    /// LP terms of a cut bound against this bundle's variables. Zero
    /// coefficients are omitted. Throws when the cut's branch is absent
    /// or out of service.
    std::vector<lp::LinearTerm> cut_terms(const Cut& cut) const;

    /// First in-service branch with these exact from/to labels, -1 if none.
    int find_branch(int from, int to) const;
};

/// Assembles the linearly constrained base model: flow-definition, balance,
/// and squared-current rows, variable bounds, and the convex cost epigraph.
/// Cone and disk constraints are absent on purpose; they enter as cuts.
/// Throws on an in-service zero-impedance branch.
ModelBundle build_base_model(const NetworkCase& net, const BuildOptions& opts = {});

/// One loss-envelope cut 2c <= v2_from + v2_to per in-service branch
/// (unit-normalized), family Jabr, round 0.
std::vector<Cut> seed_envelopes(const ModelBundle& bundle);

/// A candidate operating point in polar coordinates, indexed like the case.
struct PrimalPoint {
    std::vector<double> vm, va;  // per bus (va in radians)
    std::vector<double> pg, qg;  // per generator; ignored when off
};

/// Text form: `bus <label> vm <v> va <rad>` and `gen <ordinal> pg <p> qg <q>`
/// lines, ordinals 1-based over the case generator list. Parsing requires
/// every bus and every in-service generator; errors carry line numbers.
PrimalPoint parse_primal_point(const std::string& text, const NetworkCase& net);
std::string write_primal_point(const PrimalPoint& p, const NetworkCase& net);

/// Both-end branch flows implied by a voltage point; zero rows for
/// out-of-service branches.
struct BranchFlow {
    double Pf = 0, Qf = 0, Pt = 0, Qt = 0;
};
std::vector<BranchFlow> branch_flows(const NetworkCase& net, const PrimalPoint& p);

struct ResidualEntry {
    std::string what;
    double value = 0;
};

/// Constraint violations of a candidate point. Flows are derived from the
/// voltages, so flow-definition rows hold identically and only balance,
/// bound, and thermal categories can be nonzero.
struct ResidualReport {
    double max_balance = 0;
    double max_bound = 0;
    double max_thermal = 0;
    double objective = 0;
    std::vector<ResidualEntry> violations;  // positive residuals, largest first

    double max_violation() const {
        double m = max_balance > max_bound ? max_balance : max_bound;
        return max_thermal > m ? max_thermal : m;
    }
};

ResidualReport acopf_residuals(const NetworkCase& net, const PrimalPoint& p);

}  // namespace opfcut
