#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace opfcut {

enum class CutFamily { Jabr, I2, Limit };
const char* to_string(CutFamily f);

/// A linear valid inequality normal . vars <= rhs with unit-norm normal.
/// Cone families use all four slots in (x, y, w, z) role order: Jabr binds
/// (c, s, v2_from, v2_to), i2 binds (P_from, Q_from, v2_from, i2). Limit
/// cuts use the first two slots on (P, Q) of one branch end.
struct Cut {
    CutFamily family = CutFamily::Jabr;
    int from = 0, to = 0;  // external bus labels of the owning branch
    std::array<double, 4> normal{};
    bool to_side = false;  // limit cuts only: flow measured at the to end
    double rhs = 0.0;
    int birth_round = 0;
    int last_tight_round = 0;
};

struct CutPolicy {
    double eps_violation = 1e-5;
    double p_jabr = 0.55;
    double p_i2 = 0.15;
    double p_limit = 1.0;
    int t_age = 5;
    double eps_parallel = 5e-6;
    double eps_slack = 1e-5;
};

/// max{x^2 + y^2 - w z, 0}.
double rotated_cone_violation(double x, double y, double w, double z);

enum class SeparationOutcome { Cut, Satisfied, OutsideDomain };

struct Separation {
    SeparationOutcome outcome = SeparationOutcome::Satisfied;
    Cut cut;
    double cut_violation = 0.0;  // normal . point - rhs of the emitted cut
};

/// Maximum-violation supporting hyperplane of the rotated cone at a point
/// outside it. Satisfied when the violation is at most eps; OutsideDomain
/// when the point is violated but w + z <= 0, where no such cut exists.
Separation separate_rotated_cone(CutFamily family, int from, int to, double x,
                                 double y, double w, double z, double eps);

/// Tangent of the thermal disk of radius U at the radial projection of
/// (P, Q). Satisfied when P^2 + Q^2 <= U^2 + eps.
Separation separate_thermal(int from, int to, double P, double Q, double U,
                            bool to_side, double eps);

/// True when both cuts act on the same branch and family and the cosine of
/// the angle between their normals exceeds 1 - eps_parallel. Symmetric and
/// invariant to rescaling either normal.
bool is_parallel(const Cut& a, const Cut& b, double eps_parallel);

/// Solution values of one branch, the unit of work of the violation scan.
struct BranchPoint {
    int branch = -1;  // position in the case branch list
    int from = 0, to = 0;
    double c = 0, s = 0, v2f = 0, v2t = 0;
    double Pf = 0, Qf = 0, i2 = 0;
    double Pt = 0, Qt = 0;
    double U = 0;
    bool has_U = false;
};

struct BranchViolations {
    double jabr = 0, i2 = 0, limit_from = 0, limit_to = 0;
    double limit() const { return limit_from > limit_to ? limit_from : limit_to; }
};

/// Per-branch cone and disk violations, indexed like the input. The serial
/// form is the reference; the default form fans out across branches with
/// OpenMP and produces bit-identical output since each slot is independent.
std::vector<BranchViolations> scan_violations_serial(const std::vector<BranchPoint>& pts);
std::vector<BranchViolations> scan_violations(const std::vector<BranchPoint>& pts);

struct ViolationEntry {
    int branch = -1;
    int from = 0, to = 0;
    double violation = 0.0;
};

struct CandidateSet {
    std::vector<ViolationEntry> jabr, i2, limit;
};

/// Per family: branches violated beyond eps_violation, sorted by violation
/// descending with (from, to) ascending on ties, truncated to
/// ceil(p_family * violated_count).
CandidateSet select_candidates(const std::vector<BranchPoint>& pts,
                               const std::vector<BranchViolations>& viol,
                               const CutPolicy& policy);

/// Indices (ascending) of cuts aged at least t_age rounds whose slack
/// exceeds eps_slack. Cuts tight at the current point get last_tight_round
/// refreshed instead.
std::vector<int> age_and_expire(std::vector<Cut>& cuts,
                                const std::vector<double>& slack, int round,
                                const CutPolicy& policy);

}  // namespace opfcut
