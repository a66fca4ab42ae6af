#pragma once

#include <optional>
#include <vector>

#include "opfcut/cuts.hpp"
#include "opfcut/lp.hpp"
#include "opfcut/relaxation.hpp"

namespace opfcut {

struct DriverParams {
    double time_limit = 1000.0;  // seconds; checked between rounds and before cut work
    int stall_limit = 5;         // consecutive low-improvement rounds tolerated
    double eps_ftol = 1e-5;      // relative improvement threshold
    CutPolicy policy;
    std::optional<int> max_rounds;
    lp::SolveTolerances tol;
};

struct RoundLog {
    int round = 0;
    double objective = 0;
    int cuts_computed = 0;
    int cuts_added = 0;
    int cuts_dropped = 0;
    int cuts_rejected_parallel = 0;
    double solve_time = 0;
    double separation_time = 0;
    double max_jabr = 0, max_i2 = 0, max_limit = 0;
};

enum class RunStatus { Converged, TimeLimit, Stalled, Infeasible, NumericTrouble };
const char* to_string(RunStatus s);

struct CutAddEvent {
    int round = 0;
    Cut cut;
    double violation = 0;      // family violation that selected the branch
    double cut_violation = 0;  // normal . point - rhs of the emitted cut
};

struct CutDropEvent {
    int round = 0;
    Cut cut;
    int age = 0;
    double slack = 0;
};

struct RunResult {
    RunStatus status = RunStatus::NumericTrouble;
    /// Best valid lower bound: last optimal objective, +inf when Infeasible,
    /// -inf when no solve finished. Echoes the previous round after numeric
    /// trouble, flagged by `starred`.
    double bound = 0;
    bool starred = false;
    double total_time = 0;
    std::vector<RoundLog> rounds;
    std::vector<Cut> final_cuts;  // active set at termination
    std::vector<CutAddEvent> adds;
    std::vector<CutDropEvent> drops;
};

/// Monotonic clock the driver consults; injectable so tests can pin times.
class TimeSource {
public:
    virtual ~TimeSource() = default;
    virtual double now() = 0;  // seconds
};

class SteadyClock : public TimeSource {
public:
    double now() override;
};

/// The cutting-plane loop: solve, scan violations, separate the selected
/// branches, reject near-parallel candidates, expire aged slack cuts, and
/// track stall/time termination. `warm` cuts (already rebound to this case)
/// enter before round 1 with birth_round 0; near-parallel duplicates among
/// them are dropped silently. The first solve always runs to completion so
/// even time_limit = 0 reports the cut-free bound.
RunResult run(ModelBundle& bundle, const std::vector<Cut>& warm,
              const DriverParams& params, const lp::SolveOracle& oracle = {},
              TimeSource* clock = nullptr);

}  // namespace opfcut
