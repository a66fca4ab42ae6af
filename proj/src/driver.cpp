#include "opfcut/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace opfcut {

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Converged: return "Converged";
        case RunStatus::TimeLimit: return "TimeLimit";
        case RunStatus::Stalled: return "Stalled";
        case RunStatus::Infeasible: return "Infeasible";
        case RunStatus::NumericTrouble: return "NumericTrouble";
    }
    return "?";
}

double SteadyClock::now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

namespace {

struct ActiveSet {
    std::vector<Cut> cuts;
    std::vector<lp::ConstrRef> rows;
    std::vector<std::vector<lp::LinearTerm>> terms;

    bool has_parallel(const Cut& cut, double eps) const {
        for (const Cut& have : cuts)
            if (is_parallel(have, cut, eps)) return true;
        return false;
    }

    void install(ModelBundle& bundle, Cut cut) {
        auto t = bundle.cut_terms(cut);
        rows.push_back(bundle.model.add_constraint(t, lp::Sense::LE, cut.rhs));
        terms.push_back(std::move(t));
        cuts.push_back(cut);
    }
};

double dot_point(const std::vector<lp::LinearTerm>& terms, const lp::Solution& sol) {
    double v = 0;
    for (const lp::LinearTerm& t : terms)
        v += t.coeff * sol.values[static_cast<std::size_t>(t.var.id)];
    return v;
}

std::vector<BranchPoint> collect_points(const ModelBundle& bundle,
                                        const lp::Solution& sol) {
    const NetworkCase& net = *bundle.net;
    std::vector<BranchPoint> pts;
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const BranchParams& br = net.branches[i];
        const BranchVars& bv = bundle.branch[i];
        if (!bv.active) continue;
        BranchPoint p;
        p.branch = static_cast<int>(i);
        p.from = br.from_bus;
        p.to = br.to_bus;
        p.c = sol.value(bv.c);
        p.s = sol.value(bv.s);
        p.v2f = sol.value(bundle.v2[static_cast<std::size_t>(net.bus_index(br.from_bus))]);
        p.v2t = sol.value(bundle.v2[static_cast<std::size_t>(net.bus_index(br.to_bus))]);
        p.Pf = sol.value(bv.Pf);
        p.Qf = sol.value(bv.Qf);
        p.Pt = sol.value(bv.Pt);
        p.Qt = sol.value(bv.Qt);
        p.i2 = sol.value(bv.i2);
        if (br.U) {
            p.U = *br.U;
            p.has_U = true;
        }
        pts.push_back(p);
    }
    return pts;
}

}  // namespace

RunResult run(ModelBundle& bundle, const std::vector<Cut>& warm,
              const DriverParams& params, const lp::SolveOracle& oracle_in,
              TimeSource* clock_in) {
    if (params.time_limit < 0 || params.stall_limit < 1 || params.eps_ftol <= 0 ||
        (params.max_rounds && *params.max_rounds < 1))
        throw std::invalid_argument("bad driver parameters");

    const lp::SolveOracle& oracle =
        oracle_in ? oracle_in
                  : lp::SolveOracle([](const lp::LinearModel& m, const lp::SolveLimits& lim,
                                       const lp::SolveTolerances& tol) {
                        return lp::solve(m, lim, tol);
                    });
    SteadyClock fallback;
    TimeSource* clock = clock_in ? clock_in : &fallback;

    RunResult res;
    res.bound = -lp::kInf;

    ActiveSet active;
    for (const Cut& c : warm) {
        Cut cut = c;
        cut.birth_round = 0;
        cut.last_tight_round = 0;
        if (active.has_parallel(cut, params.policy.eps_parallel)) continue;
        active.install(bundle, cut);
    }

    const double start = clock->now();
    double z0 = lp::kInf;  // sentinel: round 1's improvement test always trips
    int stall = 0;
    RunStatus status = RunStatus::TimeLimit;

    for (int round = 1;; ++round) {
        if (round > 1 && clock->now() - start >= params.time_limit) {
            status = RunStatus::TimeLimit;
            break;
        }
        if (stall >= params.stall_limit) {
            status = RunStatus::Stalled;
            break;
        }
        if (params.max_rounds && round > *params.max_rounds) {
            status = RunStatus::TimeLimit;
            break;
        }

        lp::SolveLimits limits;
        if (round > 1 && std::isfinite(params.time_limit))
            limits.time_limit =
                std::max(0.0, params.time_limit - (clock->now() - start));
        const double t_solve = clock->now();
        const lp::Solution sol = oracle(bundle.model, limits, params.tol);
        const double solve_time = clock->now() - t_solve;

        if (sol.status == lp::SolveStatus::Infeasible) {
            status = RunStatus::Infeasible;
            res.bound = lp::kInf;
            break;
        }
        if (sol.status == lp::SolveStatus::NumericTrouble ||
            sol.status == lp::SolveStatus::Unbounded) {
            status = RunStatus::NumericTrouble;
            res.starred = true;
            break;
        }
        if (sol.status == lp::SolveStatus::TimeLimit) {
            status = RunStatus::TimeLimit;
            break;
        }

        const double z = sol.objective;
        if (sol.status == lp::SolveStatus::Optimal && z > res.bound) res.bound = z;

        RoundLog log;
        log.round = round;
        log.objective = z;
        log.solve_time = solve_time;

        const double t_sep = clock->now();
        const std::vector<BranchPoint> pts = collect_points(bundle, sol);
        const std::vector<BranchViolations> viol = scan_violations(pts);
        std::vector<int> pos_of_branch(bundle.net->branches.size(), -1);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            pos_of_branch[static_cast<std::size_t>(pts[i].branch)] = static_cast<int>(i);
            log.max_jabr = std::max(log.max_jabr, viol[i].jabr);
            log.max_i2 = std::max(log.max_i2, viol[i].i2);
            log.max_limit = std::max(log.max_limit, viol[i].limit());
        }
        const double eps = params.policy.eps_violation;
        if (log.max_jabr <= eps && log.max_i2 <= eps && log.max_limit <= eps) {
            log.separation_time = clock->now() - t_sep;
            res.rounds.push_back(log);
            status = RunStatus::Converged;
            break;
        }
        if (clock->now() - start >= params.time_limit) {
            log.separation_time = clock->now() - t_sep;
            res.rounds.push_back(log);
            status = RunStatus::TimeLimit;
            break;
        }

        const CandidateSet cand = select_candidates(pts, viol, params.policy);
        auto try_add = [&](const Separation& sep, double selected) {
            if (sep.outcome != SeparationOutcome::Cut) return;
            ++log.cuts_computed;
            Cut cut = sep.cut;
            cut.birth_round = round;
            cut.last_tight_round = round;
            if (active.has_parallel(cut, params.policy.eps_parallel)) {
                ++log.cuts_rejected_parallel;
                return;
            }
            active.install(bundle, cut);
            ++log.cuts_added;
            res.adds.push_back({round, cut, selected, sep.cut_violation});
        };
        for (const ViolationEntry& e : cand.jabr) {
            const BranchPoint& p = pts[static_cast<std::size_t>(
                pos_of_branch[static_cast<std::size_t>(e.branch)])];
            try_add(separate_rotated_cone(CutFamily::Jabr, e.from, e.to, p.c, p.s,
                                          p.v2f, p.v2t, eps),
                    e.violation);
        }
        for (const ViolationEntry& e : cand.i2) {
            const BranchPoint& p = pts[static_cast<std::size_t>(
                pos_of_branch[static_cast<std::size_t>(e.branch)])];
            try_add(separate_rotated_cone(CutFamily::I2, e.from, e.to, p.Pf, p.Qf,
                                          p.v2f, p.i2, eps),
                    e.violation);
        }
        for (const ViolationEntry& e : cand.limit) {
            const std::size_t pos = static_cast<std::size_t>(
                pos_of_branch[static_cast<std::size_t>(e.branch)]);
            const BranchPoint& p = pts[pos];
            if (viol[pos].limit_from > eps)
                try_add(separate_thermal(e.from, e.to, p.Pf, p.Qf, p.U, false, eps),
                        viol[pos].limit_from);
            if (viol[pos].limit_to > eps)
                try_add(separate_thermal(e.from, e.to, p.Pt, p.Qt, p.U, true, eps),
                        viol[pos].limit_to);
        }

        std::vector<double> slack(active.cuts.size());
        for (std::size_t i = 0; i < active.cuts.size(); ++i)
            slack[i] = active.cuts[i].rhs - dot_point(active.terms[i], sol);
        const std::vector<int> drops =
            age_and_expire(active.cuts, slack, round, params.policy);
        for (int di : drops) {
            const auto i = static_cast<std::size_t>(di);
            res.drops.push_back({round, active.cuts[i],
                                 round - active.cuts[i].birth_round, slack[i]});
        }
        for (auto it = drops.rbegin(); it != drops.rend(); ++it) {
            const auto i = static_cast<std::size_t>(*it);
            bundle.model.remove_constraint(active.rows[i]);
            active.cuts.erase(active.cuts.begin() + *it);
            active.rows.erase(active.rows.begin() + *it);
            active.terms.erase(active.terms.begin() + *it);
        }
        log.cuts_dropped = static_cast<int>(drops.size());

        bool no_improve;
        if (!std::isfinite(z0))
            no_improve = true;  // z - inf < inf * eps in IEEE terms
        else if (z0 > 0)
            no_improve = z - z0 < z0 * params.eps_ftol;
        else
            no_improve = z - z0 < params.eps_ftol;
        stall = no_improve ? stall + 1 : 0;
        z0 = z;

        log.separation_time = clock->now() - t_sep;
        res.rounds.push_back(log);
    }

    res.status = status;
    res.final_cuts = active.cuts;
    res.total_time = clock->now() - start;
    return res;
}

}  // namespace opfcut
