#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "opfcut/lp.hpp"

// Bounded-variable primal simplex, two phases with explicit artificials,
// dense basis inverse with product-form updates and periodic
// refactorization, Dantzig pricing with a Bland fallback once the objective
// stalls. Sized for desk-scale models (a few thousand rows).

namespace opfcut::lp {

namespace {

struct Col {
    std::vector<std::pair<int, double>> entries;  // (dense row, coeff)
    double lb = -kInf, ub = kInf;
    double cost = 0.0;  // phase-2 cost
};

struct Standard {
    int m = 0;
    int n_struct = 0;       // structural columns (model variables)
    int n = 0;              // structural + slack
    std::vector<Col> cols;  // artificials are appended past n by the solver
    std::vector<double> b;
};

Standard build_standard(const LinearModel& mdl) {
    Standard s;
    s.n_struct = mdl.num_vars();
    s.cols.resize(s.n_struct);
    for (int j = 0; j < s.n_struct; ++j) {
        const auto& v = mdl.vars()[j];
        s.cols[j].lb = v.lb;
        s.cols[j].ub = v.ub;
        s.cols[j].cost = v.obj;
    }
    for (const auto& row : mdl.rows()) {
        if (!row.alive) continue;
        const int i = s.m++;
        s.b.push_back(row.rhs);
        for (const auto& [var, coeff] : row.terms)
            if (coeff != 0.0) s.cols[var].entries.emplace_back(i, coeff);
        Col slack;
        slack.entries.emplace_back(i, 1.0);
        switch (row.sense) {
            case Sense::LE: slack.lb = 0.0; slack.ub = kInf; break;
            case Sense::GE: slack.lb = -kInf; slack.ub = 0.0; break;
            case Sense::EQ: slack.lb = 0.0; slack.ub = 0.0; break;
        }
        s.cols.push_back(std::move(slack));
    }
    s.n = static_cast<int>(s.cols.size());
    return s;
}

enum class CoreExit { Optimal, Unbounded, IterLimit, TimeLimit, Numeric };

class Simplex {
public:
    Simplex(Standard sf, SolveLimits lim, SolveTolerances tol)
        : sf_(std::move(sf)), lim_(lim), tol_(tol) {}

    // Runs both phases. Returns the phase-2 exit (or the phase-1 exit when
    // feasibility was never reached).
    CoreExit run() {
        start_ = std::chrono::steady_clock::now();
        m_ = sf_.m;
        x_.assign(sf_.cols.size(), 0.0);
        vstat_.assign(sf_.cols.size(), kLower);
        for (int j = 0; j < sf_.n; ++j) {
            const Col& c = sf_.cols[j];
            if (std::isfinite(c.lb)) { x_[j] = c.lb; vstat_[j] = kLower; }
            else if (std::isfinite(c.ub)) { x_[j] = c.ub; vstat_[j] = kUpper; }
            else { x_[j] = 0.0; vstat_[j] = kFree; }
        }

        // Residual each slack cannot absorb goes to an artificial column.
        std::vector<double> resid(sf_.b);
        for (int j = 0; j < sf_.n; ++j) {
            if (x_[j] == 0.0) continue;
            for (const auto& [i, a] : sf_.cols[j].entries) resid[i] -= a * x_[j];
        }
        basis_.assign(m_, -1);
        for (int i = 0; i < m_; ++i) {
            const int slack = sf_.n_struct + i;
            const Col& sc = sf_.cols[slack];
            const double want = x_[slack] + resid[i];
            if (want >= sc.lb - 1e-12 && want <= sc.ub + 1e-12) {
                basis_[i] = slack;
                vstat_[slack] = kBasic;
                x_[slack] = want;
            } else {
                Col art;
                art.entries.emplace_back(i, resid[i] >= 0 ? 1.0 : -1.0);
                art.lb = 0.0;
                art.ub = kInf;
                art.cost = 0.0;
                const int aj = static_cast<int>(sf_.cols.size());
                sf_.cols.push_back(std::move(art));
                x_.push_back(std::abs(resid[i]));
                vstat_.push_back(kBasic);
                basis_[i] = aj;
                artificials_.push_back(aj);
            }
        }
        if (!refactorize()) return CoreExit::Numeric;

        if (!artificials_.empty()) {
            phase1_ = true;
            CoreExit e = iterate();
            if (e != CoreExit::Optimal) return e;
            infeas_sum_ = 0.0;
            for (int aj : artificials_) infeas_sum_ += std::abs(x_[aj]);
            double bscale = 1.0;
            for (double bi : sf_.b) bscale = std::max(bscale, std::abs(bi));
            if (infeas_sum_ > tol_.feasibility * bscale * 10.0) {
                infeasible_ = true;
                // Dual vector of the infeasibility objective = the Farkas row
                // combination.
                farkas_.assign(m_, 0.0);
                for (int r = 0; r < m_; ++r) {
                    const double cb = cost_of(basis_[r]);
                    if (cb == 0.0) continue;
                    const double* row = &Binv_[static_cast<std::size_t>(r) * m_];
                    for (int i = 0; i < m_; ++i) farkas_[i] += cb * row[i];
                }
                return CoreExit::Optimal;
            }
            for (int aj : artificials_) {
                sf_.cols[aj].ub = 0.0;
                if (vstat_[aj] == kBasic) pivot_out_artificial(aj);
                x_[aj] = 0.0;
            }
        }
        phase1_ = false;
        feasible_reached_ = true;
        return iterate();
    }

    bool infeasible() const { return infeasible_; }
    bool feasible_reached() const { return feasible_reached_; }
    const std::vector<double>& values() const { return x_; }
    const std::vector<double>& farkas() const { return farkas_; }
    long iterations() const { return iters_; }

private:
    static constexpr int kLower = 0, kUpper = 1, kFree = 2, kBasic = 3;
    static constexpr double kPivTol = 1e-9;

    double cost_of(int j) const {
        if (phase1_)
            return std::binary_search(artificials_.begin(), artificials_.end(), j)
                       ? 1.0
                       : 0.0;
        return sf_.cols[j].cost;
    }

    double objective() const {
        double z = 0.0;
        if (phase1_) {
            for (int aj : artificials_) z += x_[aj];
        } else {
            for (int j = 0; j < sf_.n_struct; ++j) z += sf_.cols[j].cost * x_[j];
        }
        return z;
    }

    bool refactorize() {
        // Dense Gauss-Jordan inverse of the basis matrix.
        const std::size_t mm = static_cast<std::size_t>(m_) * m_;
        std::vector<double> a(mm, 0.0);
        Binv_.assign(mm, 0.0);
        for (int r = 0; r < m_; ++r) {
            for (const auto& [i, v] : sf_.cols[basis_[r]].entries)
                a[static_cast<std::size_t>(i) * m_ + r] = v;
            Binv_[static_cast<std::size_t>(r) * m_ + r] = 1.0;
        }
        for (int k = 0; k < m_; ++k) {
            int piv = -1;
            double best = 1e-12;
            for (int i = k; i < m_; ++i) {
                double mag = std::abs(a[static_cast<std::size_t>(i) * m_ + k]);
                if (mag > best) { best = mag; piv = i; }
            }
            if (piv < 0) return false;
            if (piv != k) {
                for (int c = 0; c < m_; ++c) {
                    std::swap(a[static_cast<std::size_t>(piv) * m_ + c],
                              a[static_cast<std::size_t>(k) * m_ + c]);
                    std::swap(Binv_[static_cast<std::size_t>(piv) * m_ + c],
                              Binv_[static_cast<std::size_t>(k) * m_ + c]);
                }
            }
            const double d = a[static_cast<std::size_t>(k) * m_ + k];
            for (int c = 0; c < m_; ++c) {
                a[static_cast<std::size_t>(k) * m_ + c] /= d;
                Binv_[static_cast<std::size_t>(k) * m_ + c] /= d;
            }
            for (int i = 0; i < m_; ++i) {
                if (i == k) continue;
                const double f = a[static_cast<std::size_t>(i) * m_ + k];
                if (f == 0.0) continue;
                for (int c = 0; c < m_; ++c) {
                    a[static_cast<std::size_t>(i) * m_ + c] -=
                        f * a[static_cast<std::size_t>(k) * m_ + c];
                    Binv_[static_cast<std::size_t>(i) * m_ + c] -=
                        f * Binv_[static_cast<std::size_t>(k) * m_ + c];
                }
            }
        }
        recompute_basics();
        return true;
    }

    void recompute_basics() {
        std::vector<double> rhs(sf_.b);
        for (std::size_t j = 0; j < sf_.cols.size(); ++j) {
            if (vstat_[j] == kBasic || x_[j] == 0.0) continue;
            for (const auto& [i, a] : sf_.cols[j].entries) rhs[i] -= a * x_[j];
        }
        for (int r = 0; r < m_; ++r) {
            const double* row = &Binv_[static_cast<std::size_t>(r) * m_];
            double v = 0.0;
            for (int i = 0; i < m_; ++i) v += row[i] * rhs[i];
            x_[basis_[r]] = v;
        }
    }

    void ftran(int j, std::vector<double>& d) const {
        d.assign(m_, 0.0);
        for (const auto& [i, a] : sf_.cols[j].entries)
            for (int r = 0; r < m_; ++r)
                d[r] += Binv_[static_cast<std::size_t>(r) * m_ + i] * a;
    }

    void pivot_out_artificial(int aj) {
        int row = -1;
        for (int r = 0; r < m_; ++r)
            if (basis_[r] == aj) { row = r; break; }
        if (row < 0) return;
        // Prefer any non-artificial column with a usable pivot in this row.
        std::vector<double> d;
        for (int j = 0; j < sf_.n; ++j) {
            if (vstat_[j] == kBasic) continue;
            double piv = 0.0;
            for (const auto& [i, a] : sf_.cols[j].entries)
                piv += Binv_[static_cast<std::size_t>(row) * m_ + i] * a;
            if (std::abs(piv) > 1e-7) {
                ftran(j, d);
                apply_pivot(j, row, d, 0.0, vstat_[j] == kUpper ? -1 : +1);
                return;
            }
        }
        // Redundant row: the artificial stays basic at zero, now fixed.
    }

    // Entering j moves by t in direction sigma; leaving row r (or -1 for a
    // bound flip).
    void apply_pivot(int j, int r, const std::vector<double>& d, double t,
                     int sigma) {
        if (t != 0.0) {
            for (int i = 0; i < m_; ++i)
                if (d[i] != 0.0) x_[basis_[i]] -= sigma * t * d[i];
            x_[j] += sigma * t;
        }
        if (r < 0) {  // bound flip
            vstat_[j] = vstat_[j] == kLower ? kUpper : kLower;
            x_[j] = vstat_[j] == kLower ? sf_.cols[j].lb : sf_.cols[j].ub;
            return;
        }
        const int leave = basis_[r];
        const double piv = d[r];
        // Snap the leaving variable onto the bound that blocked.
        const Col& lc = sf_.cols[leave];
        const double rate = -sigma * piv;
        if (rate < 0) { x_[leave] = lc.lb; vstat_[leave] = kLower; }
        else { x_[leave] = lc.ub; vstat_[leave] = kUpper; }
        basis_[r] = j;
        vstat_[j] = kBasic;
        // Product-form update of the dense inverse.
        double* rowr = &Binv_[static_cast<std::size_t>(r) * m_];
        for (int c = 0; c < m_; ++c) rowr[c] /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == r || d[i] == 0.0) continue;
            double* rowi = &Binv_[static_cast<std::size_t>(i) * m_];
            const double f = d[i];
            for (int c = 0; c < m_; ++c) rowi[c] -= f * rowr[c];
        }
    }

    CoreExit iterate() {
        std::vector<double> y(m_), d;
        int since_refactor = 0;
        long stall_iters = 0;
        double last_obj = objective();
        bool bland = false;

        double cmax = 1.0;
        for (std::size_t j = 0; j < sf_.cols.size(); ++j)
            cmax = std::max(cmax, std::abs(cost_of(static_cast<int>(j))));
        const double dj_tol = tol_.optimality * cmax;

        while (true) {
            if (iters_ >= lim_.iteration_limit) return CoreExit::IterLimit;
            if ((iters_ & 127) == 0 && std::isfinite(lim_.time_limit)) {
                const double el =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                  start_)
                        .count();
                if (el >= lim_.time_limit) return CoreExit::TimeLimit;
            }
            if (++since_refactor >= 64) {
                if (!refactorize()) return CoreExit::Numeric;
                since_refactor = 0;
            }

            // y = cB' * Binv
            std::fill(y.begin(), y.end(), 0.0);
            for (int r = 0; r < m_; ++r) {
                const double cb = cost_of(basis_[r]);
                if (cb == 0.0) continue;
                const double* row = &Binv_[static_cast<std::size_t>(r) * m_];
                for (int i = 0; i < m_; ++i) y[i] += cb * row[i];
            }

            int enter = -1, sigma = +1;
            double best_score = dj_tol;
            const int ncols = static_cast<int>(sf_.cols.size());
            for (int j = 0; j < ncols; ++j) {
                const int st = vstat_[j];
                if (st == kBasic) continue;
                const Col& cj = sf_.cols[j];
                if (cj.lb == cj.ub) continue;  // fixed, cannot move
                double dj = cost_of(j);
                for (const auto& [i, a] : cj.entries) dj -= y[i] * a;
                int dir = 0;
                double score = 0.0;
                if (st == kLower && dj < -dj_tol) { dir = +1; score = -dj; }
                else if (st == kUpper && dj > dj_tol) { dir = -1; score = dj; }
                else if (st == kFree && std::abs(dj) > dj_tol) {
                    dir = dj < 0 ? +1 : -1;
                    score = std::abs(dj);
                }
                if (dir == 0) continue;
                if (bland) { enter = j; sigma = dir; break; }
                if (score > best_score) { best_score = score; enter = j; sigma = dir; }
            }
            if (enter < 0) return CoreExit::Optimal;

            ftran(enter, d);
            const Col& ec = sf_.cols[enter];
            double best_t = (std::isfinite(ec.lb) && std::isfinite(ec.ub))
                                ? ec.ub - ec.lb
                                : kInf;
            int leave_r = -1;
            double leave_piv = 0.0;
            for (int r = 0; r < m_; ++r) {
                const double rate = -sigma * d[r];
                if (std::abs(rate) <= kPivTol) continue;
                const Col& bc = sf_.cols[basis_[r]];
                double t;
                if (rate < 0) {
                    if (!std::isfinite(bc.lb)) continue;
                    t = (x_[basis_[r]] - bc.lb) / -rate;
                } else {
                    if (!std::isfinite(bc.ub)) continue;
                    t = (bc.ub - x_[basis_[r]]) / rate;
                }
                if (t < 0) t = 0;
                bool take = false;
                if (t < best_t - 1e-12) {
                    take = true;
                } else if (t < best_t + 1e-12 && leave_r >= 0) {
                    // Near-ties: Bland keeps the smallest index, otherwise
                    // prefer the larger pivot for stability.
                    take = bland ? basis_[r] < basis_[leave_r]
                                 : std::abs(d[r]) > std::abs(leave_piv);
                }
                if (take) {
                    best_t = std::min(best_t, t);
                    leave_r = r;
                    leave_piv = d[r];
                }
            }
            if (!std::isfinite(best_t)) return CoreExit::Unbounded;
            if (leave_r >= 0 && std::abs(d[leave_r]) <= kPivTol) {
                if (!refactorize()) return CoreExit::Numeric;
                since_refactor = 0;
                continue;
            }
            apply_pivot(enter, leave_r, d, best_t, sigma);
            ++iters_;

            const double obj = objective();
            if (obj < last_obj - 1e-13 * (1.0 + std::abs(last_obj))) {
                last_obj = obj;
                stall_iters = 0;
            } else if (!bland && ++stall_iters > 600 + 2 * m_) {
                bland = true;  // anti-cycling from here on
            }
        }
    }

    Standard sf_;
    SolveLimits lim_;
    SolveTolerances tol_;
    std::chrono::steady_clock::time_point start_;
    int m_ = 0;
    std::vector<int> basis_;
    std::vector<int> vstat_;
    std::vector<double> x_;
    std::vector<double> Binv_;
    std::vector<int> artificials_;
    std::vector<double> farkas_;
    bool phase1_ = false;
    bool infeasible_ = false;
    bool feasible_reached_ = false;
    double infeas_sum_ = 0.0;
    long iters_ = 0;
};

// max over the box of y'Ax minus y'b; a verified certificate is < 0.
bool farkas_certificate_holds(const Standard& sf, const std::vector<double>& y,
                              double tol) {
    double ymax = 0.0;
    for (double v : y) ymax = std::max(ymax, std::abs(v));
    if (ymax == 0.0) return false;
    double sup = 0.0, yb = 0.0;
    for (int i = 0; i < sf.m; ++i) yb += y[i] * sf.b[i];
    for (int j = 0; j < sf.n; ++j) {
        double v = 0.0;
        for (const auto& [i, a] : sf.cols[j].entries) v += y[i] * a;
        if (std::abs(v) <= 1e-9 * ymax) continue;
        const double bound = v > 0 ? sf.cols[j].ub : sf.cols[j].lb;
        if (!std::isfinite(bound)) return false;
        sup += v * bound;
    }
    return yb - sup > tol * ymax;
}

bool point_feasible(const LinearModel& m, const std::vector<double>& x,
                    double tol) {
    for (int j = 0; j < m.num_vars(); ++j) {
        const auto& v = m.vars()[j];
        const double scale = 1.0 + std::abs(x[j]);
        if (x[j] < v.lb - tol * scale || x[j] > v.ub + tol * scale) return false;
    }
    for (const auto& row : m.rows()) {
        if (!row.alive) continue;
        double lhs = 0.0, mag = std::abs(row.rhs);
        for (const auto& [var, coeff] : row.terms) {
            lhs += coeff * x[var];
            mag = std::max(mag, std::abs(coeff * x[var]));
        }
        const double slack = row.rhs - lhs, eps = tol * (1.0 + mag);
        if (row.sense == Sense::LE && slack < -eps) return false;
        if (row.sense == Sense::GE && slack > eps) return false;
        if (row.sense == Sense::EQ && std::abs(slack) > eps) return false;
    }
    return true;
}

}  // namespace

Solution solve(const LinearModel& m, const SolveLimits& limits,
               const SolveTolerances& tol) {
    if (m.has_quadratic())
        throw std::invalid_argument(
            "bundled backend is linear only; rewrite quadratics first");

    Solution out;
    Standard sf = build_standard(m);

    if (sf.n_struct == 0) {
        out.status = SolveStatus::Optimal;
        out.objective = m.objective_constant();
        return out;
    }

    Simplex splx(sf, limits, tol);
    const CoreExit e = splx.run();
    out.iterations = splx.iterations();
    out.values.assign(splx.values().begin(),
                      splx.values().begin() + sf.n_struct);

    if (splx.infeasible()) {
        if (farkas_certificate_holds(sf, splx.farkas(), tol.feasibility)) {
            out.status = SolveStatus::Infeasible;
            out.farkas = splx.farkas();
        } else {
            out.status = SolveStatus::NumericTrouble;
        }
        return out;
    }

    switch (e) {
        case CoreExit::Optimal:
            out.status = point_feasible(m, out.values, tol.feasibility)
                             ? SolveStatus::Optimal
                             : SolveStatus::NumericTrouble;
            break;
        case CoreExit::Unbounded:
            out.status = SolveStatus::Unbounded;
            break;
        case CoreExit::IterLimit:
        case CoreExit::TimeLimit:
            if (splx.feasible_reached() &&
                point_feasible(m, out.values, tol.feasibility))
                out.status = SolveStatus::SuboptimalFeasible;
            else
                out.status = SolveStatus::TimeLimit;
            break;
        case CoreExit::Numeric:
            out.status = SolveStatus::NumericTrouble;
            break;
    }
    if (out.status == SolveStatus::Optimal ||
        out.status == SolveStatus::SuboptimalFeasible)
        out.objective = m.objective_value(out.values);
    return out;
}

}  // namespace opfcut::lp
