#include "opfcut/lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace opfcut::lp {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::SuboptimalFeasible: return "SuboptimalFeasible";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Unbounded: return "Unbounded";
        case SolveStatus::NumericTrouble: return "NumericTrouble";
        case SolveStatus::TimeLimit: return "TimeLimit";
    }
    return "?";
}

namespace {
void check_bounds(double lb, double ub) {
    if (std::isnan(lb) || std::isnan(ub))
        throw std::invalid_argument("NaN bound");
    if (lb > ub) throw std::invalid_argument("lower bound exceeds upper bound");
}
}  // namespace

VarRef LinearModel::add_variable(std::string name, double lb, double ub) {
    check_bounds(lb, ub);
    vars_.push_back(Var{std::move(name), lb, ub, 0.0, 0.0});
    return VarRef{static_cast<int>(vars_.size()) - 1};
}

void LinearModel::check_var(VarRef v) const {
    if (v.id < 0 || v.id >= static_cast<int>(vars_.size()))
        throw std::invalid_argument("stale variable reference");
}

void LinearModel::set_bounds(VarRef v, double lb, double ub) {
    check_var(v);
    check_bounds(lb, ub);
    vars_[v.id].lb = lb;
    vars_[v.id].ub = ub;
}

void LinearModel::set_objective_coeff(VarRef v, double linear) {
    check_var(v);
    if (std::isnan(linear)) throw std::invalid_argument("NaN objective coefficient");
    vars_[v.id].obj = linear;
}

void LinearModel::set_quadratic_coeff(VarRef v, double quad) {
    check_var(v);
    if (std::isnan(quad) || quad < 0)
        throw std::invalid_argument("quadratic objective coefficient must be >= 0");
    vars_[v.id].qobj = quad;
}

ConstrRef LinearModel::add_constraint(const std::vector<LinearTerm>& terms,
                                      Sense sense, double rhs) {
    if (std::isnan(rhs) || std::isinf(rhs))
        throw std::invalid_argument("constraint rhs must be finite");
    std::map<int, double> coalesced;
    for (const auto& t : terms) {
        check_var(t.var);
        if (std::isnan(t.coeff) || std::isinf(t.coeff))
            throw std::invalid_argument("constraint coefficient must be finite");
        coalesced[t.var.id] += t.coeff;
    }
    Row row;
    row.terms.assign(coalesced.begin(), coalesced.end());
    row.sense = sense;
    row.rhs = rhs;
    row.alive = true;
    rows_.push_back(std::move(row));
    ++rows_alive_;
    return ConstrRef{static_cast<int>(rows_.size()) - 1};
}

void LinearModel::remove_constraint(ConstrRef r) {
    if (r.id < 0 || r.id >= static_cast<int>(rows_.size()) || !rows_[r.id].alive)
        throw std::invalid_argument("stale constraint handle");
    rows_[r.id].alive = false;
    rows_[r.id].terms.clear();
    --rows_alive_;
}

const LinearModel::Var& LinearModel::var(VarRef v) const {
    check_var(v);
    return vars_[v.id];
}

const LinearModel::Row& LinearModel::row(ConstrRef r) const {
    if (r.id < 0 || r.id >= static_cast<int>(rows_.size()) || !rows_[r.id].alive)
        throw std::invalid_argument("stale constraint handle");
    return rows_[r.id];
}

bool LinearModel::has_quadratic() const {
    return std::any_of(vars_.begin(), vars_.end(),
                       [](const Var& v) { return v.qobj > 0.0; });
}

double LinearModel::objective_value(const std::vector<double>& x) const {
    double z = obj_constant_;
    for (std::size_t j = 0; j < vars_.size(); ++j)
        z += vars_[j].obj * x[j] + vars_[j].qobj * x[j] * x[j];
    return z;
}

VarRef add_convex_cost_epigraph(LinearModel& m, VarRef x, const CostFunction& f,
                                int segments) {
    if (segments < 1) throw std::invalid_argument("segments must be >= 1");
    if (!f.convex()) throw std::invalid_argument("cost is not convex");
    const auto& xv = m.var(x);

    if (f.kind == CostFunction::Kind::Quadratic) {
        if (f.c2 <= 0.0) {
            m.set_objective_coeff(x, m.var(x).obj + f.c1);
            m.add_objective_constant(f.c0);
            return VarRef{};
        }
        if (std::isinf(xv.lb) || std::isinf(xv.ub))
            throw std::invalid_argument("epigraph needs finite bounds on " + xv.name);
        VarRef t = m.add_variable("t@" + xv.name, -kInf, kInf);
        m.set_objective_coeff(t, 1.0);
        const double lo = xv.lb, hi = xv.ub;
        const double h = (hi - lo) / segments;
        for (int i = 0; i < segments; ++i) {
            // Tangent at the segment midpoint: t >= (2*c2*p + c1)*x + c0 - c2*p^2.
            const double p = h > 0 ? lo + (i + 0.5) * h : lo;
            const double a = 2.0 * f.c2 * p + f.c1;
            const double bshift = f.c0 - f.c2 * p * p;
            m.add_constraint({{x, a}, {t, -1.0}}, Sense::LE, -bshift);
            if (h == 0) break;
        }
        return t;
    }

    // Piecewise-linear: one supporting line per segment.
    const auto& pts = f.points;
    if (pts.empty()) throw std::invalid_argument("empty piecewise cost");
    VarRef t = m.add_variable("t@" + xv.name, -kInf, kInf);
    m.set_objective_coeff(t, 1.0);
    if (pts.size() == 1) {
        m.set_bounds(t, pts[0].second, kInf);
        return t;
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double slope = (pts[i].second - pts[i - 1].second) /
                             (pts[i].first - pts[i - 1].first);
        const double intercept = pts[i - 1].second - slope * pts[i - 1].first;
        m.add_constraint({{x, slope}, {t, -1.0}}, Sense::LE, -intercept);
    }
    return t;
}

}  // namespace opfcut::lp
