#include "opfcut/cuts.hpp"

#include <algorithm>
#include <cmath>

namespace opfcut {

const char* to_string(CutFamily f) {
    switch (f) {
        case CutFamily::Jabr: return "jabr";
        case CutFamily::I2: return "i2";
        case CutFamily::Limit: return "limit";
    }
    return "?";
}

double rotated_cone_violation(double x, double y, double w, double z) {
    const double f = x * x + y * y - w * z;
    return f > 0.0 ? f : 0.0;
}

Separation separate_rotated_cone(CutFamily family, int from, int to, double x,
                                 double y, double w, double z, double eps) {
    Separation sep;
    const double f = x * x + y * y - w * z;
    if (f <= eps) {
        sep.outcome = SeparationOutcome::Satisfied;
        return sep;
    }
    if (w + z <= 0.0) {
        sep.outcome = SeparationOutcome::OutsideDomain;
        return sep;
    }
    const double n0 = std::sqrt(4 * x * x + 4 * y * y + (w - z) * (w - z));
    std::array<double, 4> a{4 * x, 4 * y, (w - z) - n0, -(w - z) - n0};
    const double norm =
        std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
    for (double& v : a) v /= norm;

    sep.outcome = SeparationOutcome::Cut;
    sep.cut.family = family;
    sep.cut.from = from;
    sep.cut.to = to;
    sep.cut.normal = a;
    sep.cut.rhs = 0.0;
    sep.cut_violation = a[0] * x + a[1] * y + a[2] * w + a[3] * z;
    return sep;
}

Separation separate_thermal(int from, int to, double P, double Q, double U,
                            bool to_side, double eps) {
    Separation sep;
    const double f = P * P + Q * Q - U * U;
    if (f <= eps) {
        sep.outcome = SeparationOutcome::Satisfied;
        return sep;
    }
    const double norm = std::sqrt(P * P + Q * Q);
    sep.outcome = SeparationOutcome::Cut;
    sep.cut.family = CutFamily::Limit;
    sep.cut.from = from;
    sep.cut.to = to;
    sep.cut.to_side = to_side;
    sep.cut.normal = {P / norm, Q / norm, 0.0, 0.0};
    sep.cut.rhs = U;
    sep.cut_violation = norm - U;
    return sep;
}

bool is_parallel(const Cut& a, const Cut& b, double eps_parallel) {
    if (a.family != b.family || a.from != b.from || a.to != b.to ||
        a.to_side != b.to_side)
        return false;
    double dot = 0, na = 0, nb = 0;
    for (int i = 0; i < 4; ++i) {
        dot += a.normal[i] * b.normal[i];
        na += a.normal[i] * a.normal[i];
        nb += b.normal[i] * b.normal[i];
    }
    if (na == 0.0 || nb == 0.0) return false;
    return dot / std::sqrt(na * nb) > 1.0 - eps_parallel;
}

static BranchViolations scan_one(const BranchPoint& p) {
    BranchViolations v;
    v.jabr = rotated_cone_violation(p.c, p.s, p.v2f, p.v2t);
    v.i2 = rotated_cone_violation(p.Pf, p.Qf, p.v2f, p.i2);
    if (p.has_U) {
        const double r2 = p.U * p.U;
        const double ff = p.Pf * p.Pf + p.Qf * p.Qf - r2;
        const double ft = p.Pt * p.Pt + p.Qt * p.Qt - r2;
        v.limit_from = ff > 0 ? ff : 0;
        v.limit_to = ft > 0 ? ft : 0;
    }
    return v;
}

std::vector<BranchViolations> scan_violations_serial(
    const std::vector<BranchPoint>& pts) {
    std::vector<BranchViolations> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = scan_one(pts[i]);
    return out;
}

std::vector<BranchViolations> scan_violations(const std::vector<BranchPoint>& pts) {
    std::vector<BranchViolations> out(pts.size());
    const long n = static_cast<long>(pts.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = scan_one(pts[i]);
    return out;
}

namespace {
void sort_and_trim(std::vector<ViolationEntry>& v, double fraction) {
    std::sort(v.begin(), v.end(), [](const ViolationEntry& a, const ViolationEntry& b) {
        if (a.violation != b.violation) return a.violation > b.violation;
        if (a.from != b.from) return a.from < b.from;
        return a.to < b.to;
    });
    const auto keep = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(v.size())));
    if (keep < v.size()) v.resize(keep);
}
}  // namespace

CandidateSet select_candidates(const std::vector<BranchPoint>& pts,
                               const std::vector<BranchViolations>& viol,
                               const CutPolicy& policy) {
    CandidateSet out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        const auto& v = viol[i];
        if (v.jabr > policy.eps_violation)
            out.jabr.push_back({p.branch, p.from, p.to, v.jabr});
        if (v.i2 > policy.eps_violation)
            out.i2.push_back({p.branch, p.from, p.to, v.i2});
        if (v.limit() > policy.eps_violation)
            out.limit.push_back({p.branch, p.from, p.to, v.limit()});
    }
    sort_and_trim(out.jabr, policy.p_jabr);
    sort_and_trim(out.i2, policy.p_i2);
    sort_and_trim(out.limit, policy.p_limit);
    return out;
}

std::vector<int> age_and_expire(std::vector<Cut>& cuts,
                                const std::vector<double>& slack, int round,
                                const CutPolicy& policy) {
    std::vector<int> drops;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (slack[i] <= policy.eps_slack) {
            cuts[i].last_tight_round = round;
            continue;
        }
        if (round - cuts[i].birth_round >= policy.t_age)
            drops.push_back(static_cast<int>(i));
    }
    return drops;
}

}  // namespace opfcut
