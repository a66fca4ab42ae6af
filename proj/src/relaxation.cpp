#include "opfcut/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace opfcut {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string var_name(const char* role, const BranchParams& br, std::size_t idx) {
    std::ostringstream os;
    os << role << '_' << br.from_bus << '_' << br.to_bus << '_' << idx;
    return os.str();
}

[[noreturn]] void fail_line(int line, const std::string& what) {
    std::ostringstream os;
    os << "line " << line << ": " << what;
    throw std::runtime_error(os.str());
}

}  // namespace

I2Coefficients i2_coefficients(const BranchParams& p) {
    const double den = p.r * p.r + p.x * p.x;
    if (den == 0.0) throw std::invalid_argument("zero-impedance branch");
    const double g = p.r / den;
    const double b = -p.x / den;
    const double s2 = g * g + b * b;
    const double mix = g * p.g_sh + b * p.b_sh;
    const double cross = b * p.g_sh - g * p.b_sh;
    const double t2 = p.tau * p.tau;
    const double t3 = t2 * p.tau;
    const double cs = std::cos(p.sigma), sn = std::sin(p.sigma);
    const double common = -2 * s2 - mix;

    I2Coefficients out;
    out.alpha = (s2 + mix + (p.g_sh * p.g_sh + p.b_sh * p.b_sh) / 4) / (t2 * t2);
    out.beta = s2 / t2;
    out.gamma = (cs * common + sn * cross) / t3;
    out.zeta = (sn * common - cs * cross) / t3;
    return out;
}

std::vector<lp::LinearTerm> ModelBundle::cut_terms(const Cut& cut) const {
    const int bi = find_branch(cut.from, cut.to);
    if (bi < 0) {
        std::ostringstream os;
        os << "cut references missing or inactive branch " << cut.from << '-'
           << cut.to;
        throw std::invalid_argument(os.str());
    }
    const BranchVars& bv = branch[static_cast<std::size_t>(bi)];
    const BranchParams& br = net->branches[static_cast<std::size_t>(bi)];
    const lp::VarRef v2f = v2[static_cast<std::size_t>(net->bus_index(br.from_bus))];
    const lp::VarRef v2t = v2[static_cast<std::size_t>(net->bus_index(br.to_bus))];

    std::array<lp::VarRef, 4> slot{};
    int used = 4;
    switch (cut.family) {
        case CutFamily::Jabr:
            slot = {bv.c, bv.s, v2f, v2t};
            break;
        case CutFamily::I2:
            slot = {bv.Pf, bv.Qf, v2f, bv.i2};
            break;
        case CutFamily::Limit:
            slot = {cut.to_side ? bv.Pt : bv.Pf, cut.to_side ? bv.Qt : bv.Qf,
                    lp::VarRef{}, lp::VarRef{}};
            used = 2;
            break;
    }
    std::vector<lp::LinearTerm> terms;
    for (int i = 0; i < used; ++i)
        if (cut.normal[static_cast<std::size_t>(i)] != 0.0)
            terms.push_back({slot[static_cast<std::size_t>(i)],
                             cut.normal[static_cast<std::size_t>(i)]});
    return terms;
}

int ModelBundle::find_branch(int from, int to) const {
    for (std::size_t i = 0; i < net->branches.size(); ++i) {
        const BranchParams& br = net->branches[i];
        if (br.in_service && br.from_bus == from && br.to_bus == to)
            return static_cast<int>(i);
    }
    return -1;
}

ModelBundle build_base_model(const NetworkCase& net, const BuildOptions& opts) {
    ModelBundle bundle;
    bundle.net = &net;
    bundle.opts = opts;
    lp::LinearModel& m = bundle.model;

    const std::size_t nbus = net.buses.size();
    bundle.v2.resize(nbus);
    for (std::size_t i = 0; i < nbus; ++i) {
        const Bus& bus = net.buses[i];
        bundle.v2[i] = m.add_variable("v2_" + std::to_string(bus.id),
                                      bus.Vmin * bus.Vmin, bus.Vmax * bus.Vmax);
    }

    bundle.branch.resize(net.branches.size());
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const BranchParams& br = net.branches[i];
        if (!br.in_service) continue;
        if (br.r == 0.0 && br.x == 0.0) {
            std::ostringstream os;
            os << "zero-impedance in-service branch " << br.from_bus << '-'
               << br.to_bus;
            throw std::runtime_error(os.str());
        }
        const Bus& fb = net.buses[static_cast<std::size_t>(net.bus_index(br.from_bus))];
        const Bus& tb = net.buses[static_cast<std::size_t>(net.bus_index(br.to_bus))];
        const double vv = fb.Vmax * tb.Vmax;
        const double flow_lb = br.U ? -*br.U : -lp::kInf;
        const double flow_ub = br.U ? *br.U : lp::kInf;
        double i2_ub = lp::kInf;
        if (br.U && fb.Vmin > 0.0) i2_ub = (*br.U * *br.U) / (fb.Vmin * fb.Vmin);

        BranchVars& bv = bundle.branch[i];
        bv.active = true;
        bv.c = m.add_variable(var_name("c", br, i), 0.0, vv);
        bv.s = m.add_variable(var_name("s", br, i), -vv, vv);
        bv.Pf = m.add_variable(var_name("Pf", br, i), flow_lb, flow_ub);
        bv.Qf = m.add_variable(var_name("Qf", br, i), flow_lb, flow_ub);
        bv.Pt = m.add_variable(var_name("Pt", br, i), flow_lb, flow_ub);
        bv.Qt = m.add_variable(var_name("Qt", br, i), flow_lb, flow_ub);
        bv.i2 = m.add_variable(var_name("i2", br, i), 0.0, i2_ub);
    }

    bundle.pg.resize(net.generators.size());
    bundle.qg.resize(net.generators.size());
    for (std::size_t i = 0; i < net.generators.size(); ++i) {
        const Generator& gen = net.generators[i];
        if (!gen.in_service) continue;
        bundle.pg[i] = m.add_variable("pg_" + std::to_string(i + 1), gen.Pmin,
                                      gen.Pmax);
        bundle.qg[i] = m.add_variable("qg_" + std::to_string(i + 1), gen.Qmin,
                                      gen.Qmax);
    }

    // Flow definitions and the squared-current identity, one block per branch.
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const BranchParams& br = net.branches[i];
        if (!br.in_service) continue;
        const BranchVars& bv = bundle.branch[i];
        const lp::VarRef v2f = bundle.v2[static_cast<std::size_t>(net.bus_index(br.from_bus))];
        const lp::VarRef v2t = bundle.v2[static_cast<std::size_t>(net.bus_index(br.to_bus))];
        const AdmittanceMatrix A = branch_admittance(br);
        const I2Coefficients ic = i2_coefficients(br);

        m.add_constraint({{v2f, A.Gkk}, {bv.c, A.Gkm}, {bv.s, A.Bkm}, {bv.Pf, -1.0}},
                         lp::Sense::EQ, 0.0);
        m.add_constraint({{v2f, -A.Bkk}, {bv.c, -A.Bkm}, {bv.s, A.Gkm}, {bv.Qf, -1.0}},
                         lp::Sense::EQ, 0.0);
        m.add_constraint({{v2t, A.Gmm}, {bv.c, A.Gmk}, {bv.s, -A.Bmk}, {bv.Pt, -1.0}},
                         lp::Sense::EQ, 0.0);
        m.add_constraint({{v2t, -A.Bmm}, {bv.c, -A.Bmk}, {bv.s, -A.Gmk}, {bv.Qt, -1.0}},
                         lp::Sense::EQ, 0.0);
        m.add_constraint({{v2f, ic.alpha},
                          {v2t, ic.beta},
                          {bv.c, ic.gamma},
                          {bv.s, ic.zeta},
                          {bv.i2, -1.0}},
                         lp::Sense::EQ, 0.0);
    }

    // Bus balance: branch ends and shunts out, generation in.
    std::vector<std::vector<lp::LinearTerm>> p_terms(nbus), q_terms(nbus);
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const BranchParams& br = net.branches[i];
        if (!br.in_service) continue;
        const BranchVars& bv = bundle.branch[i];
        const auto fi = static_cast<std::size_t>(net.bus_index(br.from_bus));
        const auto ti = static_cast<std::size_t>(net.bus_index(br.to_bus));
        p_terms[fi].push_back({bv.Pf, 1.0});
        q_terms[fi].push_back({bv.Qf, 1.0});
        p_terms[ti].push_back({bv.Pt, 1.0});
        q_terms[ti].push_back({bv.Qt, 1.0});
    }
    for (std::size_t i = 0; i < net.generators.size(); ++i) {
        if (!net.generators[i].in_service) continue;
        const auto bi = static_cast<std::size_t>(net.bus_index(net.generators[i].bus));
        p_terms[bi].push_back({bundle.pg[i], -1.0});
        q_terms[bi].push_back({bundle.qg[i], -1.0});
    }
    for (std::size_t i = 0; i < nbus; ++i) {
        const Bus& bus = net.buses[i];
        if (bus.Gs != 0.0) p_terms[i].push_back({bundle.v2[i], bus.Gs});
        if (bus.Bs != 0.0) q_terms[i].push_back({bundle.v2[i], -bus.Bs});
        m.add_constraint(p_terms[i], lp::Sense::EQ, -bus.Pd);
        m.add_constraint(q_terms[i], lp::Sense::EQ, -bus.Qd);
    }

    for (std::size_t i = 0; i < net.generators.size(); ++i) {
        const Generator& gen = net.generators[i];
        if (!gen.in_service) continue;
        lp::add_convex_cost_epigraph(m, bundle.pg[i], gen.cost, opts.cost_segments);
    }
    return bundle;
}

std::vector<Cut> seed_envelopes(const ModelBundle& bundle) {
    const double inv = 1.0 / std::sqrt(6.0);
    std::vector<Cut> out;
    for (std::size_t i = 0; i < bundle.net->branches.size(); ++i) {
        const BranchParams& br = bundle.net->branches[i];
        if (!br.in_service) continue;
        Cut cut;
        cut.family = CutFamily::Jabr;
        cut.from = br.from_bus;
        cut.to = br.to_bus;
        cut.normal = {2 * inv, 0.0, -inv, -inv};
        cut.rhs = 0.0;
        out.push_back(cut);
    }
    return out;
}

PrimalPoint parse_primal_point(const std::string& text, const NetworkCase& net) {
    PrimalPoint p;
    p.vm.assign(net.buses.size(), 0.0);
    p.va.assign(net.buses.size(), 0.0);
    p.pg.assign(net.generators.size(), 0.0);
    p.qg.assign(net.generators.size(), 0.0);
    std::vector<char> bus_seen(net.buses.size(), 0);
    std::vector<char> gen_seen(net.generators.size(), 0);

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "bus") {
            int label;
            std::string kv, ka;
            double vm, va;
            if (!(ls >> label >> kv >> vm >> ka >> va) || kv != "vm" || ka != "va")
                fail_line(lineno, "expected: bus <label> vm <v> va <rad>");
            const int bi = net.bus_index(label);
            if (bi < 0) fail_line(lineno, "unknown bus " + std::to_string(label));
            if (bus_seen[static_cast<std::size_t>(bi)])
                fail_line(lineno, "duplicate bus " + std::to_string(label));
            bus_seen[static_cast<std::size_t>(bi)] = 1;
            p.vm[static_cast<std::size_t>(bi)] = vm;
            p.va[static_cast<std::size_t>(bi)] = va;
        } else if (kind == "gen") {
            int ordinal;
            std::string kp, kq;
            double pgv, qgv;
            if (!(ls >> ordinal >> kp >> pgv >> kq >> qgv) || kp != "pg" || kq != "qg")
                fail_line(lineno, "expected: gen <ordinal> pg <p> qg <q>");
            if (ordinal < 1 || ordinal > static_cast<int>(net.generators.size()))
                fail_line(lineno, "generator ordinal out of range");
            const auto gi = static_cast<std::size_t>(ordinal - 1);
            if (gen_seen[gi]) fail_line(lineno, "duplicate generator " + std::to_string(ordinal));
            gen_seen[gi] = 1;
            p.pg[gi] = pgv;
            p.qg[gi] = qgv;
        } else {
            fail_line(lineno, "unknown record '" + kind + "'");
        }
    }
    for (std::size_t i = 0; i < net.buses.size(); ++i)
        if (!bus_seen[i])
            throw std::runtime_error("primal point misses bus " +
                                     std::to_string(net.buses[i].id));
    for (std::size_t i = 0; i < net.generators.size(); ++i)
        if (net.generators[i].in_service && !gen_seen[i])
            throw std::runtime_error("primal point misses generator " +
                                     std::to_string(i + 1));
    return p;
}

std::string write_primal_point(const PrimalPoint& p, const NetworkCase& net) {
    std::ostringstream os;
    for (std::size_t i = 0; i < net.buses.size(); ++i)
        os << "bus " << net.buses[i].id << " vm " << fmt17(p.vm[i]) << " va "
           << fmt17(p.va[i]) << '\n';
    for (std::size_t i = 0; i < net.generators.size(); ++i) {
        if (!net.generators[i].in_service) continue;
        os << "gen " << i + 1 << " pg " << fmt17(p.pg[i]) << " qg "
           << fmt17(p.qg[i]) << '\n';
    }
    return os.str();
}

std::vector<BranchFlow> branch_flows(const NetworkCase& net, const PrimalPoint& p) {
    std::vector<BranchFlow> out(net.branches.size());
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const BranchParams& br = net.branches[i];
        if (!br.in_service) continue;
        const auto fi = static_cast<std::size_t>(net.bus_index(br.from_bus));
        const auto ti = static_cast<std::size_t>(net.bus_index(br.to_bus));
        const AdmittanceMatrix A = branch_admittance(br);
        const double v2f = p.vm[fi] * p.vm[fi];
        const double v2t = p.vm[ti] * p.vm[ti];
        const double c = p.vm[fi] * p.vm[ti] * std::cos(p.va[fi] - p.va[ti]);
        const double s = p.vm[fi] * p.vm[ti] * std::sin(p.va[fi] - p.va[ti]);
        BranchFlow& f = out[i];
        f.Pf = A.Gkk * v2f + A.Gkm * c + A.Bkm * s;
        f.Qf = -A.Bkk * v2f - A.Bkm * c + A.Gkm * s;
        f.Pt = A.Gmm * v2t + A.Gmk * c - A.Bmk * s;
        f.Qt = -A.Bmm * v2t - A.Bmk * c - A.Gmk * s;
    }
    return out;
}

ResidualReport acopf_residuals(const NetworkCase& net, const PrimalPoint& p) {
    if (p.vm.size() != net.buses.size() || p.va.size() != net.buses.size() ||
        p.pg.size() != net.generators.size() || p.qg.size() != net.generators.size())
        throw std::invalid_argument("point does not cover the case");

    ResidualReport rep;
    auto note = [&rep](std::string what, double v, double& cat) {
        if (v <= 0.0) return;
        if (v > cat) cat = v;
        rep.violations.push_back({std::move(what), v});
    };

    const std::vector<BranchFlow> flow = branch_flows(net, p);

    std::vector<double> p_mis(net.buses.size(), 0.0), q_mis(net.buses.size(), 0.0);
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
        const Bus& bus = net.buses[i];
        const double v2 = p.vm[i] * p.vm[i];
        p_mis[i] = -bus.Pd - bus.Gs * v2;
        q_mis[i] = -bus.Qd + bus.Bs * v2;
    }
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const BranchParams& br = net.branches[i];
        if (!br.in_service) continue;
        const auto fi = static_cast<std::size_t>(net.bus_index(br.from_bus));
        const auto ti = static_cast<std::size_t>(net.bus_index(br.to_bus));
        p_mis[fi] -= flow[i].Pf;
        q_mis[fi] -= flow[i].Qf;
        p_mis[ti] -= flow[i].Pt;
        q_mis[ti] -= flow[i].Qt;
    }
    for (std::size_t i = 0; i < net.generators.size(); ++i) {
        const Generator& gen = net.generators[i];
        if (!gen.in_service) continue;
        const auto bi = static_cast<std::size_t>(net.bus_index(gen.bus));
        p_mis[bi] += p.pg[i];
        q_mis[bi] += p.qg[i];
        rep.objective += gen.cost.eval(p.pg[i]);

        const std::string tag = "generator " + std::to_string(i + 1);
        note(tag + " Pmin", gen.Pmin - p.pg[i], rep.max_bound);
        note(tag + " Pmax", p.pg[i] - gen.Pmax, rep.max_bound);
        note(tag + " Qmin", gen.Qmin - p.qg[i], rep.max_bound);
        note(tag + " Qmax", p.qg[i] - gen.Qmax, rep.max_bound);
    }
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
        const Bus& bus = net.buses[i];
        const std::string tag = "bus " + std::to_string(bus.id);
        note("P balance " + tag, std::fabs(p_mis[i]), rep.max_balance);
        note("Q balance " + tag, std::fabs(q_mis[i]), rep.max_balance);
        note(tag + " Vmin", bus.Vmin - p.vm[i], rep.max_bound);
        note(tag + " Vmax", p.vm[i] - bus.Vmax, rep.max_bound);
    }
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const BranchParams& br = net.branches[i];
        if (!br.in_service || !br.U) continue;
        std::ostringstream tag;
        tag << "thermal " << br.from_bus << '-' << br.to_bus;
        note(tag.str() + " from",
             std::hypot(flow[i].Pf, flow[i].Qf) - *br.U, rep.max_thermal);
        note(tag.str() + " to",
             std::hypot(flow[i].Pt, flow[i].Qt) - *br.U, rep.max_thermal);
    }
    std::stable_sort(rep.violations.begin(), rep.violations.end(),
                     [](const ResidualEntry& a, const ResidualEntry& b) {
                         return a.value > b.value;
                     });
    return rep;
}

}  // namespace opfcut
