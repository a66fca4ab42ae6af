#include "opfcut/network.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>

namespace opfcut {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& tok, int line) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
        fail(line, "malformed table entry '" + tok + "'");
    return v;
}

std::string strip_comment(const std::string& s) {
    auto pos = s.find('%');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
            if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

struct TableRow {
    int line;
    std::vector<double> values;
};

}  // namespace

double CostFunction::eval(double p) const {
    if (kind == Kind::Quadratic) return (c2 * p + c1) * p + c0;
    // Convex PWL evaluates as the interpolant, end segments extended.
    const auto& q = points;
    if (q.size() == 1) return q.front().second;
    std::size_t i = 1;
    while (i + 1 < q.size() && p > q[i].first) ++i;
    double x0 = q[i - 1].first, y0 = q[i - 1].second;
    double x1 = q[i].first, y1 = q[i].second;
    double slope = (y1 - y0) / (x1 - x0);
    return y0 + slope * (p - x0);
}

bool CostFunction::convex() const {
    if (kind == Kind::Quadratic) return c2 >= -1e-12;
    if (points.size() < 2) return true;
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < points.size(); ++i) {
        double dx = points[i].first - points[i - 1].first;
        if (dx <= 0) return false;
        double slope = (points[i].second - points[i - 1].second) / dx;
        if (slope < prev - 1e-9) return false;
        prev = slope;
    }
    return true;
}

int NetworkCase::bus_index(int label) const {
    auto it = bus_lookup_.find(label);
    return it == bus_lookup_.end() ? -1 : it->second;
}

std::string case_digest(const NetworkCase& c) {
    std::ostringstream os;
    os << fmt17(c.base_mva) << '\n';
    for (const auto& b : c.buses)
        os << 'b' << b.id << ' ' << fmt17(b.Pd) << ' ' << fmt17(b.Qd) << ' '
           << fmt17(b.Gs) << ' ' << fmt17(b.Bs) << ' ' << fmt17(b.Vmin) << ' '
           << fmt17(b.Vmax) << '\n';
    for (const auto& br : c.branches) {
        os << 'l' << br.from_bus << ' ' << br.to_bus << ' ' << fmt17(br.r)
           << ' ' << fmt17(br.x) << ' ' << fmt17(br.b_sh) << ' '
           << fmt17(br.g_sh) << ' ' << fmt17(br.tau) << ' ' << fmt17(br.sigma)
           << ' ' << (br.U ? fmt17(*br.U) : "inf") << ' ' << br.in_service
           << '\n';
    }
    for (const auto& g : c.generators) {
        os << 'g' << g.bus << ' ' << fmt17(g.Pmin) << ' ' << fmt17(g.Pmax)
           << ' ' << fmt17(g.Qmin) << ' ' << fmt17(g.Qmax) << ' '
           << g.in_service << ' ' << static_cast<int>(g.cost.kind) << ' '
           << fmt17(g.cost.c2) << ' ' << fmt17(g.cost.c1) << ' '
           << fmt17(g.cost.c0);
        for (const auto& [x, y] : g.cost.points)
            os << ' ' << fmt17(x) << ' ' << fmt17(y);
        os << '\n';
    }
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : os.str()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

NetworkCase finalize_case(NetworkCase c) {
    std::sort(c.buses.begin(), c.buses.end(),
              [](const Bus& a, const Bus& b) { return a.id < b.id; });
    c.bus_lookup_.clear();
    for (std::size_t i = 0; i < c.buses.size(); ++i)
        c.bus_lookup_[c.buses[i].id] = static_cast<int>(i);
    c.id = case_digest(c);
    return c;
}

NetworkCase parse_case(const std::string& text, std::vector<std::string>* warnings) {
    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };

    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);
    }

    NetworkCase c;
    c.name = "case";
    std::vector<TableRow> bus_rows, gen_rows, branch_rows, gencost_rows;
    bool have_base = false;

    std::vector<TableRow>* table = nullptr;
    std::string table_name;
    for (int ln = 0; ln < static_cast<int>(lines.size()); ++ln) {
        const int lineno = ln + 1;
        std::string s = strip_comment(lines[ln]);
        if (table) {
            bool ends = s.find(']') != std::string::npos;
            if (ends) s = s.substr(0, s.find(']'));
            std::string chunk;
            std::istringstream rows(s);
            while (std::getline(rows, chunk, ';')) {
                auto toks = split_ws(chunk);
                if (toks.empty()) continue;
                TableRow row{lineno, {}};
                for (const auto& t : toks) row.values.push_back(parse_number(t, lineno));
                table->push_back(std::move(row));
            }
            if (ends) table = nullptr;
            continue;
        }

        auto toks = split_ws(s);
        if (toks.empty()) continue;
        if (toks[0] == "function") {
            // "function mpc = name"
            if (toks.size() >= 4) c.name = toks[3];
            continue;
        }
        if (toks[0].rfind("mpc.", 0) != 0) continue;
        std::string field = toks[0].substr(4);
        auto eq = std::find(toks.begin(), toks.end(), "=");
        if (eq == toks.end() || eq + 1 == toks.end())
            fail(lineno, "malformed assignment");
        std::string value = *(eq + 1);
        if (field == "baseMVA") {
            if (!value.empty() && value.back() == ';') value.pop_back();
            c.base_mva = parse_number(value, lineno);
            if (c.base_mva <= 0) fail(lineno, "baseMVA must be positive");
            have_base = true;
        } else if (field == "version") {
            continue;
        } else if (field == "bus" || field == "gen" || field == "branch" ||
                   field == "gencost") {
            if (value[0] != '[') fail(lineno, "expected matrix for mpc." + field);
            table = field == "bus"      ? &bus_rows
                    : field == "gen"    ? &gen_rows
                    : field == "branch" ? &branch_rows
                                        : &gencost_rows;
            table_name = field;
            // Remainder of the line may already hold rows or the terminator.
            std::string rest = s.substr(s.find('[') + 1);
            bool ends = rest.find(']') != std::string::npos;
            if (ends) rest = rest.substr(0, rest.find(']'));
            std::string chunk;
            std::istringstream rows(rest);
            while (std::getline(rows, chunk, ';')) {
                auto t2 = split_ws(chunk);
                if (t2.empty()) continue;
                TableRow row{lineno, {}};
                for (const auto& t : t2) row.values.push_back(parse_number(t, lineno));
                table->push_back(std::move(row));
            }
            if (ends) table = nullptr;
        } else {
            warn("ignoring unknown field mpc." + field);
            if (value[0] == '[') {
                // Skip the matrix body.
                bool ends = s.find(']') != std::string::npos;
                while (!ends && ++ln < static_cast<int>(lines.size()))
                    ends = strip_comment(lines[ln]).find(']') != std::string::npos;
            }
        }
    }
    if (table) fail(static_cast<int>(lines.size()), "unterminated mpc." + table_name);
    if (!have_base) throw std::runtime_error("missing mpc.baseMVA");
    if (bus_rows.empty()) throw std::runtime_error("missing mpc.bus table");
    const double base = c.base_mva;

    bool warned_bus_cols = false, warned_gen_cols = false, warned_branch_cols = false;
    std::set<int> seen_bus;
    for (const auto& row : bus_rows) {
        const auto& v = row.values;
        if (v.size() < 13) fail(row.line, "malformed table row: bus needs 13 columns");
        if (v.size() > 13 && !warned_bus_cols) {
            warn("bus table: ignoring extra columns beyond 13");
            warned_bus_cols = true;
        }
        Bus b;
        b.id = static_cast<int>(v[0]);
        if (!seen_bus.insert(b.id).second)
            fail(row.line, "duplicate bus id " + std::to_string(b.id));
        b.Pd = v[2] / base;
        b.Qd = v[3] / base;
        b.Gs = v[4] / base;
        b.Bs = v[5] / base;
        b.Vmax = v[11];
        b.Vmin = v[12];
        if (b.Pd < 0) fail(row.line, "negative active load at bus " + std::to_string(b.id));
        if (b.Vmin < 0) fail(row.line, "negative Vmin at bus " + std::to_string(b.id));
        if (b.Vmax < b.Vmin) fail(row.line, "Vmax below Vmin at bus " + std::to_string(b.id));
        c.buses.push_back(b);
    }

    for (const auto& row : branch_rows) {
        const auto& v = row.values;
        if (v.size() < 11) fail(row.line, "malformed table row: branch needs 11 columns");
        if (v.size() > 13 && !warned_branch_cols) {
            warn("branch table: ignoring extra columns beyond 13");
            warned_branch_cols = true;
        }
        BranchParams br;
        br.from_bus = static_cast<int>(v[0]);
        br.to_bus = static_cast<int>(v[1]);
        for (int label : {br.from_bus, br.to_bus})
            if (!seen_bus.count(label))
                fail(row.line, "branch references unknown bus " + std::to_string(label));
        if (br.from_bus == br.to_bus)
            fail(row.line, "branch endpoints coincide at bus " + std::to_string(br.from_bus));
        br.r = v[2];
        br.x = v[3];
        br.b_sh = v[4];
        br.g_sh = 0.0;
        if (v[5] > 0) br.U = v[5] / base;
        br.tau = v[8] == 0.0 ? 1.0 : v[8];
        if (br.tau <= 0) fail(row.line, "nonpositive tap ratio");
        br.sigma = v[9] * M_PI / 180.0;
        br.in_service = v[10] != 0.0;
        // ANGMIN/ANGMAX (columns 12, 13) are accepted and ignored.
        c.branches.push_back(br);
    }

    for (const auto& row : gen_rows) {
        const auto& v = row.values;
        if (v.size() < 10) fail(row.line, "malformed table row: gen needs 10 columns");
        if (v.size() > 10 && !warned_gen_cols) {
            warn("gen table: ignoring extra columns beyond 10");
            warned_gen_cols = true;
        }
        Generator g;
        g.bus = static_cast<int>(v[0]);
        if (!seen_bus.count(g.bus))
            fail(row.line, "generator references unknown bus " + std::to_string(g.bus));
        g.Qmax = v[3] / base;
        g.Qmin = v[4] / base;
        g.in_service = v[7] != 0.0;
        g.Pmax = v[8] / base;
        g.Pmin = v[9] / base;
        c.generators.push_back(g);
    }

    if (gencost_rows.size() != c.generators.size())
        throw std::runtime_error("gencost rows (" + std::to_string(gencost_rows.size()) +
                                 ") do not match generator count (" +
                                 std::to_string(c.generators.size()) + ")");
    for (std::size_t gi = 0; gi < gencost_rows.size(); ++gi) {
        const auto& row = gencost_rows[gi];
        const auto& v = row.values;
        if (v.size() < 4) fail(row.line, "malformed table row: gencost needs 4+ columns");
        int model = static_cast<int>(v[0]);
        int ncost = static_cast<int>(v[3]);
        CostFunction f;
        if (model == 2) {
            if (static_cast<int>(v.size()) < 4 + ncost || ncost < 1 || ncost > 3)
                fail(row.line, "malformed table row: polynomial gencost");
            f.kind = CostFunction::Kind::Quadratic;
            // Coefficients arrive on MW; rescale onto per-unit power.
            double a2 = 0, a1 = 0, a0 = 0;
            if (ncost == 3) { a2 = v[4]; a1 = v[5]; a0 = v[6]; }
            else if (ncost == 2) { a1 = v[4]; a0 = v[5]; }
            else { a0 = v[4]; }
            f.c2 = a2 * base * base;
            f.c1 = a1 * base;
            f.c0 = a0;
        } else if (model == 1) {
            if (ncost < 2 || static_cast<int>(v.size()) < 4 + 2 * ncost)
                fail(row.line, "malformed table row: piecewise gencost");
            f.kind = CostFunction::Kind::PiecewiseLinear;
            for (int i = 0; i < ncost; ++i)
                f.points.emplace_back(v[4 + 2 * i] / base, v[5 + 2 * i]);
        } else {
            fail(row.line, "unsupported gencost model " + std::to_string(model));
        }
        if (!f.convex())
            fail(row.line, "nonconvex cost for generator " + std::to_string(gi + 1));
        c.generators[gi].cost = std::move(f);
    }

    bool any_gen = false;
    for (const auto& g : c.generators) any_gen |= g.in_service;
    if (!any_gen) throw std::runtime_error("no in-service generator");

    return finalize_case(std::move(c));
}

std::string write_case(const NetworkCase& c) {
    const double base = c.base_mva;
    std::ostringstream os;
    os << "function mpc = " << c.name << "\n";
    os << "mpc.version = '2';\n";
    os << "mpc.baseMVA = " << fmt17(base) << ";\n";

    std::set<int> gen_buses;
    int ref_bus = -1;
    for (const auto& g : c.generators)
        if (g.in_service) {
            gen_buses.insert(g.bus);
            if (ref_bus < 0) ref_bus = g.bus;
        }

    os << "mpc.bus = [\n";
    for (const auto& b : c.buses) {
        int type = b.id == ref_bus ? 3 : gen_buses.count(b.id) ? 2 : 1;
        os << '\t' << b.id << '\t' << type << '\t' << fmt17(b.Pd * base) << '\t'
           << fmt17(b.Qd * base) << '\t' << fmt17(b.Gs * base) << '\t'
           << fmt17(b.Bs * base) << "\t1\t1\t0\t0\t1\t" << fmt17(b.Vmax)
           << '\t' << fmt17(b.Vmin) << ";\n";
    }
    os << "];\n";

    os << "mpc.gen = [\n";
    for (const auto& g : c.generators)
        os << '\t' << g.bus << "\t0\t0\t" << fmt17(g.Qmax * base) << '\t'
           << fmt17(g.Qmin * base) << "\t1\t" << fmt17(base) << '\t'
           << (g.in_service ? 1 : 0) << '\t' << fmt17(g.Pmax * base) << '\t'
           << fmt17(g.Pmin * base) << ";\n";
    os << "];\n";

    os << "mpc.branch = [\n";
    for (const auto& br : c.branches)
        os << '\t' << br.from_bus << '\t' << br.to_bus << '\t' << fmt17(br.r)
           << '\t' << fmt17(br.x) << '\t' << fmt17(br.b_sh) << '\t'
           << fmt17(br.U ? *br.U * base : 0.0) << "\t0\t0\t" << fmt17(br.tau)
           << '\t' << fmt17(br.sigma * 180.0 / M_PI) << '\t'
           << (br.in_service ? 1 : 0) << "\t-360\t360;\n";
    os << "];\n";

    os << "mpc.gencost = [\n";
    for (const auto& g : c.generators) {
        if (g.cost.kind == CostFunction::Kind::Quadratic) {
            os << "\t2\t0\t0\t3\t" << fmt17(g.cost.c2 / (base * base)) << '\t'
               << fmt17(g.cost.c1 / base) << '\t' << fmt17(g.cost.c0) << ";\n";
        } else {
            os << "\t1\t0\t0\t" << g.cost.points.size();
            for (const auto& [x, y] : g.cost.points)
                os << '\t' << fmt17(x * base) << '\t' << fmt17(y);
            os << ";\n";
        }
    }
    os << "];\n";
    return os.str();
}

AdmittanceMatrix branch_admittance(const BranchParams& br) {
    if (br.r == 0.0 && br.x == 0.0)
        throw std::invalid_argument("zero-impedance branch " +
                                    std::to_string(br.from_bus) + "-" +
                                    std::to_string(br.to_bus));
    if (br.tau <= 0.0) throw std::invalid_argument("nonpositive tap ratio");
    const double den = br.r * br.r + br.x * br.x;
    const double g = br.r / den, b = -br.x / den;
    const double gkk = g + br.g_sh / 2.0, bkk = b + br.b_sh / 2.0;
    const double t = br.tau, cs = std::cos(br.sigma), sn = std::sin(br.sigma);
    AdmittanceMatrix y;
    y.Gkk = gkk / (t * t);
    y.Bkk = bkk / (t * t);
    y.Gmm = gkk;
    y.Bmm = bkk;
    y.Gkm = -(g * cs - b * sn) / t;
    y.Bkm = -(g * sn + b * cs) / t;
    y.Gmk = -(g * cs + b * sn) / t;
    y.Bmk = (g * sn - b * cs) / t;
    return y;
}

std::vector<Diagnostic> validate_case(const NetworkCase& c) {
    std::vector<Diagnostic> out;
    using S = Diagnostic::Severity;

    // Connectivity over in-service branches.
    if (!c.buses.empty()) {
        std::vector<std::vector<int>> adj(c.buses.size());
        for (const auto& br : c.branches) {
            if (!br.in_service) continue;
            int a = c.bus_index(br.from_bus), b = c.bus_index(br.to_bus);
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::vector<char> seen(c.buses.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++reached;
                    stack.push_back(v);
                }
        }
        if (reached < c.buses.size())
            out.push_back({S::Warning,
                           "island detected: " +
                               std::to_string(c.buses.size() - reached) +
                               " bus(es) unreachable from bus " +
                               std::to_string(c.buses.front().id)});
    }

    int unlimited = 0;
    for (const auto& br : c.branches) {
        if (br.r == 0.0 && br.x == 0.0)
            out.push_back({S::Warning, "zero-impedance branch " +
                                           std::to_string(br.from_bus) + "-" +
                                           std::to_string(br.to_bus)});
        if (br.in_service && !br.U) ++unlimited;
    }
    if (unlimited > 0)
        out.push_back({S::Info, std::to_string(unlimited) +
                                    " in-service branch(es) carry no thermal limit"});

    for (const auto& b : c.buses)
        if (b.Vmin == 0.0)
            out.push_back({S::Warning, "zero lower voltage bound at bus " +
                                           std::to_string(b.id)});
    return out;
}

}  // namespace opfcut
