#include "opfcut/store.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace opfcut {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void fail_line(int line, const std::string& what) {
    std::ostringstream os;
    os << "line " << line << ": " << what;
    throw std::runtime_error(os.str());
}

const char* const kJabrRoles[4] = {"c", "s", "v2f", "v2t"};
const char* const kI2Roles[4] = {"Pf", "Qf", "v2f", "i2"};
const char* const kFromRoles[2] = {"Pf", "Qf"};
const char* const kToRoles[2] = {"Pt", "Qt"};

double parse_value(int line, const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
        fail_line(line, "bad number '" + tok + "'");
    return v;
}

}  // namespace

std::string serialize_store(const CutStore& store) {
    std::ostringstream os;
    os << "CSTORE " << store.version << '\n';
    os << "case " << store.digest << ' ' << store.case_name << '\n';
    for (const Cut& cut : store.cuts) {
        os << "cut " << to_string(cut.family) << ' ' << cut.from << ' ' << cut.to;
        if (cut.family == CutFamily::Limit) {
            const char* const* roles = cut.to_side ? kToRoles : kFromRoles;
            for (int i = 0; i < 2; ++i)
                os << ' ' << roles[i] << ':' << fmt17(cut.normal[static_cast<std::size_t>(i)]);
        } else {
            const char* const* roles =
                cut.family == CutFamily::Jabr ? kJabrRoles : kI2Roles;
            for (int i = 0; i < 4; ++i)
                os << ' ' << roles[i] << ':' << fmt17(cut.normal[static_cast<std::size_t>(i)]);
        }
        os << " rhs " << fmt17(cut.rhs) << " round " << cut.birth_round << '\n';
    }
    return os.str();
}

CutStore parse_store(const std::string& text) {
    CutStore store;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_magic = false, saw_case = false;

    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;

        if (!saw_magic) {
            int version = 0;
            if (head != "CSTORE" || !(ls >> version))
                fail_line(lineno, "expected 'CSTORE <version>' header");
            if (version != 1)
                fail_line(lineno, "unsupported store version " + std::to_string(version));
            store.version = version;
            saw_magic = true;
            continue;
        }
        if (!saw_case) {
            if (head != "case" || !(ls >> store.digest))
                fail_line(lineno, "expected 'case <digest> <name>'");
            std::getline(ls, store.case_name);
            const auto pos = store.case_name.find_first_not_of(" \t");
            store.case_name =
                pos == std::string::npos ? std::string() : store.case_name.substr(pos);
            saw_case = true;
            continue;
        }
        if (head != "cut") fail_line(lineno, "expected a cut record");

        std::string family;
        Cut cut;
        if (!(ls >> family >> cut.from >> cut.to))
            fail_line(lineno, "expected 'cut <family> <from> <to> ...'");
        if (family == "jabr") cut.family = CutFamily::Jabr;
        else if (family == "i2") cut.family = CutFamily::I2;
        else if (family == "limit") cut.family = CutFamily::Limit;
        else fail_line(lineno, "unknown cut family '" + family + "'");

        std::map<std::string, double> roles;
        std::string tok;
        bool saw_rhs = false;
        while (ls >> tok) {
            if (tok == "rhs") {
                std::string rv, rkey;
                int round = 0;
                if (!(ls >> rv >> rkey >> round) || rkey != "round")
                    fail_line(lineno, "expected 'rhs <v> round <n>'");
                cut.rhs = parse_value(lineno, rv);
                cut.birth_round = round;
                cut.last_tight_round = round;
                saw_rhs = true;
                break;
            }
            const auto colon = tok.find(':');
            if (colon == std::string::npos)
                fail_line(lineno, "expected '<role>:<coeff>', got '" + tok + "'");
            const std::string role = tok.substr(0, colon);
            if (roles.count(role)) fail_line(lineno, "duplicate role '" + role + "'");
            roles[role] = parse_value(lineno, tok.substr(colon + 1));
        }
        if (!saw_rhs) fail_line(lineno, "cut record misses 'rhs'");

        auto take = [&](const char* const* names, int n) {
            if (roles.size() != static_cast<std::size_t>(n))
                fail_line(lineno, "wrong role set for family " + family);
            for (int i = 0; i < n; ++i) {
                const auto it = roles.find(names[i]);
                if (it == roles.end())
                    fail_line(lineno, std::string("missing role '") + names[i] + "'");
                cut.normal[static_cast<std::size_t>(i)] = it->second;
            }
        };
        if (cut.family == CutFamily::Jabr) take(kJabrRoles, 4);
        else if (cut.family == CutFamily::I2) take(kI2Roles, 4);
        else if (roles.count("Pt") || roles.count("Qt")) {
            cut.to_side = true;
            take(kToRoles, 2);
        } else {
            take(kFromRoles, 2);
        }

        double norm2 = 0;
        for (double v : cut.normal) norm2 += v * v;
        if (norm2 == 0.0) fail_line(lineno, "zero cut normal");
        store.cuts.push_back(cut);
    }
    if (!saw_magic) throw std::runtime_error("line 1: empty store");
    if (!saw_case) throw std::runtime_error("line 2: missing case header");
    return store;
}

CutStore export_cuts(const RunResult& result, const NetworkCase& net) {
    CutStore store;
    store.digest = net.id;
    store.case_name = net.name;
    store.cuts = result.final_cuts;
    return store;
}

ImportResult import_cuts(const CutStore& store, const NetworkCase& net) {
    ImportResult out;
    if (store.digest != net.id) {
        out.warnings.push_back("store was built for case digest " + store.digest +
                               ", target is " + net.id + "; branch filter applies");
    }
    for (const Cut& c : store.cuts) {
        const BranchParams* br = nullptr;
        for (const BranchParams& cand : net.branches) {
            if (cand.in_service && cand.from_bus == c.from && cand.to_bus == c.to) {
                br = &cand;
                break;
            }
        }
        if (!br) {
            ++out.skipped;
            continue;
        }
        if (c.family == CutFamily::Limit) {
            if (!br->U || c.rhs < *br->U - 1e-9) {
                ++out.skipped;
                std::ostringstream os;
                os << "limit cut on " << c.from << '-' << c.to
                   << " dropped: branch rating changed";
                out.warnings.push_back(os.str());
                continue;
            }
        }
        Cut cut = c;
        cut.birth_round = 0;
        cut.last_tight_round = 0;
        out.cuts.push_back(cut);
    }
    return out;
}

}  // namespace opfcut
