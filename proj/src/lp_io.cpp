#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "opfcut/lp.hpp"

namespace opfcut::lp {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// LP-format identifiers: keep alnum, map everything else to '_'.
std::string sanitize(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char ch : name)
        out.push_back(std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_');
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])))
        out.insert(out.begin(), 'x');
    return out;
}

void append_terms(std::ostringstream& os,
                  const std::vector<std::pair<int, double>>& terms,
                  const std::vector<std::string>& names) {
    bool first = true;
    for (const auto& [j, a] : terms) {
        if (a == 0.0) continue;
        if (first) {
            os << (a < 0 ? "- " : "");
            first = false;
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        os << fmt17(std::abs(a)) << ' ' << names[j];
    }
    if (first) os << "0 " << names[0];
}

}  // namespace

std::string write_lp_text(const LinearModel& m) {
    std::vector<std::string> names(m.num_vars());
    for (int j = 0; j < m.num_vars(); ++j) names[j] = sanitize(m.vars()[j].name);

    std::ostringstream os;
    os << "Minimize\n obj: ";
    {
        std::vector<std::pair<int, double>> terms;
        for (int j = 0; j < m.num_vars(); ++j)
            if (m.vars()[j].obj != 0.0) terms.emplace_back(j, m.vars()[j].obj);
        append_terms(os, terms, names);
        bool any_quad = false;
        for (int j = 0; j < m.num_vars(); ++j) any_quad |= m.vars()[j].qobj > 0;
        if (any_quad) {
            os << " + [ ";
            bool first = true;
            for (int j = 0; j < m.num_vars(); ++j) {
                if (m.vars()[j].qobj <= 0) continue;
                if (!first) os << " + ";
                first = false;
                os << fmt17(2.0 * m.vars()[j].qobj) << ' ' << names[j] << " ^ 2";
            }
            os << " ] / 2";
        }
        if (m.objective_constant() != 0.0) {
            double c = m.objective_constant();
            os << (c < 0 ? " - " : " + ") << fmt17(std::abs(c));
        }
    }
    os << "\nSubject To\n";
    int idx = 0;
    for (const auto& row : m.rows()) {
        if (!row.alive) continue;
        os << " c" << idx++ << ": ";
        append_terms(os, row.terms, names);
        os << (row.sense == Sense::LE   ? " <= "
               : row.sense == Sense::GE ? " >= "
                                        : " = ")
           << fmt17(row.rhs) << '\n';
    }
    os << "Bounds\n";
    for (int j = 0; j < m.num_vars(); ++j) {
        const auto& v = m.vars()[j];
        if (std::isinf(v.lb) && std::isinf(v.ub)) {
            os << ' ' << names[j] << " free\n";
        } else if (v.lb == v.ub) {
            os << ' ' << names[j] << " = " << fmt17(v.lb) << '\n';
        } else {
            os << ' ';
            if (std::isfinite(v.lb)) os << fmt17(v.lb) << " <= ";
            else os << "-inf <= ";
            os << names[j];
            if (std::isfinite(v.ub)) os << " <= " << fmt17(v.ub);
            os << '\n';
        }
    }
    os << "End\n";
    return os.str();
}

std::vector<double> read_solution_file(const LinearModel& m,
                                       const std::string& text) {
    std::unordered_map<std::string, int> lookup;
    for (int j = 0; j < m.num_vars(); ++j)
        lookup[sanitize(m.vars()[j].name)] = j;

    std::vector<double> x(m.num_vars(), 0.0);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto pos = line.find('#');
        if (pos != std::string::npos) line = line.substr(0, pos);
        std::istringstream ls(line);
        std::string name;
        double value;
        if (!(ls >> name)) continue;
        if (!(ls >> value) || !std::isfinite(value))
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": malformed solution entry");
        auto it = lookup.find(name);
        if (it == lookup.end())
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": unknown variable '" + name + "'");
        x[it->second] = value;
    }
    return x;
}

}  // namespace opfcut::lp
