#include "opfcut/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace opfcut {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

[[noreturn]] void fail_line(int line, const std::string& what) {
    std::ostringstream os;
    os << "line " << line << ": " << what;
    throw std::runtime_error(os.str());
}

double parse_value(int line, const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') fail_line(line, "bad number '" + tok + "'");
    return v;
}

void expect_key(int line, std::istringstream& ls, const char* key) {
    std::string tok;
    if (!(ls >> tok) || tok != key)
        fail_line(line, std::string("expected '") + key + "'");
}

double read_value(int line, std::istringstream& ls, const char* key) {
    expect_key(line, ls, key);
    std::string tok;
    if (!(ls >> tok)) fail_line(line, std::string("missing value after '") + key + "'");
    return parse_value(line, tok);
}

}  // namespace

std::string format_round_logs(const RunResult& result) {
    std::ostringstream os;
    for (const RoundLog& r : result.rounds) {
        os << "round " << r.round << " obj " << fmt17(r.objective) << " computed "
           << r.cuts_computed << " added " << r.cuts_added << " dropped "
           << r.cuts_dropped << " rejected " << r.cuts_rejected_parallel << " time "
           << fmt2(r.solve_time + r.separation_time) << '\n';
    }
    os << "status " << to_string(result.status) << " bound " << fmt17(result.bound)
       << " active " << result.final_cuts.size() << " time "
       << fmt2(result.total_time);
    if (result.starred) os << " starred";
    os << '\n';
    return os.str();
}

RunResult parse_round_log(const std::string& text) {
    RunResult res;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_status = false;

    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (saw_status) fail_line(lineno, "content after the status line");

        if (head == "round") {
            RoundLog r;
            if (!(ls >> r.round)) fail_line(lineno, "missing round index");
            r.objective = read_value(lineno, ls, "obj");
            r.cuts_computed = static_cast<int>(read_value(lineno, ls, "computed"));
            r.cuts_added = static_cast<int>(read_value(lineno, ls, "added"));
            r.cuts_dropped = static_cast<int>(read_value(lineno, ls, "dropped"));
            r.cuts_rejected_parallel =
                static_cast<int>(read_value(lineno, ls, "rejected"));
            r.solve_time = read_value(lineno, ls, "time");
            res.rounds.push_back(r);
        } else if (head == "status") {
            std::string s;
            if (!(ls >> s)) fail_line(lineno, "missing status");
            if (s == "Converged") res.status = RunStatus::Converged;
            else if (s == "TimeLimit") res.status = RunStatus::TimeLimit;
            else if (s == "Stalled") res.status = RunStatus::Stalled;
            else if (s == "Infeasible") res.status = RunStatus::Infeasible;
            else if (s == "NumericTrouble") res.status = RunStatus::NumericTrouble;
            else fail_line(lineno, "unknown status '" + s + "'");
            res.bound = read_value(lineno, ls, "bound");
            read_value(lineno, ls, "active");  // reconstructable only from a store
            res.total_time = read_value(lineno, ls, "time");
            std::string tail;
            if (ls >> tail) {
                if (tail != "starred") fail_line(lineno, "unexpected '" + tail + "'");
                res.starred = true;
            }
            saw_status = true;
        } else {
            fail_line(lineno, "unknown record '" + head + "'");
        }
    }
    if (!saw_status) throw std::runtime_error("round log misses its status line");
    return res;
}

std::string report_table(const RunResult& result, std::optional<double> primal) {
    long computed = 0, added = 0;
    for (const RoundLog& r : result.rounds) {
        computed += r.cuts_computed;
        added += r.cuts_added;
    }
    std::string obj;
    if (result.status == RunStatus::Infeasible) {
        obj = "INF";
    } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", result.bound);
        obj = buf;
        if (result.starred) obj += '*';
    }

    std::ostringstream os;
    os << std::left << std::setw(18) << "Objective" << std::setw(9) << "Time(s)"
       << std::setw(10) << "Computed" << std::setw(7) << "Added" << std::setw(7)
       << "Rounds";
    if (primal) os << std::setw(18) << "Primal" << "Gap";
    os << '\n';
    os << std::setw(18) << obj << std::setw(9) << fmt2(result.total_time)
       << std::setw(10) << computed << std::setw(7) << added << std::setw(7)
       << result.rounds.size();
    if (primal) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", *primal);
        os << std::setw(18) << buf;
        if (result.status == RunStatus::Infeasible || !std::isfinite(result.bound)) {
            os << '-';
        } else {
            std::snprintf(buf, sizeof buf, "%.2f%%",
                          100.0 * (*primal - result.bound) / *primal);
            os << buf;
        }
    }
    os << '\n';
    return os.str();
}

}  // namespace opfcut
