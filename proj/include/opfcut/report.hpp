#pragma once

#include <optional>
#include <string>

#include "opfcut/driver.hpp"

namespace opfcut {

/// One line per round,
///   round <i> obj <z> computed <a> added <b> dropped <c> rejected <d> time <s>
/// then a trailing summary,
///   status <S> bound <z> active <n> time <s> [starred]
/// Objectives carry 17 significant digits, times two decimals.
std::string format_round_logs(const RunResult& result);

/// Inverse of format_round_logs for the fields it records: round entries
/// (with the combined time stored as solve_time), status, bound, starred,
/// and total time. Cut lists are not part of the log and stay empty.
/// Malformed input throws with a line number.
RunResult parse_round_log(const std::string& text);

/// Summary table: bound, wall time, cumulative computed/added cut counts and
/// round count; with a primal objective also the relative optimality gap
/// (zp - zr) / zp. An infeasible run prints INF; a numeric-trouble bound
/// carries a trailing '*'.
std::string report_table(const RunResult& result, std::optional<double> primal);

}  // namespace opfcut
