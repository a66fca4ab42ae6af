#pragma once

#include <string>
#include <vector>

#include "opfcut/cuts.hpp"
#include "opfcut/driver.hpp"
#include "opfcut/network.hpp"

namespace opfcut {

/// Serializable cut collection keyed by branch labels, reusable on related
/// cases after branch-existence filtering.
struct CutStore {
    int version = 1;
    std::string digest;  // digest of the case that produced the cuts
    std::string case_name;
    std::vector<Cut> cuts;
};

/// Line format: `CSTORE 1`, `case <digest> <name>`, then per cut
/// `cut <family> <from> <to> <role:coeff>... rhs <v> round <n>` with 17
/// significant digits. Cone families carry roles c,s,v2f,v2t (jabr) or
/// Pf,Qf,v2f,i2 (i2); limit cuts carry Pf,Qf or Pt,Qt.
std::string serialize_store(const CutStore& store);

/// Inverse of serialize_store; malformed input throws with a line number.
CutStore parse_store(const std::string& text);

/// Active cuts of a finished run, keyed to the case they came from.
CutStore export_cuts(const RunResult& result, const NetworkCase& net);

struct ImportResult {
    std::vector<Cut> cuts;  // usable on the target case, birth_round 0
    int skipped = 0;        // cuts whose branch is absent or out of service
    std::vector<std::string> warnings;
};

/// Filters a store against a (possibly perturbed) case: cuts on absent or
/// out-of-service branches are dropped and counted; limit cuts are also
/// dropped when the branch lost its rating or the rating grew past the
/// cut's rhs, which would make the cut invalid. A digest mismatch only
/// warns, since perturbed twins differ by construction.
ImportResult import_cuts(const CutStore& store, const NetworkCase& net);

}  // namespace opfcut
