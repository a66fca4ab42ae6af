#pragma once

#include <vector>

#include "opfcut/network.hpp"
#include "opfcut/relaxation.hpp"

namespace testsup {

/// Generator dispatch for a power-flow solve: fixed voltage magnitude per
/// generator bus, fixed active output for all but the slack generator.
struct PfSpec {
    int slack_gen = 0;           // index into the case generator list
    std::vector<double> pg_set;  // p.u., one per generator (slack entry unused)
    std::vector<double> vm_set;  // one per generator
};

/// Newton-Raphson on the bus balance equations with a finite-difference
/// Jacobian: angles unknown everywhere but the slack bus, magnitudes
/// unknown at load buses. Returns a point whose balance residuals are
/// below 1e-10; throws when the iteration fails to converge. Cases must
/// have at most one generator per bus.
opfcut::PrimalPoint solve_power_flow(const opfcut::NetworkCase& net,
                                     const PfSpec& spec);

}  // namespace testsup
