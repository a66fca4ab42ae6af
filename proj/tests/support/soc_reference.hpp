#pragma once

#include "opfcut/network.hpp"

namespace testsup {

/// Independent reference value of the cone relaxation: plain
/// supporting-hyperplane (Kelley) iteration that bisects from an interior
/// anchor to the cone boundary and supports it with the gradient plane
/// there, one cut per violated branch cone or disk per iteration, down to
/// the requested violation tolerance. None of the closed-form
/// maximum-violation machinery under test is involved. Throws when the
/// relaxation is infeasible or the iteration cap is hit.
double soc_reference_bound(const opfcut::NetworkCase& net, int cost_segments,
                           double tol_violation = 1e-7, int max_iters = 600);

}  // namespace testsup
