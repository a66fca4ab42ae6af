#pragma once

#include <cstdint>

#include "opfcut/network.hpp"
#include "opfcut/relaxation.hpp"

namespace opfcut {

/// splitmix64: 64-bit state PRNG with a fixed published update, so a seed
/// yields the same draw sequence on every platform and toolchain.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform01();  // [0, 1), 53 mantissa bits

private:
    std::uint64_t state_;
};

/// One standard normal draw, Box-Muller form z = sqrt(-2 ln u1) cos(2 pi u2)
/// with u1 = 1 - uniform01 so the log argument stays positive. Consumes
/// exactly two uniforms per call.
double gaussian(SplitMix64& rng);

/// Loads shifted by Gaussian noise: Pd <- max(0, Pd + d) with
/// d ~ Normal(0.01 Pd, 0.01 Pd), one draw per bus in label order; Qd is
/// untouched. Buses with Pd = 0 stay 0. Deterministic under seed.
NetworkCase perturb_loads(const NetworkCase& net, std::uint64_t seed);

/// The same case with the named branch switched off. Labels are tried in the
/// given direction first, then reversed. Errors when the branch is absent or
/// already off.
NetworkCase branch_off(const NetworkCase& net, int from, int to);

/// Index of the in-service branch with the largest |P| at its from side
/// under the given point; ties go to the lowest (from, to) labels. -1 when
/// no branch is in service.
int busiest_branch(const NetworkCase& net, const PrimalPoint& p);

}  // namespace opfcut
