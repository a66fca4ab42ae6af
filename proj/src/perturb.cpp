#include "opfcut/perturb.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace opfcut {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double gaussian(SplitMix64& rng) {
    const double u1 = 1.0 - rng.uniform01();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
}

NetworkCase perturb_loads(const NetworkCase& net, std::uint64_t seed) {
    NetworkCase out = net;
    SplitMix64 rng(seed);
    for (Bus& bus : out.buses) {
        const double n = gaussian(rng);
        const double delta = 0.01 * bus.Pd * (1.0 + n);
        bus.Pd = std::max(0.0, bus.Pd + delta);
    }
    return finalize_case(std::move(out));
}

NetworkCase branch_off(const NetworkCase& net, int from, int to) {
    NetworkCase out = net;
    BranchParams* hit = nullptr;
    for (BranchParams& br : out.branches)
        if (br.from_bus == from && br.to_bus == to) {
            hit = &br;
            break;
        }
    if (!hit)
        for (BranchParams& br : out.branches)
            if (br.from_bus == to && br.to_bus == from) {
                hit = &br;
                break;
            }
    std::ostringstream name;
    name << from << '-' << to;
    if (!hit) throw std::runtime_error("no branch " + name.str());
    if (!hit->in_service)
        throw std::runtime_error("branch " + name.str() + " is already out of service");
    hit->in_service = false;
    return finalize_case(std::move(out));
}

int busiest_branch(const NetworkCase& net, const PrimalPoint& p) {
    const std::vector<BranchFlow> flow = branch_flows(net, p);
    int best = -1;
    double best_p = -1.0;
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const BranchParams& br = net.branches[i];
        if (!br.in_service) continue;
        const double mag = std::fabs(flow[i].Pf);
        const bool better =
            mag > best_p ||
            (mag == best_p && best >= 0 &&
             (br.from_bus < net.branches[static_cast<std::size_t>(best)].from_bus ||
              (br.from_bus == net.branches[static_cast<std::size_t>(best)].from_bus &&
               br.to_bus < net.branches[static_cast<std::size_t>(best)].to_bus)));
        if (better) {
            best = static_cast<int>(i);
            best_p = mag;
        }
    }
    return best;
}

}  // namespace opfcut
