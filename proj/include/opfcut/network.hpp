#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace opfcut {

/// Convex generation cost. Coefficients operate on per-unit active power,
/// values are $/h. Piecewise-linear costs keep their breakpoints and must
/// have nondecreasing slopes.
struct CostFunction {
    enum class Kind { Quadratic, PiecewiseLinear };
    Kind kind = Kind::Quadratic;
    double c2 = 0.0, c1 = 0.0, c0 = 0.0;
    std::vector<std::pair<double, double>> points;  // (p.u. power, $/h), ascending power

    double eval(double p) const;
    bool convex() const;
};

struct Bus {
    int id = 0;  // external label
    double Pd = 0.0, Qd = 0.0;  // load, p.u.
    double Gs = 0.0, Bs = 0.0;  // bus shunt admittance, p.u.
    double Vmin = 0.0, Vmax = 0.0;
};

/// Series impedance (r, x), total shunt admittance (g_sh, b_sh), turns ratio
/// tau > 0 and phase shift sigma in radians on the from side. U is the
/// apparent-power rating in p.u.; absent means unlimited.
struct BranchParams {
    int from_bus = 0, to_bus = 0;  // external labels
    double r = 0.0, x = 0.0;
    double b_sh = 0.0, g_sh = 0.0;
    double tau = 1.0;
    double sigma = 0.0;
    std::optional<double> U;
    bool in_service = true;
};

/// Real and imaginary parts of the 2x2 branch admittance, Y = G + jB.
struct AdmittanceMatrix {
    double Gkk = 0, Bkk = 0;
    double Gkm = 0, Bkm = 0;
    double Gmk = 0, Bmk = 0;
    double Gmm = 0, Bmm = 0;
};

struct Generator {
    int bus = 0;  // external label
    double Pmin = 0, Pmax = 0, Qmin = 0, Qmax = 0;  // p.u.
    CostFunction cost;
    bool in_service = true;
};

/// A parsed case. All quantities are per-unit on base_mva. Buses are sorted
/// by external label so internal indices are dense and deterministic.
struct NetworkCase {
    std::string name;
    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<BranchParams> branches;
    std::vector<Generator> generators;
    std::string id;  // content digest, hex

    int bus_index(int label) const;  // -1 when absent

private:
    friend NetworkCase finalize_case(NetworkCase);
    std::unordered_map<int, int> bus_lookup_;
};

/// Sorts buses, builds the label lookup and refreshes the content digest.
NetworkCase finalize_case(NetworkCase c);

struct Diagnostic {
    enum class Severity { Info, Warning };
    Severity severity;
    std::string message;
};

/// Parses the supported MATPOWER subset (bus/gen/branch/gencost tables).
/// Throws std::runtime_error naming the offending line on malformed input,
/// duplicate bus ids, references to unknown buses, negative Pd, or
/// nonconvex costs. Unknown extra columns are ignored with a warning.
NetworkCase parse_case(const std::string& text,
                       std::vector<std::string>* warnings = nullptr);

/// Serializes back to the same MATPOWER subset, 17 significant digits.
std::string write_case(const NetworkCase& c);

/// Branch admittance from series impedance, shunt, ratio and shift.
/// Requires (r, x) != (0, 0).
AdmittanceMatrix branch_admittance(const BranchParams& b);

/// Structural checks: islands, zero-impedance branches, missing thermal
/// limits, zero lower voltage bounds.
std::vector<Diagnostic> validate_case(const NetworkCase& c);

/// FNV-1a digest of the canonical serialization, 16 hex chars.
std::string case_digest(const NetworkCase& c);

}  // namespace opfcut
