#pragma once

#include <vector>

#include "reidgale/fan.hpp"
#include "reidgale/zmat.hpp"

namespace reidgale {

/// Per-character toric data of the tautological line bundles T_chi:
/// values[chi][point] = n_chi(rho) = r * psi_chi(v_rho), and the local
/// generator monomial m_sigma(chi) per triangle.
class SupportTable {
public:
    /// Parallel over characters; the REID_GALE_THREADS environment variable
    /// caps the worker count (0 or unset = hardware default).
    static SupportTable compute(const CrepantFan& fan);

    long long value(long long chi, int point) const { return values_[chi][point]; }
    const std::vector<long long>& values(long long chi) const { return values_[chi]; }
    const Point& generator(long long chi, int tri) const { return gens_[chi][tri]; }

private:
    std::vector<std::vector<long long>> values_;
    std::vector<std::vector<Point>> gens_;
};

/// All exponent triples in [0,r)^3 of weight chi.
std::vector<Point> weight_monomials(const CyclicAction& action, long long chi);

/// Coordinatewise-minimal weight-chi monomial on triangle `tri`; throws
/// NotLocallyFree when no simultaneous minimizer exists (the fan is then not
/// the distinguished 0-generated chamber's fan for this character).
Point local_generator(const CrepantFan& fan, long long chi, int tri);

/// n_chi per point, checked for cone independence (InconsistentSupport).
std::vector<long long> support_values(const CrepantFan& fan, long long chi);

/// deg(T_chi | C_tau) over compact walls (rows) and characters 1..r-1 (cols):
/// for the wall (v1,v2) with relation v3+v4 = alpha v1 + beta v2,
///   deg = alpha psi(v1) + beta psi(v2) - psi(v3) - psi(v4).
ZMatrix degree_matrix(const CrepantFan& fan, const SupportTable& supports);

} // namespace reidgale
