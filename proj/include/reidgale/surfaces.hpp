#pragma once

#include <vector>

#include "reidgale/fan.hpp"
#include "reidgale/zmat.hpp"

namespace reidgale {

/// Compact exceptional surface E_rho: boundary curves in cyclic order with
/// self-intersections read from the 3D wall relations.
struct ToricSurface {
    int center = -1;                 // interior point index
    std::vector<int> cycle;          // neighbour point indices, cyclic order
    std::vector<int> wall_ids;       // wall index of (center, cycle[j])
    std::vector<long long> self_int; // s_j = C_j^2
};

ToricSurface surface(const CrepantFan& fan, int interior_point);

/// chi(E, L) for a line bundle with deg(L|C_j) = degrees[j], via surface
/// Riemann-Roch: solve (C.C) lambda = d over Q, chi = 1 + (lambda.d + sum d)/2.
Int euler_char(const ToricSurface& surf, const std::vector<Int>& degrees);

/// Rows = interior points (canonical order), cols = characters 0..r-1;
/// column 0 is all ones.
ZMatrix euler_table(const CrepantFan& fan, const ZMatrix& degrees);

/// Cross-check route: self-intersections recomputed from the projected 2D
/// cyclic relation w_{j-1} + w_{j+1} = -s_j w_j in N / Z v_rho, using an HNF
/// basis completion. Must agree with surface().self_int.
std::vector<long long> projected_self_intersections(const CrepantFan& fan, int interior_point);

} // namespace reidgale
