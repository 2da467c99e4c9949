#pragma once

#include <array>
#include <vector>

#include "reidgale/errors.hpp"

namespace reidgale {

/// Numerator triple: the lattice point (p1,p2,p3)/r of N = Z^3 + Z*(a,b,c)/r.
using Point = std::array<long long, 3>;

/// The cyclic group 1/r(a,b,c) in SL(3) acting diagonally.
struct CyclicAction {
    long long r = 0;
    std::array<long long, 3> weights{}; // (a,b,c), each in [1, r)

    /// Character of the monomial x^m (negative exponents allowed).
    long long weight(const Point& m) const {
        long long w = ((m[0] % r) * weights[0] + (m[1] % r) * weights[1] +
                       (m[2] % r) * weights[2]) % r;
        return w < 0 ? w + r : w;
    }
};

/// Throws NotSL / NotFaithful / DegenerateWeight.
CyclicAction validate_action(long long r, long long a, long long b, long long c);

struct JuniorPoint {
    Point p;       // numerators, p1+p2+p3 = r
    bool boundary; // some numerator is 0 (corners included)
    bool corner;
};

/// The three corners plus every age-1 group element's lattice point,
/// corners first then lexicographic by numerators.
std::vector<JuniorPoint> junior_points(const CyclicAction& action);

long long gcd_ll(long long a, long long b);

} // namespace reidgale
