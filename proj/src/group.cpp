#include "reidgale/group.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace reidgale {

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

CyclicAction validate_action(long long r, long long a, long long b, long long c) {
    if (r < 2) throw Error(ErrorCode::ValidationError, "group order r = " + std::to_string(r) + " < 2");
    auto mod = [r](long long x) { return ((x % r) + r) % r; };
    long long am = mod(a), bm = mod(b), cm = mod(c);
    if (am == 0 || bm == 0 || cm == 0)
        throw Error(ErrorCode::DegenerateWeight, "weight congruent to 0 mod " + std::to_string(r));
    if (mod(am + bm + cm) != 0)
        throw Error(ErrorCode::NotSL, "a+b+c = " + std::to_string(am + bm + cm) +
                                          " is not divisible by r = " + std::to_string(r));
    long long g = std::gcd(std::gcd(r, am), std::gcd(bm, cm));
    if (g > 1)
        throw Error(ErrorCode::NotFaithful, "gcd(r,a,b,c) = " + std::to_string(g));
    return CyclicAction{r, {am, bm, cm}};
}

std::vector<JuniorPoint> junior_points(const CyclicAction& action) {
    const long long r = action.r;
    std::vector<JuniorPoint> out = {
        {{r, 0, 0}, true, true}, {{0, r, 0}, true, true}, {{0, 0, r}, true, true}};
    std::set<Point> seen;
    for (long long k = 1; k < r; ++k) {
        Point p{(k * action.weights[0]) % r, (k * action.weights[1]) % r,
                (k * action.weights[2]) % r};
        if (p[0] + p[1] + p[2] != r) continue; // age 2
        if (!seen.insert(p).second) continue;
        out.push_back({p, p[0] == 0 || p[1] == 0 || p[2] == 0, false});
    }
    std::sort(out.begin() + 3, out.end(),
              [](const JuniorPoint& a, const JuniorPoint& b) { return a.p < b.p; });
    return out;
}

} // namespace reidgale
