#include "reidgale/surfaces.hpp"

#include <algorithm>
#include <string>

namespace reidgale {

ToricSurface surface(const CrepantFan& fan, int interior_point) {
    const auto& interior = fan.interior_points();
    auto it = std::find(interior.begin(), interior.end(), interior_point);
    if (it == interior.end())
        throw Error(ErrorCode::ValidationError,
                    "point " + std::to_string(interior_point) + " is not interior");
    ToricSurface s;
    s.center = interior_point;
    s.cycle = fan.stars()[it - interior.begin()];
    const std::size_t k = s.cycle.size();
    for (std::size_t j = 0; j < k; ++j) {
        int wi = fan.wall_index(interior_point, s.cycle[j]);
        const Wall& w = fan.walls()[wi];
        // relation coefficients wrt (v_rho, v_j); stored wall may be flipped
        long long beta = w.v1 == interior_point ? w.beta : w.alpha;
        s.wall_ids.push_back(wi);
        s.self_int.push_back(-beta);
    }
    return s;
}

namespace {

// Any rational solution of M x = d, or empty when inconsistent.
std::vector<Rat> solve_rational(const std::vector<std::vector<Rat>>& m, const std::vector<Rat>& d,
                                bool& ok) {
    const std::size_t n = m.size();
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n] = d[i];
    }
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < n; ++c) {
        std::size_t piv = row;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) continue;
        std::swap(a[row], a[piv]);
        Rat p = a[row][c];
        for (auto& x : a[row]) x /= p;
        for (std::size_t i = 0; i < n; ++i)
            if (i != row && a[i][c] != 0) {
                Rat f = a[i][c];
                for (std::size_t j = 0; j <= n; ++j) a[i][j] -= f * a[row][j];
            }
        ++row;
    }
    std::vector<Rat> x(n, Rat(0));
    ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t p = 0;
        while (p < n && a[i][p] == 0) ++p;
        if (p == n) {
            if (a[i][n] != 0) ok = false;
        } else {
            x[p] = a[i][n];
        }
    }
    if (ok) {
        for (std::size_t i = 0; i < n; ++i) {
            Rat s(0);
            for (std::size_t j = 0; j < n; ++j) s += m[i][j] * x[j];
            if (s != d[i]) ok = false;
        }
    }
    return x;
}

} // namespace

Int euler_char(const ToricSurface& surf, const std::vector<Int>& degrees) {
    const std::size_t k = surf.cycle.size();
    if (degrees.size() != k)
        throw Error(ErrorCode::DimensionMismatch, "degree vector size != number of boundary curves");
    std::vector<std::vector<Rat>> m(k, std::vector<Rat>(k, Rat(0)));
    for (std::size_t i = 0; i < k; ++i) {
        m[i][i] = Rat(surf.self_int[i]);
        m[i][(i + 1) % k] = 1;
        m[i][(i + k - 1) % k] = 1;
    }
    std::vector<Rat> d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = Rat(degrees[i]);
    bool ok = false;
    std::vector<Rat> lambda = solve_rational(m, d, ok);
    if (!ok)
        throw Error(ErrorCode::InconsistentDegrees,
                    "degrees are not the restriction of any line bundle class");
    Rat acc(0);
    for (std::size_t i = 0; i < k; ++i) acc += lambda[i] * d[i] + d[i];
    Rat chi = Rat(1) + acc / 2;
    if (boost::multiprecision::denominator(chi) != 1)
        throw Error(ErrorCode::NonIntegralChi, "Riemann-Roch value is not an integer");
    return boost::multiprecision::numerator(chi);
}

ZMatrix euler_table(const CrepantFan& fan, const ZMatrix& degrees) {
    const long long r = fan.action().r;
    const auto& interior = fan.interior_points();
    const auto& cw = fan.compact_walls();
    std::vector<int> wall_row(fan.walls().size(), -1);
    for (std::size_t i = 0; i < cw.size(); ++i) wall_row[cw[i]] = static_cast<int>(i);

    ZMatrix table(interior.size(), static_cast<std::size_t>(r));
    for (std::size_t pi = 0; pi < interior.size(); ++pi) {
        ToricSurface surf = surface(fan, interior[pi]);
        table(pi, 0) = 1; // structure sheaf of a rational surface
        for (long long chi = 1; chi < r; ++chi) {
            std::vector<Int> d(surf.cycle.size());
            for (std::size_t j = 0; j < surf.cycle.size(); ++j)
                d[j] = degrees(wall_row[surf.wall_ids[j]], static_cast<std::size_t>(chi - 1));
            table(pi, static_cast<std::size_t>(chi)) = euler_char(surf, d);
        }
    }
    return table;
}

std::vector<long long> projected_self_intersections(const CrepantFan& fan, int interior_point) {
    const long long r = fan.action().r;
    // basis of N' = r*Z^3 + Z*(a,b,c) via column HNF of the generators
    ZMatrix gen(3, 4);
    for (int i = 0; i < 3; ++i) gen(i, i) = r;
    for (int i = 0; i < 3; ++i) gen(i, 3) = fan.action().weights[i];
    ZMatrix basis = column_lattice_canon(gen); // 3x3, columns = basis of N'
    auto coords = [&](const Point& p) {
        std::vector<Int> b{Int(p[0]), Int(p[1]), Int(p[2])};
        auto x = solve_integral(basis, b);
        if (!x)
            throw Error(ErrorCode::ValidationError, "point not in the group lattice");
        return *x;
    };
    // unimodular U with U * x(center) = e1; quotient coords = rows 2,3 of U
    std::vector<Int> c = coords(fan.point(interior_point));
    ZMatrix cm(3, 1);
    for (int i = 0; i < 3; ++i) cm(i, 0) = c[i];
    SNFDecomposition snf = smith_normal_form(cm);
    if (snf.d(0, 0) != 1)
        throw Error(ErrorCode::ValidationError, "interior ray is not primitive");
    ZMatrix u = snf.u; // u * cm = +-e1 (v is 1x1 = +-1)
    if (snf.v(0, 0) == -1)
        for (int j = 0; j < 3; ++j) u(0, j) = -u(0, j);

    ToricSurface surf = surface(fan, interior_point);
    const std::size_t k = surf.cycle.size();
    std::vector<std::array<Int, 2>> w(k);
    for (std::size_t j = 0; j < k; ++j) {
        auto x = coords(fan.point(surf.cycle[j]));
        for (int row = 1; row < 3; ++row) {
            Int s = 0;
            for (int t = 0; t < 3; ++t) s += u(row, t) * x[t];
            w[j][row - 1] = s;
        }
    }
    std::vector<long long> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        const auto& prev = w[(j + k - 1) % k];
        const auto& next = w[(j + 1) % k];
        // prev + next = kj * w_j, s_j = -kj
        Int kj = 0;
        bool found = false;
        for (int t = 0; t < 2 && !found; ++t)
            if (w[j][t] != 0) {
                Int num = prev[t] + next[t];
                if (num % w[j][t] != 0)
                    throw Error(ErrorCode::ValidationError, "projected relation is not integral");
                kj = num / w[j][t];
                found = true;
            }
        if (!found) throw Error(ErrorCode::ValidationError, "projected ray vanishes");
        for (int t = 0; t < 2; ++t)
            if (prev[t] + next[t] != kj * w[j][t])
                throw Error(ErrorCode::ValidationError, "projected relation inconsistent");
        out[j] = static_cast<long long>(-kj);
    }
    return out;
}

} // namespace reidgale
