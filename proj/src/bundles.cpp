#include "reidgale/bundles.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace reidgale {

namespace {

long long pairing(const Point& p, const Point& m) {
    return p[0] * m[0] + p[1] * m[1] + p[2] * m[2];
}

// x with c*x = g (mod r), g = gcd(c, r); plain extended Euclid.
long long egcd(long long a, long long b, long long& x, long long& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    long long x1, y1;
    long long g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

unsigned worker_count() {
    if (const char* env = std::getenv("REID_GALE_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap == 1) return 1;
        if (cap > 1) return static_cast<unsigned>(cap);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

} // namespace

std::vector<Point> weight_monomials(const CyclicAction& action, long long chi) {
    const long long r = action.r;
    const long long a = action.weights[0], b = action.weights[1], c = action.weights[2];
    chi = ((chi % r) + r) % r;
    const long long g = std::gcd(c, r);
    const long long rr = r / g;
    long long inv = 0;
    if (rr > 1) {
        long long x, y;
        egcd(((c / g) % rr + rr) % rr, rr, x, y);
        inv = ((x % rr) + rr) % rr;
    }
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(r) * static_cast<std::size_t>(g));
    for (long long m1 = 0; m1 < r; ++m1)
        for (long long m2 = 0; m2 < r; ++m2) {
            long long t = ((chi - m1 * a - m2 * b) % r + r) % r;
            if (t % g) continue;
            long long m3 = rr > 1 ? (t / g) % rr * inv % rr : 0;
            for (long long k = 0; k < g; ++k) out.push_back({m1, m2, m3 + k * rr});
        }
    return out;
}

namespace {

Point generator_from_list(const CrepantFan& fan, const std::vector<Point>& mons, long long chi,
                          int tri) {
    const auto& t = fan.triangles()[tri];
    const Point& p1 = fan.point(t[0]);
    const Point& p2 = fan.point(t[1]);
    const Point& p3 = fan.point(t[2]);
    long long best[3] = {std::numeric_limits<long long>::max(),
                         std::numeric_limits<long long>::max(),
                         std::numeric_limits<long long>::max()};
    for (const Point& m : mons) {
        best[0] = std::min(best[0], pairing(p1, m));
        best[1] = std::min(best[1], pairing(p2, m));
        best[2] = std::min(best[2], pairing(p3, m));
    }
    for (const Point& m : mons)
        if (pairing(p1, m) == best[0] && pairing(p2, m) == best[1] && pairing(p3, m) == best[2])
            return m;
    throw Error(ErrorCode::NotLocallyFree,
                "no simultaneous minimizer for character " + std::to_string(chi) + " on triangle " +
                    std::to_string(tri) +
                    " (the fan is not the 0-generated chamber's fan for this character)");
}

} // namespace

Point local_generator(const CrepantFan& fan, long long chi, int tri) {
    if (((chi % fan.action().r) + fan.action().r) % fan.action().r == 0) return {0, 0, 0};
    return generator_from_list(fan, weight_monomials(fan.action(), chi), chi, tri);
}

std::vector<long long> support_values(const CrepantFan& fan, long long chi) {
    const long long r = fan.action().r;
    chi = ((chi % r) + r) % r;
    std::vector<long long> vals(fan.points().size(), -1);
    if (chi == 0) {
        std::fill(vals.begin(), vals.end(), 0);
        return vals;
    }
    const auto mons = weight_monomials(fan.action(), chi);
    for (std::size_t ti = 0; ti < fan.triangles().size(); ++ti) {
        Point m = generator_from_list(fan, mons, chi, static_cast<int>(ti));
        for (int v : fan.triangles()[ti]) {
            long long n = pairing(fan.point(v), m);
            if (vals[v] == -1)
                vals[v] = n;
            else if (vals[v] != n)
                throw Error(ErrorCode::InconsistentSupport,
                            "cones disagree on psi_" + std::to_string(chi) + " at ray " +
                                std::to_string(v));
        }
    }
    return vals;
}

SupportTable SupportTable::compute(const CrepantFan& fan) {
    const long long r = fan.action().r;
    SupportTable table;
    table.values_.resize(r);
    table.gens_.resize(r);
    table.values_[0].assign(fan.points().size(), 0);
    table.gens_[0].assign(fan.triangles().size(), Point{0, 0, 0});

    std::exception_ptr fail;
    std::mutex fail_mu;
    auto run_char = [&](long long chi) {
        const auto mons = weight_monomials(fan.action(), chi);
        std::vector<long long> vals(fan.points().size(), -1);
        std::vector<Point> gens(fan.triangles().size());
        for (std::size_t ti = 0; ti < fan.triangles().size(); ++ti) {
            Point m = generator_from_list(fan, mons, chi, static_cast<int>(ti));
            gens[ti] = m;
            for (int v : fan.triangles()[ti]) {
                long long n = pairing(fan.point(v), m);
                if (vals[v] == -1)
                    vals[v] = n;
                else if (vals[v] != n)
                    throw Error(ErrorCode::InconsistentSupport,
                                "cones disagree on psi_" + std::to_string(chi) + " at ray " +
                                    std::to_string(v));
            }
        }
        table.values_[chi] = std::move(vals);
        table.gens_[chi] = std::move(gens);
    };

    unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(r > 1 ? r - 1 : 1));
    if (workers <= 1) {
        for (long long chi = 1; chi < r; ++chi) run_char(chi);
        return table;
    }
    std::atomic<long long> next{1};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                long long chi = next.fetch_add(1);
                if (chi >= r) return;
                try {
                    run_char(chi);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(fail_mu);
                    if (!fail) fail = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (fail) std::rethrow_exception(fail);
    return table;
}

ZMatrix degree_matrix(const CrepantFan& fan, const SupportTable& supports) {
    const long long r = fan.action().r;
    const auto& cw = fan.compact_walls();
    ZMatrix deg(cw.size(), static_cast<std::size_t>(r - 1));
    for (std::size_t wi = 0; wi < cw.size(); ++wi) {
        const Wall& w = fan.walls()[cw[wi]];
        for (long long chi = 1; chi < r; ++chi) {
            const auto& n = supports.values(chi);
            long long num = w.alpha * n[w.v1] + w.beta * n[w.v2] - n[w.opp[0]] - n[w.opp[1]];
            if (num % r != 0)
                throw Error(ErrorCode::NonIntegralDegree,
                            "wall " + std::to_string(w.v1) + "-" + std::to_string(w.v2) +
                                ", character " + std::to_string(chi));
            deg(wi, static_cast<std::size_t>(chi - 1)) = num / r;
        }
    }
    return deg;
}

} // namespace reidgale
