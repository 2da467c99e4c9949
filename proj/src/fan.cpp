#include "reidgale/fan.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace reidgale {

namespace {

long long det3(const Point& p, const Point& q, const Point& s) {
    return p[0] * (q[1] * s[2] - q[2] * s[1]) - p[1] * (q[0] * s[2] - q[2] * s[0]) +
           p[2] * (q[0] * s[1] - q[1] * s[0]);
}

std::string point_str(const Point& p) {
    return "(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," + std::to_string(p[2]) + ")";
}

bool on_common_boundary(const Point& a, const Point& b) {
    return (a[0] == 0 && b[0] == 0) || (a[1] == 0 && b[1] == 0) || (a[2] == 0 && b[2] == 0);
}

struct ParsedFan {
    CyclicAction action;
    std::vector<Point> points;
    std::vector<std::array<int, 3>> triangles;
};

ParsedFan parse_fan_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaError, std::string("bad fan JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, "fan file must be a JSON object");
    for (const char* key : {"r", "weights", "points", "triangles"})
        if (!j.contains(key))
            throw Error(ErrorCode::SchemaError, std::string("fan JSON missing \"") + key + "\"");
    if (!j["r"].is_number_integer())
        throw Error(ErrorCode::SchemaError, "\"r\" must be an integer");
    long long r = j["r"].get<long long>();
    const auto& w = j["weights"];
    if (!w.is_array() || w.size() != 3 || !std::all_of(w.begin(), w.end(), [](const auto& x) {
            return x.is_number_integer();
        }))
        throw Error(ErrorCode::SchemaError, "\"weights\" must be three integers");
    CyclicAction action =
        validate_action(r, w[0].get<long long>(), w[1].get<long long>(), w[2].get<long long>());

    ParsedFan out{action, {}, {}};
    for (const auto& p : j["points"]) {
        if (!p.is_array() || p.size() != 3 || !std::all_of(p.begin(), p.end(), [](const auto& x) {
                return x.is_number_integer();
            }))
            throw Error(ErrorCode::SchemaError, "each point must be three integers");
        out.points.push_back({p[0].get<long long>(), p[1].get<long long>(), p[2].get<long long>()});
    }
    for (const auto& t : j["triangles"]) {
        if (!t.is_array() || t.size() != 3 || !std::all_of(t.begin(), t.end(), [](const auto& x) {
                return x.is_number_integer();
            }))
            throw Error(ErrorCode::SchemaError, "each triangle must be three point indices");
        out.triangles.push_back(
            {t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    return out;
}

// Runs one validation stage; in throwing mode the first failure raises
// ValidationError, otherwise failures are itemized.
struct Checker {
    std::vector<FanCheck>* collect;
    bool ok = true;

    bool check(const std::string& name, bool pass, const std::string& detail) {
        if (collect) collect->push_back({name, pass, pass ? "" : detail});
        if (!pass) {
            ok = false;
            if (!collect) throw Error(ErrorCode::ValidationError, name + ": " + detail);
        }
        return pass;
    }
};

} // namespace

int CrepantFan::wall_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (std::size_t i = 0; i < walls_.size(); ++i)
        if (walls_[i].v1 == a && walls_[i].v2 == b) return static_cast<int>(i);
    return -1;
}

bool CrepantFan::is_interior_point(int i) const {
    const Point& p = points_[i];
    return p[0] > 0 && p[1] > 0 && p[2] > 0;
}

std::pair<long long, long long> wall_relation(const CrepantFan& fan, const Wall& wall) {
    if (!wall.compact)
        throw Error(ErrorCode::ValidationError, "wall relation requested for a boundary wall");
    const Point& p1 = fan.point(wall.v1);
    const Point& p2 = fan.point(wall.v2);
    const Point& p3 = fan.point(wall.opp[0]);
    const Point& p4 = fan.point(wall.opp[1]);
    Point s{p3[0] + p4[0], p3[1] + p4[1], p3[2] + p4[2]};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            long long d = p1[i] * p2[j] - p1[j] * p2[i];
            if (d == 0) continue;
            long long na = s[i] * p2[j] - s[j] * p2[i];
            long long nb = p1[i] * s[j] - p1[j] * s[i];
            if (na % d != 0 || nb % d != 0)
                throw Error(ErrorCode::NonIntegralRelation,
                            "wall " + point_str(p1) + "-" + point_str(p2));
            long long a = na / d, b = nb / d;
            for (int k = 0; k < 3; ++k)
                if (a * p1[k] + b * p2[k] != s[k])
                    throw Error(ErrorCode::NonIntegralRelation,
                                "inconsistent system for wall " + point_str(p1) + "-" + point_str(p2));
            return {a, b};
        }
    throw Error(ErrorCode::NonIntegralRelation, "degenerate wall endpoints");
}

void CrepantFan::build_and_validate() {
    Checker chk{nullptr};
    const long long r = action_.r;

    // canonical point order: corners first, then lexicographic
    {
        std::vector<int> perm(points_.size());
        std::iota(perm.begin(), perm.end(), 0);
        auto corner_rank = [r](const Point& p) {
            if (p == Point{r, 0, 0}) return 0;
            if (p == Point{0, r, 0}) return 1;
            if (p == Point{0, 0, r}) return 2;
            return 3;
        };
        std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
            int ra = corner_rank(points_[a]), rb = corner_rank(points_[b]);
            if (ra != rb) return ra < rb;
            return points_[a] < points_[b];
        });
        std::vector<int> inv(points_.size());
        std::vector<Point> np(points_.size());
        for (std::size_t k = 0; k < perm.size(); ++k) {
            np[k] = points_[perm[k]];
            inv[perm[k]] = static_cast<int>(k);
        }
        points_ = std::move(np);
        file_order_ = perm;
        for (auto& t : triangles_)
            for (int& v : t) {
                if (v < 0 || v >= static_cast<int>(inv.size()))
                    throw Error(ErrorCode::ValidationError,
                                "triangle index " + std::to_string(v) + " out of range");
                v = inv[v];
            }
    }

    chk.check("three corners present",
              points_.size() >= 3 && points_[0] == Point{r, 0, 0} && points_[1] == Point{0, r, 0} &&
                  points_[2] == Point{0, 0, r},
              "corner rays (r,0,0),(0,r,0),(0,0,r) must all appear");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i)
        chk.check("points distinct", points_[i] != points_[i + 1],
                  "duplicate point " + point_str(points_[i]));
    for (const Point& p : points_) {
        chk.check("point heights", p[0] >= 0 && p[1] >= 0 && p[2] >= 0 && p[0] + p[1] + p[2] == r,
                  "numerators of " + point_str(p) + " must be nonnegative with sum r");
        if (p[0] == r || p[1] == r || p[2] == r) continue;
        bool junior = false;
        for (long long k = 1; k < r && !junior; ++k)
            junior = ((k * action_.weights[0]) % r == p[0] && (k * action_.weights[1]) % r == p[1] &&
                      (k * action_.weights[2]) % r == p[2]);
        chk.check("points in N", junior,
                  point_str(p) + " is not a lattice point of N = Z^3 + Z*(a,b,c)/r");
    }

    chk.check("triangle count", static_cast<long long>(triangles_.size()) == r,
              "crepant triangulation needs exactly r = " + std::to_string(r) + " triangles, got " +
                  std::to_string(triangles_.size()));
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tr = triangles_[t];
        chk.check("triangle vertices distinct", tr[0] != tr[1] && tr[1] != tr[2] && tr[0] != tr[2],
                  "triangle " + std::to_string(t) + " repeats a vertex");
        long long d = det3(points_[tr[0]], points_[tr[1]], points_[tr[2]]);
        chk.check("unimodular triangles", d == r * r || d == -r * r,
                  "triangle " + std::to_string(t) + " has |det| = " + std::to_string(d < 0 ? -d : d) +
                      ", expected r^2 = " + std::to_string(r * r));
    }

    std::vector<bool> used(points_.size(), false);
    for (const auto& t : triangles_)
        for (int v : t) used[v] = true;
    for (std::size_t i = 0; i < points_.size(); ++i)
        chk.check("points used", used[i], "point " + point_str(points_[i]) + " is in no triangle");

    // walls
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> adj; // (v1,v2) -> (tri, opp)
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tr = triangles_[t];
        int idx[3][3] = {{tr[0], tr[1], tr[2]}, {tr[0], tr[2], tr[1]}, {tr[1], tr[2], tr[0]}};
        for (auto& e : idx) {
            std::pair<int, int> key{std::min(e[0], e[1]), std::max(e[0], e[1])};
            adj[key].push_back({static_cast<int>(t), e[2]});
        }
    }
    walls_.clear();
    compact_walls_.clear();
    for (const auto& [key, sides] : adj) {
        Wall w;
        w.v1 = key.first;
        w.v2 = key.second;
        bool bd = on_common_boundary(points_[w.v1], points_[w.v2]);
        chk.check("wall multiplicity", sides.size() == (bd ? 1u : 2u),
                  "wall " + point_str(points_[w.v1]) + "-" + point_str(points_[w.v2]) + " lies in " +
                      std::to_string(sides.size()) + " triangles but is " +
                      (bd ? "on the boundary" : "interior"));
        w.tri[0] = sides[0].first;
        w.opp[0] = sides[0].second;
        if (sides.size() == 2) {
            w.tri[1] = sides[1].first;
            w.opp[1] = sides[1].second;
            w.compact = true;
        }
        if (w.compact && chk.ok) {
            auto [a, b] = wall_relation(*this, w);
            w.alpha = a;
            w.beta = b;
        }
        if (w.compact) compact_walls_.push_back(static_cast<int>(walls_.size()));
        walls_.push_back(w);
    }

    // each boundary side of the simplex covered exactly once
    for (int s = 0; s < 3 && chk.ok; ++s) {
        std::vector<int> side;
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (points_[i][s] == 0) side.push_back(static_cast<int>(i));
        int tcoord = (s + 1) % 3;
        std::sort(side.begin(), side.end(),
                  [&](int a, int b) { return points_[a][tcoord] < points_[b][tcoord]; });
        std::size_t nbd = 0;
        for (const Wall& w : walls_)
            if (!w.compact && points_[w.v1][s] == 0 && points_[w.v2][s] == 0) ++nbd;
        chk.check("boundary coverage", nbd + 1 == side.size(),
                  "side " + std::to_string(s) + " has " + std::to_string(nbd) + " boundary walls for " +
                      std::to_string(side.size()) + " points");
        for (std::size_t i = 0; i + 1 < side.size(); ++i) {
            int wi = wall_index(side[i], side[i + 1]);
            chk.check("boundary coverage", wi >= 0 && !walls_[wi].compact,
                      "consecutive boundary points " + point_str(points_[side[i]]) + "," +
                          point_str(points_[side[i + 1]]) + " are not joined by a boundary wall");
        }
    }

    // stars of interior points, counterclockwise in the (p1,p2) projection
    interior_.clear();
    stars_.clear();
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (is_interior_point(static_cast<int>(i))) interior_.push_back(static_cast<int>(i));
    for (int pi : interior_) {
        std::map<int, std::vector<int>> nbrs;
        for (const auto& t : triangles_)
            if (t[0] == pi || t[1] == pi || t[2] == pi) {
                std::array<int, 2> o{};
                int k = 0;
                for (int v : t)
                    if (v != pi) o[k++] = v;
                nbrs[o[0]].push_back(o[1]);
                nbrs[o[1]].push_back(o[0]);
            }
        for (const auto& [v, ns] : nbrs)
            if (ns.size() != 2)
                throw Error(ErrorCode::OpenStar, "star of " + point_str(points_[pi]) +
                                                     " does not close at " + point_str(points_[v]));
        const Point& p = points_[pi];
        auto orient = [&](int qa, int qb) {
            const Point& a = points_[qa];
            const Point& b = points_[qb];
            return (a[0] - p[0]) * (b[1] - p[1]) - (a[1] - p[1]) * (b[0] - p[0]);
        };
        int start = nbrs.begin()->first;
        std::vector<int> cyc{start};
        int nxt = orient(start, nbrs[start][0]) > 0 ? nbrs[start][0] : nbrs[start][1];
        while (nxt != start) {
            cyc.push_back(nxt);
            if (cyc.size() > nbrs.size())
                throw Error(ErrorCode::OpenStar, "star walk around " + point_str(points_[pi]) +
                                                     " does not return");
            const auto& ns = nbrs[nxt];
            nxt = ns[0] == cyc[cyc.size() - 2] ? ns[1] : ns[0];
        }
        if (cyc.size() != nbrs.size())
            throw Error(ErrorCode::OpenStar,
                        "star walk around " + point_str(points_[pi]) + " misses neighbours");
        stars_.push_back(std::move(cyc));
    }
}

CrepantFan CrepantFan::from_data(const CyclicAction& action, std::vector<Point> points,
                                 std::vector<std::array<int, 3>> triangles) {
    CrepantFan fan;
    fan.action_ = action;
    fan.points_ = std::move(points);
    fan.triangles_ = std::move(triangles);
    fan.build_and_validate();
    return fan;
}

CrepantFan CrepantFan::from_json_text(const std::string& text) {
    ParsedFan p = parse_fan_json(text);
    return from_data(p.action, std::move(p.points), std::move(p.triangles));
}

CrepantFan CrepantFan::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::vector<FanCheck> CrepantFan::validate_report(const std::string& json_text) {
    std::vector<FanCheck> checks;
    ParsedFan parsed = parse_fan_json(json_text); // schema errors still throw
    checks.push_back({"schema", true, ""});

    // Re-run the builder stage by stage, collecting instead of throwing.
    CrepantFan fan;
    fan.action_ = parsed.action;
    fan.points_ = parsed.points;
    fan.triangles_ = parsed.triangles;
    try {
        fan.build_and_validate();
        checks.push_back({"invariants", true, ""});
    } catch (const Error& e) {
        checks.push_back({"invariants", false, e.what()});
        // itemize what we can on the raw data
        const long long r = parsed.action.r;
        long long vol_bad = 0, vol_sum = 0;
        for (const auto& t : parsed.triangles) {
            bool in_range = std::all_of(t.begin(), t.end(), [&](int v) {
                return v >= 0 && v < static_cast<int>(parsed.points.size());
            });
            if (!in_range) continue;
            long long d = det3(parsed.points[t[0]], parsed.points[t[1]], parsed.points[t[2]]);
            if (d < 0) d = -d;
            if (d != r * r) ++vol_bad;
            vol_sum += d / (r * r);
        }
        checks.push_back({"triangle count", static_cast<long long>(parsed.triangles.size()) == r,
                          "have " + std::to_string(parsed.triangles.size()) + ", expected " +
                              std::to_string(r)});
        checks.push_back({"normalized volume", vol_bad == 0 && vol_sum == r,
                          std::to_string(vol_bad) + " triangles of non-unit normalized volume, " +
                              "total volume " + std::to_string(vol_sum) + " of expected " +
                              std::to_string(r)});
    }
    return checks;
}

} // namespace reidgale
