#pragma once

#include <array>
#include <string>
#include <vector>

#include "reidgale/group.hpp"

namespace reidgale {

struct Wall {
    int v1 = -1, v2 = -1;             // endpoint indices, v1 < v2
    std::array<int, 2> tri{-1, -1};   // adjacent triangles (tri[1] = -1 on the boundary)
    std::array<int, 2> opp{-1, -1};   // opposite vertices per adjacent triangle
    bool compact = false;             // interior wall <=> proper curve C_tau
    long long alpha = 0, beta = 0;    // v3 + v4 = alpha*v1 + beta*v2 (compact walls)
};

struct FanCheck {
    std::string name;
    bool pass;
    std::string detail;
};

/// Crepant triangulation of the junior simplex. Points are stored in a
/// canonical order (corners e1,e2,e3 first, then lexicographic) regardless of
/// file order; `file_order` maps canonical index -> position in the input.
class CrepantFan {
public:
    static CrepantFan load(const std::string& path);
    static CrepantFan from_json_text(const std::string& text);
    static CrepantFan from_data(const CyclicAction& action, std::vector<Point> points,
                                std::vector<std::array<int, 3>> triangles);

    /// Itemized invariant evaluation for `validate-fan`; never throws on
    /// invariant failures (only on schema/JSON errors).
    static std::vector<FanCheck> validate_report(const std::string& json_text);

    const CyclicAction& action() const { return action_; }
    const std::vector<Point>& points() const { return points_; }
    const Point& point(int i) const { return points_[i]; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    const std::vector<int>& file_order() const { return file_order_; }

    const std::vector<Wall>& walls() const { return walls_; }
    const std::vector<int>& compact_walls() const { return compact_walls_; }
    int wall_index(int a, int b) const; // -1 when (a,b) is not a wall

    bool is_interior_point(int i) const;
    /// Interior points in canonical (lexicographic) order.
    const std::vector<int>& interior_points() const { return interior_; }
    /// Star of interior_points()[k]: neighbours in cyclic order,
    /// counterclockwise in the (p1,p2) projection, starting at the smallest
    /// point index.
    const std::vector<std::vector<int>>& stars() const { return stars_; }

private:
    CyclicAction action_;
    std::vector<Point> points_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<int> file_order_;
    std::vector<Wall> walls_;
    std::vector<int> compact_walls_;
    std::vector<int> interior_;
    std::vector<std::vector<int>> stars_;

    void build_and_validate();
};

/// Exact relation v3 + v4 = alpha*v1 + beta*v2 for an interior wall.
std::pair<long long, long long> wall_relation(const CrepantFan& fan, const Wall& wall);

} // namespace reidgale
