#include "reidgale/gale.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace reidgale {

Trichotomy classify_columns(const ZMatrix& kt) {
    Trichotomy t;
    const std::size_t rows = kt.rows(), cols = kt.cols();
    t.cls.resize(cols);
    t.positives.resize(cols);
    t.negatives.resize(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < rows; ++i) {
            if (kt(i, j) > 0) {
                has_pos = true;
                t.positives[j].push_back({static_cast<int>(i), kt(i, j)});
            } else if (kt(i, j) < 0) {
                has_neg = true;
                t.negatives[j].push_back({static_cast<int>(i), -kt(i, j)});
            }
        }
        if (has_pos && has_neg) {
            t.cls[j] = SignClass::Mixed;
            t.mixed.push_back(static_cast<int>(j) + 1);
        } else if (has_pos) {
            t.cls[j] = SignClass::Plus;
        } else if (has_neg) {
            t.cls[j] = SignClass::Minus;
        } else {
            t.cls[j] = SignClass::Zero;
        }
    }
    return t;
}

NsKernel ns_and_raw_kernel(const ZMatrix& degrees, std::size_t interior_count) {
    NsKernel out;
    out.ns_rank = rank(degrees);
    out.raw_kernel = kernel_basis(degrees);
    if (out.raw_kernel.cols() != interior_count) {
        std::ostringstream os;
        os << "kernel rank " << out.raw_kernel.cols() << " != " << interior_count
           << " interior points (ns_rank " << out.ns_rank << " of " << degrees.cols()
           << " characters); the compact-surface classes cannot be dual to the kernel";
        throw Error(ErrorCode::RankMismatch, os.str());
    }
    return out;
}

ZMatrix canonical_kernel(const ZMatrix& raw_kernel, const ZMatrix& euler,
                         const std::vector<Int>& v) {
    const std::size_t n = raw_kernel.rows(); // characters 1..n
    const std::size_t k = raw_kernel.cols();
    if (euler.cols() != n + 1)
        throw Error(ErrorCode::DimensionMismatch, "euler table must cover characters 0..n");
    if (euler.rows() != k)
        throw Error(ErrorCode::DimensionMismatch,
                    "euler table rows != kernel rank (pairing matrix not square)");
    if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, "dimension vector size");

    ZMatrix pairing(k, k);
    for (std::size_t rho = 0; rho < k; ++rho)
        for (std::size_t j = 0; j < k; ++j) {
            Int theta0 = 0;
            for (std::size_t i = 0; i < n; ++i) theta0 -= v[i] * raw_kernel(i, j);
            Int acc = theta0 * euler(rho, 0);
            for (std::size_t i = 0; i < n; ++i) acc += raw_kernel(i, j) * euler(rho, i + 1);
            pairing(rho, j) = acc;
        }
    auto inv = solve_integral(pairing, ZMatrix::identity(k));
    if (!inv || !is_unimodular(pairing))
        throw Error(ErrorCode::NotUnimodular,
                    "Euler pairing of the kernel basis against the exceptional surfaces is not "
                    "unimodular (upstream data error)");
    return raw_kernel * *inv;
}

std::vector<int> reid_basis_chars(const ZMatrix& kt, const Trichotomy& tri) {
    std::set<int> basis;
    for (std::size_t j = 0; j < tri.cls.size(); ++j)
        if (tri.cls[j] != SignClass::Plus) basis.insert(static_cast<int>(j) + 1);
    for (std::size_t rho = 0; rho < kt.rows(); ++rho) {
        std::vector<int> unit_marks;
        for (std::size_t j = 0; j < tri.cls.size(); ++j)
            if (tri.cls[j] == SignClass::Plus && kt(rho, j) == 1)
                unit_marks.push_back(static_cast<int>(j) + 1);
        if (unit_marks.size() >= 2) basis.insert(*std::min_element(unit_marks.begin(), unit_marks.end()));
    }
    return {basis.begin(), basis.end()};
}

ZMatrix reid_linearisation(const ZMatrix& degrees, const std::vector<int>& basis) {
    ZMatrix db(degrees.rows(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < degrees.rows(); ++i)
            db(i, j) = degrees(i, static_cast<std::size_t>(basis[j] - 1));
    if (rank(db) != basis.size())
        throw Error(ErrorCode::NotABasis, "selected degree columns are dependent");
    auto solved = solve_integral(db, degrees);
    if (!solved)
        throw Error(ErrorCode::NotABasis,
                    "some tautological class is not an integral combination of the selected basis");
    return *solved;
}

std::vector<int> marking_row_order(const ZMatrix& kt, const Trichotomy& tri,
                                   std::vector<std::string>* flags) {
    const int unmarked = 1 << 30;
    std::vector<std::pair<int, int>> keyed; // (key, row)
    for (std::size_t rho = 0; rho < kt.rows(); ++rho) {
        int key = unmarked;
        for (std::size_t j = 0; j < tri.cls.size(); ++j)
            if (tri.cls[j] == SignClass::Plus && kt(rho, j) > 0) {
                key = static_cast<int>(j) + 1;
                break;
            }
        if (key == unmarked && flags)
            flags->push_back("unmarked divisor row " + std::to_string(rho));
        keyed.push_back({key, static_cast<int>(rho)});
    }
    std::stable_sort(keyed.begin(), keyed.end());
    std::vector<int> order;
    for (auto& [k, rho] : keyed) order.push_back(rho);
    return order;
}

long long segment_marking_char(const CrepantFan& fan, const Wall& wall) {
    const CyclicAction& act = fan.action();
    const Point& p1 = fan.point(wall.v1);
    const Point& p2 = fan.point(wall.v2);
    Point u{p1[1] * p2[2] - p1[2] * p2[1], p1[2] * p2[0] - p1[0] * p2[2],
            p1[0] * p2[1] - p1[1] * p2[0]};
    long long g = std::gcd(std::gcd(std::abs(u[0]), std::abs(u[1])), std::abs(u[2]));
    for (auto& x : u) x /= g;
    long long wu = act.weight(u);
    long long scale = wu == 0 ? 1 : act.r / std::gcd(act.r, wu);
    for (auto& x : u) x *= scale;
    Point plus{std::max(u[0], 0LL), std::max(u[1], 0LL), std::max(u[2], 0LL)};
    return act.weight(plus);
}

std::map<int, std::vector<int>> case0_supports(const Trichotomy& tri, const ZMatrix& degrees,
                                               std::vector<std::string>* diagnostics) {
    std::map<int, std::vector<int>> out;
    for (std::size_t j = 0; j < tri.cls.size(); ++j) {
        if (tri.cls[j] != SignClass::Zero) continue;
        std::vector<int> rows;
        for (std::size_t w = 0; w < degrees.rows(); ++w) {
            if (degrees(w, j) != 1) continue;
            bool clean = true;
            for (std::size_t jj = 0; jj < degrees.cols(); ++jj)
                if (jj != j && degrees(w, jj) != 0) clean = false;
            if (clean) rows.push_back(static_cast<int>(w));
        }
        if (rows.size() != 1 && diagnostics)
            diagnostics->push_back("non-unique case-0 support for character " +
                                   std::to_string(j + 1) + " (" + std::to_string(rows.size()) +
                                   " candidate curves)");
        out[static_cast<int>(j) + 1] = rows;
    }
    return out;
}

namespace {

nlohmann::json int_json(const Int& x) {
    static const Int lo = std::numeric_limits<long long>::min();
    static const Int hi = std::numeric_limits<long long>::max();
    if (x >= lo && x <= hi) return nlohmann::json(static_cast<long long>(x));
    return nlohmann::json(x.str());
}

nlohmann::json matrix_json(const ZMatrix& m) {
    nlohmann::json data = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_json(m(i, j)));
        data.push_back(std::move(row));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

void classify_diagnostics(const Trichotomy& tri, bool geometric, GaleReport& rep) {
    for (int j : tri.mixed)
        rep.diagnostics.push_back("SIGN-INCOHERENT column " + std::to_string(j) +
                                  " (counterexample to the trichotomy conjecture)");
    for (std::size_t j = 0; j < tri.cls.size(); ++j) {
        if (tri.cls[j] != SignClass::Plus) continue;
        for (const auto& [row, entry] : tri.positives[j])
            if (entry != 1)
                rep.diagnostics.push_back("non-unit length " + entry.str() + " in (+) column " +
                                          std::to_string(j + 1) + ", row " + std::to_string(row));
        if (geometric && tri.positives[j].size() != 1)
            rep.diagnostics.push_back("(+) column " + std::to_string(j + 1) + " has " +
                                      std::to_string(tri.positives[j].size()) +
                                      " nonzero entries (expected a single +1)");
    }
}

} // namespace

GaleReport analyze(const CrepantFan& fan) {
    return analyze(fan, degree_matrix(fan, SupportTable::compute(fan)));
}

GaleReport analyze(const CrepantFan& fan, const ZMatrix& degrees) {
    const long long r = fan.action().r;
    GaleReport rep;
    rep.geometric = true;
    rep.r = r;
    rep.weights = fan.action().weights;
    for (long long i = 1; i < r; ++i) rep.labels.push_back(std::to_string(i));
    rep.dim_vector.assign(static_cast<std::size_t>(r - 1), Int(1));

    // global-generation diagnostic and the {0,1} observation
    long long negatives = 0, above_one = 0;
    for (std::size_t i = 0; i < degrees.rows(); ++i)
        for (std::size_t j = 0; j < degrees.cols(); ++j) {
            if (degrees(i, j) < 0) ++negatives;
            if (degrees(i, j) > 1) ++above_one;
        }
    if (negatives)
        rep.diagnostics.push_back("negative curve degrees: " + std::to_string(negatives) +
                                  " entries (global generation violated)");
    rep.notes.push_back("degree entries above 1: " + std::to_string(above_one));

    NsKernel nk = ns_and_raw_kernel(degrees, fan.interior_points().size());
    rep.ns_rank = nk.ns_rank;

    ZMatrix euler = euler_table(fan, degrees);
    rep.K = canonical_kernel(nk.raw_kernel, euler, rep.dim_vector);
    rep.Kt = rep.K.transposed();
    for (int pi : fan.interior_points()) rep.row_points.push_back(fan.point(pi));
    rep.points = fan.points();
    rep.file_order = fan.file_order();

    rep.trichotomy = classify_columns(rep.Kt);
    classify_diagnostics(rep.trichotomy, true, rep);

    rep.reid_basis = reid_basis_chars(rep.Kt, rep.trichotomy);
    if (rep.reid_basis.size() != rep.ns_rank)
        throw Error(ErrorCode::NotABasis, "basis size " + std::to_string(rep.reid_basis.size()) +
                                              " != ns_rank " + std::to_string(rep.ns_rank));
    rep.L = reid_linearisation(degrees, rep.reid_basis);
    rep.Lt = rep.L.transposed();

    rep.row_order = marking_row_order(rep.Kt, rep.trichotomy, &rep.diagnostics);
    rep.Kt_ordered = ZMatrix(rep.Kt.rows(), rep.Kt.cols());
    for (std::size_t i = 0; i < rep.Kt.rows(); ++i)
        for (std::size_t j = 0; j < rep.Kt.cols(); ++j)
            rep.Kt_ordered(i, j) = rep.Kt(static_cast<std::size_t>(rep.row_order[i]), j);

    // markings
    const auto& interior = fan.interior_points();
    for (std::size_t rho = 0; rho < rep.Kt.rows(); ++rho) {
        std::vector<int> marks;
        for (std::size_t j = 0; j < rep.Kt.cols(); ++j)
            if (rep.trichotomy.cls[j] == SignClass::Plus && rep.Kt(rho, j) > 0)
                marks.push_back(static_cast<int>(j) + 1);
        if (!marks.empty()) rep.point_markings[static_cast<int>(rho)] = marks;
    }
    std::vector<int> wall_row(fan.walls().size(), -1);
    for (std::size_t i = 0; i < fan.compact_walls().size(); ++i)
        wall_row[fan.compact_walls()[i]] = static_cast<int>(i);
    std::map<long long, std::vector<int>> marked_walls; // char -> wall ids
    for (int wi : fan.compact_walls()) {
        const Wall& w = fan.walls()[wi];
        long long chi = segment_marking_char(fan, w);
        rep.segment_markings.push_back({{w.v1, w.v2}, static_cast<int>(chi)});
        marked_walls[chi].push_back(wi);
        if (chi == 0 || rep.trichotomy.cls[static_cast<std::size_t>(chi - 1)] == SignClass::Plus)
            rep.diagnostics.push_back("segment marking char " + std::to_string(chi) + " on wall " +
                                      std::to_string(w.v1) + "-" + std::to_string(w.v2) +
                                      " is a point-marking character");
        else if (degrees(wall_row[wi], static_cast<std::size_t>(chi - 1)) != 1)
            rep.diagnostics.push_back("deg(T_" + std::to_string(chi) + ") != 1 on its marked wall " +
                                      std::to_string(w.v1) + "-" + std::to_string(w.v2));
    }

    // Marked-segment counting cross-check: |Kt[rho][i]| = N(i,rho) for non-(+)
    // characters, Kt[rho][i] in {0,1} for (+) ones.
    for (std::size_t j = 0; j < rep.Kt.cols(); ++j) {
        const long long chi = static_cast<long long>(j) + 1;
        for (std::size_t rho = 0; rho < rep.Kt.rows(); ++rho) {
            const Int& entry = rep.Kt(rho, j);
            if (rep.trichotomy.cls[j] == SignClass::Plus) {
                if (entry != 0 && entry != 1)
                    rep.cht_failures.push_back({static_cast<int>(chi), static_cast<int>(rho), entry, -1});
                continue;
            }
            long long n = 0;
            auto it = marked_walls.find(chi);
            if (it != marked_walls.end())
                for (int wi : it->second) {
                    const Wall& w = fan.walls()[wi];
                    if (w.v1 == interior[rho] || w.v2 == interior[rho]) ++n;
                }
            long long expected = std::max(0LL, n - 1);
            if (abs(entry) != expected)
                rep.cht_failures.push_back(
                    {static_cast<int>(chi), static_cast<int>(rho), entry, expected});
        }
    }
    rep.cht_pass = rep.cht_failures.empty();
    if (!rep.cht_pass)
        rep.diagnostics.push_back("segment-count cross-check failed for " +
                                  std::to_string(rep.cht_failures.size()) + " (character, point) pairs");

    for (const auto& [chi, rows] : case0_supports(rep.trichotomy, degrees, &rep.diagnostics)) {
        std::vector<std::array<int, 2>> curves;
        for (int w : rows) {
            const Wall& wall = fan.walls()[fan.compact_walls()[w]];
            curves.push_back({wall.v1, wall.v2});
        }
        rep.case0_curves[chi] = curves;
    }

    rep.exactness = verify_short_exact(rep.K, rep.L);
    if (!rep.exactness.pass())
        for (const auto& f : rep.exactness.failures)
            rep.diagnostics.push_back("exactness: " + f);
    return rep;
}

GaleReport matrix_mode(const ZMatrix& l_user, const std::optional<ZMatrix>& k_user,
                       std::vector<Int> v, std::vector<std::string> labels) {
    GaleReport rep;
    rep.geometric = false;
    const std::size_t n = l_user.cols();
    if (labels.empty())
        for (std::size_t i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
    if (labels.size() != n) throw Error(ErrorCode::DimensionMismatch, "labels size != columns");
    rep.labels = std::move(labels);
    if (v.empty()) v.assign(n, Int(1));
    if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, "dimension vector size != columns");
    rep.dim_vector = std::move(v);

    auto fs = smith_normal_form(l_user).invariant_factors();
    if (fs.size() != l_user.rows() ||
        !std::all_of(fs.begin(), fs.end(), [](const Int& f) { return f == 1; })) {
        std::ostringstream os;
        os << "L has invariant factors (";
        for (std::size_t i = 0; i < fs.size(); ++i) os << (i ? "," : "") << fs[i];
        os << "), rank " << fs.size() << " of " << l_user.rows() << " rows";
        throw Error(ErrorCode::NotSurjective, os.str());
    }
    rep.ns_rank = fs.size();

    ZMatrix ker = kernel_basis(l_user);
    if (k_user) {
        if (k_user->rows() != n)
            throw Error(ErrorCode::DimensionMismatch, "rows(K) != cols(L)");
        if (!(l_user * *k_user).is_zero())
            throw Error(ErrorCode::NotAKernelBasis, "L*K != 0");
        if (k_user->cols() != ker.cols() || !same_column_lattice(*k_user, ker))
            throw Error(ErrorCode::NotAKernelBasis,
                        "columns do not span the saturated kernel of L");
        rep.K = *k_user;
        rep.notes.push_back("kernel rows adopted from the supplied relation order");
    } else {
        rep.K = ker;
        if (rep.K.cols() > 0)
            rep.notes.push_back("non-canonical rows: kernel emitted in HNF order (no K supplied)");
    }
    if (rep.K.cols() == 0) rep.notes.push_back("kernel trivial");

    rep.Kt = rep.K.transposed();
    rep.L = l_user;
    rep.Lt = l_user.transposed();
    rep.trichotomy = classify_columns(rep.Kt);
    classify_diagnostics(rep.trichotomy, false, rep);
    rep.exactness = verify_short_exact(rep.K, rep.L);
    if (!rep.exactness.pass())
        for (const auto& f : rep.exactness.failures)
            rep.diagnostics.push_back("exactness: " + f);
    return rep;
}

nlohmann::json GaleReport::to_json() const {
    nlohmann::json j;
    if (geometric) {
        j["group"] = {{"r", r}, {"weights", {weights[0], weights[1], weights[2]}}};
        j["reid_basis"] = reid_basis;
        nlohmann::json pts = nlohmann::json::array();
        for (const Point& p : row_points) pts.push_back({p[0], p[1], p[2]});
        j["row_points"] = std::move(pts);
        nlohmann::json allpts = nlohmann::json::array();
        for (const Point& p : points) allpts.push_back({p[0], p[1], p[2]});
        j["points"] = std::move(allpts);
        j["file_order"] = file_order;
        j["row_order"] = row_order;
        j["Kt_ordered"] = matrix_json(Kt_ordered);

        nlohmann::json marks;
        nlohmann::json pm = nlohmann::json::object();
        for (const auto& [row, chars] : point_markings) pm[std::to_string(row)] = chars;
        marks["points"] = std::move(pm);
        nlohmann::json sm = nlohmann::json::array();
        for (const auto& [wall, chi] : segment_markings)
            sm.push_back({{"wall", {wall[0], wall[1]}}, {"char", chi}});
        marks["segments"] = std::move(sm);
        j["markings"] = std::move(marks);

        nlohmann::json fails = nlohmann::json::array();
        for (const auto& f : cht_failures)
            fails.push_back({{"char", f.chi},
                             {"row", f.row},
                             {"entry", int_json(f.entry)},
                             {"expected", f.expected}});
        j["cht_check"] = {{"pass", cht_pass}, {"failures", std::move(fails)}};

        nlohmann::json c0 = nlohmann::json::object();
        for (const auto& [chi, curves] : case0_curves) {
            nlohmann::json lst = nlohmann::json::array();
            for (const auto& c : curves) lst.push_back({c[0], c[1]});
            c0[std::to_string(chi)] = std::move(lst);
        }
        j["case0"] = std::move(c0);
    }
    j["mode"] = geometric ? "analyze" : "matrix";
    j["labels"] = labels;
    nlohmann::json dv = nlohmann::json::array();
    for (const Int& x : dim_vector) dv.push_back(int_json(x));
    j["v"] = std::move(dv);
    j["ns_rank"] = ns_rank;
    j["L"] = matrix_json(L);
    j["K"] = matrix_json(K);
    j["Kt"] = matrix_json(Kt);
    j["Lt"] = matrix_json(Lt);

    nlohmann::json plus = nlohmann::json::object(), minus = nlohmann::json::object();
    nlohmann::json zero = nlohmann::json::array(), mixed = nlohmann::json::array();
    for (std::size_t c = 0; c < trichotomy.cls.size(); ++c) {
        const std::string key = std::to_string(c + 1);
        switch (trichotomy.cls[c]) {
        case SignClass::Plus: {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& [row, e] : trichotomy.positives[c]) rows.push_back({row, int_json(e)});
            plus[key] = {{"rows", std::move(rows)}};
            break;
        }
        case SignClass::Minus: {
            nlohmann::json mult = nlohmann::json::object();
            for (const auto& [row, e] : trichotomy.negatives[c])
                mult[std::to_string(row)] = int_json(e);
            minus[key] = std::move(mult);
            break;
        }
        case SignClass::Zero: zero.push_back(c + 1); break;
        case SignClass::Mixed: mixed.push_back(c + 1); break;
        }
    }
    j["trichotomy"] = {{"plus", std::move(plus)},
                       {"zero", std::move(zero)},
                       {"minus", std::move(minus)},
                       {"mixed", std::move(mixed)}};
    j["sign_coherent"] = trichotomy.sign_coherent();
    j["exactness"] = {{"pass", exactness.pass()},
                      {"composite_zero", exactness.composite_zero},
                      {"kernel_matches", exactness.kernel_matches},
                      {"surjective", exactness.surjective},
                      {"failures", exactness.failures}};
    j["diagnostics"] = diagnostics;
    j["notes"] = notes;
    return j;
}

} // namespace reidgale
