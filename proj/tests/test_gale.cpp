#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "goldens.hpp"
#include "reidgale/gale.hpp"

using namespace reidgale;

namespace {

GaleReport analyze_fixture(const std::string& name) {
    return analyze(CrepantFan::load(goldens::fan_path(name)));
}

ZMatrix random_unimodular(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<int> q(-2, 2);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    ZMatrix u = ZMatrix::identity(n);
    for (int ops = 0; ops < 12; ++ops) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        Int f = q(rng);
        for (std::size_t c = 0; c < n; ++c) u(i, c) += f * u(j, c);
    }
    return u;
}

} // namespace

TEST_CASE("micro pipeline 1/3(1,1,1)") {
    GaleReport rep = analyze_fixture("fan_1_3_1_1_1.json");
    CHECK(rep.ns_rank == 1);
    CHECK(rep.Kt == ZMatrix{{-2, 1}});
    CHECK(rep.reid_basis == std::vector<int>{1});
    CHECK(rep.L == ZMatrix{{1, 2}});
    CHECK(rep.trichotomy.cls[0] == SignClass::Minus);
    CHECK(rep.trichotomy.cls[1] == SignClass::Plus);
    CHECK(rep.trichotomy.negatives[0] == std::vector<std::pair<int, Int>>{{0, Int(2)}});
    CHECK(rep.cht_pass);
    CHECK(rep.exactness.pass());
    CHECK(rep.diagnostics.empty());
    // all three corner-center segments are marked by character 1
    CHECK(rep.segment_markings.size() == 3);
    for (const auto& [wall, chi] : rep.segment_markings) CHECK(chi == 1);
}

TEST_CASE("full golden 1/19(1,3,15)") {
    GaleReport rep = analyze_fixture("fan_1_19_1_3_15.json");
    CHECK(rep.ns_rank == 9);
    CHECK(rep.reid_basis == std::vector<int>{1, 2, 3, 7, 8, 9, 11, 12, 15});
    CHECK(rep.L == goldens::golden_L_1315());
    CHECK(rep.Kt_ordered == goldens::golden_Kt_1315());
    CHECK(rep.row_order == std::vector<int>{8, 6, 3, 5, 2, 1, 7, 4, 0});

    std::vector<int> plus, zero, minus;
    for (std::size_t j = 0; j < rep.trichotomy.cls.size(); ++j) {
        if (rep.trichotomy.cls[j] == SignClass::Plus) plus.push_back(static_cast<int>(j) + 1);
        if (rep.trichotomy.cls[j] == SignClass::Zero) zero.push_back(static_cast<int>(j) + 1);
        if (rep.trichotomy.cls[j] == SignClass::Minus) minus.push_back(static_cast<int>(j) + 1);
    }
    CHECK(plus == std::vector<int>{4, 5, 6, 8, 10, 13, 14, 16, 17, 18});
    CHECK(zero == std::vector<int>{9});
    CHECK(minus == std::vector<int>{1, 2, 3, 7, 11, 12, 15});
    CHECK(rep.trichotomy.sign_coherent());

    CHECK(rep.cht_pass);
    CHECK(rep.exactness.pass());
    CHECK(rep.diagnostics.empty());

    // the doubly-marked point carries characters 8 and 13
    bool found_double = false;
    for (const auto& [row, chars] : rep.point_markings)
        if (chars.size() == 2) {
            found_double = true;
            CHECK(chars == std::vector<int>{8, 13});
            CHECK(rep.row_points[row] == Point{8, 5, 6});
        }
    CHECK(found_double);

    // case (0): character 9 supported on the single curve <(3,9,7),(9,8,2)>
    REQUIRE(rep.case0_curves.count(9));
    REQUIRE(rep.case0_curves.at(9).size() == 1);

    // the full interior-point decoration, keyed by canonical row order
    std::map<Point, std::vector<int>> wanted{
        {{1, 3, 15}, {18}}, {{2, 6, 11}, {14}}, {{3, 9, 7}, {10}},
        {{4, 12, 3}, {6}},  {{7, 2, 10}, {17}}, {{8, 5, 6}, {8, 13}},
        {{9, 8, 2}, {5}},   {{13, 1, 5}, {16}}, {{14, 4, 1}, {4}}};
    REQUIRE(rep.point_markings.size() == 9);
    for (const auto& [row, chars] : rep.point_markings)
        CHECK(wanted.at(rep.row_points[row]) == chars);

    // segment markings by character: 1 x3, 2 x4, 3 x8, 7 x3, 9 x1, 11 x2, 12 x2, 15 x4
    std::map<int, int> seg_count;
    for (const auto& [wall, chi] : rep.segment_markings) ++seg_count[chi];
    CHECK(seg_count ==
          std::map<int, int>{{1, 3}, {2, 4}, {3, 8}, {7, 3}, {9, 1}, {11, 2}, {12, 2}, {15, 4}});
}

TEST_CASE("non-isolated 1/6(1,1,4)") {
    GaleReport rep = analyze_fixture("fan_1_6_1_1_4.json");
    CHECK(rep.ns_rank == 3); // = (r-1) - #interior: the boundary ray adds a divisor class
    CHECK(rep.Kt == ZMatrix{{-1, 0, 0, -1, 1}, {-1, -1, 1, 0, 0}});
    CHECK(rep.reid_basis == std::vector<int>{1, 2, 4});
    CHECK(rep.L == ZMatrix{{1, 0, 1, 0, 1}, {0, 1, 1, 0, 0}, {0, 0, 0, 1, 1}});
    CHECK(rep.cht_pass);
    CHECK(rep.exactness.pass());
    CHECK(rep.trichotomy.sign_coherent());
}

TEST_CASE("canonical kernel is idempotent and basis independent") {
    CrepantFan fan = CrepantFan::load(goldens::fan_path("fan_1_19_1_3_15.json"));
    ZMatrix deg = degree_matrix(fan, SupportTable::compute(fan));
    NsKernel nk = ns_and_raw_kernel(deg, fan.interior_points().size());
    ZMatrix euler = euler_table(fan, deg);
    std::vector<Int> v(18, Int(1));
    ZMatrix canon = canonical_kernel(nk.raw_kernel, euler, v);

    // already canonical: the pairing is the identity, so output = input
    CHECK(canonical_kernel(canon, euler, v) == canon);

    std::mt19937 rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        ZMatrix u = random_unimodular(rng, canon.cols());
        CHECK(canonical_kernel(nk.raw_kernel * u, euler, v) == canon);
    }
}

TEST_CASE("non-unimodular pairing is rejected") {
    CrepantFan fan = CrepantFan::load(goldens::fan_path("fan_1_3_1_1_1.json"));
    ZMatrix deg = degree_matrix(fan, SupportTable::compute(fan));
    ZMatrix euler = euler_table(fan, deg);
    NsKernel nk = ns_and_raw_kernel(deg, 1);
    ZMatrix doubled = nk.raw_kernel;
    for (std::size_t i = 0; i < doubled.rows(); ++i) doubled(i, 0) *= 2;
    try {
        canonical_kernel(doubled, euler, {Int(1), Int(1)});
        FAIL("expected NotUnimodular");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotUnimodular);
    }
}

TEST_CASE("rank mismatch is a hard error") {
    ZMatrix zero_deg(4, 3); // zero degree matrix: kernel rank 3 != 1 interior point
    CHECK_THROWS_AS(ns_and_raw_kernel(zero_deg, 1), Error);
    try {
        ns_and_raw_kernel(zero_deg, 1);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RankMismatch);
    }
}

TEST_CASE("trichotomy classification and injected incoherence") {
    ZMatrix kt{{1, 0, -1, 0}, {-1, 0, 0, 2}};
    Trichotomy t = classify_columns(kt);
    CHECK(t.cls[0] == SignClass::Mixed);
    CHECK(t.cls[1] == SignClass::Zero);
    CHECK(t.cls[2] == SignClass::Minus);
    CHECK(t.cls[3] == SignClass::Plus);
    CHECK(t.mixed == std::vector<int>{1});
    CHECK(!t.sign_coherent());

    // every column lands in exactly one class
    int counted = 0;
    for (auto c : t.cls)
        counted += (c == SignClass::Plus) + (c == SignClass::Zero) + (c == SignClass::Minus) +
                   (c == SignClass::Mixed);
    CHECK(counted == 4);

    ZMatrix single{{1, -1}};
    Trichotomy t2 = classify_columns(single);
    CHECK(t2.sign_coherent());
}

TEST_CASE("reid basis tie break prefers the smaller character") {
    // synthetic Kt: row 0 holds the +1 of columns 3 and 5 (both plus-class)
    ZMatrix kt{{-1, 0, 1, 0, 1}, {0, -1, 0, 0, 0}};
    Trichotomy t = classify_columns(kt);
    auto basis = reid_basis_chars(kt, t);
    CHECK(basis == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("transpose duality") {
    GaleReport rep = analyze_fixture("fan_1_19_1_3_15.json");
    CHECK((rep.L * rep.K).is_zero());
    CHECK((rep.K.transposed() * rep.L.transposed()).is_zero());
    CHECK(rep.Lt == rep.L.transposed());
}

TEST_CASE("matrix mode: bento box") {
    ZMatrix l = read_matrix_csv_file(goldens::matrix_path("bento_L.csv"));
    ZMatrix k = read_matrix_csv_file(goldens::matrix_path("bento_K.csv"));
    std::vector<Int> v{1, 2, 1, 1, 1, 1, 2, 1, 1, 1, 1, 2, 1, 1};
    GaleReport rep = matrix_mode(l, k, v, {});
    CHECK(rep.Kt == goldens::bento_Kt());
    CHECK(rep.trichotomy.sign_coherent());
    CHECK(rep.exactness.pass());

    // the lifted theta_0 keeps every kernel column inside Theta
    for (std::size_t j = 0; j < rep.K.cols(); ++j) {
        Int acc = 0;
        for (std::size_t i = 0; i < rep.K.rows(); ++i) acc += v[i] * rep.K(i, j);
        Int theta0 = -acc;
        CHECK(theta0 + acc == 0);
    }
}

TEST_CASE("matrix mode: dimer example") {
    ZMatrix l = read_matrix_csv_file(goldens::matrix_path("longhex_L.csv"));
    ZMatrix k = read_matrix_csv_file(goldens::matrix_path("longhex_K.csv"));
    GaleReport rep = matrix_mode(l, k, {}, {});
    CHECK(rep.Kt == goldens::longhex_Kt());
    CHECK(rep.trichotomy.sign_coherent());
    CHECK(rep.exactness.pass());
}

TEST_CASE("matrix mode: flopping contraction") {
    GaleReport rep = matrix_mode(ZMatrix::identity(4), std::nullopt, {}, {});
    CHECK(rep.K.cols() == 0);
    CHECK(rep.Kt.rows() == 0);
    bool trivial_note = false;
    for (const auto& n : rep.notes)
        if (n.find("kernel trivial") != std::string::npos) trivial_note = true;
    CHECK(trivial_note);
}

TEST_CASE("matrix mode errors") {
    try {
        matrix_mode(ZMatrix{{2, 4}}, std::nullopt, {}, {});
        FAIL("expected NotSurjective");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotSurjective);
    }

    // K_user failing L*K = 0
    try {
        matrix_mode(ZMatrix{{1, 0}}, ZMatrix{{1}, {0}}, {}, {});
        FAIL("expected NotAKernelBasis");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotAKernelBasis);
    }

    // K_user spanning a finite-index sublattice of the kernel
    try {
        matrix_mode(ZMatrix{{1, 2}}, ZMatrix{{-4}, {2}}, {}, {});
        FAIL("expected NotAKernelBasis");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotAKernelBasis);
    }
}

TEST_CASE("matrix mode without K flags non-canonical rows") {
    GaleReport rep = matrix_mode(ZMatrix{{1, 1, 1}}, std::nullopt, {}, {});
    CHECK(rep.K.cols() == 2);
    bool flagged = false;
    for (const auto& n : rep.notes)
        if (n.find("non-canonical rows") != std::string::npos) flagged = true;
    CHECK(flagged);
}

TEST_CASE("matrix mode surfaces sign-incoherent kernels as diagnostics") {
    // a genuine kernel basis of [1 1 1 1] whose Kt has a mixed column
    ZMatrix k{{1, 0, 0}, {-1, 1, 0}, {0, -1, 1}, {0, 0, -1}};
    GaleReport rep = matrix_mode(ZMatrix{{1, 1, 1, 1}}, k, {}, {});
    CHECK(!rep.trichotomy.sign_coherent());
    bool diag = false;
    for (const auto& d : rep.diagnostics)
        if (d.find("SIGN-INCOHERENT") != std::string::npos) diag = true;
    CHECK(diag);
    CHECK(rep.exactness.pass()); // incoherence is a finding, not an error
}

TEST_CASE("matrix mode reproduces the geometric pipeline from its own (L, K)") {
    for (const auto& name :
         {"fan_1_3_1_1_1.json", "fan_1_19_1_3_15.json", "fan_1_6_1_1_4.json",
             "fan_1_7_1_2_4.json"}) {
        GaleReport geo = analyze_fixture(name);
        GaleReport mat = matrix_mode(geo.L, geo.K, {}, {});
        CHECK(mat.Kt == geo.Kt);
        CHECK(mat.trichotomy.cls == geo.trichotomy.cls);
        CHECK(mat.exactness.pass());
    }
}

TEST_CASE("exactness report round trip on every geometric fixture") {
    for (const auto& name :
         {"fan_1_3_1_1_1.json", "fan_1_19_1_3_15.json", "fan_1_6_1_1_4.json",
             "fan_1_7_1_2_4.json"}) {
        GaleReport rep = analyze_fixture(name);
        CHECK(rep.exactness.pass());
        // trichotomy partition over all characters
        std::size_t n = rep.Kt.cols();
        std::size_t assigned = 0;
        for (auto c : rep.trichotomy.cls)
            assigned += c == SignClass::Plus || c == SignClass::Zero || c == SignClass::Minus ||
                        c == SignClass::Mixed;
        CHECK(assigned == n);
        // (+) columns in the toric pipeline: a single entry equal to +1
        for (std::size_t j = 0; j < n; ++j)
            if (rep.trichotomy.cls[j] == SignClass::Plus) {
                CHECK(rep.trichotomy.positives[j].size() == 1);
                CHECK(rep.trichotomy.positives[j][0].second == 1);
            }
    }
}

TEST_CASE("report json is stable and carries the spec'd keys") {
    GaleReport rep = analyze_fixture("fan_1_3_1_1_1.json");
    auto j = rep.to_json();
    for (const char* key :
         {"group", "ns_rank", "reid_basis", "L", "Kt", "trichotomy", "markings", "cht_check",
          "diagnostics"})
        CHECK(j.contains(key));
    CHECK(j.dump() == rep.to_json().dump());
    CHECK(j["trichotomy"]["minus"]["1"]["0"] == 2);
}
