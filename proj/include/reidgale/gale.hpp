#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "reidgale/bundles.hpp"
#include "reidgale/fan.hpp"
#include "reidgale/surfaces.hpp"
#include "reidgale/zmat.hpp"

namespace reidgale {

enum class SignClass { Plus, Zero, Minus, Mixed };

/// Column-sign classification of K^t. A Mixed column falsifies the
/// sign-coherence conjecture and is surfaced as a diagnostic, never "fixed".
struct Trichotomy {
    std::vector<SignClass> cls;                                // per column
    std::vector<std::vector<std::pair<int, Int>>> positives;   // per column: (row, entry)
    std::vector<std::vector<std::pair<int, Int>>> negatives;   // per column: (row, -entry)
    std::vector<int> mixed;                                    // 1-based column indices
    bool sign_coherent() const { return mixed.empty(); }
};

Trichotomy classify_columns(const ZMatrix& kt);

struct ChtFailure {
    int chi = 0;       // 1-based character
    int row = 0;       // Kt row (canonical interior order)
    Int entry;         // Kt entry
    long long expected = 0; // N(i,rho), or -1 for the (+) {0,1} coherence check
};

struct GaleReport {
    bool geometric = false;
    long long r = 0;
    std::array<long long, 3> weights{};
    std::vector<std::string> labels;   // per column of L / Kt
    std::vector<Int> dim_vector;       // v_i for i != 0
    std::size_t ns_rank = 0;

    std::vector<int> reid_basis;       // 1-based characters (geometric mode)
    ZMatrix L;                         // geometric: the Reid-basis linearisation matrix
    ZMatrix K, Kt, Lt;
    std::vector<Point> row_points;     // interior point per Kt row (geometric)
    std::vector<Point> points;         // all fan points, internal canonical order
    std::vector<int> file_order;       // canonical index -> position in the input file
    std::vector<int> row_order;  // marking-sorted row k <- canonical row row_order[k]
    ZMatrix Kt_ordered;

    Trichotomy trichotomy;
    std::map<int, std::vector<int>> point_markings;                    // Kt row -> chars
    std::vector<std::pair<std::array<int, 2>, int>> segment_markings;  // wall endpoints -> char
    bool cht_pass = true;
    std::vector<ChtFailure> cht_failures;
    std::map<int, std::vector<std::array<int, 2>>> case0_curves;       // char -> wall endpoints
    ExactnessReport exactness;

    std::vector<std::string> diagnostics; // strict-mode failures
    std::vector<std::string> notes;       // informational

    nlohmann::json to_json() const;
};

// --- pipeline stages (exposed for tests) ---

struct NsKernel {
    std::size_t ns_rank = 0;
    ZMatrix raw_kernel; // (r-1) x k, saturated, canonical column HNF
};

/// NS(X) as the column lattice of the degree matrix; throws RankMismatch when
/// the kernel rank differs from the number of interior points (the Z-basis
/// hypothesis on F_2/F_1 fails).
NsKernel ns_and_raw_kernel(const ZMatrix& degrees, std::size_t interior_count);

/// Re-bases a kernel basis to the unique one Euler-dual to {[O_{E_rho}]}:
/// P[rho][j] = sum_i theta_j[i] * euler[rho][i] with theta_0 lifted via v;
/// requires P unimodular (NotUnimodular otherwise); returns kernel * P^{-1}.
ZMatrix canonical_kernel(const ZMatrix& raw_kernel, const ZMatrix& euler,
                         const std::vector<Int>& v);

/// All characters outside case (+), plus the smallest character of every
/// doubly-marked row; asserted to index a Z-basis of NS (throws NotABasis).
std::vector<int> reid_basis_chars(const ZMatrix& kt, const Trichotomy& tri);

ZMatrix reid_linearisation(const ZMatrix& degrees, const std::vector<int>& basis);

/// Rows sorted ascending by the minimal (+) character marking each row;
/// rows without a positive mark are flagged and sorted last.
std::vector<int> marking_row_order(const ZMatrix& kt, const Trichotomy& tri,
                                   std::vector<std::string>* flags);

/// Reid's-recipe segment marking: the wall normal, primitive in the weight-0
/// monomial lattice, split into positive and negative parts; the character of
/// either part marks the wall.
long long segment_marking_char(const CrepantFan& fan, const Wall& wall);

/// For each (0)-class character, the curves (degree-matrix row indices) on
/// which it has degree one and every other character degree zero; lists of
/// size != 1 are reported through `diagnostics`.
std::map<int, std::vector<int>> case0_supports(const Trichotomy& tri, const ZMatrix& degrees,
                                               std::vector<std::string>* diagnostics);

/// Full toric pipeline; the second form reuses a precomputed degree matrix.
GaleReport analyze(const CrepantFan& fan);
GaleReport analyze(const CrepantFan& fan, const ZMatrix& degrees);

/// Pure matrix pipeline on user-supplied data; markings omitted. When k_user
/// is given it is checked (NotAKernelBasis) and adopted with its column order.
GaleReport matrix_mode(const ZMatrix& l_user, const std::optional<ZMatrix>& k_user,
                       std::vector<Int> v = {}, std::vector<std::string> labels = {});

} // namespace reidgale
