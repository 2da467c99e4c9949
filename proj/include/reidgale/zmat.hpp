#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reidgale/errors.hpp"

namespace reidgale {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Dense exact integer matrix, row-major. Entries are arbitrary-precision;
/// dimensions may be zero (kernels of injective maps are n x 0).
class ZMatrix {
public:
    ZMatrix() = default;
    ZMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    ZMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static ZMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    ZMatrix transposed() const;
    std::vector<Int> column(std::size_t j) const;
    std::vector<Int> row(std::size_t i) const;

    bool is_zero() const;
    bool operator==(const ZMatrix& other) const = default;

    void swap_rows(std::size_t a, std::size_t b);
    void swap_cols(std::size_t a, std::size_t b);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> data_;
};

ZMatrix operator*(const ZMatrix& a, const ZMatrix& b);
std::ostream& operator<<(std::ostream& os, const ZMatrix& m);

/// Determinant of a square matrix (Bareiss fraction-free elimination).
Int det(const ZMatrix& m);
bool is_unimodular(const ZMatrix& m);

struct HermiteResult {
    ZMatrix h; // row-echelon Hermite form, pivots positive, entries above reduced
    ZMatrix u; // unimodular with u * input = h
};

HermiteResult hermite_normal_form(const ZMatrix& m);

struct SNFDecomposition {
    ZMatrix u, d, v; // u * input * v = d, u and v unimodular, d diagonal with d1 | d2 | ...
    std::vector<Int> invariant_factors() const;
    std::size_t rank() const;
};

SNFDecomposition smith_normal_form(const ZMatrix& m);
std::size_t rank(const ZMatrix& m);

/// Columns form a saturated Z-basis of { x : m x = 0 }, canonicalized to a
/// bottom-up column HNF (echelon from the last coordinate, trailing pivot
/// positive) so the output is deterministic. kernel_basis([1 2]) = (-2, 1)^t.
ZMatrix kernel_basis(const ZMatrix& m);

/// Canonical form of the column lattice (same bottom-up HNF); two matrices
/// span the same column lattice iff their canonical forms agree.
ZMatrix column_lattice_canon(const ZMatrix& m);
bool same_column_lattice(const ZMatrix& a, const ZMatrix& b);

/// Exact integral solve a x = b; nullopt when no integer solution exists.
std::optional<std::vector<Int>> solve_integral(const ZMatrix& a, const std::vector<Int>& b);
std::optional<ZMatrix> solve_integral(const ZMatrix& a, const ZMatrix& b);

struct ExactnessReport {
    bool composite_zero = false;   // l * k == 0
    bool kernel_matches = false;   // k injective with saturated image = ker(l)
    bool surjective = false;       // all invariant factors of l equal 1
    bool pass() const { return composite_zero && kernel_matches && surjective; }
    std::vector<std::string> failures;
};

/// Checks that 0 -> Z^cols(k) -K-> Z^cols(l) -L-> Z^rows(l) -> 0 is exact.
/// Throws DimensionMismatch when rows(k) != cols(l).
ExactnessReport verify_short_exact(const ZMatrix& k, const ZMatrix& l);

/// Gale dual K^t of a surjective configuration l. Throws NotSurjective when
/// some invariant factor of l exceeds 1.
ZMatrix gale_dual(const ZMatrix& l);

// Matrix exchange: CSV (one row per line, comma separated) and JSON
// {"rows":m,"cols":n,"data":[[...],...]}. Both reject non-integer entries.
ZMatrix read_matrix_csv(std::istream& in);
ZMatrix read_matrix_csv_file(const std::string& path);
void write_matrix_csv(std::ostream& os, const ZMatrix& m);
ZMatrix read_matrix_json_text(const std::string& text);
ZMatrix read_matrix_file(const std::string& path); // dispatch on extension

} // namespace reidgale
