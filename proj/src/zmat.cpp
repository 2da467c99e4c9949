#include "reidgale/zmat.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace reidgale {

ZMatrix::ZMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw Error(ErrorCode::DimensionMismatch, "ragged initializer");
        for (long long x : r) data_.emplace_back(x);
    }
}

ZMatrix ZMatrix::identity(std::size_t n) {
    ZMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

ZMatrix ZMatrix::transposed() const {
    ZMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

std::vector<Int> ZMatrix::column(std::size_t j) const {
    std::vector<Int> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

std::vector<Int> ZMatrix::row(std::size_t i) const {
    std::vector<Int> r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
}

bool ZMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return x == 0; });
}

void ZMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void ZMatrix::swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

ZMatrix operator*(const ZMatrix& a, const ZMatrix& b) {
    if (a.cols() != b.rows())
        throw Error(ErrorCode::DimensionMismatch,
                    "product of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    ZMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Int& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::ostream& operator<<(std::ostream& os, const ZMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
        os << "\n";
    }
    return os;
}

Int det(const ZMatrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "det of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    ZMatrix a = m;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            a.swap_rows(k, piv);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign > 0 ? a(n - 1, n - 1) : -a(n - 1, n - 1);
}

bool is_unimodular(const ZMatrix& m) {
    if (m.rows() != m.cols()) return false;
    Int d = det(m);
    return d == 1 || d == -1;
}

HermiteResult hermite_normal_form(const ZMatrix& m) {
    ZMatrix h = m;
    ZMatrix u = ZMatrix::identity(m.rows());
    const std::size_t rows = m.rows(), cols = m.cols();

    auto row_axpy = [&](std::size_t dst, std::size_t src, const Int& q) {
        if (q == 0) return;
        for (std::size_t j = 0; j < cols; ++j) h(dst, j) -= q * h(src, j);
        for (std::size_t j = 0; j < rows; ++j) u(dst, j) -= q * u(src, j);
    };
    auto negate_row = [&](std::size_t i) {
        for (std::size_t j = 0; j < cols; ++j) h(i, j) = -h(i, j);
        for (std::size_t j = 0; j < rows; ++j) u(i, j) = -u(i, j);
    };

    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        for (;;) {
            std::size_t piv = rows;
            for (std::size_t i = r; i < rows; ++i)
                if (h(i, c) != 0 && (piv == rows || abs(h(i, c)) < abs(h(piv, c)))) piv = i;
            if (piv == rows) break;
            h.swap_rows(r, piv);
            u.swap_rows(r, piv);
            bool clean = true;
            for (std::size_t i = r + 1; i < rows; ++i) {
                if (h(i, c) == 0) continue;
                row_axpy(i, r, h(i, c) / h(r, c));
                if (h(i, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (h(r, c) == 0) continue;
        if (h(r, c) < 0) negate_row(r);
        for (std::size_t i = 0; i < r; ++i) {
            // reduce entries above the pivot into [0, pivot)
            Int q = h(i, c) / h(r, c);
            if (h(i, c) - q * h(r, c) < 0) q -= 1;
            row_axpy(i, r, q);
        }
        ++r;
    }
    return {std::move(h), std::move(u)};
}

SNFDecomposition smith_normal_form(const ZMatrix& m) {
    ZMatrix d = m;
    ZMatrix u = ZMatrix::identity(m.rows());
    ZMatrix v = ZMatrix::identity(m.cols());
    const std::size_t rows = m.rows(), cols = m.cols();

    auto row_axpy = [&](std::size_t dst, std::size_t src, const Int& q) {
        if (q == 0) return;
        for (std::size_t j = 0; j < cols; ++j) d(dst, j) -= q * d(src, j);
        for (std::size_t j = 0; j < rows; ++j) u(dst, j) -= q * u(src, j);
    };
    auto col_axpy = [&](std::size_t dst, std::size_t src, const Int& q) {
        if (q == 0) return;
        for (std::size_t i = 0; i < rows; ++i) d(i, dst) -= q * d(i, src);
        for (std::size_t i = 0; i < cols; ++i) v(i, dst) -= q * v(i, src);
    };

    std::size_t t = 0;
    const std::size_t lim = std::min(rows, cols);
    while (t < lim) {
        // smallest-absolute-value pivot in the trailing submatrix
        std::size_t pi = rows, pj = cols;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (d(i, j) != 0 && (pi == rows || abs(d(i, j)) < abs(d(pi, pj)))) {
                    pi = i;
                    pj = j;
                }
        if (pi == rows) break;
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        for (std::size_t i = 0; i < cols; ++i) std::swap(v(i, t), v(i, pj));

        bool dirty = false;
        for (std::size_t i = t + 1; i < rows; ++i)
            if (d(i, t) != 0) {
                row_axpy(i, t, d(i, t) / d(t, t));
                if (d(i, t) != 0) dirty = true;
            }
        for (std::size_t j = t + 1; j < cols; ++j)
            if (d(t, j) != 0) {
                col_axpy(j, t, d(t, j) / d(t, t));
                if (d(t, j) != 0) dirty = true;
            }
        if (dirty) continue;

        // enforce the divisibility chain
        bool fixed = false;
        for (std::size_t i = t + 1; i < rows && !fixed; ++i)
            for (std::size_t j = t + 1; j < cols && !fixed; ++j)
                if (d(i, j) % d(t, t) != 0) {
                    for (std::size_t c = 0; c < cols; ++c) d(t, c) += d(i, c);
                    for (std::size_t c = 0; c < rows; ++c) u(t, c) += u(i, c);
                    fixed = true;
                }
        if (fixed) continue;

        if (d(t, t) < 0) {
            for (std::size_t j = 0; j < cols; ++j) d(t, j) = -d(t, j);
            for (std::size_t j = 0; j < rows; ++j) u(t, j) = -u(t, j);
        }
        ++t;
    }
    return {std::move(u), std::move(d), std::move(v)};
}

std::vector<Int> SNFDecomposition::invariant_factors() const {
    std::vector<Int> fs;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i)
        if (d(i, i) != 0) fs.push_back(d(i, i));
    return fs;
}

std::size_t SNFDecomposition::rank() const { return invariant_factors().size(); }

std::size_t rank(const ZMatrix& m) { return smith_normal_form(m).rank(); }

namespace {

// Bottom-up column HNF: vectors echeloned from the last coordinate with the
// deepest pivot positive. Fixes kernel_basis([1 2]) = (-2,1)^t.
ZMatrix canon_columns(const ZMatrix& cols_mat) {
    const std::size_t n = cols_mat.rows(), k = cols_mat.cols();
    ZMatrix b(k, n); // rows = vectors, coordinates reversed
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) b(j, i) = cols_mat(n - 1 - i, j);
    ZMatrix h = hermite_normal_form(b).h;
    std::size_t nz = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        bool any = false;
        for (std::size_t j = 0; j < n; ++j)
            if (h(i, j) != 0) any = true;
        if (any) ++nz;
    }
    ZMatrix out(n, nz);
    for (std::size_t j = 0; j < nz; ++j)
        for (std::size_t i = 0; i < n; ++i) out(n - 1 - i, j) = h(j, i);
    return out;
}

} // namespace

ZMatrix kernel_basis(const ZMatrix& m) {
    SNFDecomposition snf = smith_normal_form(m);
    const std::size_t n = m.cols(), r = snf.rank();
    ZMatrix raw(n, n - r);
    for (std::size_t j = r; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) raw(i, j - r) = snf.v(i, j);
    return canon_columns(raw);
}

ZMatrix column_lattice_canon(const ZMatrix& m) { return canon_columns(m); }

bool same_column_lattice(const ZMatrix& a, const ZMatrix& b) {
    if (a.rows() != b.rows()) return false;
    return column_lattice_canon(a) == column_lattice_canon(b);
}

std::optional<std::vector<Int>> solve_integral(const ZMatrix& a, const std::vector<Int>& b) {
    if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "solve_integral rhs size");
    HermiteResult hr = hermite_normal_form(a);
    const std::size_t rows = a.rows(), n = a.cols();
    std::vector<Int> rhs(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        Int s = 0;
        for (std::size_t k = 0; k < rows; ++k) s += hr.u(i, k) * b[k];
        rhs[i] = s;
    }
    std::vector<Int> x(n, 0);
    std::vector<std::size_t> pivot(rows, n);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (hr.h(i, j) != 0) {
                pivot[i] = j;
                break;
            }
    for (std::size_t ii = rows; ii-- > 0;) {
        if (pivot[ii] == n) {
            if (rhs[ii] != 0) return std::nullopt;
            continue;
        }
        Int s = rhs[ii];
        for (std::size_t j = pivot[ii] + 1; j < n; ++j) s -= hr.h(ii, j) * x[j];
        if (s % hr.h(ii, pivot[ii]) != 0) return std::nullopt;
        x[pivot[ii]] = s / hr.h(ii, pivot[ii]);
    }
    for (std::size_t i = 0; i < rows; ++i) {
        Int s = 0;
        for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
        if (s != b[i]) return std::nullopt;
    }
    return x;
}

std::optional<ZMatrix> solve_integral(const ZMatrix& a, const ZMatrix& b) {
    if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "solve_integral rhs rows");
    ZMatrix x(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto col = solve_integral(a, b.column(j));
        if (!col) return std::nullopt;
        for (std::size_t i = 0; i < a.cols(); ++i) x(i, j) = (*col)[i];
    }
    return x;
}

ExactnessReport verify_short_exact(const ZMatrix& k, const ZMatrix& l) {
    if (k.rows() != l.cols())
        throw Error(ErrorCode::DimensionMismatch, "rows(K) = " + std::to_string(k.rows()) +
                                                      " but cols(L) = " + std::to_string(l.cols()));
    ExactnessReport rep;
    rep.composite_zero = (l * k).is_zero();
    if (!rep.composite_zero) rep.failures.push_back("L*K != 0");

    ZMatrix ker = kernel_basis(l);
    bool injective = rank(k) == k.cols();
    bool lattice = k.cols() == ker.cols() && same_column_lattice(k, ker);
    rep.kernel_matches = injective && lattice;
    if (!injective) rep.failures.push_back("K has dependent columns");
    if (!lattice) rep.failures.push_back("im(K) is not the saturated kernel of L");

    auto fs = smith_normal_form(l).invariant_factors();
    rep.surjective = fs.size() == l.rows() && std::all_of(fs.begin(), fs.end(), [](const Int& f) {
                         return f == 1;
                     });
    if (!rep.surjective) rep.failures.push_back("L is not surjective (non-unit invariant factor)");
    return rep;
}

ZMatrix gale_dual(const ZMatrix& l) {
    auto fs = smith_normal_form(l).invariant_factors();
    if (fs.size() != l.rows() ||
        !std::all_of(fs.begin(), fs.end(), [](const Int& f) { return f == 1; })) {
        std::ostringstream os;
        os << "invariant factors (";
        for (std::size_t i = 0; i < fs.size(); ++i) os << (i ? "," : "") << fs[i];
        os << ") do not present a free quotient of rank " << l.rows();
        throw Error(ErrorCode::NotSurjective, os.str());
    }
    return kernel_basis(l).transposed();
}

namespace {

Int parse_int_token(const std::string& tok) {
    std::string s = tok;
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    if (s.empty()) throw Error(ErrorCode::SchemaError, "empty matrix entry");
    std::size_t pos = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (pos == s.size()) throw Error(ErrorCode::SchemaError, "bad matrix entry '" + tok + "'");
    for (std::size_t i = pos; i < s.size(); ++i)
        if (!isdigit(static_cast<unsigned char>(s[i])))
            throw Error(ErrorCode::SchemaError, "non-integer matrix entry '" + tok + "'");
    return Int(s);
}

} // namespace

ZMatrix read_matrix_csv(std::istream& in) {
    std::vector<std::vector<Int>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<Int> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) row.push_back(parse_int_token(tok));
        if (!rows.empty() && row.size() != rows.front().size())
            throw Error(ErrorCode::SchemaError, "ragged CSV row");
        rows.push_back(std::move(row));
    }
    ZMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    return m;
}

ZMatrix read_matrix_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& os, const ZMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
        os << "\n";
    }
}

ZMatrix read_matrix_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaError, std::string("bad matrix JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw Error(ErrorCode::SchemaError, "matrix JSON needs rows/cols/data");
    if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
        throw Error(ErrorCode::SchemaError, "rows/cols must be nonnegative integers");
    std::size_t rows = j["rows"].get<std::size_t>(), cols = j["cols"].get<std::size_t>();
    const auto& data = j["data"];
    if (!data.is_array() || data.size() != rows)
        throw Error(ErrorCode::SchemaError, "data has wrong number of rows");
    ZMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!data[i].is_array() || data[i].size() != cols)
            throw Error(ErrorCode::SchemaError, "data row " + std::to_string(i) + " has wrong size");
        for (std::size_t jj = 0; jj < cols; ++jj) {
            const auto& e = data[i][jj];
            if (e.is_number_integer())
                m(i, jj) = Int(e.get<long long>());
            else if (e.is_string())
                m(i, jj) = parse_int_token(e.get<std::string>());
            else
                throw Error(ErrorCode::SchemaError, "non-integer matrix entry");
        }
    }
    return m;
}

ZMatrix read_matrix_file(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        std::ifstream in(path);
        if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return read_matrix_json_text(ss.str());
    }
    return read_matrix_csv_file(path);
}

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotSL: return "NotSL";
    case ErrorCode::NotFaithful: return "NotFaithful";
    case ErrorCode::DegenerateWeight: return "DegenerateWeight";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::NonIntegralRelation: return "NonIntegralRelation";
    case ErrorCode::OpenStar: return "OpenStar";
    case ErrorCode::NotLocallyFree: return "NotLocallyFree";
    case ErrorCode::InconsistentSupport: return "InconsistentSupport";
    case ErrorCode::NonIntegralDegree: return "NonIntegralDegree";
    case ErrorCode::InconsistentDegrees: return "InconsistentDegrees";
    case ErrorCode::NonIntegralChi: return "NonIntegralChi";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NotABasis: return "NotABasis";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::NotAKernelBasis: return "NotAKernelBasis";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace reidgale
