#include "finsheaf/intmat.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace finsheaf {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
    : rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (e_.size() != rows_ * cols_)
        throw std::invalid_argument("IntMatrix: entry count does not match shape");
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw std::invalid_argument("IntMatrix::from_rows: ragged row");
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::from_cols(const std::vector<Vec>& cols, std::size_t rows) {
    IntMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows)
            throw std::invalid_argument("IntMatrix::from_cols: ragged column");
        for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
    }
    return m;
}

bool IntMatrix::is_zero() const {
    for (const auto& x : e_)
        if (x != 0) return false;
    return true;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix: shape mismatch in product");
    IntMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) += a * o.at(k, j);
        }
    return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("IntMatrix: shape mismatch in sum");
    IntMatrix r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
    return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("IntMatrix: shape mismatch in difference");
    IntMatrix r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] -= o.e_[i];
    return r;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            r.at(j, i) = at(i, j);
    return r;
}

IntMatrix IntMatrix::negated() const {
    IntMatrix r = *this;
    for (auto& x : r.e_) x = -x;
    return r;
}

Vec IntMatrix::apply(const Vec& v) const {
    if (v.size() != cols_) throw std::invalid_argument("IntMatrix::apply: size mismatch");
    Vec r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
}

Vec IntMatrix::col(std::size_t j) const {
    Vec r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) r[i] = at(i, j);
    return r;
}

Vec IntMatrix::row(std::size_t i) const {
    Vec r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
}

IntMatrix IntMatrix::hstack(const IntMatrix& o) const {
    if (rows_ != o.rows_) throw std::invalid_argument("IntMatrix::hstack: row mismatch");
    IntMatrix r(rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
    }
    return r;
}

IntMatrix IntMatrix::vstack(const IntMatrix& o) const {
    if (cols_ != o.cols_) throw std::invalid_argument("IntMatrix::vstack: column mismatch");
    IntMatrix r(rows_ + o.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (std::size_t i = 0; i < o.rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(rows_ + i, j) = o.at(i, j);
    return r;
}

IntMatrix IntMatrix::submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    IntMatrix r(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            r.at(i, j) = at(r0 + i, c0 + j);
    return r;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

// Locate the minimal nonzero |entry| in s[k.., k..]; ties go to the lowest
// (row, col). Returns false if the submatrix is zero.
bool find_pivot(const IntMatrix& s, std::size_t k, std::size_t& pi, std::size_t& pj) {
    bool found = false;
    const Int* best = nullptr;
    for (std::size_t i = k; i < s.rows(); ++i)
        for (std::size_t j = k; j < s.cols(); ++j) {
            const Int& x = s.at(i, j);
            if (x == 0) continue;
            if (!found || mpz_cmpabs(x.get_mpz_t(), best->get_mpz_t()) < 0) {
                found = true;
                best = &x;
                pi = i;
                pj = j;
            }
        }
    return found;
}

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
}

// row a -= q * row b; skips the zero entries of row b (the matrices here are
// mostly sparse, and mpz_submul on a zero operand still costs a call)
void row_axpy(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const Int& src = m.at(b, j);
        if (src != 0) m.at(a, j) -= q * src;
    }
}

void col_axpy(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const Int& src = m.at(i, b);
        if (src != 0) m.at(i, a) -= q * src;
    }
}

void negate_row(IntMatrix& m, std::size_t a) {
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(a, j) = -m.at(a, j);
}

} // namespace

namespace {

// need_u / need_v skip maintenance of the untracked transform (returned as
// 0x0); the diagonal is identical either way.
SnfResult snf_core(const IntMatrix& m, bool need_u, bool need_v) {
    const std::size_t nr = m.rows(), nc = m.cols();
    SnfResult r{need_u ? IntMatrix::identity(nr) : IntMatrix(0, 0), m,
                need_v ? IntMatrix::identity(nc) : IntMatrix(0, 0)};
    IntMatrix& s = r.s;
    IntMatrix& u = r.u;
    IntMatrix& v = r.v;

    const std::size_t nmin = std::min(nr, nc);
    for (std::size_t k = 0; k < nmin; ++k) {
        std::size_t pi = k, pj = k;
        if (!find_pivot(s, k, pi, pj)) break;
        swap_rows(s, k, pi);
        swap_rows(u, k, pi);
        swap_cols(s, k, pj);
        swap_cols(v, k, pj);

        for (;;) {
            // Clear column k below the pivot, then row k right of it,
            // re-pivoting whenever a remainder becomes the new minimum.
            bool dirty = false;
            for (std::size_t i = k + 1; i < nr; ++i) {
                if (s.at(i, k) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), s.at(i, k).get_mpz_t(), s.at(k, k).get_mpz_t());
                row_axpy(s, i, k, q);
                row_axpy(u, i, k, q);
                if (s.at(i, k) != 0) {
                    swap_rows(s, k, i);
                    swap_rows(u, k, i);
                    dirty = true;
                }
            }
            if (dirty) continue;
            for (std::size_t j = k + 1; j < nc; ++j) {
                if (s.at(k, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), s.at(k, j).get_mpz_t(), s.at(k, k).get_mpz_t());
                col_axpy(s, j, k, q);
                col_axpy(v, j, k, q);
                if (s.at(k, j) != 0) {
                    swap_cols(s, k, j);
                    swap_cols(v, k, j);
                    dirty = true;
                }
            }
            if (!dirty) break;
        }

        if (s.at(k, k) < 0) {
            negate_row(s, k);
            negate_row(u, k);
        }
    }

    // Enforce the divisibility chain d_i | d_{i+1}.
    for (;;) {
        bool changed = false;
        for (std::size_t k = 0; k + 1 < nmin; ++k) {
            const Int& a = s.at(k, k);
            const Int& b = s.at(k + 1, k + 1);
            if (a == 0 && b != 0) {
                // Zero before nonzero: swap into divisibility position.
                swap_rows(s, k, k + 1);
                swap_rows(u, k, k + 1);
                swap_cols(s, k, k + 1);
                swap_cols(v, k, k + 1);
                changed = true;
                continue;
            }
            if (a == 0 || b % a == 0) continue;
            // Fold the 2x2 diagonal block diag(a, b) into diag(gcd, lcm):
            // add column k+1 to column k, then rediagonalize the block.
            col_axpy(s, k, k + 1, Int(-1));
            col_axpy(v, k, k + 1, Int(-1));
            // Block is now [[a,0],[b,b]]; clear with the usual gcd loop.
            while (s.at(k + 1, k) != 0) {
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), s.at(k, k).get_mpz_t(), s.at(k + 1, k).get_mpz_t());
                // work on rows k, k+1 within columns k, k+1
                row_axpy(s, k, k + 1, q);
                row_axpy(u, k, k + 1, q);
                swap_rows(s, k, k + 1);
                swap_rows(u, k, k + 1);
            }
            // kill the off-diagonal remainder in row k
            if (s.at(k, k + 1) != 0) {
                Int q = s.at(k, k + 1) / s.at(k, k);
                col_axpy(s, k + 1, k, q);
                col_axpy(v, k + 1, k, q);
            }
            if (s.at(k + 1, k + 1) != 0 && s.at(k, k + 1) != 0) {
                // should not happen; the gcd loop terminates clean
            }
            if (s.at(k, k) < 0) { negate_row(s, k); negate_row(u, k); }
            if (s.at(k + 1, k + 1) < 0) { negate_row(s, k + 1); negate_row(u, k + 1); }
            changed = true;
        }
        if (!changed) break;
    }

    return r;
}

} // namespace

SnfResult smith_normal_form(const IntMatrix& m) { return snf_core(m, true, true); }

std::vector<Int> SnfResult::diagonal() const {
    std::vector<Int> d;
    const std::size_t n = std::min(s.rows(), s.cols());
    for (std::size_t i = 0; i < n; ++i) d.push_back(s.at(i, i));
    return d;
}

std::size_t SnfResult::rank() const {
    std::size_t r = 0;
    for (const auto& d : diagonal())
        if (d != 0) ++r;
    return r;
}

Int det(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: not square");
    // Fraction-free Gaussian elimination (Bareiss).
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a.at(p, k) == 0) ++p;
            if (p == n) return 0;
            swap_rows(a, k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
            }
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

IntMatrix lattice_basis(const IntMatrix& gens) {
    SnfResult snf = snf_core(gens, false, true);
    IntMatrix mv = gens * snf.v;
    std::size_t r = snf.rank();
    return mv.submatrix(0, 0, gens.rows(), r);
}

IntMatrix kernel_basis(const IntMatrix& m) {
    SnfResult snf = snf_core(m, false, true);
    const std::size_t r = snf.rank();
    // Columns of v beyond the rank satisfy m * v_j = u^{-1} * s * e_j = 0.
    return snf.v.submatrix(0, r, m.cols(), m.cols() - r);
}

std::optional<Vec> lattice_solve(const IntMatrix& gens, const Vec& v) {
    if (v.size() != gens.rows()) throw std::invalid_argument("lattice_solve: dimension mismatch");
    SnfResult snf = smith_normal_form(gens);
    Vec uv = snf.u.apply(v);
    const std::size_t k = gens.cols();
    Vec t(k);
    const std::size_t nmin = std::min(gens.rows(), k);
    for (std::size_t i = 0; i < gens.rows(); ++i) {
        const Int& si = (i < nmin) ? snf.s.at(i, i) : Int(0);
        if (si == 0) {
            if (uv[i] != 0) return std::nullopt;
        } else {
            if (uv[i] % si != 0) return std::nullopt;
            t[i] = uv[i] / si;
        }
    }
    return snf.v.apply(t);
}

bool lattice_contains(const IntMatrix& gens, const Vec& v) {
    return lattice_solve(gens, v).has_value();
}

std::optional<IntMatrix> lattice_solve_all(const IntMatrix& gens, const IntMatrix& m) {
    if (m.rows() != gens.rows()) throw std::invalid_argument("lattice_solve_all: dimension mismatch");
    SnfResult snf = smith_normal_form(gens);
    const std::size_t k = gens.cols();
    const std::size_t nmin = std::min(gens.rows(), k);
    IntMatrix um = snf.u * m;
    IntMatrix t(k, m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        for (std::size_t i = 0; i < gens.rows(); ++i) {
            const Int& si = (i < nmin) ? snf.s.at(i, i) : Int(0);
            if (si == 0) {
                if (um.at(i, c) != 0) return std::nullopt;
            } else {
                if (um.at(i, c) % si != 0) return std::nullopt;
                t.at(i, c) = um.at(i, c) / si;
            }
        }
    }
    return snf.v * t;
}

IntMatrix lattice_intersect(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("lattice_intersect: dimension mismatch");
    // x in both lattices iff x = a y = b z; kernel of [a | -b] parametrizes (y, z).
    IntMatrix stacked = a.hstack(b.negated());
    IntMatrix ker = kernel_basis(stacked);
    IntMatrix ypart = ker.submatrix(0, 0, a.cols(), ker.cols());
    return lattice_basis(a * ypart);
}

} // namespace finsheaf
