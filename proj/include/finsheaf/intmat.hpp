#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace finsheaf {

using Int = mpz_class;
using Vec = std::vector<Int>;

// Dense integer matrix with arbitrary-precision entries, row-major.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries);

    static IntMatrix identity(std::size_t n);
    static IntMatrix zero(std::size_t rows, std::size_t cols) { return IntMatrix(rows, cols); }
    static IntMatrix from_rows(const std::vector<Vec>& rows, std::size_t cols);
    static IntMatrix from_cols(const std::vector<Vec>& cols, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    bool operator==(const IntMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }
    bool is_zero() const;

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntMatrix transpose() const;
    IntMatrix negated() const;

    Vec apply(const Vec& v) const; // matrix * column vector
    Vec col(std::size_t j) const;
    Vec row(std::size_t i) const;

    // [this | o] side by side (same row count).
    IntMatrix hstack(const IntMatrix& o) const;
    // this on top of o (same column count).
    IntMatrix vstack(const IntMatrix& o) const;
    IntMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

    std::string to_string() const;

private:
    std::size_t rows_, cols_;
    std::vector<Int> e_;
};

// Smith normal form: u * m * v = s with u, v unimodular and s diagonal,
// nonnegative, s_1 | s_2 | ... . Deterministic: pivot is the minimal
// absolute value, ties broken by lowest (row, col).
struct SnfResult {
    IntMatrix u, s, v;
    std::vector<Int> diagonal() const;
    std::size_t rank() const; // number of nonzero diagonal entries
};
SnfResult smith_normal_form(const IntMatrix& m);

Int det(const IntMatrix& m); // for unimodularity checks in tests

// -- Integer lattices (subgroups of Z^n given by generator columns) --------

// Canonical basis of the column lattice: nonzero columns of m * v from the SNF.
IntMatrix lattice_basis(const IntMatrix& gens);

// Columns spanning { x : m x = 0 } over the integers.
IntMatrix kernel_basis(const IntMatrix& m);

// Solve gens * y = v over Z. Empty optional if v is not in the lattice.
std::optional<Vec> lattice_solve(const IntMatrix& gens, const Vec& v);
bool lattice_contains(const IntMatrix& gens, const Vec& v);
// Solve gens * Y = m columnwise; empty optional if any column fails.
std::optional<IntMatrix> lattice_solve_all(const IntMatrix& gens, const IntMatrix& m);

// Lattice of the intersection of the two column lattices (both in Z^n).
IntMatrix lattice_intersect(const IntMatrix& a, const IntMatrix& b);

} // namespace finsheaf
