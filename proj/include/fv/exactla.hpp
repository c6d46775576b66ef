#pragma once

// Dense exact linear algebra over prime fields F_p.
//
// Entries are stored as residues in [0, p). Elimination always picks the
// first nonzero entry as pivot, so every basis and solution produced here is
// a deterministic function of the input.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace fv {

using Residue = std::uint32_t;

bool is_prime(std::uint64_t n);

/// Arithmetic in Z/pZ for a prime p.
class PrimeField {
public:
    explicit PrimeField(Residue p);

    Residue modulus() const { return p_; }
    Residue reduce(std::int64_t x) const;
    Residue add(Residue a, Residue b) const { Residue s = a + b; return s >= p_ ? s - p_ : s; }
    Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + p_ - b; }
    Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
    Residue mul(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t{a} * b) % p_); }
    Residue inv(Residue a) const;
    Residue pow(Residue a, std::uint64_t e) const;

private:
    Residue p_;
    std::vector<Residue> inverses_;
};

/// A single field element carrying its modulus.
struct Scalar {
    Residue value = 0;
    Residue modulus = 2;

    Scalar() = default;
    Scalar(std::int64_t v, Residue p);

    Scalar operator+(Scalar o) const;
    Scalar operator-(Scalar o) const;
    Scalar operator*(Scalar o) const;
    Scalar operator-() const;
    Scalar inverse() const;
    bool operator==(const Scalar&) const = default;
};

class Matrix {
public:
    Matrix() = default;
    Matrix(Residue p, std::size_t rows, std::size_t cols);

    static Matrix identity(Residue p, std::size_t n);
    /// Builds from row-major integer entries (reduced mod p).
    static Matrix from_rows(Residue p, const std::vector<std::vector<std::int64_t>>& rows);
    static Matrix column_vector(Residue p, std::span<const Residue> entries);

    Residue modulus() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Residue operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Residue& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, std::int64_t v);

    std::span<const Residue> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<Residue> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::vector<Residue> column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const Residue> v);

    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(Residue c) const;
    std::vector<Residue> apply(std::span<const Residue> v) const;
    Matrix transpose() const;
    Matrix power(std::size_t e) const;

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    Matrix columns(std::span<const std::size_t> idx) const;
    Matrix leading_columns(std::size_t n) const;
    static Matrix hstack(const Matrix& a, const Matrix& b);
    static Matrix vstack(const Matrix& a, const Matrix& b);
    static Matrix kron(const Matrix& a, const Matrix& b);

    bool is_zero() const;
    std::size_t nonzeros() const;
    bool operator==(const Matrix& o) const = default;

    std::string to_string() const;

private:
    Residue p_ = 2;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Residue> data_;

    void require_same_shape(const Matrix& o) const;
};

/// Reduced row echelon form with pivot columns, computed in place.
struct RowEchelon {
    Matrix reduced;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

RowEchelon row_reduce(Matrix m);

std::size_t rank(const Matrix& m);

/// Some x with A x = b, or nullopt when the system is inconsistent.
/// Free variables are set to zero.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

/// Columns span the null space of A; column count = cols - rank.
/// The basis vector for free column f is supported on columns <= f.
Matrix kernel_basis(const Matrix& a);

/// Basis (as columns) of the column span of A.
Matrix column_space_basis(const Matrix& a);

/// Columns of `space` completing span(subspace) to span(space).
/// Throws std::invalid_argument if subspace is not contained in span(space).
Matrix quotient_basis(const Matrix& space, const Matrix& subspace);

/// Incrementally maintained echelon basis of a subspace of F_p^n.
class EchelonBasis {
public:
    EchelonBasis(Residue p, std::size_t ambient_dim);

    std::size_t dim() const { return rows_.size(); }
    std::size_t ambient_dim() const { return n_; }

    /// Reduces v against the basis; zero iff v lies in the span.
    std::vector<Residue> residue(std::span<const Residue> v) const;
    bool contains(std::span<const Residue> v) const;
    /// Inserts v; returns false (and leaves the basis unchanged) if v was dependent.
    bool insert(std::span<const Residue> v);
    void insert_columns(const Matrix& m);

private:
    PrimeField field_;
    std::size_t n_;
    std::vector<std::vector<Residue>> rows_;  // each row normalized with leading 1
    std::vector<std::size_t> pivots_;
};

/// Repeated solves A x = b against one fixed matrix.
class LinearSolver {
public:
    explicit LinearSolver(const Matrix& a);

    std::size_t rank() const { return pivots_.size(); }
    std::size_t unknowns() const { return cols_; }
    /// Least-pivot solution (free variables zero).
    std::optional<std::vector<Residue>> solve(std::span<const Residue> b) const;
    /// Least-pivot solution plus a uniformly random null-space component.
    /// Adds random multiples of the kernel basis vectors supported below `support_bound`.
    std::optional<std::vector<Residue>> solve_random(std::span<const Residue> b, std::mt19937_64& rng,
                                                     std::size_t support_bound = static_cast<std::size_t>(-1)) const;
    const Matrix& kernel() const { return kernel_; }

private:
    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    Matrix transform_;  // transform_ * A = reduced
    Matrix reduced_;
    std::vector<std::size_t> pivots_;
    Matrix kernel_;
};

/// Basis of span(A) ∩ span(B), as columns.
Matrix intersect_spans(const Matrix& a, const Matrix& b);

Matrix random_matrix(Residue p, std::size_t rows, std::size_t cols, std::mt19937_64& rng);

}  // namespace fv
