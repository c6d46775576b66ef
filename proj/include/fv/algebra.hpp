#pragma once

// The group algebra kG = k[X_1..X_r]/(X_i^p) of an elementary abelian
// p-group of rank r, flat maps into it, and projective points.

#include <cstddef>
#include <string>
#include <vector>

#include "fv/exactla.hpp"

namespace fv {

/// Truncated polynomial algebra k[X_1..X_r]/(X_1^p..X_r^p).
/// Monomial X^e is indexed by sum_i e_i p^(i-1) (X_1 least significant).
class ElemAbelianAlgebra {
public:
    ElemAbelianAlgebra(Residue p, std::size_t r);

    Residue p() const { return p_; }
    std::size_t rank() const { return r_; }
    std::size_t dim() const { return dim_; }

    std::vector<std::size_t> exponents(std::size_t monomial) const;
    std::size_t monomial(const std::vector<std::size_t>& exponents) const;
    /// Index of X^a X^b, or npos if some exponent reaches p.
    std::size_t multiply_monomials(std::size_t a, std::size_t b) const;
    /// Index of the top monomial (X_1..X_r)^(p-1), spanning the socle.
    std::size_t top_monomial() const { return dim_ - 1; }
    /// Index of the complementary monomial X^((p-1)-e).
    std::size_t dual_monomial(std::size_t m) const { return dim_ - 1 - m; }
    std::size_t degree(std::size_t monomial) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    bool operator==(const ElemAbelianAlgebra&) const = default;

private:
    Residue p_;
    std::size_t r_;
    std::size_t dim_;
};

class AlgebraElement {
public:
    explicit AlgebraElement(const ElemAbelianAlgebra& alg);
    static AlgebraElement one(const ElemAbelianAlgebra& alg);
    static AlgebraElement generator(const ElemAbelianAlgebra& alg, std::size_t i);
    /// sum_i coeffs[i] X_i
    static AlgebraElement linear(const ElemAbelianAlgebra& alg, std::span<const Residue> coeffs);

    const ElemAbelianAlgebra& algebra() const { return alg_; }
    Residue coefficient(std::size_t monomial) const { return coeffs_[monomial]; }
    void set_coefficient(std::size_t monomial, std::int64_t c);
    const std::vector<Residue>& coefficients() const { return coeffs_; }
    bool is_zero() const;

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement pow(std::size_t e) const;
    bool operator==(const AlgebraElement& o) const;

    /// Matrix of left multiplication on the monomial basis.
    Matrix multiplication_matrix() const;
    std::string to_string() const;

private:
    ElemAbelianAlgebra alg_;
    std::vector<Residue> coeffs_;
};

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);

/// A flat map k[t_1..t_s]/(t^p) -> kG given by its linear part:
/// row j is the coefficient vector of t_j ↦ sum_i a_ji X_i.
class FlatMap {
public:
    FlatMap() : FlatMap(2, 0, Matrix(2, 0, 0)) {}
    FlatMap(Residue p, std::size_t r, Matrix linear);
    /// Parses "X1+X2, X3" or "2X1-X3" style generator lists.
    static FlatMap parse(Residue p, std::size_t r, const std::string& text);
    static FlatMap coordinate(Residue p, std::size_t r, const std::vector<std::size_t>& indices);

    Residue p() const { return p_; }
    std::size_t ambient_rank() const { return r_; }
    std::size_t source_rank() const { return linear_.rows(); }
    const Matrix& linear() const { return linear_; }
    std::vector<Residue> row(std::size_t j) const;
    AlgebraElement image(std::size_t j) const;
    std::string to_string() const;

private:
    Residue p_;
    std::size_t r_;
    Matrix linear_;
};

bool is_flat(const FlatMap& f);

/// Flat map g with source rank r - s such that stacking f over g is invertible.
/// Uses coordinate generators at the non-pivot columns of f.
FlatMap complement_flat(const FlatMap& f);

/// Stacks the rows of f over those of g.
FlatMap stack(const FlatMap& f, const FlatMap& g);

/// Point of P^(r-1)(F_p), first nonzero coordinate normalized to 1.
class ProjPoint {
public:
    ProjPoint(Residue p, std::vector<Residue> coords);
    static ProjPoint parse(Residue p, const std::string& text);
    /// All (p^r - 1)/(p - 1) points, in lexicographic order of normalized coordinates.
    static std::vector<ProjPoint> all(Residue p, std::size_t r);

    Residue p() const { return p_; }
    std::size_t dimension() const { return coords_.size(); }
    const std::vector<Residue>& coords() const { return coords_; }
    std::string to_string() const;

    auto operator<=>(const ProjPoint&) const = default;

private:
    Residue p_;
    std::vector<Residue> coords_;
};

/// Whether the point lies in the projectivized row space of f.
bool lies_in(const ProjPoint& v, const FlatMap& f);

/// The π-point direction along v and a complementary maximal flat subalgebra.
struct Frame {
    FlatMap z;  // rank 1, row = coordinates of v
    FlatMap h;  // rank r - 1
    /// r x r matrix expressing (Z, Y_1..Y_{r-1}) in terms of X_1..X_r.
    Matrix stacked() const;
};

Frame frame_from_point(const ProjPoint& v);

/// Matrix T with X_i = sum_j T(i,j) W_j where W = (rows of `change`) · X.
/// Requires `change` invertible.
Matrix inverse_change_of_variables(const Matrix& change);

}  // namespace fv
