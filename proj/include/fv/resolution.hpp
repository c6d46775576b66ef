#pragma once

// Truncated minimal free resolutions of k over k[t_1..t_s]/(t^p), chain maps
// between them, and cochain complexes computing Ext.
//
// An element of the free module A^n is a vector of length n·dim(A); the
// coordinate of generator g and monomial mu sits at g·dim(A) + mu.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fv/algebra.hpp"
#include "fv/exactla.hpp"
#include "fv/rep.hpp"

namespace fv {

/// mu · v for v in a free module.
std::vector<Residue> multiply_free(const ElemAbelianAlgebra& alg, std::size_t mu, std::span<const Residue> v);

/// The k-matrix of the A-linear map A^m -> A^n sending generator j to column j of `images`.
Matrix expand_free_map(const ElemAbelianAlgebra& alg, const Matrix& images);

struct TruncatedResolution {
    ElemAbelianAlgebra algebra{2, 1};
    std::size_t top = 0;                  // truncation degree N
    std::vector<std::size_t> ranks;       // ranks[n], 0 <= n <= N
    // For tensor resolutions: degree tuple of each generator, one entry per factor.
    std::vector<std::vector<std::vector<std::size_t>>> labels;
    std::vector<Matrix> images;           // images[n] (n >= 1): generator images of ∂_n in P_{n-1}
    std::vector<Matrix> boundaries;       // boundaries[n] (n >= 1): expanded ∂_n
    Matrix augmentation;                  // 1 x dim P_0

    Residue p() const { return algebra.p(); }
    std::size_t term_dim(std::size_t n) const { return ranks.at(n) * algebra.dim(); }
    const Matrix& boundary(std::size_t n) const { return boundaries.at(n); }
    /// Resolution truncated at a lower degree.
    TruncatedResolution truncated(std::size_t n) const;
};

TruncatedResolution cyclic_resolution(Residue p, std::size_t top);
TruncatedResolution tensor_resolution(const std::vector<TruncatedResolution>& factors);
/// Tensor product of s cyclic resolutions: the minimal resolution of k over a rank-s algebra.
TruncatedResolution koszul_resolution(Residue p, std::size_t s, std::size_t top);

/// C(n + s - 1, s - 1).
std::size_t composition_count(std::size_t n, std::size_t s);

struct ResolutionCheck {
    bool boundary_squares_zero = true;
    bool exact = true;
    bool minimal = true;
    bool ranks_match = true;
    std::string detail;

    bool ok() const { return boundary_squares_zero && exact && minimal && ranks_match; }
};

ResolutionCheck check_resolution(const TruncatedResolution& res);

/// Components theta_i : P_i -> P_{i+shift} for i = start, start+1, ...
/// stored as generator images.
struct ChainMap {
    int shift = 0;
    std::size_t start = 0;
    std::vector<Matrix> images;

    std::size_t end() const { return start + images.size(); }
    Matrix component(const TruncatedResolution& res, std::size_t source_degree) const;
};

/// Whether consecutive components commute with the boundaries.
bool commutes_with_boundaries(const TruncatedResolution& res, const ChainMap& c);

/// For a socle element u of P_n: the chain map of shift n+1 with ∂θ_0 = u·ε,
/// built as far as the truncation allows.
ChainMap lift_cocycle(const TruncatedResolution& res, std::span<const Residue> u, std::size_t n);

/// For a cocycle zeta in Hom(P_d, k) = k^{rank P_d}: maps P_{i+d} -> P_i with ε·ζ_0 = ζ,
/// for i = 0..depth.
ChainMap yoneda_lift(const TruncatedResolution& res, std::span<const Residue> zeta, std::size_t d,
                     std::size_t depth);

/// The cochain map C^n -> C^m of Hom_A(P_*, L) induced by an A-linear map P_m -> P_n
/// given by generator images. `monomials` holds the action of each monomial on L.
Matrix pullback_cochains(const ElemAbelianAlgebra& alg, const Matrix& images,
                         const std::vector<Matrix>& monomials);

/// Hom_kG(P_*(k), L) for L = Hom_k(M, N), whose cohomology is Ext(M, N).
struct CochainComplex {
    TruncatedResolution res;
    FDModule coefficients;
    std::vector<Matrix> monomial_actions;
    std::vector<Matrix> differentials;  // differentials[n] : C^n -> C^{n+1}

    std::size_t cochain_dim(std::size_t n) const { return res.ranks.at(n) * coefficients.dim(); }
    Matrix cocycles(std::size_t n) const;
    Matrix coboundaries(std::size_t n) const;
    std::size_t cohomology_dim(std::size_t n) const;
    std::size_t max_degree() const { return differentials.size() - 1; }
};

CochainComplex ext_complex(const FDModule& m, const FDModule& n, std::size_t max_degree);
std::vector<std::size_t> ext_dims(const FDModule& m, const FDModule& n, std::size_t max_degree);

/// Rank of the map H^a -> H^b induced by a cochain map phi : C^a -> C^b.
std::size_t induced_rank(const CochainComplex& c, std::size_t a, std::size_t b, const Matrix& phi);

}  // namespace fv
