#pragma once

// Finite-dimensional kG-modules as tuples of commuting nilpotent matrices.

#include <cstddef>
#include <string>
#include <vector>

#include "fv/algebra.hpp"
#include "fv/exactla.hpp"

namespace fv {

class FDModule {
public:
    FDModule() = default;
    /// Checks shapes only; call verify() for the commuting/nilpotent invariants.
    FDModule(Residue p, std::size_t r, std::size_t dim, std::vector<Matrix> actions);

    static FDModule trivial(Residue p, std::size_t r);
    static FDModule regular(Residue p, std::size_t r);
    static FDModule free(Residue p, std::size_t r, std::size_t rank);
    static FDModule zero(Residue p, std::size_t r);

    Residue p() const { return p_; }
    std::size_t rank() const { return r_; }
    std::size_t dim() const { return dim_; }
    ElemAbelianAlgebra algebra() const { return {p_, r_}; }
    const Matrix& action(std::size_t i) const { return actions_.at(i); }
    const std::vector<Matrix>& actions() const { return actions_; }

    /// Matrix by which an algebra element acts.
    Matrix act(const AlgebraElement& a) const;
    /// Action of the monomial with the given index.
    Matrix monomial_action(std::size_t monomial) const;
    /// Action of the top monomial; its image is N_G·M.
    Matrix norm() const;
    /// Intersection of the kernels of all actions.
    Matrix socle() const;
    /// Sum of the images of all actions.
    Matrix radical() const;

    /// Empty string when all invariants hold, otherwise a description.
    std::string invariant_violation() const;
    void verify() const;

    bool operator==(const FDModule&) const = default;

private:
    Residue p_ = 2;
    std::size_t r_ = 0;
    std::size_t dim_ = 0;
    std::vector<Matrix> actions_;
};

struct ModuleHom {
    FDModule source;
    FDModule target;
    Matrix matrix;

    bool is_homomorphism() const;
};

FDModule direct_sum(const FDModule& m, const FDModule& n);
FDModule tensor(const FDModule& m, const FDModule& n);
/// Hom_k(M, N) with g acting by conjugation, g = 1 + X_i. Basis index n*dim(M) + m.
FDModule hom_module(const FDModule& m, const FDModule& n);
FDModule restrict(const FDModule& m, const FlatMap& f);
/// Submodule spanned by the kG-closure of the columns of `generators`.
FDModule submodule(const FDModule& m, const Matrix& generators, Matrix* inclusion = nullptr);
/// Quotient by the kG-closure of the columns of `relations`.
FDModule quotient(const FDModule& m, const Matrix& relations);

/// All Jordan blocks of the single action have size p.
bool is_free_cyclic(const FDModule& m);
bool is_free(const FDModule& m);

/// F_p-rational points of P^(r-1) along which M is not free.
std::vector<ProjPoint> rank_variety(const FDModule& m);

/// Kernel of a minimal projective cover kG^g -> M.
FDModule syzygy(const FDModule& m);
/// kG ⊗_{kF} M for M over the image of the flat map f.
FDModule induce(const FDModule& m, const FlatMap& f);

std::string to_json(const FDModule& m);
FDModule module_from_json(const std::string& text);

}  // namespace fv
