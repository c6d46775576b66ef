#pragma once

// Degree-≤N truncations of the idempotent module F_V for a finite set V of
// F_p-rational points.
//
// Each point contributes a piece k ⊕ P_0^{p-1} ⊕ P_1 ⊕ P_2^{p-1} ⊕ ... built from a
// resolution of k over a complementary rank r-1 subalgebra; pieces share the k.
// The basis is slot-major (all pieces' slot 0, then slot 1, ...), so every
// prefix F_{≤j} is a submodule.

#include <cstddef>
#include <string>
#include <vector>

#include "fv/algebra.hpp"
#include "fv/rep.hpp"
#include "fv/resolution.hpp"

namespace fv {

struct PointVariety {
    Residue p = 2;
    std::size_t r = 0;
    std::vector<ProjPoint> points;  // sorted, distinct

    PointVariety() = default;
    PointVariety(Residue p, std::size_t r, std::vector<ProjPoint> pts);
    static PointVariety parse(Residue p, std::size_t r, const std::vector<std::string>& pts);

    bool contains(const ProjPoint& v) const;
    std::string to_string() const;
};

/// Slot multiplicity: p-1 copies of P_j for even j, one for odd j.
std::size_t slot_multiplicity(Residue p, std::size_t j);

/// A kH-generator of one piece: copy `position` (1-based) of generator `generator` of P_slot.
struct FVGenerator {
    std::size_t piece = 0;
    std::size_t slot = 0;
    std::size_t position = 1;
    std::size_t generator = 0;
    std::size_t index = 0;  // basis index of the generator; index + mu is mu·generator
};

struct FVPiece {
    ProjPoint point{2, {1}};
    Frame frame;
    TruncatedResolution resolution;     // over the rank r-1 algebra of frame.h
    std::vector<FVGenerator> generators;  // in lifting order
    std::vector<std::size_t> local_to_global;
    Matrix z;                  // action of the frame's Z on all of F
    std::vector<Matrix> y;     // actions of the frame's Y_1..Y_{r-1} on all of F
};

struct FVOptions {
    // Test fixture: zeroes one boundary entry before assembling (breaks the model).
    bool corrupt_boundary = false;
};

struct TruncatedFV {
    Residue p = 2;
    std::size_t r = 0;
    std::size_t top = 0;  // N
    PointVariety variety;
    std::vector<FVPiece> pieces;
    FDModule module;
    std::vector<int> slot_of;      // -1 for the shared k
    std::vector<std::size_t> piece_of;

    std::size_t dim() const { return module.dim(); }
    /// Dimension of F_{≤slot}; slot -1 is the k summand alone.
    std::size_t prefix_dim(int slot) const;
    /// tau(1), the basis vector of the shared k.
    std::vector<Residue> tau() const;
    /// The submodule F_{≤slot} as a module.
    FDModule slice(int slot) const;
};

std::size_t expected_fv_dim(Residue p, std::size_t r, std::size_t points, std::size_t top);

TruncatedFV build_fv_point(const ProjPoint& v, std::size_t top, const FVOptions& opts = {});
TruncatedFV build_fv_multi(const PointVariety& v, std::size_t top, const FVOptions& opts = {});

/// Embedding of piece i, built on its own, into the pushout.
Matrix piece_embedding(const TruncatedFV& f, std::size_t piece);

struct RestrictionReport {
    std::size_t dim = 0;
    std::size_t subalgebra_rank = 0;
    std::size_t free_rank = 0;    // number of free summands
    std::size_t nonfree_dim = 0;  // dim minus the free part
    bool meets_variety = false;   // some point of V lies in the image of the subalgebra's variety
    bool trivial_plus_free() const { return nonfree_dim == 1; }
};

RestrictionReport restrict_fv(const TruncatedFV& f, const FlatMap& sub);

/// Structural invariants of a built truncation. Empty string when all hold.
std::string fv_invariant_violation(const TruncatedFV& f);

}  // namespace fv
