#pragma once

// Stable Hom spaces, the graded endomorphism ring window of a truncated F_V,
// its maximal ideal, and the structural verifiers built on them.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fv/idempotent.hpp"
#include "fv/rep.hpp"
#include "fv/resolution.hpp"

namespace fv {

// ---------------------------------------------------------------- stable Hom

/// Maps M -> N are vectorized row-major: entry (n, m) sits at n·dim(M) + m.
Matrix vec_to_map(std::span<const Residue> v, std::size_t rows, std::size_t cols, Residue p);
std::vector<Residue> map_to_vec(const Matrix& f);

struct StableHomSpace {
    FDModule source;
    FDModule target;
    Matrix hom;       // columns span Hom_kG(M, N)
    Matrix phom;      // columns span the maps factoring through a projective
    Matrix quotient;  // representatives of Hom / PHom

    std::size_t dim() const { return quotient.cols(); }
};

/// Hom_kG(M, N) as the common kernel of X·f - f·X.
Matrix hom_space(const FDModule& m, const FDModule& n);
/// Image of the trace map Hom_k(M, N) -> Hom_kG(M, N), which is PHom for kG.
Matrix projective_homs(const FDModule& m, const FDModule& n);
StableHomSpace stable_hom(const FDModule& m, const FDModule& n);

// ---------------------------------------------------------------- lifts

struct LiftError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Extends k -> T, 1 ↦ u, over the slots ≤ source_slot of `source` to a kG-map into T.
/// With `constraint`, the image is forced into the column span of that matrix.
/// Returns the dim(T) x prefix_dim(source_slot) matrix.
struct LiftRequest {
    const TruncatedFV* source = nullptr;
    const FDModule* target = nullptr;
    std::vector<Residue> u;
    int source_slot = 0;
    const Matrix* constraint = nullptr;
    std::mt19937_64* rng = nullptr;  // random null-space component when set
    // With rng: keep the image of slot j inside graded_target's slots ≤ j + degree + 1.
    const TruncatedFV* graded_target = nullptr;
    int degree = 0;
};

Matrix lift_to_source(const LiftRequest& req);
bool lift_commutes(const TruncatedFV& source, const FDModule& target, const Matrix& lift);

// ---------------------------------------------------------------- End ring window

struct WindowClass {
    std::vector<Residue> vector;  // theta(1) in F
    int slot = -1;                // filtration slot; -1 is the unit
};

class EndRingWindow {
public:
    EndRingWindow(const TruncatedFV& f, std::size_t window, std::uint64_t seed = 1);

    const TruncatedFV& fv() const { return *f_; }
    std::size_t window() const { return w_; }
    std::size_t size() const { return classes_.size(); }
    const std::vector<WindowClass>& classes() const { return classes_; }
    /// Class basis as columns of a dim(F) x size() matrix.
    Matrix class_matrix() const;

    /// Number of classes with the given slot (-1 for the unit).
    std::size_t graded_dim(int slot) const;

    /// Coordinates of a socle vector in the class basis (modulo N_G·F).
    std::vector<Residue> coordinates(std::span<const Residue> v) const;

    /// Pinned least-pivot lift of class k over the slots it can act on.
    const Matrix& lift(std::size_t k) const;
    int lift_source_slot(std::size_t k) const;
    bool product_defined(std::size_t k, std::size_t l) const;
    /// Coordinates of c_k ∘ c_l over every socle class; nullopt outside the window.
    std::optional<std::vector<Residue>> product(std::size_t k, std::size_t l) const;
    /// Product of two coordinate vectors; terms beyond the window are dropped.
    std::vector<Residue> multiply(std::span<const Residue> a, std::span<const Residue> b) const;

    /// Re-lifts every class with random null-space components and compares the table.
    bool products_lift_independent(std::string* witness = nullptr) const;
    bool associative(std::string* witness = nullptr) const;
    bool unital(std::string* witness = nullptr) const;
    bool lifts_commute(std::string* witness = nullptr) const;
    /// No product reaches past slot d_k + d_l + 1.
    bool products_respect_filtration(std::string* witness = nullptr) const;

private:
    const TruncatedFV* f_;
    std::size_t w_;
    std::uint64_t seed_;
    std::vector<WindowClass> all_;      // every socle class, up to slot N
    std::vector<std::size_t> lead_;
    std::vector<WindowClass> classes_;  // the window prefix of all_
    Matrix phom_;
    std::optional<LinearSolver> coord_solver_;
    std::vector<Matrix> lifts_;
    std::vector<std::vector<std::optional<std::vector<Residue>>>> table_;

    std::vector<Residue> full_coordinates(std::span<const Residue> v) const;
    std::vector<std::vector<std::optional<std::vector<Residue>>>> product_table(const std::vector<Matrix>& lifts) const;
};

/// Compares two windows of truncations of the same F_V (say N and N+2) on their
/// common window: graded dims, class vectors and the product table.
/// Returns the lowest slot where they differ.
std::optional<int> first_window_disagreement(const EndRingWindow& a, const EndRingWindow& b);

// ---------------------------------------------------------------- the ideal I

/// Subspace of the class coordinate space, columns = basis vectors.
struct IdealWindow {
    Matrix basis;
    std::string criterion;
};

/// A pi-point X outside V, off every line through two points of V, and on a
/// rank-2 flat subalgebra avoiding V.
std::optional<ProjPoint> choose_x_point(const PointVariety& v);

IdealWindow ideal_x_power(const EndRingWindow& e, const ProjPoint& x);
IdealWindow ideal_restriction_kernel(const EndRingWindow& e, const FlatMap& sub);

/// Proper flat subalgebra whose variety misses V, drawn with the given generator.
FlatMap random_avoiding_subalgebra(const PointVariety& v, std::mt19937_64& rng);

bool same_subspace(const Matrix& a, const Matrix& b);

struct IdealReport {
    bool graded = false;
    bool excludes_unit = false;
    bool codim_one_every_window = false;
    bool closed_under_products = false;
    bool squares_to_zero = false;
    bool non_ideal_invertible = false;
    std::size_t dim = 0;
    std::string witness;
};

IdealReport analyze_ideal(const EndRingWindow& e, const IdealWindow& ideal, std::uint64_t seed = 1);

struct DeepRadicalReport {
    bool all_lifts_in_x_power = false;   // every I class lifts into X^{p-1}F
    bool x_power_squared_zero = false;   // X^{2(p-1)} = 0 as a matrix on F
    bool constrained_products_zero = false;
    std::string witness;
};

DeepRadicalReport verify_deep_radical(const EndRingWindow& e, const IdealWindow& ideal, const ProjPoint& x);

// ---------------------------------------------------------------- extension

struct ExtensionReport {
    bool hypotheses_hold = false;
    bool solvable = false;
    bool commutes = false;
    bool image_in_x_power = false;
    std::size_t source_slot = 0;
    std::string witness;
};

/// phi(1) = phi_vector in F_2 (must lie in X^{p-1}F_2); extend over F_1's slots ≤ source_slot.
ExtensionReport verify_extension(const TruncatedFV& f1, const TruncatedFV& f2, const ProjPoint& x,
                                 const FlatMap& beta, std::span<const Residue> phi_vector, int source_slot,
                                 bool constrain = true);

// ---------------------------------------------------------------- negative Tate

struct NegativeTateReport {
    std::size_t rank = 0;
    std::vector<std::size_t> subalgebra_coordinates;
    std::vector<std::size_t> degrees;           // m for degree -m
    std::vector<std::size_t> group_dims;        // dim Hom_kG(k, P_{m-1})
    std::vector<std::size_t> restriction_ranks; // rank of the restriction in degree -m
    bool control_nonzero = false;               // identity restricts to a nonzero stable class
    bool chain_map_ok = false;
    bool all_zero() const;
};

/// Restriction Ĥ^{-m}(G,k) -> Ĥ^{-m}(H,k) for m = 1..max_m, H a coordinate subalgebra,
/// using Ĥ^{-m} ≅ Hom(k, P_{m-1}).
NegativeTateReport negative_tate_restriction(Residue p, std::size_t r, const std::vector<std::size_t>& coords,
                                             std::size_t max_m);

// ---------------------------------------------------------------- zeta localization

struct ZetaReport {
    std::size_t degree = 0;               // d
    std::vector<std::size_t> dims;        // dim Ext^{nd}, n = 0..n_max
    std::vector<std::size_t> ranks;       // rank of Ext^{nd} -> Ext^{(n+1)d}
    std::vector<std::size_t> square_ranks;  // rank of the two-step composite
    std::vector<std::size_t> all_dims;    // dim Ext^j for j = 0..n_max·d
    bool all_injective() const;
    bool eventually_zero() const;
};

/// zeta in Hom(P_d, k) = k^{rank P_d}.
ZetaReport zeta_localized_ext(const FDModule& m, const FDModule& n, std::span<const Residue> zeta, std::size_t d,
                              std::size_t n_max);

/// The dual of generator `which` of P_d in the minimal resolution over a rank-r algebra.
std::vector<Residue> ext_generator_cocycle(Residue p, std::size_t r, std::size_t d, std::size_t which);

// ---------------------------------------------------------------- non-finite generation

struct GrowthPoint {
    std::size_t top = 0;
    std::size_t window = 0;
    std::size_t window_dim = 0;
};

struct GrowthReport {
    std::vector<GrowthPoint> points;
    std::size_t action_image_dim = 0;  // rank of End(k)-window -> End(window)
    bool ideal_acts_as_zero = false;
    bool strictly_increasing() const;
};

/// Window dims of Hom̲(M, F⊗M) with M = induce(k over sub), and the action of the End(k) window.
GrowthReport nonfg_growth(const PointVariety& v, const FlatMap& sub, const std::vector<std::size_t>& tops,
                          const FDModule* module_override = nullptr);

/// dim of Hom(M, F_{≤w}⊗M) modulo PHom(M, F_{≤N}⊗M).
std::size_t tensor_window_dim(const TruncatedFV& f, const FDModule& m, std::size_t w);

}  // namespace fv
