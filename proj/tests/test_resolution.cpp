#include <gtest/gtest.h>

#include <random>

#include "fv/resolution.hpp"

using namespace fv;

TEST(CyclicResolution, AlternatingBoundaries)
{
    auto r2 = cyclic_resolution(2, 5);
    for (std::size_t n = 1; n <= 5; ++n)
        EXPECT_EQ(r2.images[n].column(0), (std::vector<Residue>{0, 1}));
    auto r3 = cyclic_resolution(3, 4);
    EXPECT_EQ(r3.images[1].column(0), (std::vector<Residue>{0, 1, 0}));
    EXPECT_EQ(r3.images[2].column(0), (std::vector<Residue>{0, 0, 1}));
    EXPECT_EQ(r3.images[3].column(0), (std::vector<Residue>{0, 1, 0}));
    for (Residue p : {2u, 3u, 5u})
        EXPECT_TRUE(check_resolution(cyclic_resolution(p, 6)).ok());
}

TEST(TensorResolution, RanksAndInvariants)
{
    auto res = koszul_resolution(2, 2, 3);
    EXPECT_EQ(res.ranks, (std::vector<std::size_t>{1, 2, 3, 4}));
    EXPECT_TRUE((res.boundary(1) * res.boundary(2)).is_zero());
    EXPECT_TRUE((res.boundary(2) * res.boundary(3)).is_zero());

    for (Residue p : {2u, 3u})
        for (std::size_t s : {1u, 2u, 3u}) {
            auto r = koszul_resolution(p, s, s == 3 ? 4 : 6);
            auto chk = check_resolution(r);
            EXPECT_TRUE(chk.ok()) << "p=" << p << " s=" << s << ": " << chk.detail;
        }
    // s = 1 is the cyclic resolution itself.
    auto one = koszul_resolution(3, 1, 5);
    auto cyc = cyclic_resolution(3, 5);
    for (std::size_t n = 1; n <= 5; ++n)
        EXPECT_EQ(one.images[n], cyc.images[n]);
}

TEST(TensorResolution, MixedFactors)
{
    auto a = koszul_resolution(3, 2, 4);
    auto b = cyclic_resolution(3, 4);
    auto t = tensor_resolution({a, b});
    auto chk = check_resolution(t);
    EXPECT_TRUE(chk.ok()) << chk.detail;
    EXPECT_EQ(t.ranks, koszul_resolution(3, 3, 4).ranks);
}

TEST(CheckResolution, DetectsCorruption)
{
    auto r = koszul_resolution(2, 2, 4);
    r.boundaries[3](0, 0) ^= 1;
    EXPECT_FALSE(check_resolution(r).ok());
}

TEST(LiftCocycle, ChainMapProperty)
{
    auto res = koszul_resolution(2, 2, 6);
    // Socle generator of the first summand of P_1: top monomial on generator 0.
    std::vector<Residue> u(res.term_dim(1), 0);
    u[res.algebra.top_monomial()] = 1;
    ChainMap c = lift_cocycle(res, u, 1);
    EXPECT_EQ(c.shift, 2);
    EXPECT_FALSE(c.images.empty());
    EXPECT_EQ(res.boundary(2) * c.images[0], Matrix::column_vector(2, u));
    EXPECT_TRUE(commutes_with_boundaries(res, c));

    std::vector<Residue> zero(res.term_dim(1), 0);
    for (auto& img : lift_cocycle(res, zero, 1).images)
        EXPECT_TRUE(img.is_zero());

    std::vector<Residue> not_socle(res.term_dim(1), 0);
    not_socle[0] = 1;
    EXPECT_THROW(lift_cocycle(res, not_socle, 1), std::invalid_argument);
}

TEST(LiftCocycle, OddPrime)
{
    auto res = koszul_resolution(3, 2, 5);
    std::mt19937_64 rng(1);
    for (std::size_t n = 0; n <= 2; ++n) {
        std::vector<Residue> u(res.term_dim(n), 0);
        for (std::size_t g = 0; g < res.ranks[n]; ++g)
            u[g * res.algebra.dim() + res.algebra.top_monomial()] = rng() % 3;
        ChainMap c = lift_cocycle(res, u, n);
        EXPECT_TRUE(commutes_with_boundaries(res, c));
    }
}

TEST(YonedaLift, CommutesAndAugments)
{
    auto res = koszul_resolution(3, 2, 8);
    std::vector<Residue> zeta(res.ranks[2], 0);
    zeta[0] = 1;
    ChainMap z = yoneda_lift(res, zeta, 2, 5);
    EXPECT_TRUE(commutes_with_boundaries(res, z));
    // ε ∘ ζ_0 = ζ
    Matrix ez = res.augmentation * z.component(res, 2);
    for (std::size_t j = 0; j < res.ranks[2]; ++j)
        EXPECT_EQ(ez(0, j * res.algebra.dim()), zeta[j]);
}

TEST(Ext, TrivialModuleDims)
{
    FDModule k = FDModule::trivial(2, 2);
    auto dims = ext_dims(k, k, 6);
    for (std::size_t n = 0; n <= 6; ++n)
        EXPECT_EQ(dims[n], n + 1);
    EXPECT_EQ(ext_dims(FDModule::trivial(3, 1), FDModule::trivial(3, 1), 4),
              (std::vector<std::size_t>{1, 1, 1, 1, 1}));
}

TEST(Ext, ProjectiveVanishes)
{
    FDModule kg = FDModule::regular(2, 2);
    FDModule k = FDModule::trivial(2, 2);
    auto dims = ext_dims(kg, k, 4);
    EXPECT_EQ(dims[0], 1u);
    for (std::size_t n = 1; n <= 4; ++n)
        EXPECT_EQ(dims[n], 0u);
    auto dims2 = ext_dims(k, kg, 3);
    for (std::size_t n = 1; n <= 3; ++n)
        EXPECT_EQ(dims2[n], 0u);
}

TEST(Ext, DimensionShiftBySyzygy)
{
    // Ext^{n+1}(k, N) = Ext^n(Ω k, N) for n >= 1.
    FDModule k = FDModule::trivial(2, 2);
    FDModule om = syzygy(k);
    auto a = ext_dims(k, k, 4);
    auto b = ext_dims(om, k, 3);
    for (std::size_t n = 1; n <= 3; ++n)
        EXPECT_EQ(a[n + 1], b[n]);
}

TEST(Ext, LiftIndependenceOnCohomology)
{
    // Lifts differing by a null-homotopy ∂h + h∂ induce the same map on Ext.
    auto cx = ext_complex(FDModule::trivial(2, 2), FDModule::trivial(2, 2), 5);
    const auto& res = cx.res;
    std::vector<Residue> zeta(res.ranks[1], 0);
    zeta[0] = 1;
    const std::size_t depth = 4;
    ChainMap z = yoneda_lift(res, zeta, 1, depth);
    std::mt19937_64 rng(3);
    // h_i : P_{i+1} -> P_{i+1}, given by generator images.
    std::vector<Matrix> h;
    for (std::size_t i = 0; i <= depth; ++i)
        h.push_back(random_matrix(2, res.term_dim(i + 1), res.ranks[i + 1], rng));
    ChainMap z2 = z;
    for (std::size_t i = 0; i <= depth; ++i) {
        z2.images[i] = z2.images[i] + res.boundary(i + 1) * h[i];
        if (i > 0)
            z2.images[i] = z2.images[i] + expand_free_map(res.algebra, h[i - 1]) * res.images[i + 1];
    }
    EXPECT_TRUE(commutes_with_boundaries(res, z2));
    for (std::size_t n = 1; n < depth; ++n) {
        auto phi1 = pullback_cochains(res.algebra, z.images[n], cx.monomial_actions);
        auto phi2 = pullback_cochains(res.algebra, z2.images[n], cx.monomial_actions);
        Matrix diff = (phi1 - phi2) * cx.cocycles(n);
        Matrix bnd = cx.coboundaries(n + 1);
        EXPECT_EQ(rank(Matrix::hstack(diff, bnd)), rank(bnd));
        EXPECT_EQ(induced_rank(cx, n, n + 1, phi1), induced_rank(cx, n, n + 1, phi2));
    }
}
