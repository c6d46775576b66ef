#include <gtest/gtest.h>

#include <random>

#include "fv/exactla.hpp"

using namespace fv;

namespace {

// Brute-force rank over tiny fields: count distinct vectors in the row space.
std::size_t rank_by_enumeration(const Matrix& m)
{
    const Residue p = m.modulus();
    std::size_t combos = 1;
    for (std::size_t i = 0; i < m.rows(); ++i)
        combos *= p;
    std::vector<std::vector<Residue>> seen;
    for (std::size_t code = 0; code < combos; ++code) {
        std::vector<Residue> v(m.cols(), 0);
        std::size_t x = code;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            Residue c = x % p;
            x /= p;
            for (std::size_t j = 0; j < m.cols(); ++j)
                v[j] = (v[j] + c * m(i, j)) % p;
        }
        if (std::find(seen.begin(), seen.end(), v) == seen.end())
            seen.push_back(v);
    }
    std::size_t r = 0, size = 1;
    while (size < seen.size()) {
        size *= p;
        ++r;
    }
    return r;
}

}  // namespace

TEST(PrimeField, InversesAndPowers)
{
    for (Residue p : {2u, 3u, 5u, 7u, 101u}) {
        PrimeField f(p);
        for (Residue a = 1; a < p; ++a) {
            EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
            EXPECT_EQ(f.pow(a, p - 1), 1u);
        }
        EXPECT_EQ(f.reduce(-1), p - 1);
    }
    EXPECT_THROW(PrimeField(4), std::invalid_argument);
    EXPECT_THROW(PrimeField(2).inv(0), std::domain_error);
}

TEST(Scalar, ModulusMismatchRejected)
{
    EXPECT_THROW(Scalar(1, 2) + Scalar(1, 3), std::invalid_argument);
    EXPECT_EQ((Scalar(2, 3) * Scalar(2, 3)).value, 1u);
}

TEST(Matrix, RankMatchesEnumeration)
{
    std::mt19937_64 rng(7);
    for (Residue p : {2u, 3u}) {
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 5;
            Matrix m = random_matrix(p, rows, cols, rng);
            if (trial % 3 == 0)
                m = m * random_matrix(p, cols, cols, rng).block(0, 0, cols, cols);
            EXPECT_EQ(rank(m), rank_by_enumeration(m)) << m.to_string();
        }
    }
}

TEST(Matrix, KernelAndSolve)
{
    std::mt19937_64 rng(11);
    for (Residue p : {2u, 3u, 5u}) {
        for (int trial = 0; trial < 30; ++trial) {
            std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
            Matrix a = random_matrix(p, rows, cols, rng);
            Matrix k = kernel_basis(a);
            EXPECT_EQ(k.cols(), cols - rank(a));
            EXPECT_TRUE((a * k).is_zero());
            EXPECT_EQ(rank(k), k.cols());

            Matrix x = random_matrix(p, cols, 1, rng);
            Matrix b = a * x;
            auto sol = solve(a, b);
            ASSERT_TRUE(sol.has_value());
            EXPECT_EQ(a * *sol, b);

            LinearSolver ls(a);
            auto bv = b.column(0);
            auto s1 = ls.solve(bv);
            auto s2 = ls.solve_random(bv, rng);
            ASSERT_TRUE(s1 && s2);
            EXPECT_EQ(a.apply(*s1), bv);
            EXPECT_EQ(a.apply(*s2), bv);
        }
    }
}

TEST(Matrix, InconsistentSystem)
{
    Matrix a = Matrix::from_rows(2, {{1, 0}, {1, 0}});
    Matrix b = Matrix::from_rows(2, {{1}, {0}});
    EXPECT_FALSE(solve(a, b).has_value());
    EXPECT_FALSE(LinearSolver(a).solve(b.column(0)).has_value());
}

TEST(Matrix, ShapeMismatchThrows)
{
    EXPECT_THROW(Matrix(2, 2, 3) * Matrix(2, 2, 3), std::invalid_argument);
    EXPECT_THROW(Matrix(2, 2, 2) + Matrix(3, 2, 2), std::invalid_argument);
}

TEST(Matrix, KernelSupportIsTriangular)
{
    // Vector for free column f is supported on columns <= f.
    Matrix a = Matrix::from_rows(3, {{1, 2, 0, 1, 1}, {0, 0, 1, 2, 2}});
    Matrix k = kernel_basis(a);
    auto ech = row_reduce(a);
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < a.cols(); ++c)
        if (std::find(ech.pivots.begin(), ech.pivots.end(), c) == ech.pivots.end())
            free.push_back(c);
    ASSERT_EQ(free.size(), k.cols());
    for (std::size_t j = 0; j < k.cols(); ++j) {
        EXPECT_NE(k(free[j], j), 0u);
        for (std::size_t i = free[j] + 1; i < k.rows(); ++i)
            EXPECT_EQ(k(i, j), 0u);
    }
}

TEST(EchelonBasis, MembershipAndQuotient)
{
    std::mt19937_64 rng(3);
    Matrix a = random_matrix(3, 6, 3, rng);
    EchelonBasis eb(3, 6);
    eb.insert_columns(a);
    EXPECT_EQ(eb.dim(), rank(a));
    Matrix combo = a * random_matrix(3, 3, 1, rng);
    EXPECT_TRUE(eb.contains(combo.column(0)));

    Matrix big = Matrix::hstack(a, random_matrix(3, 6, 2, rng));
    Matrix q = quotient_basis(big, a);
    EXPECT_EQ(q.cols(), rank(big) - rank(a));
    EXPECT_THROW(quotient_basis(a, Matrix::identity(3, 6)), std::invalid_argument);
}

TEST(Matrix, IntersectSpans)
{
    Matrix a = Matrix::from_rows(2, {{1, 0}, {0, 1}, {0, 0}});
    Matrix b = Matrix::from_rows(2, {{1, 0}, {0, 0}, {0, 1}});
    Matrix c = intersect_spans(a, b);
    ASSERT_EQ(c.cols(), 1u);
    EXPECT_EQ(c.column(0), (std::vector<Residue>{1, 0, 0}));
}
