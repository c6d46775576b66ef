#include "fv/resolution.hpp"

#include <map>
#include <stdexcept>

namespace fv {

std::vector<Residue> multiply_free(const ElemAbelianAlgebra& alg, std::size_t mu, std::span<const Residue> v)
{
    const std::size_t d = alg.dim();
    const Residue p = alg.p();
    std::vector<Residue> out(v.size(), 0);
    for (std::size_t base = 0; base < v.size(); base += d)
        for (std::size_t a = 0; a < d; ++a) {
            Residue c = v[base + a];
            if (!c)
                continue;
            std::size_t t = alg.multiply_monomials(mu, a);
            if (t != ElemAbelianAlgebra::npos)
                out[base + t] = (out[base + t] + c) % p;
        }
    return out;
}

Matrix expand_free_map(const ElemAbelianAlgebra& alg, const Matrix& images)
{
    const std::size_t d = alg.dim();
    Matrix out(alg.p(), images.rows(), images.cols() * d);
    for (std::size_t j = 0; j < images.cols(); ++j) {
        auto col = images.column(j);
        for (std::size_t mu = 0; mu < d; ++mu)
            out.set_column(j * d + mu, multiply_free(alg, mu, col));
    }
    return out;
}

TruncatedResolution TruncatedResolution::truncated(std::size_t n) const
{
    if (n > top)
        throw std::invalid_argument("cannot extend a resolution by truncating it");
    TruncatedResolution out = *this;
    out.top = n;
    out.ranks.resize(n + 1);
    out.labels.resize(n + 1);
    out.images.resize(n + 1);
    out.boundaries.resize(n + 1);
    return out;
}

TruncatedResolution cyclic_resolution(Residue p, std::size_t top)
{
    TruncatedResolution res;
    res.algebra = ElemAbelianAlgebra(p, 1);
    res.top = top;
    res.ranks.assign(top + 1, 1);
    res.images.resize(top + 1);
    res.boundaries.resize(top + 1);
    for (std::size_t n = 0; n <= top; ++n)
        res.labels.push_back({{n}});
    for (std::size_t n = 1; n <= top; ++n) {
        Matrix img(p, p, 1);
        img(n % 2 ? 1 : p - 1, 0) = 1;
        res.images[n] = img;
        res.boundaries[n] = expand_free_map(res.algebra, img);
    }
    res.augmentation = Matrix(p, 1, p);
    res.augmentation(0, 0) = 1;
    return res;
}

std::size_t composition_count(std::size_t n, std::size_t s)
{
    if (s == 0)
        return n == 0 ? 1 : 0;
    // C(n + s - 1, s - 1)
    std::size_t num = 1, den = 1;
    for (std::size_t i = 1; i < s; ++i) {
        num *= n + i;
        den *= i;
    }
    return num / den;
}

namespace {

// Degree tuples (n_1..n_k) summing to n, first coordinate descending.
void compositions(std::size_t n, std::size_t k, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out)
{
    if (cur.size() + 1 == k) {
        cur.push_back(n);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (std::size_t a = n + 1; a-- > 0;) {
        cur.push_back(a);
        compositions(n - a, k, cur, out);
        cur.pop_back();
    }
}

}  // namespace

TruncatedResolution tensor_resolution(const std::vector<TruncatedResolution>& factors)
{
    if (factors.empty())
        throw std::invalid_argument("tensor_resolution needs at least one factor");
    const Residue p = factors[0].p();
    std::size_t top = factors[0].top, s = 0;
    for (const auto& f : factors) {
        if (f.p() != p)
            throw std::invalid_argument("tensor_resolution: characteristic mismatch");
        top = std::min(top, f.top);
        s += f.algebra.rank();
    }
    const std::size_t k = factors.size();
    TruncatedResolution res;
    res.algebra = ElemAbelianAlgebra(p, s);
    res.top = top;
    const std::size_t dim = res.algebra.dim();
    std::vector<std::size_t> place(k, 1);  // weight of factor i's monomial index
    for (std::size_t i = 1; i < k; ++i)
        place[i] = place[i - 1] * factors[i - 1].algebra.dim();

    // keys[n][g] = (n_1, g_1, ..., n_k, g_k)
    std::vector<std::vector<std::vector<std::size_t>>> keys(top + 1);
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> index(top + 1);
    for (std::size_t n = 0; n <= top; ++n) {
        std::vector<std::vector<std::size_t>> comps;
        std::vector<std::size_t> cur;
        compositions(n, k, cur, comps);
        std::vector<std::vector<std::size_t>> labels;
        for (const auto& c : comps) {
            // All generator tuples of this multidegree, first factor most significant.
            std::vector<std::size_t> g(k, 0);
            bool empty = false;
            for (std::size_t i = 0; i < k; ++i)
                empty |= factors[i].ranks[c[i]] == 0;
            if (empty)
                continue;
            while (true) {
                std::vector<std::size_t> key;
                for (std::size_t i = 0; i < k; ++i) {
                    key.push_back(c[i]);
                    key.push_back(g[i]);
                }
                index[n][key] = keys[n].size();
                keys[n].push_back(key);
                labels.push_back(c);
                std::size_t i = k;
                while (i-- > 0) {
                    if (++g[i] < factors[i].ranks[c[i]])
                        break;
                    g[i] = 0;
                }
                if (i == static_cast<std::size_t>(-1))
                    break;
            }
        }
        res.labels.push_back(labels);
        res.ranks.push_back(keys[n].size());
    }

    res.images.resize(top + 1);
    res.boundaries.resize(top + 1);
    for (std::size_t n = 1; n <= top; ++n) {
        Matrix img(p, res.ranks[n - 1] * dim, res.ranks[n]);
        for (std::size_t col = 0; col < keys[n].size(); ++col) {
            const auto& key = keys[n][col];
            std::size_t prefix = 0;
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t ni = key[2 * i], gi = key[2 * i + 1];
                if (ni > 0) {
                    const Residue sign = prefix % 2 ? p - 1 : 1;
                    const auto& fi = factors[i];
                    const std::size_t di = fi.algebra.dim();
                    for (std::size_t h = 0; h < fi.ranks[ni - 1]; ++h)
                        for (std::size_t m = 0; m < di; ++m) {
                            Residue c = fi.images[ni](h * di + m, gi);
                            if (!c)
                                continue;
                            auto target = key;
                            target[2 * i] = ni - 1;
                            target[2 * i + 1] = h;
                            std::size_t row = index[n - 1].at(target) * dim + m * place[i];
                            img(row, col) = static_cast<Residue>((img(row, col) + std::uint64_t{sign} * c) % p);
                        }
                }
                prefix += ni;
            }
        }
        res.images[n] = img;
        res.boundaries[n] = expand_free_map(res.algebra, img);
    }

    res.augmentation = Matrix(p, 1, res.ranks[0] * dim);
    for (std::size_t g = 0; g < keys[0].size(); ++g) {
        std::uint64_t v = 1;
        for (std::size_t i = 0; i < k; ++i)
            v = v * factors[i].augmentation(0, keys[0][g][2 * i + 1] * factors[i].algebra.dim()) % p;
        res.augmentation(0, g * dim) = static_cast<Residue>(v);
    }
    return res;
}

TruncatedResolution koszul_resolution(Residue p, std::size_t s, std::size_t top)
{
    if (s == 0)
        throw std::invalid_argument("koszul_resolution needs a rank >= 1 algebra");
    std::vector<TruncatedResolution> factors(s, cyclic_resolution(p, top));
    return tensor_resolution(factors);
}

ResolutionCheck check_resolution(const TruncatedResolution& res)
{
    ResolutionCheck out;
    auto note = [&](const std::string& s) {
        if (!out.detail.empty())
            out.detail += "; ";
        out.detail += s;
    };
    const std::size_t dim = res.algebra.dim();
    if (res.top >= 1 && !(res.augmentation * res.boundary(1)).is_zero()) {
        out.boundary_squares_zero = false;
        note("augmentation does not kill the image of the first boundary");
    }
    for (std::size_t n = 2; n <= res.top; ++n)
        if (!(res.boundary(n - 1) * res.boundary(n)).is_zero()) {
            out.boundary_squares_zero = false;
            note("boundary squares to nonzero at degree " + std::to_string(n));
        }

    if (rank(res.augmentation) != 1) {
        out.exact = false;
        note("augmentation is not onto k");
    }
    std::vector<std::size_t> rk(res.top + 2, 0);
    for (std::size_t n = 1; n <= res.top; ++n)
        rk[n] = rank(res.boundary(n));
    if (res.top >= 1 && rk[1] + 1 != res.term_dim(0)) {
        out.exact = false;
        note("not exact at degree 0");
    }
    for (std::size_t n = 1; n < res.top; ++n)
        if (rk[n] + rk[n + 1] != res.term_dim(n)) {
            out.exact = false;
            note("not exact at degree " + std::to_string(n));
        }

    for (std::size_t n = 1; n <= res.top; ++n)
        for (std::size_t j = 0; j < res.ranks[n]; ++j)
            for (std::size_t g = 0; g < res.ranks[n - 1]; ++g)
                if (res.images[n](g * dim, j)) {
                    out.minimal = false;
                    note("boundary image outside the radical at degree " + std::to_string(n));
                }
    for (std::size_t c = 0; c < res.augmentation.cols(); ++c)
        if (c % dim && res.augmentation(0, c)) {
            out.minimal = false;
            note("augmentation does not vanish on the radical");
        }

    for (std::size_t n = 0; n <= res.top; ++n)
        if (res.ranks[n] != composition_count(n, res.algebra.rank())) {
            out.ranks_match = false;
            note("rank at degree " + std::to_string(n) + " differs from the composition count");
        }
    return out;
}

Matrix ChainMap::component(const TruncatedResolution& res, std::size_t source_degree) const
{
    return expand_free_map(res.algebra, images.at(source_degree - start));
}

bool commutes_with_boundaries(const TruncatedResolution& res, const ChainMap& c)
{
    for (std::size_t i = c.start + 1; i < c.end(); ++i) {
        const long t = static_cast<long>(i) + c.shift;
        if (t < 1 || static_cast<std::size_t>(t) > res.top || i > res.top)
            continue;
        Matrix lhs = res.boundary(static_cast<std::size_t>(t)) * c.images[i - c.start];
        Matrix rhs = c.component(res, i - 1) * res.images[i];
        if (!(lhs == rhs))
            return false;
    }
    return true;
}

ChainMap lift_cocycle(const TruncatedResolution& res, std::span<const Residue> u, std::size_t n)
{
    if (res.ranks.at(0) != 1)
        throw std::invalid_argument("lift_cocycle expects a resolution of k");
    if (n > res.top || u.size() != res.term_dim(n))
        throw std::invalid_argument("lift_cocycle: element not in P_n");
    for (std::size_t i = 0; i < res.algebra.rank(); ++i) {
        std::vector<std::size_t> e(res.algebra.rank(), 0);
        e[i] = 1;
        for (auto x : multiply_free(res.algebra, res.algebra.monomial(e), u))
            if (x)
                throw std::invalid_argument("lift_cocycle: element is not in the socle");
    }
    ChainMap out;
    out.shift = static_cast<int>(n) + 1;
    out.start = 0;
    for (std::size_t i = 0; n + 1 + i <= res.top; ++i) {
        LinearSolver ls(res.boundary(n + 1 + i));
        const std::size_t src_rank = res.ranks[i];
        Matrix img(res.p(), res.term_dim(n + 1 + i), src_rank);
        for (std::size_t j = 0; j < src_rank; ++j) {
            std::vector<Residue> rhs;
            if (i == 0)
                rhs.assign(u.begin(), u.end());
            else
                rhs = out.component(res, i - 1).apply(res.images[i].column(j));
            auto x = ls.solve(rhs);
            if (!x)
                throw std::runtime_error("lift_cocycle: inconsistent system; the resolution is not exact");
            img.set_column(j, *x);
        }
        out.images.push_back(std::move(img));
    }
    return out;
}

ChainMap yoneda_lift(const TruncatedResolution& res, std::span<const Residue> zeta, std::size_t d,
                     std::size_t depth)
{
    if (res.ranks.at(0) != 1)
        throw std::invalid_argument("yoneda_lift expects a resolution of k");
    if (d > res.top || zeta.size() != res.ranks[d])
        throw std::invalid_argument("yoneda_lift: cocycle has the wrong length");
    if (d + depth > res.top)
        throw std::invalid_argument("yoneda_lift: resolution too short for the requested depth");
    ChainMap out;
    out.shift = -static_cast<int>(d);
    out.start = d;
    Matrix first(res.p(), res.term_dim(0), res.ranks[d]);
    for (std::size_t j = 0; j < res.ranks[d]; ++j)
        first(0, j) = zeta[j] % res.p();
    out.images.push_back(first);
    for (std::size_t i = 1; i <= depth; ++i) {
        LinearSolver ls(res.boundary(i));
        Matrix prev = out.component(res, i - 1 + d);
        Matrix img(res.p(), res.term_dim(i), res.ranks[i + d]);
        for (std::size_t j = 0; j < res.ranks[i + d]; ++j) {
            auto x = ls.solve(prev.apply(res.images[i + d].column(j)));
            if (!x)
                throw std::runtime_error("yoneda_lift: inconsistent system; input is not a cocycle");
            img.set_column(j, *x);
        }
        out.images.push_back(std::move(img));
    }
    return out;
}

Matrix pullback_cochains(const ElemAbelianAlgebra& alg, const Matrix& images, const std::vector<Matrix>& monomials)
{
    const std::size_t dim = alg.dim();
    const std::size_t l = monomials.empty() ? 0 : monomials[0].rows();
    const std::size_t n_rank = images.rows() / dim, m_rank = images.cols();
    Matrix out(alg.p(), m_rank * l, n_rank * l);
    for (std::size_t j = 0; j < m_rank; ++j)
        for (std::size_t i = 0; i < n_rank; ++i)
            for (std::size_t mu = 0; mu < dim; ++mu) {
                Residue c = images(i * dim + mu, j);
                if (!c)
                    continue;
                const Matrix& a = monomials[mu];
                for (std::size_t x = 0; x < l; ++x)
                    for (std::size_t y = 0; y < l; ++y)
                        if (a(x, y))
                            out(j * l + x, i * l + y) =
                                static_cast<Residue>((out(j * l + x, i * l + y) + std::uint64_t{c} * a(x, y)) % alg.p());
            }
    return out;
}

Matrix CochainComplex::cocycles(std::size_t n) const { return kernel_basis(differentials.at(n)); }

Matrix CochainComplex::coboundaries(std::size_t n) const
{
    if (n == 0)
        return Matrix(res.p(), cochain_dim(0), 0);
    return column_space_basis(differentials.at(n - 1));
}

std::size_t CochainComplex::cohomology_dim(std::size_t n) const
{
    std::size_t z = cochain_dim(n) - rank(differentials.at(n));
    std::size_t b = n == 0 ? 0 : rank(differentials.at(n - 1));
    return z - b;
}

CochainComplex ext_complex(const FDModule& m, const FDModule& n, std::size_t max_degree)
{
    if (m.p() != n.p() || m.rank() != n.rank())
        throw std::invalid_argument("ext: modules over different algebras");
    CochainComplex c;
    c.res = koszul_resolution(m.p(), m.rank(), max_degree + 1);
    c.coefficients = hom_module(m, n);
    for (std::size_t mu = 0; mu < c.res.algebra.dim(); ++mu)
        c.monomial_actions.push_back(c.coefficients.monomial_action(mu));
    for (std::size_t d = 0; d <= max_degree; ++d)
        c.differentials.push_back(pullback_cochains(c.res.algebra, c.res.images[d + 1], c.monomial_actions));
    return c;
}

std::vector<std::size_t> ext_dims(const FDModule& m, const FDModule& n, std::size_t max_degree)
{
    CochainComplex c = ext_complex(m, n, max_degree);
    std::vector<std::size_t> out;
    for (std::size_t d = 0; d <= max_degree; ++d)
        out.push_back(c.cohomology_dim(d));
    return out;
}

std::size_t induced_rank(const CochainComplex& c, std::size_t a, std::size_t b, const Matrix& phi)
{
    Matrix img = phi * c.cocycles(a);
    Matrix bnd = c.coboundaries(b);
    return rank(Matrix::hstack(img, bnd)) - rank(bnd);
}

}  // namespace fv
