#include "fv/rep.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fv {

FDModule::FDModule(Residue p, std::size_t r, std::size_t dim, std::vector<Matrix> actions)
    : p_(p), r_(r), dim_(dim), actions_(std::move(actions))
{
    if (!is_prime(p))
        throw std::invalid_argument("module characteristic must be prime");
    if (actions_.size() != r)
        throw std::invalid_argument("module needs exactly r action matrices");
    for (const auto& a : actions_)
        if (a.modulus() != p || a.rows() != dim || a.cols() != dim)
            throw std::invalid_argument("action matrix has wrong shape or modulus");
}

FDModule FDModule::trivial(Residue p, std::size_t r)
{
    return {p, r, 1, std::vector<Matrix>(r, Matrix(p, 1, 1))};
}

FDModule FDModule::zero(Residue p, std::size_t r)
{
    return {p, r, 0, std::vector<Matrix>(r, Matrix(p, 0, 0))};
}

FDModule FDModule::regular(Residue p, std::size_t r)
{
    ElemAbelianAlgebra alg(p, r);
    std::vector<Matrix> acts;
    for (std::size_t i = 0; i < r; ++i)
        acts.push_back(AlgebraElement::generator(alg, i).multiplication_matrix());
    return {p, r, alg.dim(), std::move(acts)};
}

FDModule FDModule::free(Residue p, std::size_t r, std::size_t rank)
{
    FDModule reg = regular(p, r);
    std::vector<Matrix> acts;
    for (const auto& a : reg.actions())
        acts.push_back(Matrix::kron(Matrix::identity(p, rank), a));
    return {p, r, rank * reg.dim(), std::move(acts)};
}

Matrix FDModule::monomial_action(std::size_t m) const
{
    auto e = algebra().exponents(m);
    Matrix out = Matrix::identity(p_, dim_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t k = 0; k < e[i]; ++k)
            out = actions_[i] * out;
    return out;
}

Matrix FDModule::act(const AlgebraElement& a) const
{
    if (a.algebra().p() != p_ || a.algebra().rank() != r_)
        throw std::invalid_argument("algebra element from a different algebra");
    Matrix out(p_, dim_, dim_);
    for (std::size_t m = 0; m < a.algebra().dim(); ++m)
        if (a.coefficient(m))
            out = out + monomial_action(m).scaled(a.coefficient(m));
    return out;
}

Matrix FDModule::norm() const
{
    Matrix out = Matrix::identity(p_, dim_);
    for (std::size_t i = 0; i < r_; ++i)
        out = actions_[i].power(p_ - 1) * out;
    return out;
}

Matrix FDModule::socle() const
{
    Matrix stacked(p_, 0, dim_);
    for (const auto& a : actions_)
        stacked = Matrix::vstack(stacked, a);
    if (stacked.rows() == 0)
        return Matrix::identity(p_, dim_);
    return kernel_basis(stacked);
}

Matrix FDModule::radical() const
{
    Matrix all(p_, dim_, 0);
    for (const auto& a : actions_)
        all = Matrix::hstack(all, a);
    return column_space_basis(all);
}

std::string FDModule::invariant_violation() const
{
    for (std::size_t i = 0; i < r_; ++i) {
        if (!actions_[i].power(p_).is_zero())
            return "action " + std::to_string(i + 1) + " is not p-nilpotent";
        for (std::size_t j = i + 1; j < r_; ++j)
            if (!(actions_[i] * actions_[j] == actions_[j] * actions_[i]))
                return "actions " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " do not commute";
    }
    return {};
}

void FDModule::verify() const
{
    auto msg = invariant_violation();
    if (!msg.empty())
        throw std::domain_error("module invariant violated: " + msg);
}

bool ModuleHom::is_homomorphism() const
{
    if (source.p() != target.p() || source.rank() != target.rank())
        return false;
    if (matrix.rows() != target.dim() || matrix.cols() != source.dim())
        return false;
    for (std::size_t i = 0; i < source.rank(); ++i)
        if (!(target.action(i) * matrix == matrix * source.action(i)))
            return false;
    return true;
}

static void require_compatible(const FDModule& m, const FDModule& n)
{
    if (m.p() != n.p() || m.rank() != n.rank())
        throw std::invalid_argument("modules over different algebras");
}

static Matrix block_diag(const Matrix& a, const Matrix& b)
{
    Matrix out(a.modulus(), a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            out(a.rows() + i, a.cols() + j) = b(i, j);
    return out;
}

FDModule direct_sum(const FDModule& m, const FDModule& n)
{
    require_compatible(m, n);
    std::vector<Matrix> acts;
    for (std::size_t i = 0; i < m.rank(); ++i)
        acts.push_back(block_diag(m.action(i), n.action(i)));
    return {m.p(), m.rank(), m.dim() + n.dim(), std::move(acts)};
}

FDModule tensor(const FDModule& m, const FDModule& n)
{
    require_compatible(m, n);
    const Residue p = m.p();
    Matrix im = Matrix::identity(p, m.dim()), in = Matrix::identity(p, n.dim());
    std::vector<Matrix> acts;
    for (std::size_t i = 0; i < m.rank(); ++i) {
        const Matrix& a = m.action(i);
        const Matrix& b = n.action(i);
        acts.push_back(Matrix::kron(a, in) + Matrix::kron(im, b) + Matrix::kron(a, b));
    }
    return {p, m.rank(), m.dim() * n.dim(), std::move(acts)};
}

// Inverse of the unipotent 1 + A.
static Matrix unipotent_inverse(const Matrix& a)
{
    const Residue p = a.modulus();
    Matrix out = Matrix::identity(p, a.rows());
    Matrix term = out;
    Matrix neg = a.scaled(p - 1);
    for (std::size_t k = 1; k < p; ++k) {
        term = term * neg;
        out = out + term;
    }
    return out;
}

FDModule hom_module(const FDModule& m, const FDModule& n)
{
    require_compatible(m, n);
    const Residue p = m.p();
    std::vector<Matrix> acts;
    for (std::size_t i = 0; i < m.rank(); ++i) {
        Matrix gn = Matrix::identity(p, n.dim()) + n.action(i);
        Matrix gm_inv = unipotent_inverse(m.action(i));
        Matrix g = Matrix::kron(gn, gm_inv.transpose());
        acts.push_back(g - Matrix::identity(p, g.rows()));
    }
    return {p, m.rank(), m.dim() * n.dim(), std::move(acts)};
}

FDModule restrict(const FDModule& m, const FlatMap& f)
{
    if (!is_flat(f))
        throw std::invalid_argument("restrict: map is not flat");
    if (f.p() != m.p() || f.ambient_rank() != m.rank())
        throw std::invalid_argument("restrict: flat map does not target this algebra");
    std::vector<Matrix> acts;
    for (std::size_t j = 0; j < f.source_rank(); ++j) {
        Matrix a(m.p(), m.dim(), m.dim());
        for (std::size_t i = 0; i < m.rank(); ++i)
            if (f.linear()(j, i))
                a = a + m.action(i).scaled(f.linear()(j, i));
        acts.push_back(std::move(a));
    }
    return {m.p(), f.source_rank(), m.dim(), std::move(acts)};
}

namespace {

// Smallest invariant subspace containing the columns of gens.
Matrix closure(const FDModule& m, const Matrix& gens)
{
    EchelonBasis eb(m.p(), m.dim());
    std::vector<std::vector<Residue>> basis, frontier;
    for (std::size_t j = 0; j < gens.cols(); ++j) {
        auto v = gens.column(j);
        if (eb.insert(v)) {
            basis.push_back(v);
            frontier.push_back(v);
        }
    }
    while (!frontier.empty()) {
        std::vector<std::vector<Residue>> next;
        for (const auto& v : frontier)
            for (const auto& a : m.actions()) {
                auto w = a.apply(v);
                if (eb.insert(w)) {
                    basis.push_back(w);
                    next.push_back(w);
                }
            }
        frontier = std::move(next);
    }
    Matrix out(m.p(), m.dim(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        out.set_column(j, basis[j]);
    return out;
}

// Actions on an invariant subspace in the coordinates of `basis`.
std::vector<Matrix> induced_actions(const FDModule& m, const Matrix& basis)
{
    LinearSolver ls(basis);
    std::vector<Matrix> acts;
    for (const auto& a : m.actions()) {
        Matrix img = a * basis;
        Matrix out(m.p(), basis.cols(), basis.cols());
        for (std::size_t j = 0; j < basis.cols(); ++j) {
            auto x = ls.solve(img.column(j));
            if (!x)
                throw std::logic_error("subspace is not invariant");
            out.set_column(j, *x);
        }
        acts.push_back(std::move(out));
    }
    return acts;
}

}  // namespace

FDModule submodule(const FDModule& m, const Matrix& generators, Matrix* inclusion)
{
    Matrix basis = closure(m, generators);
    if (inclusion)
        *inclusion = basis;
    return {m.p(), m.rank(), basis.cols(), induced_actions(m, basis)};
}

FDModule quotient(const FDModule& m, const Matrix& relations)
{
    Matrix sub = closure(m, relations);
    Matrix comp = quotient_basis(Matrix::identity(m.p(), m.dim()), sub);
    Matrix full = Matrix::hstack(sub, comp);
    LinearSolver ls(full);
    const std::size_t s = sub.cols(), q = comp.cols();
    std::vector<Matrix> acts;
    for (const auto& a : m.actions()) {
        Matrix img = a * comp;
        Matrix out(m.p(), q, q);
        for (std::size_t j = 0; j < q; ++j) {
            auto x = *ls.solve(img.column(j));
            for (std::size_t i = 0; i < q; ++i)
                out(i, j) = x[s + i];
        }
        acts.push_back(std::move(out));
    }
    return {m.p(), m.rank(), q, std::move(acts)};
}

bool is_free_cyclic(const FDModule& m)
{
    if (m.rank() != 1)
        throw std::invalid_argument("is_free_cyclic expects a module over a rank-1 algebra");
    if (m.dim() % m.p() != 0)
        return false;
    return rank(m.action(0).power(m.p() - 1)) * m.p() == m.dim();
}

bool is_free(const FDModule& m)
{
    std::size_t pr = m.algebra().dim();
    if (m.dim() % pr != 0)
        return false;
    return rank(m.norm()) * pr == m.dim();
}

std::vector<ProjPoint> rank_variety(const FDModule& m)
{
    std::vector<ProjPoint> out;
    for (const auto& v : ProjPoint::all(m.p(), m.rank())) {
        Matrix row(m.p(), 1, m.rank());
        for (std::size_t i = 0; i < m.rank(); ++i)
            row(0, i) = v.coords()[i];
        if (!is_free_cyclic(restrict(m, FlatMap(m.p(), m.rank(), row))))
            out.push_back(v);
    }
    return out;
}

FDModule syzygy(const FDModule& m)
{
    const Residue p = m.p();
    ElemAbelianAlgebra alg = m.algebra();
    Matrix tops = quotient_basis(Matrix::identity(p, m.dim()), m.radical());
    const std::size_t g = tops.cols(), pr = alg.dim();
    // Cover kG^g -> M sends (generator j, monomial mu) to X^mu · top_j.
    Matrix cover(p, m.dim(), g * pr);
    for (std::size_t mu = 0; mu < pr; ++mu) {
        Matrix img = m.monomial_action(mu) * tops;
        for (std::size_t j = 0; j < g; ++j)
            cover.set_column(j * pr + mu, img.column(j));
    }
    FDModule freemod = FDModule::free(p, m.rank(), g);
    Matrix ker = kernel_basis(cover);
    if (ker.cols() == 0)
        return FDModule::zero(p, m.rank());
    return {p, m.rank(), ker.cols(), induced_actions(freemod, ker)};
}

FDModule induce(const FDModule& m, const FlatMap& f)
{
    if (!is_flat(f))
        throw std::invalid_argument("induce: map is not flat");
    if (m.p() != f.p() || m.rank() != f.source_rank())
        throw std::invalid_argument("induce: module is not over the source of the flat map");
    const Residue p = f.p();
    FlatMap comp = complement_flat(f);
    const std::size_t s = f.source_rank(), c = comp.source_rank(), r = f.ambient_rank();
    FDModule kj = FDModule::regular(p, c);
    Matrix ij = Matrix::identity(p, kj.dim()), im = Matrix::identity(p, m.dim());
    // Actions of the new generators (Y_1..Y_s, W_1..W_c) on kJ ⊗ M.
    std::vector<Matrix> gens;
    for (std::size_t j = 0; j < s; ++j)
        gens.push_back(Matrix::kron(ij, m.action(j)));
    for (std::size_t k = 0; k < c; ++k)
        gens.push_back(Matrix::kron(kj.action(k), im));
    Matrix t = inverse_change_of_variables(stack(f, comp).linear());
    std::vector<Matrix> acts;
    const std::size_t d = kj.dim() * m.dim();
    for (std::size_t i = 0; i < r; ++i) {
        Matrix a(p, d, d);
        for (std::size_t j = 0; j < r; ++j)
            if (t(i, j))
                a = a + gens[j].scaled(t(i, j));
        acts.push_back(std::move(a));
    }
    return {p, r, d, std::move(acts)};
}

std::string to_json(const FDModule& m)
{
    nlohmann::json j;
    j["p"] = m.p();
    j["r"] = m.rank();
    j["dim"] = m.dim();
    nlohmann::json acts = nlohmann::json::array();
    for (const auto& a : m.actions()) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < a.rows(); ++i)
            rows.push_back(std::vector<Residue>(a.row(i).begin(), a.row(i).end()));
        acts.push_back(rows);
    }
    j["actions"] = acts;
    return j.dump();
}

FDModule module_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("module JSON: ") + e.what());
    }
    for (const char* key : {"p", "r", "dim", "actions"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("module JSON: missing key '") + key + "'");
    const auto p = j["p"].get<Residue>();
    const auto r = j["r"].get<std::size_t>();
    const auto dim = j["dim"].get<std::size_t>();
    if (!is_prime(p))
        throw std::invalid_argument("module JSON: p must be prime");
    std::vector<Matrix> acts;
    for (const auto& a : j["actions"]) {
        Matrix m(p, dim, dim);
        // Either a list of rows or one flat row-major list.
        if (a.size() == dim && (dim == 0 || a[0].is_array())) {
            for (std::size_t i = 0; i < dim; ++i) {
                if (a[i].size() != dim)
                    throw std::invalid_argument("module JSON: ragged action matrix");
                for (std::size_t k = 0; k < dim; ++k)
                    m.set(i, k, a[i][k].get<std::int64_t>());
            }
        } else {
            if (a.size() != dim * dim)
                throw std::invalid_argument("module JSON: action has wrong number of entries");
            for (std::size_t e = 0; e < dim * dim; ++e)
                m.set(e / dim, e % dim, a[e].get<std::int64_t>());
        }
        acts.push_back(std::move(m));
    }
    FDModule out(p, r, dim, std::move(acts));
    out.verify();
    return out;
}

}  // namespace fv
