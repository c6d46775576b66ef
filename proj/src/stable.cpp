#include "fv/stable.hpp"

#include <algorithm>
#include <map>

namespace fv {

namespace {

// Column-wise sparse copy of a matrix, for repeated matrix-vector products.
struct SparseCols {
    std::size_t rows = 0;
    Residue p = 2;
    std::vector<std::vector<std::pair<std::size_t, Residue>>> cols;

    explicit SparseCols(const Matrix& m) : rows(m.rows()), p(m.modulus()), cols(m.cols())
    {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (m(i, j))
                    cols[j].emplace_back(i, m(i, j));
    }

    std::vector<Residue> apply(std::span<const Residue> v) const
    {
        std::vector<std::uint64_t> acc(rows, 0);
        for (std::size_t j = 0; j < cols.size(); ++j)
            if (v[j])
                for (auto [i, a] : cols[j])
                    acc[i] = (acc[i] + std::uint64_t{a} * v[j]) % p;
        return {acc.begin(), acc.end()};
    }
};

Matrix linear_action(const FDModule& m, std::span<const Residue> coeffs)
{
    Matrix out(m.p(), m.dim(), m.dim());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] % m.p())
            out = out + m.action(i).scaled(coeffs[i] % m.p());
    return out;
}

bool is_zero_vec(std::span<const Residue> v)
{
    return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; });
}

Matrix from_columns(Residue p, std::size_t rows, const std::vector<std::vector<Residue>>& cols)
{
    Matrix m(p, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        m.set_column(j, cols[j]);
    return m;
}

std::vector<Residue> add_scaled(std::vector<Residue> a, std::span<const Residue> b, Residue c, Residue p)
{
    if (c == 0)
        return a;
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = static_cast<Residue>((a[i] + std::uint64_t{c} * b[i]) % p);
    return a;
}

std::string vec_string(std::span<const Residue> v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

Matrix x_power_span(const FDModule& m, const ProjPoint& x)
{
    Matrix a = linear_action(m, x.coords());
    return column_space_basis(a.power(m.p() - 1));
}

}  // namespace

// ---------------------------------------------------------------- stable Hom

Matrix vec_to_map(std::span<const Residue> v, std::size_t rows, std::size_t cols, Residue p)
{
    if (v.size() != rows * cols)
        throw std::invalid_argument("vec_to_map: length mismatch");
    Matrix f(p, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            f(i, j) = v[i * cols + j];
    return f;
}

std::vector<Residue> map_to_vec(const Matrix& f)
{
    std::vector<Residue> v;
    v.reserve(f.rows() * f.cols());
    for (std::size_t i = 0; i < f.rows(); ++i)
        for (std::size_t j = 0; j < f.cols(); ++j)
            v.push_back(f(i, j));
    return v;
}

Matrix hom_space(const FDModule& m, const FDModule& n)
{
    if (m.p() != n.p() || m.rank() != n.rank())
        throw std::invalid_argument("hom_space: modules over different algebras");
    const Residue p = m.p();
    const std::size_t u = m.dim() * n.dim();
    if (u == 0)
        return Matrix(p, 0, 0);
    Matrix stacked(p, 0, u);
    const Matrix im = Matrix::identity(p, m.dim()), in = Matrix::identity(p, n.dim());
    for (std::size_t i = 0; i < m.rank(); ++i)
        stacked = Matrix::vstack(stacked,
                                 Matrix::kron(n.action(i), im) - Matrix::kron(in, m.action(i).transpose()));
    if (stacked.rows() == 0)
        return Matrix::identity(p, u);
    return kernel_basis(stacked);
}

Matrix projective_homs(const FDModule& m, const FDModule& n)
{
    if (m.p() != n.p() || m.rank() != n.rank())
        throw std::invalid_argument("projective_homs: modules over different algebras");
    const Residue p = m.p();
    const std::size_t dm = m.dim(), dn = n.dim(), u = dm * dn;
    const ElemAbelianAlgebra alg = m.algebra();
    // Tr(E_{ab}) = sum_mu X^mu E_{ab} X^{mu*}; column (a, b) of the trace matrix.
    Matrix tr(p, u, u);
    for (std::size_t mu = 0; mu < alg.dim(); ++mu) {
        Matrix a = n.monomial_action(mu);
        Matrix b = m.monomial_action(alg.dual_monomial(mu));
        std::vector<std::vector<std::pair<std::size_t, Residue>>> acol(dn), brow(dm);
        for (std::size_t i = 0; i < dn; ++i)
            for (std::size_t k = 0; k < dn; ++k)
                if (a(i, k))
                    acol[k].emplace_back(i, a(i, k));
        for (std::size_t k = 0; k < dm; ++k)
            for (std::size_t j = 0; j < dm; ++j)
                if (b(k, j))
                    brow[k].emplace_back(j, b(k, j));
        for (std::size_t na = 0; na < dn; ++na)
            for (std::size_t mb = 0; mb < dm; ++mb)
                for (auto [i, x] : acol[na])
                    for (auto [j, y] : brow[mb]) {
                        Residue& e = tr(i * dm + j, na * dm + mb);
                        e = static_cast<Residue>((e + std::uint64_t{x} * y) % p);
                    }
    }
    return column_space_basis(tr);
}

StableHomSpace stable_hom(const FDModule& m, const FDModule& n)
{
    StableHomSpace s{m, n, hom_space(m, n), projective_homs(m, n), {}};
    s.quotient = quotient_basis(s.hom, s.phom);
    return s;
}

// ---------------------------------------------------------------- lifts

Matrix lift_to_source(const LiftRequest& req)
{
    if (!req.source || !req.target)
        throw std::invalid_argument("lift_to_source: missing source or target");
    const TruncatedFV& f = *req.source;
    const FDModule& t = *req.target;
    const Residue p = f.p;
    if (t.p() != p || t.rank() != f.r)
        throw std::invalid_argument("lift_to_source: target over a different algebra");
    if (req.u.size() != t.dim())
        throw std::invalid_argument("lift_to_source: u has the wrong length");
    if (req.source_slot < -1 || req.source_slot > static_cast<int>(f.top))
        throw std::invalid_argument("lift_to_source: source slot out of range");
    for (const auto& a : t.actions())
        if (!is_zero_vec(a.apply(req.u)))
            throw LiftError("u is not fixed by G, so k -> T, 1 -> u is not a map");

    const int s = req.source_slot;
    const std::size_t n = f.prefix_dim(s);
    std::vector<std::vector<Residue>> cols(n);
    cols[0] = req.u;
    std::optional<SparseCols> bmap;
    if (req.constraint)
        bmap.emplace(*req.constraint);

    for (const auto& pc : f.pieces) {
        Matrix zt = linear_action(t, pc.frame.z.row(0));
        std::vector<SparseCols> yt;
        for (std::size_t k = 0; k < pc.frame.h.source_rank(); ++k)
            yt.emplace_back(linear_action(t, pc.frame.h.row(k)));
        LinearSolver solver(req.constraint ? zt * *req.constraint : zt);
        const ElemAbelianAlgebra& alg = pc.resolution.algebra;

        // prev[mu] = (k, mu / t_k) with k the first variable dividing mu.
        std::vector<std::pair<std::size_t, std::size_t>> prev(alg.dim());
        for (std::size_t mu = 1; mu < alg.dim(); ++mu) {
            auto e = alg.exponents(mu);
            std::size_t k = 0;
            while (e[k] == 0)
                ++k;
            --e[k];
            prev[mu] = {k, alg.monomial(e)};
        }

        for (const auto& g : pc.generators) {
            if (static_cast<int>(g.slot) > s)
                break;
            std::vector<Residue> b(t.dim(), 0);
            for (std::size_t i = 0; i < f.dim(); ++i) {
                Residue c = pc.z(i, g.index);
                if (!c)
                    continue;
                if (i >= n || cols[i].empty())
                    throw std::logic_error("lift_to_source: Z leaves the lifted part");
                b = add_scaled(std::move(b), cols[i], c, p);
            }
            std::size_t bound = static_cast<std::size_t>(-1);
            if (req.graded_target)
                bound = req.graded_target->prefix_dim(
                    std::min(static_cast<int>(g.slot) + req.degree + 1, static_cast<int>(req.graded_target->top)));
            auto x = req.rng ? solver.solve_random(b, *req.rng, bound) : solver.solve(b);
            if (!x)
                throw LiftError("no lift for slot " + std::to_string(g.slot) + " copy " +
                                std::to_string(g.position) + " generator " + std::to_string(g.generator) +
                                " of point " + pc.point.to_string());
            cols[g.index] = bmap ? bmap->apply(*x) : std::move(*x);
            for (std::size_t mu = 1; mu < alg.dim(); ++mu)
                cols[g.index + mu] = yt[prev[mu].first].apply(cols[g.index + prev[mu].second]);
        }
    }
    return from_columns(p, t.dim(), cols);
}

bool lift_commutes(const TruncatedFV& source, const FDModule& target, const Matrix& lift)
{
    const std::size_t n = lift.cols();
    if (lift.rows() != target.dim() || n > source.dim())
        return false;
    const Matrix lt = lift.transpose();
    for (std::size_t i = 0; i < source.r; ++i) {
        Matrix xb = source.module.action(i).block(0, 0, n, n);
        if (!(target.action(i) * lift == (xb.transpose() * lt).transpose()))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------- End ring window

EndRingWindow::EndRingWindow(const TruncatedFV& f, std::size_t window, std::uint64_t seed)
    : f_(&f), w_(window), seed_(seed)
{
    if (window > f.top)
        throw std::invalid_argument("window exceeds the truncation degree");
    const Residue p = f.p;
    Matrix soc = f.module.socle();
    phom_ = column_space_basis(f.module.norm());
    Matrix cls = quotient_basis(soc, phom_);
    for (std::size_t j = 0; j < cls.cols(); ++j) {
        auto v = cls.column(j);
        std::size_t lead = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i])
                lead = i;
        all_.push_back(WindowClass{v, f.slot_of[lead]});
        lead_.push_back(lead);
    }
    // Kernel bases come ordered by their free column, hence by slot.
    for (const auto& c : all_)
        if (c.slot <= static_cast<int>(w_))
            classes_.push_back(c);
    if (classes_.empty() || classes_[0].slot != -1)
        throw std::logic_error("EndRingWindow: the unit class is missing");
    if (phom_.cols() > 0)
        coord_solver_.emplace(Matrix::hstack(from_columns(p, f.dim(), [&] {
                                                 std::vector<std::vector<Residue>> c;
                                                 for (const auto& w : all_)
                                                     c.push_back(w.vector);
                                                 return c;
                                             }()),
                                             phom_));
    for (std::size_t k = 0; k < classes_.size(); ++k) {
        LiftRequest req;
        req.source = f_;
        req.target = &f.module;
        req.u = classes_[k].vector;
        req.source_slot = lift_source_slot(k);
        lifts_.push_back(lift_to_source(req));
    }
    table_ = product_table(lifts_);
}

Matrix EndRingWindow::class_matrix() const
{
    Matrix m(f_->p, f_->dim(), classes_.size());
    for (std::size_t k = 0; k < classes_.size(); ++k)
        m.set_column(k, classes_[k].vector);
    return m;
}

std::size_t EndRingWindow::graded_dim(int slot) const
{
    return static_cast<std::size_t>(
        std::count_if(classes_.begin(), classes_.end(), [slot](const WindowClass& c) { return c.slot == slot; }));
}

std::vector<Residue> EndRingWindow::full_coordinates(std::span<const Residue> v) const
{
    const Residue p = f_->p;
    if (v.size() != f_->dim())
        throw std::invalid_argument("coordinates: vector has the wrong length");
    std::vector<Residue> c(all_.size(), 0);
    if (coord_solver_) {
        auto x = coord_solver_->solve(v);
        if (!x)
            throw std::invalid_argument("coordinates: vector is not in the socle");
        std::copy_n(x->begin(), all_.size(), c.begin());
        return c;
    }
    // Socle kernel basis: class k is 1 at lead_k and 0 at every other lead.
    std::vector<Residue> rest(v.begin(), v.end());
    for (std::size_t k = 0; k < all_.size(); ++k) {
        c[k] = v[lead_[k]];
        rest = add_scaled(std::move(rest), all_[k].vector, static_cast<Residue>((p - c[k]) % p), p);
    }
    if (!is_zero_vec(rest))
        throw std::invalid_argument("coordinates: vector is not in the socle");
    return c;
}

std::vector<Residue> EndRingWindow::coordinates(std::span<const Residue> v) const
{
    auto c = full_coordinates(v);
    c.resize(classes_.size());
    return c;
}

const Matrix& EndRingWindow::lift(std::size_t k) const { return lifts_.at(k); }

int EndRingWindow::lift_source_slot(std::size_t k) const
{
    return static_cast<int>(w_) - classes_.at(k).slot - 1;
}

bool EndRingWindow::product_defined(std::size_t k, std::size_t l) const
{
    return classes_.at(k).slot + classes_.at(l).slot + 1 <= static_cast<int>(w_);
}

std::optional<std::vector<Residue>> EndRingWindow::product(std::size_t k, std::size_t l) const
{
    return table_.at(k).at(l);
}

std::vector<std::vector<std::optional<std::vector<Residue>>>>
EndRingWindow::product_table(const std::vector<Matrix>& lifts) const
{
    std::vector<std::vector<std::optional<std::vector<Residue>>>> t(classes_.size());
    for (std::size_t k = 0; k < classes_.size(); ++k) {
        t[k].resize(classes_.size());
        const Matrix& th = lifts[k];
        for (std::size_t l = 0; l < classes_.size(); ++l) {
            if (!product_defined(k, l))
                continue;
            std::span<const Residue> v(classes_[l].vector.data(), th.cols());
            t[k][l] = full_coordinates(th.apply(v));
        }
    }
    return t;
}

std::vector<Residue> EndRingWindow::multiply(std::span<const Residue> a, std::span<const Residue> b) const
{
    const Residue p = f_->p;
    const std::size_t n = classes_.size();
    if (a.size() != n || b.size() != n)
        throw std::invalid_argument("multiply: coordinate vectors have the wrong length");
    std::vector<Residue> out(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        if (!a[k])
            continue;
        for (std::size_t l = 0; l < n; ++l) {
            if (!b[l] || !table_[k][l])
                continue;
            Residue c = static_cast<Residue>(std::uint64_t{a[k]} * b[l] % p);
            const auto& prod = *table_[k][l];
            for (std::size_t m = 0; m < n; ++m)
                out[m] = static_cast<Residue>((out[m] + std::uint64_t{c} * prod[m]) % p);
        }
    }
    return out;
}

bool EndRingWindow::products_lift_independent(std::string* witness) const
{
    std::mt19937_64 rng(seed_);
    std::vector<Matrix> other;
    for (std::size_t k = 0; k < classes_.size(); ++k) {
        LiftRequest req;
        req.source = f_;
        req.target = &f_->module;
        req.u = classes_[k].vector;
        req.source_slot = lift_source_slot(k);
        req.rng = &rng;
        req.graded_target = f_;
        req.degree = classes_[k].slot;
        other.push_back(lift_to_source(req));
    }
    auto t = product_table(other);
    for (std::size_t k = 0; k < classes_.size(); ++k)
        for (std::size_t l = 0; l < classes_.size(); ++l)
            if (t[k][l] != table_[k][l]) {
                if (witness)
                    *witness = "product c" + std::to_string(k) + "·c" + std::to_string(l) + " depends on the lift";
                return false;
            }
    return true;
}

bool EndRingWindow::products_respect_filtration(std::string* witness) const
{
    for (std::size_t k = 0; k < classes_.size(); ++k)
        for (std::size_t l = 0; l < classes_.size(); ++l) {
            if (!table_[k][l])
                continue;
            const int bound = classes_[k].slot + classes_[l].slot + 1;
            const auto& c = *table_[k][l];
            for (std::size_t m = 0; m < c.size(); ++m)
                if (c[m] && all_[m].slot > bound) {
                    if (witness)
                        *witness = "c" + std::to_string(k) + "·c" + std::to_string(l) + " reaches slot " +
                                   std::to_string(all_[m].slot);
                    return false;
                }
        }
    return true;
}

bool EndRingWindow::associative(std::string* witness) const
{
    const std::size_t n = classes_.size();
    const int w = static_cast<int>(w_);
    auto unit = [n](std::size_t k) {
        std::vector<Residue> e(n, 0);
        e[k] = 1;
        return e;
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                if (classes_[a].slot + classes_[b].slot + classes_[c].slot + 2 > w)
                    continue;
                auto ab = multiply(unit(a), unit(b));
                auto bc = multiply(unit(b), unit(c));
                if (multiply(ab, unit(c)) != multiply(unit(a), bc)) {
                    if (witness)
                        *witness = "(c" + std::to_string(a) + "c" + std::to_string(b) + ")c" + std::to_string(c) +
                                   " differs from c" + std::to_string(a) + "(c" + std::to_string(b) + "c" +
                                   std::to_string(c) + ")";
                    return false;
                }
            }
    return true;
}

bool EndRingWindow::unital(std::string* witness) const
{
    for (std::size_t l = 0; l < classes_.size(); ++l) {
        std::vector<Residue> e(all_.size(), 0);
        e[l] = 1;
        if (table_[0][l] != e || table_[l][0] != e) {
            if (witness)
                *witness = "unit does not fix c" + std::to_string(l);
            return false;
        }
    }
    return true;
}

bool EndRingWindow::lifts_commute(std::string* witness) const
{
    for (std::size_t k = 0; k < lifts_.size(); ++k)
        if (!lift_commutes(*f_, f_->module, lifts_[k])) {
            if (witness)
                *witness = "lift of c" + std::to_string(k) + " is not G-linear";
            return false;
        }
    return true;
}

std::optional<int> first_window_disagreement(const EndRingWindow& a, const EndRingWindow& b)
{
    const std::size_t w = std::min(a.window(), b.window());
    std::optional<int> bad;
    auto note = [&](int slot) {
        if (!bad || slot < *bad)
            bad = slot;
    };
    for (int d = -1; d <= static_cast<int>(w); ++d)
        if (a.graded_dim(d) != b.graded_dim(d))
            note(d);
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
        const auto& ca = a.classes()[k];
        const auto& cb = b.classes()[k];
        if (ca.slot > static_cast<int>(w))
            break;
        const std::size_t m = std::min(ca.vector.size(), cb.vector.size());
        bool same = ca.slot == cb.slot && std::equal(ca.vector.begin(), ca.vector.begin() + m, cb.vector.begin());
        same = same && is_zero_vec(std::span(ca.vector).subspan(m)) && is_zero_vec(std::span(cb.vector).subspan(m));
        if (!same)
            note(ca.slot);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            const int slot = a.classes()[k].slot + a.classes()[l].slot + 1;
            if (slot > static_cast<int>(w))
                continue;
            auto pa = a.product(k, l), pb = b.product(k, l);
            if (!pa || !pb) {
                note(slot);
                continue;
            }
            pa->resize(n);
            pb->resize(n);
            if (*pa != *pb)
                note(slot);
        }
    return bad;
}

// ---------------------------------------------------------------- the ideal I

std::optional<ProjPoint> choose_x_point(const PointVariety& v)
{
    const Residue p = v.p;
    const std::size_t r = v.r;
    auto in_span = [&](const ProjPoint& x, const std::vector<ProjPoint>& rows) {
        Matrix m(p, rows.size(), r);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < r; ++j)
                m(i, j) = rows[i].coords()[j];
        return lies_in(x, FlatMap(p, r, m));
    };
    for (const auto& x : ProjPoint::all(p, r)) {
        if (v.contains(x))
            continue;
        bool ok = true;
        for (std::size_t i = 0; ok && i < v.points.size(); ++i)
            for (std::size_t j = i + 1; ok && j < v.points.size(); ++j)
                ok = !in_span(x, {v.points[i], v.points[j]});
        if (!ok)
            continue;
        for (const auto& y : ProjPoint::all(p, r)) {
            if (y == x)
                continue;
            bool avoids = true;
            for (const auto& pt : v.points)
                avoids = avoids && !in_span(pt, {x, y});
            if (avoids)
                return x;
        }
    }
    return std::nullopt;
}

namespace {

IdealWindow ideal_from_span(const EndRingWindow& e, const Matrix& span, std::string criterion)
{
    Matrix inter = intersect_spans(e.class_matrix(), span);
    Matrix basis(e.fv().p, e.size(), inter.cols());
    for (std::size_t j = 0; j < inter.cols(); ++j)
        basis.set_column(j, e.coordinates(inter.column(j)));
    return {column_space_basis(basis), std::move(criterion)};
}

// Homogeneous pieces I ∩ span(classes of one slot), with the slot.
std::vector<std::pair<std::vector<Residue>, int>> homogeneous_basis(const EndRingWindow& e, const Matrix& ideal)
{
    std::vector<std::pair<std::vector<Residue>, int>> out;
    const auto& cls = e.classes();
    for (int d = -1; d <= static_cast<int>(e.window()); ++d) {
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < cls.size(); ++k)
            if (cls[k].slot == d)
                idx.push_back(k);
        if (idx.empty())
            continue;
        Matrix coord(e.fv().p, cls.size(), idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j)
            coord(idx[j], j) = 1;
        Matrix part = intersect_spans(ideal, coord);
        for (std::size_t j = 0; j < part.cols(); ++j)
            out.emplace_back(part.column(j), d);
    }
    return out;
}

std::vector<Residue> class_vector(const EndRingWindow& e, std::span<const Residue> coords)
{
    return e.class_matrix().apply(coords);
}

}  // namespace

IdealWindow ideal_x_power(const EndRingWindow& e, const ProjPoint& x)
{
    return ideal_from_span(e, x_power_span(e.fv().module, x), "x-power " + x.to_string());
}

IdealWindow ideal_restriction_kernel(const EndRingWindow& e, const FlatMap& sub)
{
    for (const auto& v : e.fv().variety.points)
        if (lies_in(v, sub))
            throw std::invalid_argument("restriction kernel: subalgebra meets the variety at " + v.to_string());
    FDModule res = restrict(e.fv().module, sub);
    return ideal_from_span(e, column_space_basis(res.norm()), "restriction kernel " + sub.to_string());
}

FlatMap random_avoiding_subalgebra(const PointVariety& v, std::mt19937_64& rng)
{
    const Residue p = v.p;
    const std::size_t r = v.r;
    std::uniform_int_distribution<std::size_t> rank_dist(1, r - 1);
    std::size_t s = rank_dist(rng);
    for (; s >= 1; --s)
        for (int attempt = 0; attempt < 256; ++attempt) {
            FlatMap f(p, r, random_matrix(p, s, r, rng));
            if (!is_flat(f))
                continue;
            bool avoids = true;
            for (const auto& pt : v.points)
                avoids = avoids && !lies_in(pt, f);
            if (avoids)
                return f;
        }
    throw std::runtime_error("no proper flat subalgebra avoids " + v.to_string());
}

bool same_subspace(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows())
        return false;
    const std::size_t ra = rank(a), rb = rank(b);
    return ra == rb && rank(Matrix::hstack(a, b)) == ra;
}

IdealReport analyze_ideal(const EndRingWindow& e, const IdealWindow& ideal, std::uint64_t seed)
{
    const Residue p = e.fv().p;
    const std::size_t n = e.size();
    const auto& cls = e.classes();
    const int w = static_cast<int>(e.window());
    IdealReport rep;
    const Matrix& basis = ideal.basis;
    rep.dim = rank(basis);
    EchelonBasis ib(p, n);
    ib.insert_columns(basis);

    std::vector<Residue> one(n, 0);
    one[0] = 1;
    rep.excludes_unit = !ib.contains(one);

    auto homog = homogeneous_basis(e, basis);
    rep.graded = homog.size() == rep.dim;
    if (!rep.graded)
        rep.witness = "ideal is not spanned by homogeneous classes";

    rep.codim_one_every_window = true;
    for (int d = -1; d <= w; ++d) {
        std::size_t c = 0;
        Matrix coord(p, n, 0);
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < n; ++k)
            if (cls[k].slot <= d)
                idx.push_back(k);
        Matrix sub(p, n, idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j)
            sub(idx[j], j) = 1;
        c = intersect_spans(basis, sub).cols();
        if (c + 1 != idx.size()) {
            rep.codim_one_every_window = false;
            if (rep.witness.empty())
                rep.witness = "window " + std::to_string(d) + ": ideal has codimension " +
                              std::to_string(idx.size() - c);
            break;
        }
    }

    // Closure: homogeneous ideal element times any class, both orders.
    rep.closed_under_products = true;
    for (const auto& [x, d] : homog) {
        for (std::size_t k = 0; k < n && rep.closed_under_products; ++k) {
            if (d + cls[k].slot + 1 > w)
                continue;
            std::vector<Residue> ek(n, 0);
            ek[k] = 1;
            for (const auto& prod : {e.multiply(x, ek), e.multiply(ek, x)})
                if (!ib.contains(prod)) {
                    rep.closed_under_products = false;
                    if (rep.witness.empty())
                        rep.witness = "ideal element " + vec_string(x) + " times c" + std::to_string(k) +
                                      " leaves the ideal";
                }
        }
    }

    rep.squares_to_zero = true;
    for (const auto& [x, dx] : homog)
        for (const auto& [y, dy] : homog) {
            if (dx + dy + 1 > w)
                continue;
            if (!is_zero_vec(e.multiply(x, y))) {
                if (rep.squares_to_zero && rep.witness.empty())
                    rep.witness = "product " + vec_string(x) + "·" + vec_string(y) + " is nonzero";
                rep.squares_to_zero = false;
            }
        }

    // Elements outside the ideal have two-sided inverses in the window.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Residue> dist(0, p - 1);
    rep.non_ideal_invertible = rep.excludes_unit;
    for (int trial = 0, found = 0; trial < 200 && found < 8 && rep.non_ideal_invertible; ++trial) {
        std::vector<Residue> x(n);
        for (auto& c : x)
            c = dist(rng);
        if (ib.contains(x))
            continue;
        ++found;
        Matrix left(p, n, n), right(p, n, n);
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<Residue> ek(n, 0);
            ek[k] = 1;
            left.set_column(k, e.multiply(x, ek));
            right.set_column(k, e.multiply(ek, x));
        }
        auto yl = LinearSolver(left).solve(one);
        auto yr = LinearSolver(right).solve(one);
        if (!yl || !yr) {
            rep.non_ideal_invertible = false;
            if (rep.witness.empty())
                rep.witness = "element " + vec_string(x) + " outside the ideal is not invertible";
        }
    }
    return rep;
}

DeepRadicalReport verify_deep_radical(const EndRingWindow& e, const IdealWindow& ideal, const ProjPoint& x)
{
    const TruncatedFV& f = e.fv();
    DeepRadicalReport rep;
    Matrix xa = linear_action(f.module, x.coords());
    Matrix xp = xa.power(f.p - 1);
    rep.x_power_squared_zero = (xp * xp).is_zero();
    Matrix b = column_space_basis(xp);
    EchelonBasis eb(f.p, f.dim());
    eb.insert_columns(b);

    auto homog = homogeneous_basis(e, ideal.basis);
    std::vector<Matrix> lifts;
    rep.all_lifts_in_x_power = true;
    for (const auto& [c, d] : homog) {
        auto v = class_vector(e, c);
        if (!eb.contains(v)) {
            rep.all_lifts_in_x_power = false;
            rep.witness = "ideal class " + vec_string(c) + " is not in X^{p-1}F";
            break;
        }
        LiftRequest req;
        req.source = &f;
        req.target = &f.module;
        req.u = v;
        req.source_slot = static_cast<int>(e.window()) - d - 1;
        req.constraint = &b;
        try {
            lifts.push_back(lift_to_source(req));
        } catch (const LiftError& err) {
            rep.all_lifts_in_x_power = false;
            rep.witness = "class " + vec_string(c) + ": " + err.what();
            break;
        }
    }
    rep.constrained_products_zero = rep.all_lifts_in_x_power;
    for (std::size_t i = 0; i < lifts.size() && rep.constrained_products_zero; ++i)
        for (std::size_t j = 0; j < homog.size(); ++j) {
            if (homog[i].second + homog[j].second + 1 > static_cast<int>(e.window()))
                continue;
            auto v = class_vector(e, homog[j].first);
            std::span<const Residue> head(v.data(), lifts[i].cols());
            if (!is_zero_vec(lifts[i].apply(head))) {
                rep.constrained_products_zero = false;
                rep.witness = "constrained product of ideal classes " + std::to_string(i) + "," +
                              std::to_string(j) + " is nonzero";
                break;
            }
        }
    return rep;
}

// ---------------------------------------------------------------- extension

ExtensionReport verify_extension(const TruncatedFV& f1, const TruncatedFV& f2, const ProjPoint& x,
                                 const FlatMap& beta, std::span<const Residue> phi_vector, int source_slot,
                                 bool constrain)
{
    ExtensionReport rep;
    rep.source_slot = static_cast<std::size_t>(std::max(source_slot, 0));
    const Residue p = f1.p;
    std::string why;
    if (f2.p != p || f2.r != f1.r || x.p() != p || x.dimension() != f1.r)
        throw std::invalid_argument("verify_extension: mismatched algebras");
    if (f1.variety.points.size() != 1)
        why = "source must have a one-point variety";
    else if (beta.source_rank() != 2 || !is_flat(beta))
        why = "beta must be a rank-2 flat map";
    else if (!lies_in(f1.variety.points[0], beta))
        why = "beta does not contain the source point";
    else if (!lies_in(x, beta))
        why = "beta does not contain X";
    else if (source_slot < 0 || source_slot > static_cast<int>(f1.top))
        why = "source slot out of range";
    for (const auto& v : f2.variety.points)
        if (why.empty() && lies_in(v, beta))
            why = "beta meets the target variety at " + v.to_string();
    Matrix b = x_power_span(f2.module, x);
    EchelonBasis eb(p, f2.dim());
    eb.insert_columns(b);
    if (why.empty()) {
        if (phi_vector.size() != f2.dim())
            why = "phi has the wrong length";
        else if (!eb.contains(phi_vector))
            why = "phi is not in X^{p-1}F_2";
        else
            for (const auto& a : f2.module.actions())
                if (!is_zero_vec(a.apply(phi_vector)))
                    why = "phi is not G-fixed";
    }
    if (!why.empty()) {
        rep.witness = why;
        return rep;
    }
    rep.hypotheses_hold = true;

    LiftRequest req;
    req.source = &f1;
    req.target = &f2.module;
    req.u.assign(phi_vector.begin(), phi_vector.end());
    req.source_slot = source_slot;
    if (constrain)
        req.constraint = &b;
    Matrix th;
    try {
        th = lift_to_source(req);
    } catch (const LiftError& err) {
        rep.witness = err.what();
        return rep;
    }
    rep.solvable = true;
    rep.commutes = lift_commutes(f1, f2.module, th);
    rep.image_in_x_power = true;
    for (std::size_t j = 0; j < th.cols() && rep.image_in_x_power; ++j)
        if (!eb.contains(th.column(j))) {
            rep.image_in_x_power = false;
            rep.witness = "lift column " + std::to_string(j) + " leaves X^{p-1}F_2";
        }
    if (!rep.commutes && rep.witness.empty())
        rep.witness = "lift is not G-linear";
    return rep;
}

// ---------------------------------------------------------------- negative Tate

bool NegativeTateReport::all_zero() const
{
    return std::all_of(restriction_ranks.begin(), restriction_ranks.end(), [](std::size_t r) { return r == 0; });
}

NegativeTateReport negative_tate_restriction(Residue p, std::size_t r, const std::vector<std::size_t>& coords,
                                             std::size_t max_m)
{
    std::vector<std::size_t> in = coords;
    std::sort(in.begin(), in.end());
    if (in.empty() || in.size() >= r || std::adjacent_find(in.begin(), in.end()) != in.end() || in.back() >= r)
        throw std::invalid_argument("negative Tate: need a proper nonempty set of distinct coordinates");
    if (max_m == 0)
        throw std::invalid_argument("negative Tate: max degree must be positive");
    std::vector<std::size_t> out_j;
    for (std::size_t i = 0; i < r; ++i)
        if (!std::binary_search(in.begin(), in.end(), i))
            out_j.push_back(i);
    const std::size_t s = in.size();

    NegativeTateReport rep;
    rep.rank = r;
    rep.subalgebra_coordinates = in;
    const std::size_t top = max_m - 1;
    TruncatedResolution pg = koszul_resolution(p, r, std::max<std::size_t>(top, 1));
    TruncatedResolution qh = koszul_resolution(p, s, std::max<std::size_t>(top, 1));
    const ElemAbelianAlgebra& ag = pg.algebra;
    const ElemAbelianAlgebra& ah = qh.algebra;
    const ElemAbelianAlgebra aj(p, r - s);
    const std::size_t dg = ag.dim();

    // Split each kG monomial into its H part and its J part.
    std::vector<std::size_t> mu_h(dg), mu_j(dg);
    for (std::size_t mu = 0; mu < dg; ++mu) {
        auto e = ag.exponents(mu);
        std::vector<std::size_t> eh, ej;
        for (auto i : in)
            eh.push_back(e[i]);
        for (auto i : out_j)
            ej.push_back(e[i]);
        mu_h[mu] = ah.monomial(eh);
        mu_j[mu] = aj.monomial(ej);
    }

    // psi_n : P_n↓H -> Q_n, kH-linear, lifting the identity of k.
    std::vector<Matrix> psi;
    Matrix psi0(p, qh.term_dim(0), pg.term_dim(0));
    for (std::size_t mu = 0; mu < dg; ++mu)
        if (mu_j[mu] == 0)
            psi0(mu_h[mu], mu) = 1;
    psi.push_back(psi0);
    for (std::size_t n = 1; n <= top; ++n) {
        LinearSolver ls(qh.boundary(n));
        Matrix m(p, qh.term_dim(n), pg.term_dim(n));
        for (std::size_t c = 0; c < pg.ranks[n]; ++c)
            for (std::size_t mu = 0; mu < dg; ++mu) {
                if (mu_h[mu] != 0)
                    continue;
                auto rhs = psi[n - 1].apply(pg.boundary(n).column(c * dg + mu));
                auto x = ls.solve(rhs);
                if (!x)
                    throw std::runtime_error("negative Tate: comparison map does not lift");
                for (std::size_t nu = 0; nu < dg; ++nu)
                    if (mu_j[nu] == mu_j[mu])
                        m.set_column(c * dg + nu, multiply_free(ah, mu_h[nu], *x));
            }
        psi.push_back(std::move(m));
    }

    rep.chain_map_ok = qh.augmentation * psi[0] == pg.augmentation;
    for (std::size_t n = 1; n <= top; ++n)
        rep.chain_map_ok = rep.chain_map_ok && qh.boundary(n) * psi[n] == psi[n - 1] * pg.boundary(n);
    for (std::size_t n = 0; n <= top; ++n)
        for (std::size_t k = 0; k < s; ++k) {
            Matrix xg = AlgebraElement::generator(ag, in[k]).multiplication_matrix();
            Matrix xh = AlgebraElement::generator(ah, k).multiplication_matrix();
            Matrix lg = Matrix::kron(Matrix::identity(p, pg.ranks[n]), xg);
            Matrix lh = Matrix::kron(Matrix::identity(p, qh.ranks[n]), xh);
            rep.chain_map_ok = rep.chain_map_ok && psi[n] * lg == lh * psi[n];
        }

    // Degree -m: Hom_kG(k, P_{m-1}) is spanned by N_G times each generator.
    for (std::size_t m = 1; m <= max_m; ++m) {
        const std::size_t n = m - 1;
        Matrix img(p, qh.term_dim(n), pg.ranks[n]);
        for (std::size_t c = 0; c < pg.ranks[n]; ++c)
            img.set_column(c, psi[n].column(c * dg + ag.top_monomial()));
        rep.degrees.push_back(m);
        rep.group_dims.push_back(pg.ranks[n]);
        rep.restriction_ranks.push_back(rank(img));
    }

    // Degree 0 control: the identity of k stays stably nonzero on H.
    FDModule kh = restrict(FDModule::trivial(p, r), FlatMap::coordinate(p, r, in));
    StableHomSpace sh = stable_hom(kh, kh);
    EchelonBasis eb(p, 1);
    eb.insert_columns(sh.phom);
    std::vector<Residue> id{1};
    rep.control_nonzero = !eb.contains(id);
    return rep;
}

// ---------------------------------------------------------------- zeta localization

bool ZetaReport::all_injective() const
{
    for (std::size_t n = 0; n < ranks.size(); ++n)
        if (ranks[n] != dims[n])
            return false;
    return true;
}

bool ZetaReport::eventually_zero() const
{
    return (!ranks.empty() && ranks.back() == 0) || (!square_ranks.empty() && square_ranks.back() == 0);
}

ZetaReport zeta_localized_ext(const FDModule& m, const FDModule& n, std::span<const Residue> zeta, std::size_t d,
                              std::size_t n_max)
{
    if (d == 0 || n_max == 0)
        throw std::invalid_argument("zeta: degree and range must be positive");
    ZetaReport rep;
    rep.degree = d;
    const std::size_t top = n_max * d;
    CochainComplex cx = ext_complex(m, n, top);
    ChainMap z = yoneda_lift(cx.res, zeta, d, (n_max - 1) * d);
    for (std::size_t j = 0; j <= top; ++j)
        rep.all_dims.push_back(cx.cohomology_dim(j));
    for (std::size_t k = 0; k <= n_max; ++k)
        rep.dims.push_back(rep.all_dims[k * d]);
    std::vector<Matrix> phi;
    for (std::size_t k = 0; k < n_max; ++k) {
        phi.push_back(pullback_cochains(cx.res.algebra, z.images[k * d], cx.monomial_actions));
        rep.ranks.push_back(induced_rank(cx, k * d, (k + 1) * d, phi.back()));
    }
    for (std::size_t k = 0; k + 1 < n_max; ++k)
        rep.square_ranks.push_back(induced_rank(cx, k * d, (k + 2) * d, phi[k + 1] * phi[k]));
    return rep;
}

std::vector<Residue> ext_generator_cocycle(Residue p, std::size_t r, std::size_t d, std::size_t which)
{
    const std::size_t n = composition_count(d, r);
    if (which >= n)
        throw std::invalid_argument("ext generator index out of range");
    std::vector<Residue> z(n, 0);
    z[which] = 1 % p;
    return z;
}

// ---------------------------------------------------------------- non-finite generation

bool GrowthReport::strictly_increasing() const
{
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].window_dim <= points[i - 1].window_dim)
            return false;
    return points.size() >= 2;
}

std::size_t tensor_window_dim(const TruncatedFV& f, const FDModule& m, std::size_t w)
{
    FDModule full = tensor(f.module, m);
    Matrix phom = projective_homs(m, full);
    Matrix hw = hom_space(m, tensor(f.slice(static_cast<int>(w)), m));
    // Zero-pad: the prefix of F⊗M is f-major, so it is a leading block of rows.
    Matrix padded(f.p, full.dim() * m.dim(), hw.cols());
    for (std::size_t i = 0; i < hw.rows(); ++i)
        for (std::size_t j = 0; j < hw.cols(); ++j)
            padded(i, j) = hw(i, j);
    const std::size_t rp = rank(phom);
    return rank(Matrix::hstack(padded, phom)) - rp;
}

GrowthReport nonfg_growth(const PointVariety& v, const FlatMap& sub, const std::vector<std::size_t>& tops,
                          const FDModule* module_override)
{
    if (tops.empty())
        throw std::invalid_argument("nonfg: need at least one truncation degree");
    const Residue p = v.p;
    if (!module_override &&
        std::none_of(v.points.begin(), v.points.end(), [&](const ProjPoint& pt) { return lies_in(pt, sub); }))
        throw std::invalid_argument("nonfg: the subalgebra must pass through a point of V");
    FDModule m = module_override ? *module_override : induce(FDModule::trivial(p, sub.source_rank()), sub);
    GrowthReport rep;
    for (auto n : tops) {
        if (n < 2)
            throw std::invalid_argument("nonfg: truncation degree must be at least 2");
        TruncatedFV f = build_fv_multi(v, n);
        rep.points.push_back({n, n - 2, tensor_window_dim(f, m, n - 2)});
    }

    // Action of the End(k) window of the largest truncation on Hom̲(M, F⊗M).
    const std::size_t n = *std::max_element(tops.begin(), tops.end());
    TruncatedFV f = build_fv_multi(v, n);
    EndRingWindow e(f, n - 2);
    auto x = choose_x_point(v);
    if (!x)
        throw std::runtime_error("nonfg: no admissible X point");
    IdealWindow ideal = ideal_x_power(e, *x);
    FDModule full = tensor(f.module, m);
    Matrix phom = projective_homs(m, full);
    EchelonBasis eb(p, full.dim() * m.dim());
    eb.insert_columns(phom);
    const Matrix idm = Matrix::identity(p, m.dim());
    std::map<int, Matrix> domains;

    // Whether theta ⊗ 1 sends some map M -> F_{≤s}⊗M outside PHom.
    auto acts_nonzero = [&](const Matrix& theta, int s) {
        auto it = domains.find(s);
        if (it == domains.end())
            it = domains.emplace(s, hom_space(m, tensor(f.slice(s), m))).first;
        Matrix big = Matrix::kron(theta, idm);
        for (std::size_t j = 0; j < it->second.cols(); ++j) {
            Matrix g = vec_to_map(it->second.column(j), theta.cols() * m.dim(), m.dim(), p);
            if (!eb.contains(map_to_vec(big * g)))
                return true;
        }
        return false;
    };

    std::size_t image = acts_nonzero(e.lift(0), e.lift_source_slot(0)) ? 1 : 0;
    rep.ideal_acts_as_zero = true;
    for (const auto& [c, d] : homogeneous_basis(e, ideal.basis)) {
        LiftRequest req;
        req.source = &f;
        req.target = &f.module;
        req.u = class_vector(e, c);
        req.source_slot = static_cast<int>(e.window()) - d - 1;
        if (acts_nonzero(lift_to_source(req), req.source_slot)) {
            rep.ideal_acts_as_zero = false;
            ++image;
        }
    }
    rep.action_image_dim = image;
    return rep;
}

}  // namespace fv
