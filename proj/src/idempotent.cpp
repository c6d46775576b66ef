#include "fv/idempotent.hpp"

#include <algorithm>
#include <stdexcept>

namespace fv {

PointVariety::PointVariety(Residue p_, std::size_t r_, std::vector<ProjPoint> pts) : p(p_), r(r_), points(std::move(pts))
{
    if (points.empty())
        throw std::invalid_argument("point variety must be nonempty");
    for (const auto& v : points)
        if (v.p() != p || v.dimension() != r)
            throw std::invalid_argument("point " + v.to_string() + " is not in P^(r-1)(F_p)");
    std::sort(points.begin(), points.end());
    if (std::adjacent_find(points.begin(), points.end()) != points.end())
        throw std::invalid_argument("point variety has repeated points");
}

PointVariety PointVariety::parse(Residue p, std::size_t r, const std::vector<std::string>& pts)
{
    std::vector<ProjPoint> out;
    for (const auto& s : pts) {
        ProjPoint v = ProjPoint::parse(p, s);
        if (v.dimension() != r)
            throw std::invalid_argument("point " + s + " does not have " + std::to_string(r) + " coordinates");
        out.push_back(v);
    }
    return PointVariety(p, r, std::move(out));
}

bool PointVariety::contains(const ProjPoint& v) const
{
    return std::find(points.begin(), points.end(), v) != points.end();
}

std::string PointVariety::to_string() const
{
    std::string s = "{";
    for (std::size_t i = 0; i < points.size(); ++i)
        s += (i ? "," : "") + points[i].to_string();
    return s + "}";
}

std::size_t slot_multiplicity(Residue p, std::size_t j) { return j % 2 == 0 ? p - 1 : 1; }

std::size_t expected_fv_dim(Residue p, std::size_t r, std::size_t points, std::size_t top)
{
    std::size_t ph = 1;
    for (std::size_t i = 0; i + 1 < r; ++i)
        ph *= p;
    std::size_t per = 0;
    for (std::size_t j = 0; j <= top; ++j)
        per += slot_multiplicity(p, j) * composition_count(j, r - 1) * ph;
    return 1 + points * per;
}

namespace {

// One piece in local coordinates: index 0 is k, then slot-major copies of P_j.
struct LocalPiece {
    std::vector<Matrix> x;              // X_1..X_r actions
    std::vector<int> slot_of;
    std::vector<FVGenerator> generators;
};

LocalPiece build_local(const ProjPoint& v, const Frame& frame, const TruncatedResolution& res, std::size_t top)
{
    const Residue p = v.p();
    const std::size_t r = v.dimension();
    const std::size_t dh = res.algebra.dim();
    const PrimeField fp(p);

    // start[j][q-1] = local index of copy q of P_j
    std::vector<std::vector<std::size_t>> start(top + 1);
    LocalPiece lp;
    lp.slot_of.push_back(-1);
    std::size_t next = 1;
    for (std::size_t j = 0; j <= top; ++j)
        for (std::size_t q = 1; q <= slot_multiplicity(p, j); ++q) {
            start[j].push_back(next);
            for (std::size_t t = 0; t < res.term_dim(j); ++t)
                lp.slot_of.push_back(static_cast<int>(j));
            next += res.term_dim(j);
        }
    const std::size_t dim = next;

    auto put_block = [&](Matrix& m, std::size_t r0, std::size_t c0, const Matrix& b, Residue scale) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t k = 0; k < b.cols(); ++k)
                if (b(i, k))
                    m(r0 + i, c0 + k) = fp.add(m(r0 + i, c0 + k), fp.mul(b(i, k), scale));
    };

    const Residue minus = p - 1;
    Matrix z(p, dim, dim);
    for (std::size_t j = 0; j <= top; ++j) {
        const std::size_t mult = slot_multiplicity(p, j);
        if (j % 2 == 1) {
            // m in P_j maps to -(∂m, 0, ..., 0)
            put_block(z, start[j - 1][0], start[j][0], res.boundary(j), minus);
            continue;
        }
        for (std::size_t q = 1; q < mult; ++q)
            put_block(z, start[j][q], start[j][q - 1], Matrix::identity(p, res.term_dim(j)), 1);
        const std::size_t last = start[j][mult - 1];
        if (j == 0)
            put_block(z, 0, last, res.augmentation, minus);
        else
            put_block(z, start[j - 1][0], last, res.boundary(j), minus);
    }

    // Y_k acts on every copy of P_j by multiplication with t_k.
    std::vector<Matrix> w{z};
    const std::size_t s = r - 1;
    for (std::size_t k = 0; k < s; ++k) {
        std::vector<std::size_t> e(s, 0);
        e[k] = 1;
        const std::size_t mu = res.algebra.monomial(e);
        Matrix y(p, dim, dim);
        for (std::size_t j = 0; j <= top; ++j)
            for (std::size_t st : start[j])
                for (std::size_t c = 0; c < res.ranks[j]; ++c)
                    for (std::size_t a = 0; a < dh; ++a) {
                        std::size_t t = res.algebra.multiply_monomials(mu, a);
                        if (t != ElemAbelianAlgebra::npos)
                            y(st + c * dh + t, st + c * dh + a) = 1;
                    }
        w.push_back(std::move(y));
    }

    Matrix tinv = inverse_change_of_variables(frame.stacked());
    for (std::size_t i = 0; i < r; ++i) {
        Matrix xi(p, dim, dim);
        for (std::size_t j = 0; j < r; ++j)
            if (tinv(i, j))
                xi = xi + w[j].scaled(tinv(i, j));
        lp.x.push_back(std::move(xi));
    }

    // Lifting order: slots ascending, even-slot copies from the last position down.
    for (std::size_t j = 0; j <= top; ++j) {
        const std::size_t mult = slot_multiplicity(p, j);
        for (std::size_t q = mult; q >= 1; --q)
            for (std::size_t c = 0; c < res.ranks[j]; ++c)
                lp.generators.push_back(FVGenerator{0, j, q, c, start[j][q - 1] + c * dh});
    }
    return lp;
}

}  // namespace

TruncatedFV build_fv_multi(const PointVariety& var, std::size_t top, const FVOptions& opts)
{
    if (var.r < 2)
        throw std::invalid_argument("F_V needs rank r >= 2");
    const Residue p = var.p;
    const std::size_t r = var.r;
    TruncatedFV f;
    f.p = p;
    f.r = r;
    f.top = top;
    f.variety = var;

    std::vector<LocalPiece> locals;
    for (const auto& v : var.points) {
        FVPiece piece;
        piece.point = v;
        piece.frame = frame_from_point(v);
        piece.resolution = koszul_resolution(p, r - 1, top);
        if (opts.corrupt_boundary && top >= 2) {
            auto& res = piece.resolution;
            // Zero the first nonzero entry of ∂_2 and re-expand.
            for (std::size_t i = 0; i < res.images[2].rows(); ++i)
                if (res.images[2](i, 0)) {
                    res.images[2](i, 0) = 0;
                    break;
                }
            res.boundaries[2] = expand_free_map(res.algebra, res.images[2]);
        }
        locals.push_back(build_local(v, piece.frame, piece.resolution, top));
        f.pieces.push_back(std::move(piece));
    }

    // Global order: k, then for each slot every piece's block of that slot.
    f.slot_of.push_back(-1);
    f.piece_of.push_back(0);
    for (auto& pc : f.pieces)
        pc.local_to_global.assign(1, 0);
    for (std::size_t i = 0; i < locals.size(); ++i)
        f.pieces[i].local_to_global.resize(locals[i].slot_of.size());
    for (std::size_t j = 0; j <= top; ++j)
        for (std::size_t i = 0; i < locals.size(); ++i)
            for (std::size_t a = 0; a < locals[i].slot_of.size(); ++a)
                if (locals[i].slot_of[a] == static_cast<int>(j)) {
                    f.pieces[i].local_to_global[a] = f.slot_of.size();
                    f.slot_of.push_back(static_cast<int>(j));
                    f.piece_of.push_back(i);
                }
    const std::size_t dim = f.slot_of.size();

    std::vector<Matrix> x(r, Matrix(p, dim, dim));
    for (std::size_t i = 0; i < locals.size(); ++i) {
        const auto& map = f.pieces[i].local_to_global;
        for (std::size_t k = 0; k < r; ++k) {
            const Matrix& lx = locals[i].x[k];
            for (std::size_t a = 0; a < lx.rows(); ++a)
                for (std::size_t b = 0; b < lx.cols(); ++b)
                    if (lx(a, b))
                        x[k](map[a], map[b]) = (x[k](map[a], map[b]) + lx(a, b)) % p;
        }
        for (auto g : locals[i].generators) {
            g.piece = i;
            g.index = map[g.index];
            f.pieces[i].generators.push_back(g);
        }
    }
    f.module = FDModule(p, r, dim, std::move(x));

    for (auto& pc : f.pieces) {
        pc.z = f.module.act(pc.frame.z.image(0));
        for (std::size_t k = 0; k < pc.frame.h.source_rank(); ++k)
            pc.y.push_back(f.module.act(pc.frame.h.image(k)));
    }
    return f;
}

TruncatedFV build_fv_point(const ProjPoint& v, std::size_t top, const FVOptions& opts)
{
    return build_fv_multi(PointVariety(v.p(), v.dimension(), {v}), top, opts);
}

std::size_t TruncatedFV::prefix_dim(int slot) const
{
    return static_cast<std::size_t>(
        std::count_if(slot_of.begin(), slot_of.end(), [slot](int s) { return s <= slot; }));
}

std::vector<Residue> TruncatedFV::tau() const
{
    std::vector<Residue> t(dim(), 0);
    t[0] = 1;
    return t;
}

FDModule TruncatedFV::slice(int slot) const
{
    const std::size_t n = prefix_dim(slot);
    std::vector<Matrix> acts;
    for (const auto& a : module.actions())
        acts.push_back(a.block(0, 0, n, n));
    return {p, r, n, std::move(acts)};
}

Matrix piece_embedding(const TruncatedFV& f, std::size_t piece)
{
    const auto& map = f.pieces.at(piece).local_to_global;
    Matrix nu(f.p, f.dim(), map.size());
    for (std::size_t a = 0; a < map.size(); ++a)
        nu(map[a], a) = 1;
    return nu;
}

RestrictionReport restrict_fv(const TruncatedFV& f, const FlatMap& sub)
{
    if (!is_flat(sub))
        throw std::invalid_argument("restrict_fv: map is not flat");
    if (sub.source_rank() >= f.r)
        throw std::invalid_argument("restrict_fv: subalgebra must be proper");
    FDModule res = restrict(f.module, sub);
    RestrictionReport rep;
    rep.dim = res.dim();
    rep.subalgebra_rank = sub.source_rank();
    rep.free_rank = rank(res.norm());
    std::size_t ps = 1;
    for (std::size_t i = 0; i < sub.source_rank(); ++i)
        ps *= f.p;
    rep.nonfree_dim = rep.dim - ps * rep.free_rank;
    for (const auto& v : f.variety.points)
        rep.meets_variety |= lies_in(v, sub);
    return rep;
}

std::string fv_invariant_violation(const TruncatedFV& f)
{
    if (f.dim() != expected_fv_dim(f.p, f.r, f.variety.points.size(), f.top))
        return "dimension differs from the slot formula";
    auto msg = f.module.invariant_violation();
    if (!msg.empty())
        return msg;
    for (const auto& pc : f.pieces) {
        if (!pc.z.power(f.p).is_zero())
            return "Z^p is nonzero for point " + pc.point.to_string();
        auto zt = pc.z.column(0);
        if (std::any_of(zt.begin(), zt.end(), [](Residue x) { return x != 0; }))
            return "Z does not kill tau(1)";
    }
    // Slot filtration: no action raises the slot.
    for (const auto& a : f.module.actions())
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                if (a(i, j) && f.slot_of[i] > f.slot_of[j])
                    return "an action raises the slot degree";
    return {};
}

}  // namespace fv
