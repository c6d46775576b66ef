#include "fv/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace fv {

ElemAbelianAlgebra::ElemAbelianAlgebra(Residue p, std::size_t r) : p_(p), r_(r), dim_(1)
{
    if (!is_prime(p))
        throw std::invalid_argument("algebra characteristic must be prime");
    for (std::size_t i = 0; i < r; ++i)
        dim_ *= p;
}

std::vector<std::size_t> ElemAbelianAlgebra::exponents(std::size_t m) const
{
    std::vector<std::size_t> e(r_);
    for (std::size_t i = 0; i < r_; ++i) {
        e[i] = m % p_;
        m /= p_;
    }
    return e;
}

std::size_t ElemAbelianAlgebra::monomial(const std::vector<std::size_t>& e) const
{
    if (e.size() != r_)
        throw std::invalid_argument("exponent vector length mismatch");
    std::size_t m = 0, place = 1;
    for (std::size_t i = 0; i < r_; ++i) {
        if (e[i] >= p_)
            return npos;
        m += e[i] * place;
        place *= p_;
    }
    return m;
}

std::size_t ElemAbelianAlgebra::multiply_monomials(std::size_t a, std::size_t b) const
{
    std::size_t m = 0, place = 1;
    for (std::size_t i = 0; i < r_; ++i) {
        std::size_t e = a % p_ + b % p_;
        if (e >= p_)
            return npos;
        m += e * place;
        place *= p_;
        a /= p_;
        b /= p_;
    }
    return m;
}

std::size_t ElemAbelianAlgebra::degree(std::size_t m) const
{
    std::size_t d = 0;
    for (std::size_t i = 0; i < r_; ++i) {
        d += m % p_;
        m /= p_;
    }
    return d;
}

// ---------------------------------------------------------------- AlgebraElement

AlgebraElement::AlgebraElement(const ElemAbelianAlgebra& alg) : alg_(alg), coeffs_(alg.dim(), 0) {}

AlgebraElement AlgebraElement::one(const ElemAbelianAlgebra& alg)
{
    AlgebraElement e(alg);
    e.coeffs_[0] = 1;
    return e;
}

AlgebraElement AlgebraElement::generator(const ElemAbelianAlgebra& alg, std::size_t i)
{
    if (i >= alg.rank())
        throw std::out_of_range("generator index out of range");
    std::vector<std::size_t> e(alg.rank(), 0);
    e[i] = 1;
    AlgebraElement x(alg);
    x.coeffs_[alg.monomial(e)] = 1 % alg.p();
    return x;
}

AlgebraElement AlgebraElement::linear(const ElemAbelianAlgebra& alg, std::span<const Residue> coeffs)
{
    if (coeffs.size() != alg.rank())
        throw std::invalid_argument("linear form length mismatch");
    AlgebraElement x(alg);
    std::vector<std::size_t> e(alg.rank(), 0);
    for (std::size_t i = 0; i < alg.rank(); ++i) {
        e[i] = 1;
        x.coeffs_[alg.monomial(e)] = coeffs[i] % alg.p();
        e[i] = 0;
    }
    return x;
}

void AlgebraElement::set_coefficient(std::size_t m, std::int64_t c)
{
    coeffs_.at(m) = PrimeField(alg_.p()).reduce(c);
}

bool AlgebraElement::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](Residue x) { return x == 0; });
}

static void require_same_algebra(const AlgebraElement& a, const AlgebraElement& b)
{
    if (!(a.algebra() == b.algebra()))
        throw std::invalid_argument("algebra element modulus/rank mismatch");
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const
{
    require_same_algebra(*this, o);
    AlgebraElement out(alg_);
    for (std::size_t m = 0; m < coeffs_.size(); ++m)
        out.coeffs_[m] = (coeffs_[m] + o.coeffs_[m]) % alg_.p();
    return out;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const
{
    require_same_algebra(*this, o);
    AlgebraElement out(alg_);
    for (std::size_t m = 0; m < coeffs_.size(); ++m)
        out.coeffs_[m] = (coeffs_[m] + alg_.p() - o.coeffs_[m]) % alg_.p();
    return out;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const
{
    require_same_algebra(*this, o);
    const Residue p = alg_.p();
    AlgebraElement out(alg_);
    for (std::size_t a = 0; a < coeffs_.size(); ++a) {
        if (!coeffs_[a])
            continue;
        for (std::size_t b = 0; b < o.coeffs_.size(); ++b) {
            if (!o.coeffs_[b])
                continue;
            std::size_t m = alg_.multiply_monomials(a, b);
            if (m == ElemAbelianAlgebra::npos)
                continue;
            out.coeffs_[m] = static_cast<Residue>((out.coeffs_[m] + std::uint64_t{coeffs_[a]} * o.coeffs_[b]) % p);
        }
    }
    return out;
}

AlgebraElement AlgebraElement::pow(std::size_t e) const
{
    AlgebraElement out = one(alg_);
    for (std::size_t k = 0; k < e; ++k)
        out = out * *this;
    return out;
}

bool AlgebraElement::operator==(const AlgebraElement& o) const
{
    return alg_ == o.alg_ && coeffs_ == o.coeffs_;
}

Matrix AlgebraElement::multiplication_matrix() const
{
    const std::size_t n = alg_.dim();
    Matrix m(alg_.p(), n, n);
    for (std::size_t a = 0; a < n; ++a) {
        if (!coeffs_[a])
            continue;
        for (std::size_t b = 0; b < n; ++b) {
            std::size_t t = alg_.multiply_monomials(a, b);
            if (t != ElemAbelianAlgebra::npos)
                m(t, b) = (m(t, b) + coeffs_[a]) % alg_.p();
        }
    }
    return m;
}

std::string AlgebraElement::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t m = 0; m < coeffs_.size(); ++m) {
        if (!coeffs_[m])
            continue;
        if (!first)
            os << " + ";
        first = false;
        auto e = alg_.exponents(m);
        bool unit_monomial = std::all_of(e.begin(), e.end(), [](std::size_t x) { return x == 0; });
        if (coeffs_[m] != 1 || unit_monomial)
            os << coeffs_[m];
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i])
                continue;
            os << "X" << (i + 1);
            if (e[i] > 1)
                os << "^" << e[i];
        }
    }
    return first ? "0" : os.str();
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) { return a * b; }

// ---------------------------------------------------------------- FlatMap

FlatMap::FlatMap(Residue p, std::size_t r, Matrix linear) : p_(p), r_(r), linear_(std::move(linear))
{
    if (linear_.rows() > 0 && linear_.cols() != r)
        throw std::invalid_argument("flat map linear part must have r columns");
    if (linear_.rows() == 0)
        linear_ = Matrix(p, 0, r);
    if (linear_.modulus() != p)
        throw std::invalid_argument("flat map modulus mismatch");
}

namespace {

std::string strip(const std::string& s)
{
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out.push_back(c);
    return out;
}

std::vector<std::int64_t> parse_linear_form(const std::string& text, std::size_t r)
{
    std::vector<std::int64_t> coeffs(r, 0);
    std::size_t i = 0;
    if (text.empty())
        throw std::invalid_argument("empty linear form");
    while (i < text.size()) {
        std::int64_t sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        }
        std::int64_t c = 1;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            c = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                c = c * 10 + (text[i++] - '0');
            if (i < text.size() && text[i] == '*')
                ++i;
        }
        if (i >= text.size() || (text[i] != 'X' && text[i] != 'x'))
            throw std::invalid_argument("expected generator X<i> in '" + text + "'");
        ++i;
        std::size_t idx = 0;
        bool any = false;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            idx = idx * 10 + static_cast<std::size_t>(text[i++] - '0');
            any = true;
        }
        if (!any || idx == 0 || idx > r)
            throw std::invalid_argument("generator index out of range in '" + text + "'");
        coeffs[idx - 1] += sign * c;
        if (i < text.size() && text[i] != '+' && text[i] != '-')
            throw std::invalid_argument("unexpected character in '" + text + "'");
    }
    return coeffs;
}

}  // namespace

FlatMap FlatMap::parse(Residue p, std::size_t r, const std::string& text)
{
    std::string s = strip(text);
    std::vector<std::vector<std::int64_t>> rows;
    if (!s.empty()) {
        std::size_t start = 0;
        while (true) {
            std::size_t comma = s.find(',', start);
            rows.push_back(parse_linear_form(s.substr(start, comma - start), r));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
    }
    if (rows.empty())
        return FlatMap(p, r, Matrix(p, 0, r));
    return FlatMap(p, r, Matrix::from_rows(p, rows));
}

FlatMap FlatMap::coordinate(Residue p, std::size_t r, const std::vector<std::size_t>& indices)
{
    Matrix m(p, indices.size(), r);
    for (std::size_t j = 0; j < indices.size(); ++j)
        m(j, indices.at(j)) = 1 % p;
    return FlatMap(p, r, m);
}

std::vector<Residue> FlatMap::row(std::size_t j) const
{
    auto rw = linear_.row(j);
    return {rw.begin(), rw.end()};
}

AlgebraElement FlatMap::image(std::size_t j) const
{
    auto rw = row(j);
    return AlgebraElement::linear(ElemAbelianAlgebra(p_, r_), rw);
}

std::string FlatMap::to_string() const
{
    std::ostringstream os;
    for (std::size_t j = 0; j < source_rank(); ++j) {
        if (j)
            os << ", ";
        bool first = true;
        for (std::size_t i = 0; i < r_; ++i) {
            Residue c = linear_(j, i);
            if (!c)
                continue;
            if (!first)
                os << "+";
            first = false;
            if (c != 1)
                os << c;
            os << "X" << (i + 1);
        }
        if (first)
            os << "0";
    }
    return os.str();
}

bool is_flat(const FlatMap& f)
{
    return f.source_rank() <= f.ambient_rank() && rank(f.linear()) == f.source_rank();
}

FlatMap complement_flat(const FlatMap& f)
{
    if (!is_flat(f))
        throw std::invalid_argument("complement_flat: map is not flat");
    auto ech = row_reduce(f.linear());
    std::vector<char> pivot(f.ambient_rank(), 0);
    for (auto c : ech.pivots)
        pivot[c] = 1;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < f.ambient_rank(); ++i)
        if (!pivot[i])
            rest.push_back(i);
    return FlatMap::coordinate(f.p(), f.ambient_rank(), rest);
}

FlatMap stack(const FlatMap& f, const FlatMap& g)
{
    if (f.p() != g.p() || f.ambient_rank() != g.ambient_rank())
        throw std::invalid_argument("stack: incompatible flat maps");
    return FlatMap(f.p(), f.ambient_rank(), Matrix::vstack(f.linear(), g.linear()));
}

// ---------------------------------------------------------------- ProjPoint

ProjPoint::ProjPoint(Residue p, std::vector<Residue> coords) : p_(p), coords_(std::move(coords))
{
    PrimeField f(p);
    std::size_t lead = coords_.size();
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        coords_[i] %= p;
        if (coords_[i] && lead == coords_.size())
            lead = i;
    }
    if (lead == coords_.size())
        throw std::invalid_argument("projective point with all coordinates zero");
    Residue inv = f.inv(coords_[lead]);
    for (auto& c : coords_)
        c = f.mul(c, inv);
}

ProjPoint ProjPoint::parse(Residue p, const std::string& text)
{
    std::string s = strip(text);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument("point must look like [a:b:...]: '" + text + "'");
    s = s.substr(1, s.size() - 2);
    std::vector<Residue> coords;
    PrimeField f(p);
    std::size_t start = 0;
    while (true) {
        std::size_t colon = s.find(':', start);
        std::string tok = s.substr(start, colon - start);
        if (tok.empty())
            throw std::invalid_argument("empty coordinate in '" + text + "'");
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size())
            throw std::invalid_argument("bad coordinate '" + tok + "'");
        coords.push_back(f.reduce(v));
        if (colon == std::string::npos)
            break;
        start = colon + 1;
    }
    return ProjPoint(p, coords);
}

std::vector<ProjPoint> ProjPoint::all(Residue p, std::size_t r)
{
    std::vector<ProjPoint> out;
    // Leading 1 at position `lead`, zeros before it, anything after.
    for (std::size_t lead = 0; lead < r; ++lead) {
        std::size_t tail = r - lead - 1;
        std::size_t count = 1;
        for (std::size_t i = 0; i < tail; ++i)
            count *= p;
        for (std::size_t code = 0; code < count; ++code) {
            std::vector<Residue> c(r, 0);
            c[lead] = 1;
            std::size_t x = code;
            for (std::size_t i = r; i-- > lead + 1;) {
                c[i] = static_cast<Residue>(x % p);
                x /= p;
            }
            out.emplace_back(p, c);
        }
    }
    std::sort(out.begin(), out.end(), [](const ProjPoint& a, const ProjPoint& b) {
        return a.coords() > b.coords();
    });
    return out;
}

std::string ProjPoint::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < coords_.size(); ++i)
        os << (i ? ":" : "") << coords_[i];
    os << ']';
    return os.str();
}

bool lies_in(const ProjPoint& v, const FlatMap& f)
{
    if (v.dimension() != f.ambient_rank())
        throw std::invalid_argument("lies_in: dimension mismatch");
    Matrix row = Matrix(f.p(), 1, v.dimension());
    for (std::size_t i = 0; i < v.dimension(); ++i)
        row(0, i) = v.coords()[i];
    return rank(Matrix::vstack(f.linear(), row)) == rank(f.linear());
}

Matrix Frame::stacked() const { return Matrix::vstack(z.linear(), h.linear()); }

Frame frame_from_point(const ProjPoint& v)
{
    Matrix row(v.p(), 1, v.dimension());
    for (std::size_t i = 0; i < v.dimension(); ++i)
        row(0, i) = v.coords()[i];
    FlatMap z(v.p(), v.dimension(), row);
    return Frame{z, complement_flat(z)};
}

Matrix inverse_change_of_variables(const Matrix& change)
{
    if (change.rows() != change.cols())
        throw std::invalid_argument("change of variables must be square");
    auto inv = solve(change, Matrix::identity(change.modulus(), change.rows()));
    if (!inv || rank(change) != change.rows())
        throw std::invalid_argument("change of variables is not invertible");
    return *inv;
}

}  // namespace fv
