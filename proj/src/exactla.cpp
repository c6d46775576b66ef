#include "fv/exactla.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fv {

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

PrimeField::PrimeField(Residue p) : p_(p)
{
    if (!is_prime(p))
        throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
    if (p > 65521)
        throw std::invalid_argument("modulus too large for dense residue tables");
    inverses_.assign(p, 0);
    for (Residue a = 1; a < p; ++a)
        inverses_[a] = pow(a, p - 2);
}

Residue PrimeField::reduce(std::int64_t x) const
{
    std::int64_t m = x % static_cast<std::int64_t>(p_);
    return static_cast<Residue>(m < 0 ? m + p_ : m);
}

Residue PrimeField::inv(Residue a) const
{
    if (a == 0 || a >= p_)
        throw std::domain_error("no inverse of zero");
    if (!inverses_.empty())
        return inverses_[a];
    return pow(a, p_ - 2);
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const
{
    std::uint64_t result = 1 % p_, base = a % p_;
    while (e) {
        if (e & 1)
            result = result * base % p_;
        base = base * base % p_;
        e >>= 1;
    }
    return static_cast<Residue>(result);
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(std::int64_t v, Residue p) : modulus(p)
{
    std::int64_t m = v % static_cast<std::int64_t>(p);
    value = static_cast<Residue>(m < 0 ? m + p : m);
}

static void same_modulus(const Scalar& a, const Scalar& b)
{
    if (a.modulus != b.modulus)
        throw std::invalid_argument("scalar modulus mismatch");
}

Scalar Scalar::operator+(Scalar o) const { same_modulus(*this, o); return Scalar(std::int64_t{value} + o.value, modulus); }
Scalar Scalar::operator-(Scalar o) const { same_modulus(*this, o); return Scalar(std::int64_t{value} - o.value, modulus); }
Scalar Scalar::operator*(Scalar o) const
{
    same_modulus(*this, o);
    return Scalar(static_cast<std::int64_t>(std::uint64_t{value} * o.value % modulus), modulus);
}
Scalar Scalar::operator-() const { return Scalar(-std::int64_t{value}, modulus); }
Scalar Scalar::inverse() const { return Scalar(PrimeField(modulus).inv(value), modulus); }

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(Residue p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0)
{
}

Matrix Matrix::identity(Residue p, std::size_t n)
{
    Matrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1 % p;
    return m;
}

Matrix Matrix::from_rows(Residue p, const std::vector<std::vector<std::int64_t>>& rows)
{
    std::size_t nc = rows.empty() ? 0 : rows.front().size();
    Matrix m(p, rows.size(), nc);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != nc)
            throw std::invalid_argument("ragged matrix rows");
        for (std::size_t j = 0; j < nc; ++j)
            m.set(i, j, rows[i][j]);
    }
    return m;
}

Matrix Matrix::column_vector(Residue p, std::span<const Residue> entries)
{
    Matrix m(p, entries.size(), 1);
    for (std::size_t i = 0; i < entries.size(); ++i)
        m(i, 0) = entries[i] % p;
    return m;
}

void Matrix::set(std::size_t i, std::size_t j, std::int64_t v)
{
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    (*this)(i, j) = static_cast<Residue>(r < 0 ? r + p_ : r);
}

std::vector<Residue> Matrix::column(std::size_t j) const
{
    std::vector<Residue> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

void Matrix::set_column(std::size_t j, std::span<const Residue> v)
{
    if (v.size() != rows_)
        throw std::invalid_argument("column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i)
        (*this)(i, j) = v[i];
}

void Matrix::require_same_shape(const Matrix& o) const
{
    if (p_ != o.p_)
        throw std::invalid_argument("matrix modulus mismatch");
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("matrix shape mismatch");
}

Matrix Matrix::operator*(const Matrix& o) const
{
    if (p_ != o.p_)
        throw std::invalid_argument("matrix modulus mismatch");
    if (cols_ != o.rows_)
        throw std::invalid_argument("matrix product dimension mismatch");
    Matrix out(p_, rows_, o.cols_);
    std::vector<std::uint64_t> acc(o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t k = 0; k < cols_; ++k) {
            Residue a = (*this)(i, k);
            if (a == 0)
                continue;
            const Residue* orow = o.data_.data() + k * o.cols_;
            for (std::size_t j = 0; j < o.cols_; ++j)
                acc[j] += std::uint64_t{a} * orow[j];
            // Residues are < 2^16, so 2^31 products fit; reduce well before overflow.
            if ((k & 1023) == 1023)
                for (auto& x : acc)
                    x %= p_;
        }
        for (std::size_t j = 0; j < o.cols_; ++j)
            out(i, j) = static_cast<Residue>(acc[j] % p_);
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& o) const
{
    require_same_shape(o);
    Matrix out = *this;
    for (std::size_t k = 0; k < data_.size(); ++k)
        out.data_[k] = static_cast<Residue>((data_[k] + o.data_[k]) % p_);
    return out;
}

Matrix Matrix::operator-(const Matrix& o) const
{
    require_same_shape(o);
    Matrix out = *this;
    for (std::size_t k = 0; k < data_.size(); ++k)
        out.data_[k] = static_cast<Residue>((data_[k] + p_ - o.data_[k]) % p_);
    return out;
}

Matrix Matrix::scaled(Residue c) const
{
    Matrix out = *this;
    for (auto& x : out.data_)
        x = static_cast<Residue>(std::uint64_t{x} * c % p_);
    return out;
}

std::vector<Residue> Matrix::apply(std::span<const Residue> v) const
{
    if (v.size() != cols_)
        throw std::invalid_argument("vector length mismatch");
    std::vector<Residue> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::uint64_t acc = 0;
        const Residue* r = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j)
            if (v[j])
                acc += std::uint64_t{r[j]} * v[j];
        out[i] = static_cast<Residue>(acc % p_);
    }
    return out;
}

Matrix Matrix::transpose() const
{
    Matrix t(p_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::power(std::size_t e) const
{
    if (rows_ != cols_)
        throw std::invalid_argument("power of non-square matrix");
    Matrix result = identity(p_, rows_);
    for (std::size_t k = 0; k < e; ++k)
        result = result * *this;
    return result;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
    if (r0 + nr > rows_ || c0 + nc > cols_)
        throw std::out_of_range("block out of range");
    Matrix b(p_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

Matrix Matrix::columns(std::span<const std::size_t> idx) const
{
    Matrix out(p_, rows_, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t i = 0; i < rows_; ++i)
            out(i, k) = (*this)(i, idx[k]);
    return out;
}

Matrix Matrix::leading_columns(std::size_t n) const { return block(0, 0, rows_, n); }

Matrix Matrix::hstack(const Matrix& a, const Matrix& b)
{
    if (a.cols_ == 0 && a.rows_ == 0)
        return b;
    if (b.cols_ == 0 && b.rows_ == 0)
        return a;
    if (a.rows_ != b.rows_ || a.p_ != b.p_)
        throw std::invalid_argument("hstack shape mismatch");
    Matrix out(a.p_, a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        std::copy(a.row(i).begin(), a.row(i).end(), out.row(i).begin());
        std::copy(b.row(i).begin(), b.row(i).end(), out.row(i).begin() + a.cols_);
    }
    return out;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b)
{
    if (a.cols_ == 0 && a.rows_ == 0)
        return b;
    if (b.cols_ == 0 && b.rows_ == 0)
        return a;
    if (a.cols_ != b.cols_ || a.p_ != b.p_)
        throw std::invalid_argument("vstack shape mismatch");
    Matrix out(a.p_, a.rows_ + b.rows_, a.cols_);
    std::copy(a.data_.begin(), a.data_.end(), out.data_.begin());
    std::copy(b.data_.begin(), b.data_.end(), out.data_.begin() + a.data_.size());
    return out;
}

Matrix Matrix::kron(const Matrix& a, const Matrix& b)
{
    if (a.p_ != b.p_)
        throw std::invalid_argument("kron modulus mismatch");
    Matrix out(a.p_, a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t j = 0; j < a.cols_; ++j) {
            Residue x = a(i, j);
            if (x == 0)
                continue;
            for (std::size_t k = 0; k < b.rows_; ++k)
                for (std::size_t l = 0; l < b.cols_; ++l)
                    out(i * b.rows_ + k, j * b.cols_ + l) =
                        static_cast<Residue>(std::uint64_t{x} * b(k, l) % a.p_);
        }
    return out;
}

bool Matrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](Residue x) { return x == 0; });
}

std::size_t Matrix::nonzeros() const
{
    return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(), [](Residue x) { return x != 0; }));
}

std::string Matrix::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? "," : "") << (*this)(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

// ---------------------------------------------------------------- elimination

namespace {

// Row-reduces `m` to RREF; if `companion` is non-null the same row operations
// are applied to it (it must have m.rows() rows).
std::vector<std::size_t> reduce_in_place(Matrix& m, Matrix* companion)
{
    const PrimeField f(m.modulus());
    const Residue p = m.modulus();
    std::vector<std::size_t> pivots;
    std::size_t prow = 0;
    const std::size_t nr = m.rows(), nc = m.cols();
    for (std::size_t col = 0; col < nc && prow < nr; ++col) {
        std::size_t sel = nr;
        for (std::size_t i = prow; i < nr; ++i)
            if (m(i, col) != 0) {
                sel = i;
                break;
            }
        if (sel == nr)
            continue;
        if (sel != prow) {
            std::swap_ranges(m.row(sel).begin(), m.row(sel).end(), m.row(prow).begin());
            if (companion)
                std::swap_ranges(companion->row(sel).begin(), companion->row(sel).end(),
                                 companion->row(prow).begin());
        }
        Residue inv = f.inv(m(prow, col));
        if (inv != 1) {
            for (std::size_t j = col; j < nc; ++j)
                m(prow, j) = f.mul(m(prow, j), inv);
            if (companion)
                for (auto& x : companion->row(prow))
                    x = f.mul(x, inv);
        }
        auto pr = m.row(prow);
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == prow)
                continue;
            Residue c = m(i, col);
            if (c == 0)
                continue;
            Residue nc_ = p - c;
            auto ri = m.row(i);
            for (std::size_t j = col; j < nc; ++j)
                if (pr[j])
                    ri[j] = static_cast<Residue>((ri[j] + std::uint64_t{nc_} * pr[j]) % p);
            if (companion) {
                auto cp = companion->row(prow);
                auto ci = companion->row(i);
                for (std::size_t j = 0; j < ci.size(); ++j)
                    if (cp[j])
                        ci[j] = static_cast<Residue>((ci[j] + std::uint64_t{nc_} * cp[j]) % p);
            }
        }
        pivots.push_back(col);
        ++prow;
    }
    return pivots;
}

Matrix kernel_from_rref(const Matrix& r, const std::vector<std::size_t>& pivots)
{
    const Residue p = r.modulus();
    const std::size_t nc = r.cols();
    std::vector<char> is_pivot(nc, 0);
    for (auto c : pivots)
        is_pivot[c] = 1;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < nc; ++c)
        if (!is_pivot[c])
            free_cols.push_back(c);
    Matrix k(p, nc, free_cols.size());
    for (std::size_t t = 0; t < free_cols.size(); ++t) {
        std::size_t fcol = free_cols[t];
        k(fcol, t) = 1 % p;
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            Residue v = r(i, fcol);
            if (v)
                k(pivots[i], t) = p - v;
        }
    }
    return k;
}

}  // namespace

RowEchelon row_reduce(Matrix m)
{
    auto piv = reduce_in_place(m, nullptr);
    return {std::move(m), std::move(piv)};
}

std::size_t rank(const Matrix& m)
{
    if (m.empty())
        return 0;
    // Eliminate on the shorter orientation.
    Matrix w = m.rows() > m.cols() ? m.transpose() : m;
    return reduce_in_place(w, nullptr).size();
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows())
        throw std::invalid_argument("solve: A.rows != b.rows");
    if (a.modulus() != b.modulus())
        throw std::invalid_argument("solve: modulus mismatch");
    Matrix aug = Matrix::hstack(a, b);
    if (a.cols() == 0) {
        if (!b.is_zero())
            return std::nullopt;
        return Matrix(a.modulus(), 0, b.cols());
    }
    auto pivots = reduce_in_place(aug, nullptr);
    Matrix x(a.modulus(), a.cols(), b.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] >= a.cols())
            return std::nullopt;
        for (std::size_t j = 0; j < b.cols(); ++j)
            x(pivots[i], j) = aug(i, a.cols() + j);
    }
    return x;
}

Matrix kernel_basis(const Matrix& a)
{
    if (a.rows() == 0)
        return Matrix::identity(a.modulus(), a.cols());
    Matrix r = a;
    auto pivots = reduce_in_place(r, nullptr);
    return kernel_from_rref(r, pivots);
}

Matrix column_space_basis(const Matrix& a)
{
    EchelonBasis eb(a.modulus(), a.rows());
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < a.cols(); ++j)
        if (eb.insert(a.column(j)))
            keep.push_back(j);
    return a.columns(keep);
}

Matrix quotient_basis(const Matrix& space, const Matrix& subspace)
{
    if (space.rows() != subspace.rows() && subspace.cols() > 0)
        throw std::invalid_argument("quotient_basis: ambient dimension mismatch");
    EchelonBasis eb(space.modulus(), space.rows());
    eb.insert_columns(subspace);
    EchelonBasis sp(space.modulus(), space.rows());
    sp.insert_columns(space);
    for (std::size_t j = 0; j < subspace.cols(); ++j)
        if (!sp.contains(subspace.column(j)))
            throw std::invalid_argument("quotient_basis: subspace not contained in space");
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < space.cols(); ++j)
        if (eb.insert(space.column(j)))
            keep.push_back(j);
    return space.columns(keep);
}

// ---------------------------------------------------------------- EchelonBasis

EchelonBasis::EchelonBasis(Residue p, std::size_t ambient_dim) : field_(p), n_(ambient_dim) {}

std::vector<Residue> EchelonBasis::residue(std::span<const Residue> v) const
{
    if (v.size() != n_)
        throw std::invalid_argument("EchelonBasis: vector length mismatch");
    const Residue p = field_.modulus();
    std::vector<Residue> w(v.begin(), v.end());
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        Residue c = w[pivots_[k]];
        if (c == 0)
            continue;
        Residue nc = p - c;
        const auto& r = rows_[k];
        for (std::size_t j = pivots_[k]; j < n_; ++j)
            if (r[j])
                w[j] = static_cast<Residue>((w[j] + std::uint64_t{nc} * r[j]) % p);
    }
    return w;
}

bool EchelonBasis::contains(std::span<const Residue> v) const
{
    auto w = residue(v);
    return std::all_of(w.begin(), w.end(), [](Residue x) { return x == 0; });
}

bool EchelonBasis::insert(std::span<const Residue> v)
{
    auto w = residue(v);
    std::size_t piv = n_;
    for (std::size_t j = 0; j < n_; ++j)
        if (w[j]) {
            piv = j;
            break;
        }
    if (piv == n_)
        return false;
    const Residue p = field_.modulus();
    Residue inv = field_.inv(w[piv]);
    for (auto& x : w)
        x = field_.mul(x, inv);
    // Keep rows fully reduced against the new pivot so residue() stays a single pass.
    for (auto& r : rows_) {
        Residue c = r[piv];
        if (c == 0)
            continue;
        Residue nc = p - c;
        for (std::size_t j = piv; j < n_; ++j)
            if (w[j])
                r[j] = static_cast<Residue>((r[j] + std::uint64_t{nc} * w[j]) % p);
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, piv);
    rows_.insert(rows_.begin() + pos, std::move(w));
    return true;
}

void EchelonBasis::insert_columns(const Matrix& m)
{
    for (std::size_t j = 0; j < m.cols(); ++j)
        insert(m.column(j));
}

// ---------------------------------------------------------------- LinearSolver

LinearSolver::LinearSolver(const Matrix& a)
    : field_(a.modulus()), rows_(a.rows()), cols_(a.cols()),
      transform_(Matrix::identity(a.modulus(), a.rows())), reduced_(a)
{
    pivots_ = reduce_in_place(reduced_, &transform_);
    kernel_ = kernel_from_rref(reduced_, pivots_);
}

std::optional<std::vector<Residue>> LinearSolver::solve(std::span<const Residue> b) const
{
    if (b.size() != rows_)
        throw std::invalid_argument("LinearSolver: rhs length mismatch");
    auto tb = transform_.apply(b);
    for (std::size_t i = pivots_.size(); i < rows_; ++i)
        if (tb[i] != 0)
            return std::nullopt;
    std::vector<Residue> x(cols_, 0);
    for (std::size_t i = 0; i < pivots_.size(); ++i)
        x[pivots_[i]] = tb[i];
    return x;
}

std::optional<std::vector<Residue>> LinearSolver::solve_random(std::span<const Residue> b,
                                                               std::mt19937_64& rng,
                                                               std::size_t support_bound) const
{
    auto x = solve(b);
    if (!x)
        return x;
    const Residue p = field_.modulus();
    std::uniform_int_distribution<Residue> dist(0, p - 1);
    for (std::size_t t = 0; t < kernel_.cols(); ++t) {
        Residue c = dist(rng);
        if (c == 0)
            continue;
        bool inside = true;
        for (std::size_t i = support_bound; i < cols_ && inside; ++i)
            inside = kernel_(i, t) == 0;
        if (!inside)
            continue;
        for (std::size_t i = 0; i < cols_; ++i)
            if (kernel_(i, t))
                (*x)[i] = static_cast<Residue>(((*x)[i] + std::uint64_t{c} * kernel_(i, t)) % p);
    }
    return x;
}

// ---------------------------------------------------------------- misc

Matrix intersect_spans(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows())
        throw std::invalid_argument("intersect_spans: ambient mismatch");
    const Residue p = a.modulus();
    EchelonBasis eb(p, b.rows());
    eb.insert_columns(b);
    // span(A) ∩ span(B) = { A c : residue(A c) = 0 }, and residue is linear.
    Matrix res(p, a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
        res.set_column(j, eb.residue(a.column(j)));
    Matrix coeffs = kernel_basis(res);
    return column_space_basis(a * coeffs);
}

Matrix random_matrix(Residue p, std::size_t rows, std::size_t cols, std::mt19937_64& rng)
{
    std::uniform_int_distribution<Residue> dist(0, p - 1);
    Matrix m(p, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = dist(rng);
    return m;
}

}  // namespace fv
