#include "twistxxz/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twistxxz/error.hpp"

namespace twistxxz {

DenseMatrix::DenseMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (data_.size() != dim * dim) fail(ErrorKind::invalid_argument, "entry count is not dim*dim");
}

DenseMatrix DenseMatrix::identity(std::size_t dim) {
    DenseMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::adjoint() const {
    DenseMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : data_) s += std::norm(x);
    return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, std::abs(x));
    return m;
}

double DenseMatrix::symmetry_residual() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            const cplx x = (*this)(r, c);
            worst = std::max({worst, std::abs(x - (*this)(c, r)), std::abs(x.imag())});
        }
    }
    const double scale = max_abs();
    return scale > 0.0 ? worst / scale : worst;
}

std::vector<cplx> DenseMatrix::apply(std::span<const cplx> x) const {
    if (x.size() != dim_) fail(ErrorKind::invalid_argument, "vector length does not match matrix");
    std::vector<cplx> y(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        const cplx* row = data_.data() + r * dim_;
        cplx acc{};
        for (std::size_t c = 0; c < dim_; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& rhs) {
    if (rhs.dim_ != dim_) fail(ErrorKind::invalid_argument, "dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& rhs) {
    if (rhs.dim_ != dim_) fail(ErrorKind::invalid_argument, "dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(cplx s) {
    for (auto& x : data_) x *= s;
    return *this;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.dim_ != b.dim_) fail(ErrorKind::invalid_argument, "dimension mismatch");
    const std::size_t n = a.dim_;
    DenseMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx* orow = out.data_.data() + i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a.data_[i * n + k];
            if (aik == cplx{}) continue;
            const cplx* brow = b.data_.data() + k * n;
            for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

DenseMatrix commutator(const DenseMatrix& a, const DenseMatrix& b) {
    return a * b - b * a;
}

LuDecomposition::LuDecomposition(DenseMatrix a) : lu_(std::move(a)), perm_(lu_.dim()) {
    const std::size_t n = lu_.dim();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const double scale = std::max(lu_.max_abs(), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            if (std::abs(lu_(r, k)) > best) {
                best = std::abs(lu_(r, k));
                piv = r;
            }
        }
        if (best <= 1e-14 * scale) fail(ErrorKind::singular_matrix, "matrix is numerically singular");
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(piv, c));
            std::swap(perm_[k], perm_[piv]);
        }
        const cplx inv = 1.0 / lu_(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const cplx f = lu_(r, k) * inv;
            lu_(r, k) = f;
            if (f == cplx{}) continue;
            for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= f * lu_(k, c);
        }
    }
}

std::vector<cplx> LuDecomposition::solve(std::span<const cplx> b) const {
    const std::size_t n = lu_.dim();
    if (b.size() != n) fail(ErrorKind::invalid_argument, "rhs length does not match matrix");
    std::vector<cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) x[i] -= lu_(i, k) * x[k];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) x[i] -= lu_(i, k) * x[k];
        x[i] /= lu_(i, i);
    }
    return x;
}

DenseMatrix LuDecomposition::inverse() const {
    const std::size_t n = lu_.dim();
    DenseMatrix inv(n);
    std::vector<cplx> e(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::fill(e.begin(), e.end(), cplx{});
        e[c] = 1.0;
        const auto col = solve(e);
        for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
    }
    return inv;
}

std::vector<cplx> solve_linear(DenseMatrix a, std::span<const cplx> b) {
    return LuDecomposition(std::move(a)).solve(b);
}

}  // namespace twistxxz
