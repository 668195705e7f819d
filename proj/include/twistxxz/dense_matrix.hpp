#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "twistxxz/types.hpp"

namespace twistxxz {

/// Square complex matrix, row-major.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
    DenseMatrix(std::size_t dim, std::vector<cplx> entries);

    static DenseMatrix identity(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    std::span<const cplx> entries() const noexcept { return data_; }
    std::span<cplx> entries() noexcept { return data_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    DenseMatrix adjoint() const;
    double frobenius_norm() const;
    double max_abs() const;
    /// max |A - A^T| and max |Im A| relative to max |A|.
    double symmetry_residual() const;

    std::vector<cplx> apply(std::span<const cplx> x) const;

    DenseMatrix& operator+=(const DenseMatrix& rhs);
    DenseMatrix& operator-=(const DenseMatrix& rhs);
    DenseMatrix& operator*=(cplx s);

    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
    friend DenseMatrix operator*(DenseMatrix a, cplx s) { return a *= s; }
    friend DenseMatrix operator*(cplx s, DenseMatrix a) { return a *= s; }
    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

DenseMatrix commutator(const DenseMatrix& a, const DenseMatrix& b);

/// LU with partial pivoting. Throws ErrorKind::singular_matrix.
class LuDecomposition {
public:
    explicit LuDecomposition(DenseMatrix a);
    std::vector<cplx> solve(std::span<const cplx> b) const;
    DenseMatrix inverse() const;

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

std::vector<cplx> solve_linear(DenseMatrix a, std::span<const cplx> b);

}  // namespace twistxxz
