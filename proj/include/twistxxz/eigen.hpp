#pragma once

#include <optional>
#include <vector>

#include "twistxxz/dense_matrix.hpp"

namespace twistxxz {

/// Dense real-symmetric eigen decomposition, ascending eigenvalues.
/// `vectors` stores eigenvector k in column k (row-major, n x n).
struct SymmetricEigen {
    std::vector<double> values;
    std::vector<double> vectors;
    std::size_t n = 0;

    double vector_component(std::size_t row, std::size_t k) const { return vectors[row * n + k]; }
};

/// Householder tridiagonalization followed by implicit-shift QL iterations.
SymmetricEigen symmetric_eigen(std::vector<double> a, std::size_t n, bool want_vectors = true);

/// Cyclic Jacobi for small complex Hermitian matrices; columns are eigenvectors.
struct HermitianEigen {
    std::vector<double> values;
    DenseMatrix vectors;
};
HermitianEigen hermitian_eigen_jacobi(const DenseMatrix& h, double tol = 1e-15, int max_sweeps = 100);

}  // namespace twistxxz
