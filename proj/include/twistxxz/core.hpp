#pragma once

#include <optional>
#include <vector>

#include "twistxxz/dense_matrix.hpp"
#include "twistxxz/types.hpp"

namespace twistxxz {

inline constexpr int default_ed_cap = 12;

/// Generic probe point used to split degenerate H eigenspaces with t(u0).
inline const cplx transfer_probe{0.1734, 0.0912};

/// Six-vertex R-matrix on aux ⊗ quantum, basis |00>,|01>,|10>,|11> (0 = up).
DenseMatrix build_r_matrix(cplx u, cplx eta);

/// Antiperiodic XXZ Hamiltonian; site 1 is the most significant bit.
DenseMatrix build_hamiltonian(const ModelParams& params, int ed_cap = default_ed_cap);

/// U = prod_j sigma^x_j applied to a state (bit complement of the index).
std::vector<cplx> apply_parity(std::span<const cplx> state);

/// t(u)|psi> without forming t(u).
std::vector<cplx> apply_transfer(cplx u, const ModelParams& params, std::span<const cplx> state);

DenseMatrix build_transfer_matrix(cplx u, const ModelParams& params, int ed_cap = default_ed_cap);

/// -2 sinh(eta) t'(0) t(0)^{-1} + N cosh(eta), derivative by Richardson-extrapolated
/// central differences (h = 1e-5).
DenseMatrix hamiltonian_from_transfer(const ModelParams& params, double step = 1e-5);

struct SpectrumResult {
    std::vector<double> eigenvalues;
    /// Eigenvector k is column k; empty when not requested.
    std::vector<std::vector<cplx>> eigenvectors;
    std::vector<int> parity;
};

/// Full spectrum of a real-symmetric matrix; parity labels under U when dim is 2^N.
SpectrumResult diagonalize_symmetric(const DenseMatrix& m, bool want_vectors = true,
                                     double symmetry_tol = 1e-12, double degeneracy_tol = 1e-9);

/// Rotates every degenerate eigenspace of `spectrum` into eigenvectors of t(probe).
/// Throws ErrorKind::degeneracy_resolution when t(probe) fails to split a block.
SpectrumResult resolve_with_transfer(SpectrumResult spectrum, const ModelParams& params,
                                     cplx probe = transfer_probe, double degeneracy_tol = 1e-9);

/// ED of H with joint (H, t, U) eigenvectors. Needs zero thetas.
SpectrumResult solve_chain(const ModelParams& params, bool want_vectors = true,
                           int ed_cap = default_ed_cap);

struct TransferEigenstates {
    std::vector<cplx> probe_values;  ///< Lambda(u0) per state
    std::vector<std::vector<cplx>> eigenvectors;
};

/// Eigenstates of t(u0) on the full space; works for any distinct real thetas,
/// where t(u) is normal. Throws ErrorKind::degeneracy_resolution if t(u0) is
/// degenerate or not normal.
TransferEigenstates transfer_eigenstates(const ModelParams& params, cplx probe = transfer_probe,
                                         int ed_cap = 8);

/// <psi|t(u)|psi>/<psi|psi>; checks first that psi is an eigenvector of t(probe).
cplx transfer_eigenvalue_on_state(cplx u, const ModelParams& params, std::span<const cplx> state,
                                  cplx probe = transfer_probe, double tol = 1e-8);

}  // namespace twistxxz
