#include "twistxxz/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twistxxz/eigen.hpp"
#include "twistxxz/error.hpp"

namespace twistxxz {
namespace {

std::size_t chain_dim(const ModelParams& params, int ed_cap) {
    params.validate();
    if (params.n_sites > ed_cap) {
        fail(ErrorKind::capacity, "n_sites = " + std::to_string(params.n_sites) +
                                      " exceeds the exact-diagonalization cap " +
                                      std::to_string(ed_cap));
    }
    return std::size_t{1} << params.n_sites;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double norm2(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

// Groups of indices [begin, end) whose sorted eigenvalues agree within tol.
std::vector<std::pair<std::size_t, std::size_t>> degenerate_blocks(const std::vector<double>& ev,
                                                                   double tol) {
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    std::size_t i = 0;
    while (i < ev.size()) {
        std::size_t j = i + 1;
        while (j < ev.size() && std::abs(ev[j] - ev[i]) <= tol * std::max(1.0, std::abs(ev[i]))) ++j;
        blocks.emplace_back(i, j);
        i = j;
    }
    return blocks;
}

// Replaces the columns [b, e) of `vecs` by their images under the k x k unitary `c`.
void rotate_block(std::vector<std::vector<cplx>>& vecs, std::size_t b, std::size_t e,
                  const DenseMatrix& c) {
    const std::size_t k = e - b;
    const std::size_t dim = vecs[b].size();
    std::vector<std::vector<cplx>> out(k, std::vector<cplx>(dim));
    for (std::size_t col = 0; col < k; ++col)
        for (std::size_t j = 0; j < k; ++j) {
            const cplx w = c(j, col);
            if (w == cplx{}) continue;
            for (std::size_t r = 0; r < dim; ++r) out[col][r] += w * vecs[b + j][r];
        }
    for (std::size_t col = 0; col < k; ++col) vecs[b + col] = std::move(out[col]);
}

int parity_label(std::span<const cplx> v) {
    const auto uv = apply_parity(v);
    const double p = inner(v, uv).real() / std::max(inner(v, v).real(), 1e-300);
    return p >= 0.0 ? 1 : -1;
}

// Re(T) + phi Im(T) with generic phi: for normal T its eigenvectors are those of T.
DenseMatrix hermitian_mix(const DenseMatrix& t) {
    constexpr double mix = 0.7548776662466927;
    const std::size_t k = t.dim();
    const DenseMatrix adj = t.adjoint();
    DenseMatrix herm(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const cplx re = 0.5 * (t(i, j) + adj(i, j));
            const cplx im = (t(i, j) - adj(i, j)) / cplx{0.0, 2.0};
            herm(i, j) = re + mix * im;
        }
    return herm;
}

}  // namespace

DenseMatrix build_r_matrix(cplx u, cplx eta) {
    const cplx s = std::sinh(eta);
    if (std::abs(s) < 1e-14) fail(ErrorKind::degenerate_anisotropy, "sinh(eta) vanishes");
    const cplx w = std::sinh(u + eta) / s;
    const cplx b = std::sinh(u) / s;
    DenseMatrix r(4);
    r(0, 0) = w;
    r(1, 1) = b;
    r(1, 2) = 1.0;
    r(2, 1) = 1.0;
    r(2, 2) = b;
    r(3, 3) = w;
    return r;
}

DenseMatrix build_hamiltonian(const ModelParams& params, int ed_cap) {
    const std::size_t dim = chain_dim(params, ed_cap);
    const int n = params.n_sites;
    const cplx ch = std::cosh(params.eta);
    DenseMatrix h(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        for (int j = 0; j < n; ++j) {
            const int k = (j + 1) % n;
            const std::size_t bj = std::size_t{1} << (n - 1 - j);
            const std::size_t bk = std::size_t{1} << (n - 1 - k);
            const bool same = ((s & bj) != 0) == ((s & bk) != 0);
            const double zz = same ? 1.0 : -1.0;
            if (k != 0) {
                // -(xx + yy + ch zz): xx + yy = 2 (flip of an antiparallel pair)
                h(s, s) -= ch * zz;
                if (!same) h(s ^ bj ^ bk, s) -= 2.0;
            } else {
                // twisted bond: -(xx - yy - ch zz); xx - yy = 2 (flip of a parallel pair)
                h(s, s) += ch * zz;
                if (same) h(s ^ bj ^ bk, s) -= 2.0;
            }
        }
    }
    return h;
}

std::vector<cplx> apply_parity(std::span<const cplx> state) {
    const std::size_t dim = state.size();
    if (!is_power_of_two(dim)) fail(ErrorKind::invalid_argument, "state length is not 2^N");
    std::vector<cplx> out(dim);
    const std::size_t mask = dim - 1;
    for (std::size_t s = 0; s < dim; ++s) out[s] = state[~s & mask];
    return out;
}

std::vector<cplx> apply_transfer(cplx u, const ModelParams& params, std::span<const cplx> state) {
    params.validate();
    const int n = params.n_sites;
    const std::size_t dim = std::size_t{1} << n;
    if (state.size() != dim) fail(ErrorKind::invalid_argument, "state length is not 2^N");

    const cplx sh = std::sinh(params.eta);
    std::vector<cplx> w(n), b(n);
    for (int j = 0; j < n; ++j) {
        const cplx x = u - params.thetas[j];
        w[j] = std::sinh(x + params.eta) / sh;
        b[j] = std::sinh(x) / sh;
    }

    std::vector<cplx> result(dim);
    std::vector<cplx> up(dim), down(dim), nup(dim), ndown(dim);
    for (int aux = 0; aux < 2; ++aux) {
        std::fill(up.begin(), up.end(), cplx{});
        std::fill(down.begin(), down.end(), cplx{});
        std::copy(state.begin(), state.end(), aux == 0 ? up.begin() : down.begin());
        // T = R_{0N} ... R_{01}: site 1 acts first.
        for (int j = 0; j < n; ++j) {
            const std::size_t bit = std::size_t{1} << (n - 1 - j);
            for (std::size_t s = 0; s < dim; ++s) {
                if ((s & bit) == 0) {
                    nup[s] = w[j] * up[s];
                    ndown[s] = b[j] * down[s] + up[s | bit];
                } else {
                    nup[s] = b[j] * up[s] + down[s & ~bit];
                    ndown[s] = w[j] * down[s];
                }
            }
            up.swap(nup);
            down.swap(ndown);
        }
        // tr_0 sigma^x_0 T picks the aux-flipped component.
        const auto& picked = aux == 0 ? down : up;
        for (std::size_t s = 0; s < dim; ++s) result[s] += picked[s];
    }
    return result;
}

DenseMatrix build_transfer_matrix(cplx u, const ModelParams& params, int ed_cap) {
    const std::size_t dim = chain_dim(params, ed_cap);
    DenseMatrix t(dim);
    std::vector<cplx> e(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        std::fill(e.begin(), e.end(), cplx{});
        e[c] = 1.0;
        const auto col = apply_transfer(u, params, e);
        for (std::size_t r = 0; r < dim; ++r) t(r, c) = col[r];
    }
    return t;
}

DenseMatrix hamiltonian_from_transfer(const ModelParams& params, double step) {
    params.validate();
    if (!params.is_homogeneous()) {
        fail(ErrorKind::precondition, "hamiltonian_from_transfer needs all thetas zero");
    }
    auto central = [&](double h) {
        DenseMatrix d = build_transfer_matrix(h, params) - build_transfer_matrix(-h, params);
        return d * cplx{1.0 / (2.0 * h)};
    };
    const DenseMatrix coarse = central(step);
    const DenseMatrix fine = central(step / 2.0);
    const DenseMatrix derivative = (fine * cplx{4.0} - coarse) * cplx{1.0 / 3.0};

    DenseMatrix t0_inverse;
    try {
        t0_inverse = LuDecomposition(build_transfer_matrix(0.0, params)).inverse();
    } catch (const Error& e) {
        fail(ErrorKind::singular_matrix, std::string("t(0) is not invertible: ") + e.what());
    }
    DenseMatrix h = derivative * t0_inverse;
    h *= -2.0 * std::sinh(params.eta);
    const cplx shift = static_cast<double>(params.n_sites) * std::cosh(params.eta);
    for (std::size_t i = 0; i < h.dim(); ++i) h(i, i) += shift;
    return h;
}

SpectrumResult diagonalize_symmetric(const DenseMatrix& m, bool want_vectors, double symmetry_tol,
                                     double degeneracy_tol) {
    const std::size_t n = m.dim();
    const double asym = m.symmetry_residual();
    if (asym > symmetry_tol) {
        fail(ErrorKind::precondition,
             "matrix is not real symmetric (residual " + std::to_string(asym) + ")");
    }
    std::vector<double> a(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) a[r * n + c] = 0.5 * (m(r, c).real() + m(c, r).real());

    const bool chain = is_power_of_two(n) && n >= 4;
    const auto eig = symmetric_eigen(std::move(a), n, want_vectors || chain);

    SpectrumResult out;
    out.eigenvalues = eig.values;
    if (!want_vectors && !chain) return out;

    std::vector<std::vector<cplx>> vecs(n, std::vector<cplx>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) vecs[k][r] = eig.vector_component(r, k);

    if (chain) {
        // Rotate degenerate blocks onto U eigenvectors so every state carries a parity.
        for (auto [b, e] : degenerate_blocks(out.eigenvalues, degeneracy_tol)) {
            if (e - b < 2) continue;
            const std::size_t k = e - b;
            DenseMatrix ub(k);
            for (std::size_t i = 0; i < k; ++i) {
                const auto uv = apply_parity(vecs[b + i]);
                for (std::size_t j = 0; j < k; ++j) ub(j, i) = inner(vecs[b + j], uv);
            }
            rotate_block(vecs, b, e, hermitian_eigen_jacobi(ub).vectors);
        }
        out.parity.resize(n);
        for (std::size_t k = 0; k < n; ++k) out.parity[k] = parity_label(vecs[k]);
    }
    if (want_vectors) out.eigenvectors = std::move(vecs);
    return out;
}

SpectrumResult resolve_with_transfer(SpectrumResult spectrum, const ModelParams& params, cplx probe,
                                     double degeneracy_tol) {
    if (spectrum.eigenvectors.empty()) {
        fail(ErrorKind::precondition, "spectrum carries no eigenvectors");
    }
    auto& vecs = spectrum.eigenvectors;
    for (auto [b, e] : degenerate_blocks(spectrum.eigenvalues, degeneracy_tol)) {
        if (e - b < 2) continue;
        const std::size_t k = e - b;
        std::vector<std::vector<cplx>> images(k);
        for (std::size_t i = 0; i < k; ++i) images[i] = apply_transfer(probe, params, vecs[b + i]);
        DenseMatrix tb(k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) tb(j, i) = inner(vecs[b + j], images[i]);
        const auto split = hermitian_eigen_jacobi(hermitian_mix(tb));
        for (std::size_t i = 1; i < k; ++i) {
            if (std::abs(split.values[i] - split.values[i - 1]) < 1e-7) {
                fail(ErrorKind::degeneracy_resolution,
                     "t(u0) does not split the degenerate level E = " +
                         std::to_string(spectrum.eigenvalues[b]));
            }
        }
        rotate_block(vecs, b, e, split.vectors);
    }
    if (!spectrum.parity.empty())
        for (std::size_t k = 0; k < vecs.size(); ++k) spectrum.parity[k] = parity_label(vecs[k]);
    return spectrum;
}

SpectrumResult solve_chain(const ModelParams& params, bool want_vectors, int ed_cap) {
    if (!params.is_homogeneous())
        fail(ErrorKind::precondition, "H commutes with t(u) only for zero thetas; use transfer_eigenstates");
    const DenseMatrix h = build_hamiltonian(params, ed_cap);
    SpectrumResult s = diagonalize_symmetric(h, true);
    s = resolve_with_transfer(std::move(s), params);
    if (!want_vectors) s.eigenvectors.clear();
    return s;
}

cplx transfer_eigenvalue_on_state(cplx u, const ModelParams& params, std::span<const cplx> state,
                                  cplx probe, double tol) {
    const double nrm = norm2(state);
    if (nrm == 0.0) fail(ErrorKind::invalid_argument, "zero state");
    const auto tp = apply_transfer(probe, params, state);
    const cplx mu = inner(state, tp) / (nrm * nrm);
    double res = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) res += std::norm(tp[i] - mu * state[i]);
    res = std::sqrt(res) / (nrm * std::max(1.0, std::abs(mu)));
    if (res > tol) {
        fail(ErrorKind::degeneracy_resolution,
             "state is not an eigenvector of t(u0) (residual " + std::to_string(res) + ")");
    }
    const auto tu = apply_transfer(u, params, state);
    return inner(state, tu) / (nrm * nrm);
}

TransferEigenstates transfer_eigenstates(const ModelParams& params, cplx probe, int ed_cap) {
    const DenseMatrix t = build_transfer_matrix(probe, params, ed_cap);
    const DenseMatrix comm = t * t.adjoint() - t.adjoint() * t;
    if (comm.max_abs() > 1e-10 * std::max(1.0, t.max_abs() * t.max_abs()))
        fail(ErrorKind::degeneracy_resolution, "t(u0) is not normal for these parameters");
    const auto e = hermitian_eigen_jacobi(hermitian_mix(t));
    for (std::size_t i = 1; i < e.values.size(); ++i)
        if (std::abs(e.values[i] - e.values[i - 1]) < 1e-7)
            fail(ErrorKind::degeneracy_resolution, "t(u0) has a degenerate eigenvalue");
    TransferEigenstates out;
    const std::size_t dim = t.dim();
    for (std::size_t k = 0; k < dim; ++k) {
        std::vector<cplx> v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = e.vectors(i, k);
        const auto tv = t.apply(v);
        out.probe_values.push_back(inner(v, tv));
        out.eigenvectors.push_back(std::move(v));
    }
    return out;
}

}  // namespace twistxxz
