#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "twistxxz/core.hpp"
#include "twistxxz/eigen.hpp"
#include "twistxxz/error.hpp"
#include "twistxxz/tq.hpp"

using namespace twistxxz;
using testsupport::rel_diff;

namespace {

DenseMatrix permutation4() {
    DenseMatrix p(4);
    p(0, 0) = p(3, 3) = 1.0;
    p(1, 2) = p(2, 1) = 1.0;
    return p;
}

DenseMatrix sigma_z_aux() {
    DenseMatrix s(4);
    s(0, 0) = s(1, 1) = 1.0;
    s(2, 2) = s(3, 3) = -1.0;
    return s;
}

DenseMatrix parity_matrix(int n) {
    const std::size_t dim = std::size_t{1} << n;
    DenseMatrix u(dim);
    for (std::size_t i = 0; i < dim; ++i) u(i, (dim - 1) ^ i) = 1.0;
    return u;
}

cplx random_u(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-0.6, 0.6);
    return {d(rng), d(rng)};
}

}  // namespace

TEST_CASE("r-matrix at zero is the permutation") {
    const auto r = build_r_matrix(0.0, eta_third);
    CHECK(rel_diff(r, permutation4()) < 1e-14);
}

TEST_CASE("r-matrix unitarity") {
    const cplx u{0.3, 0.1};
    const auto p = permutation4();
    const auto r21 = p * build_r_matrix(-u, eta_third) * p;
    const cplx xi = std::sinh(u - eta_third) * std::sinh(u + eta_third) / std::pow(std::sinh(eta_third), 2);
    const auto lhs = build_r_matrix(u, eta_third) * r21 + xi * DenseMatrix::identity(4);
    CHECK(lhs.max_abs() < 1e-12);

    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        const cplx v = random_u(rng);
        const cplx x = std::sinh(v - eta_third) * std::sinh(v + eta_third) / std::pow(std::sinh(eta_third), 2);
        const auto m = build_r_matrix(v, eta_third) * (p * build_r_matrix(-v, eta_third) * p) + x * DenseMatrix::identity(4);
        CHECK(m.max_abs() < 1e-12);
    }
}

TEST_CASE("r-matrix quasi-periodicity") {
    const cplx u{0.2, 0.0};
    const auto sz = sigma_z_aux();
    const auto lhs = build_r_matrix(u + I * pi, eta_third);
    const auto rhs = -1.0 * (sz * build_r_matrix(u, eta_third) * sz);
    CHECK(rel_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("degenerate anisotropy is rejected") {
    CHECK_THROWS_AS(build_r_matrix(0.1, 0.0), Error);
    try {
        build_r_matrix(0.1, I * pi);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degenerate_anisotropy);
    }
}

TEST_CASE("hamiltonian spectrum edges at N=6") {
    const auto h = build_hamiltonian(ModelParams::homogeneous(6));
    const auto s = diagonalize_symmetric(h, false);
    REQUIRE(s.eigenvalues.size() == 64);
    CHECK(s.eigenvalues.front() == doctest::Approx(-6.4785).epsilon(0).scale(1).epsilon(1e-4));
    CHECK(std::abs(s.eigenvalues.front() + 6.4785) < 1e-3);
    CHECK(std::abs(s.eigenvalues.back() - 8.7513) < 1e-3);
}

TEST_CASE("hamiltonian is traceless and commutes with the parity") {
    const auto h2 = build_hamiltonian(ModelParams::homogeneous(2));
    const auto s2 = diagonalize_symmetric(h2, false);
    double sum = 0.0;
    for (double e : s2.eigenvalues) sum += e;
    CHECK(std::abs(sum) < 1e-10);

    const auto h4 = build_hamiltonian(ModelParams::homogeneous(4));
    const auto u = parity_matrix(4);
    CHECK(commutator(h4, u).max_abs() < 1e-14);
    CHECK(h4.symmetry_residual() < 1e-15);
}

TEST_CASE("capacity limit") {
    try {
        build_hamiltonian(ModelParams::homogeneous(13));
        FAIL("expected capacity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::capacity);
    }
    CHECK_THROWS_AS(build_hamiltonian(ModelParams::homogeneous(5), 4), Error);
}

TEST_CASE("every reference-table energy is in the N=6 spectrum") {
    const auto s = diagonalize_symmetric(build_hamiltonian(ModelParams::homogeneous(6)), false);
    for (const auto& row : testsupport::load_table1()) {
        double best = 1e9;
        for (double e : s.eigenvalues) best = std::min(best, std::abs(e - row.energy));
        CHECK_MESSAGE(best < 1e-3, "level " << row.level);
    }
}

TEST_CASE("spectrum is invariant under parity conjugation") {
    const auto h = build_hamiltonian(ModelParams::homogeneous(5));
    const auto u = parity_matrix(5);
    const auto a = diagonalize_symmetric(h, false).eigenvalues;
    const auto b = diagonalize_symmetric(u * h * u, false).eigenvalues;
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("transfer matrices commute") {
    std::mt19937_64 rng(11);
    for (int n = 2; n <= 8; ++n) {
        const auto p = n % 2 ? ModelParams::random_inhomogeneous(n, 100 + n) : ModelParams::homogeneous(n);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            const auto tu = build_transfer_matrix(random_u(rng), p);
            const auto tv = build_transfer_matrix(random_u(rng), p);
            worst = std::max(worst, commutator(tu, tv).frobenius_norm() / (tu.frobenius_norm() * tv.frobenius_norm()));
        }
        CHECK_MESSAGE(worst < 1e-10, "N=" << n);
    }
}

TEST_CASE("transfer matrix quasi-periodicity") {
    for (int n : {4, 5}) {
        const auto p = ModelParams::homogeneous(n);
        const cplx u{0.1, 0.0};
        const double sign = (n - 1) % 2 ? -1.0 : 1.0;
        CHECK(rel_diff(build_transfer_matrix(u + I * pi, p), sign * build_transfer_matrix(u, p)) < 1e-10);
    }
}

TEST_CASE("matrix-free transfer agrees with the explicit product") {
    // Explicit product of R-matrices on aux x chain, then trace with sigma^x on aux.
    const auto p = ModelParams::random_inhomogeneous(3, 5);
    const cplx u{0.21, -0.13};
    const std::size_t dim = 8;
    DenseMatrix mono(2 * dim);
    for (std::size_t i = 0; i < 2 * dim; ++i) mono(i, i) = 1.0;
    for (int site = 0; site < 3; ++site) {
        const auto r = build_r_matrix(u - p.thetas[site], p.eta);
        const int bit = 2 - site;
        DenseMatrix rs(2 * dim);
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t s = 0; s < dim; ++s)
                for (std::size_t b = 0; b < 2; ++b)
                    for (std::size_t q = 0; q < 2; ++q) {
                        const std::size_t sb = (s >> bit) & 1u;
                        const std::size_t t = (s & ~(std::size_t{1} << bit)) | (q << bit);
                        const cplx w = r(a * 2 + sb, b * 2 + q);
                        if (w != cplx{}) rs(a * dim + s, b * dim + t) += w;
                    }
        mono = rs * mono;
    }
    DenseMatrix t(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) t(i, j) = mono(1 * dim + i, 0 * dim + j) + mono(0 * dim + i, 1 * dim + j);
    CHECK(rel_diff(build_transfer_matrix(u, p), t) < 1e-13);
}

TEST_CASE("operator identity at the inhomogeneities") {
    const auto p = ModelParams::random_inhomogeneous(4, 2024);
    for (const auto& th : p.thetas) {
        const auto prod = build_transfer_matrix(th, p) * build_transfer_matrix(th - p.eta, p);
        const cplx s = -a_function(th, p) * d_function(th - p.eta, p);
        CHECK(rel_diff(prod, s * DenseMatrix::identity(16)) < 1e-10);
    }
}

TEST_CASE("hamiltonian from the transfer matrix") {
    for (int n : {2, 3, 4, 5, 6}) {
        const auto p = ModelParams::homogeneous(n);
        CHECK_MESSAGE(rel_diff(hamiltonian_from_transfer(p), build_hamiltonian(p)) < 1e-6, "N=" << n);
    }
    const auto h = hamiltonian_from_transfer(ModelParams::homogeneous(6));
    DenseMatrix sym(h.dim());
    for (std::size_t i = 0; i < h.dim(); ++i)
        for (std::size_t j = 0; j < h.dim(); ++j) sym(i, j) = 0.5 * (h(i, j) + h(j, i)).real();
    CHECK(std::abs(diagonalize_symmetric(sym, false).eigenvalues.front() + 6.4785) < 1e-3);
}

TEST_CASE("symmetric eigensolver") {
    DenseMatrix d(2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    const auto s = diagonalize_symmetric(d, true);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(2.0));

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const std::size_t n = 64;
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) a[i * n + j] = a[j * n + i] = g(rng);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += a[i * n + i];
    const auto e = symmetric_eigen(a, n, true);
    double sum = 0.0;
    for (double x : e.values) sum += x;
    CHECK(std::abs(sum - trace) < 1e-10);
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    // A v_k = e_k v_k and orthonormality
    double worst = 0.0, ortho = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            double av = 0.0;
            for (std::size_t j = 0; j < n; ++j) av += a[i * n + j] * e.vector_component(j, k);
            worst = std::max(worst, std::abs(av - e.values[k] * e.vector_component(i, k)));
        }
        for (std::size_t l = 0; l <= k; ++l) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += e.vector_component(i, k) * e.vector_component(i, l);
            ortho = std::max(ortho, std::abs(dot - (k == l ? 1.0 : 0.0)));
        }
    }
    CHECK(worst < 1e-10);
    CHECK(ortho < 1e-12);
}

TEST_CASE("non-symmetric input is rejected") {
    DenseMatrix m(2);
    m(0, 1) = 1.0;
    try {
        diagonalize_symmetric(m);
        FAIL("expected precondition error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::precondition);
    }
}

TEST_CASE("hermitian jacobi") {
    DenseMatrix h(3);
    h(0, 0) = 2.0;
    h(1, 1) = -1.0;
    h(2, 2) = 0.5;
    h(0, 1) = {0.3, 0.4};
    h(1, 0) = {0.3, -0.4};
    h(1, 2) = {0.0, 1.0};
    h(2, 1) = {0.0, -1.0};
    const auto e = hermitian_eigen_jacobi(h);
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<cplx> v(3);
        for (std::size_t i = 0; i < 3; ++i) v[i] = e.vectors(i, k);
        const auto hv = h.apply(v);
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(hv[i] - e.values[k] * v[i]) < 1e-12);
    }
    CHECK(e.values[0] + e.values[1] + e.values[2] == doctest::Approx(1.5));
}

TEST_CASE("joint eigenstates of H, t and U") {
    const auto p = ModelParams::homogeneous(6);
    const auto h = build_hamiltonian(p);
    const auto s = solve_chain(p, true);
    REQUIRE(s.eigenvectors.size() == 64);
    for (std::size_t k = 0; k < 64; ++k) {
        const auto& v = s.eigenvectors[k];
        const auto hv = h.apply(v);
        double res = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) res = std::max(res, std::abs(hv[i] - s.eigenvalues[k] * v[i]));
        CHECK(res < 1e-9);
        const auto uv = apply_parity(v);
        double pr = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) pr = std::max(pr, std::abs(uv[i] - double(s.parity[k]) * v[i]));
        CHECK(pr < 1e-8);
        CHECK_NOTHROW(transfer_eigenvalue_on_state(0.3, p, v));
    }
}

TEST_CASE("transfer eigenvalue on the ground state") {
    const auto p = ModelParams::homogeneous(6);
    const auto s = solve_chain(p, true);
    const auto& g = s.eigenvectors.front();
    const cplx u{0.27, 0.11};
    const cplx a = transfer_eigenvalue_on_state(u, p, g);
    const cplx b = transfer_eigenvalue_on_state(u + I * pi, p, g);
    CHECK(std::abs(b / a + 1.0) < 1e-10);

    std::vector<cplx> bad(g.size());
    bad[0] = 1.0;
    bad[5] = 1.0;
    try {
        transfer_eigenvalue_on_state(u, p, bad);
        FAIL("expected degeneracy-resolution error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degeneracy_resolution);
    }
}

TEST_CASE("identity points on ED eigenstates") {
    const auto p = ModelParams::random_inhomogeneous(4, 99);
    const auto s = transfer_eigenstates(p);
    REQUIRE(s.eigenvectors.size() == 16);
    CHECK_THROWS_AS(solve_chain(p, true), Error);
    for (std::size_t k = 0; k < s.eigenvectors.size(); ++k) {
        const auto& v = s.eigenvectors[k];
        for (const auto& th : p.thetas) {
            const cplx lhs = transfer_eigenvalue_on_state(th, p, v) * transfer_eigenvalue_on_state(th - p.eta, p, v);
            const cplx rhs = -a_function(th, p) * d_function(th - p.eta, p);
            CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(rhs));
        }
    }
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(ModelParams::homogeneous(1), Error);
    ModelParams p = ModelParams::homogeneous(3);
    p.thetas.pop_back();
    CHECK_THROWS_AS(p.validate(), Error);
    const auto r = ModelParams::random_inhomogeneous(6, 1);
    CHECK(r.thetas_distinct(1e-6));
    for (const auto& t : r.thetas) CHECK(std::abs(t) <= 0.1);
    CHECK(ModelParams::homogeneous(4).is_homogeneous());
}
