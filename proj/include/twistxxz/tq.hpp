#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "twistxxz/bae.hpp"
#include "twistxxz/types.hpp"

namespace twistxxz {

/// a(u) = prod_l sinh(u - theta_l + eta) / sinh(eta).
cplx a_function(cplx u, const ModelParams& params);
/// d(u) = a(u - eta).
cplx d_function(cplx u, const ModelParams& params);

/// Lambda(u) = lambda0 * prod_j sinh(u - z_j).
struct SpectralFunction {
    cplx lambda0{1.0, 0.0};
    std::vector<cplx> zeros;

    cplx operator()(cplx u) const;
};

cplx lambda_from_zeros(cplx u, const SpectralFunction& f);

struct BilinearReport {
    std::vector<cplx> lhs;          ///< Lambda(theta_j) Lambda(theta_j - eta)
    std::vector<cplx> rhs;          ///< -a(theta_j) d(theta_j - eta)
    std::vector<double> relative;   ///< |lhs - rhs| / max(|lhs|, |rhs|)

    double max_relative() const;
};

BilinearReport bilinear_residuals(const SpectralFunction& f, const ModelParams& params);

struct Lambda0Fit {
    SpectralFunction function;
    BilinearReport report;
};

/// Lambda0 from the identity at theta_1; the sign is a symmetry of every relation,
/// so the root with Re > 0 (or Im > 0 when Re = 0) is returned. With coinciding
/// thetas the remaining identities repeat the first and carry no information.
Lambda0Fit fit_lambda0(const ZeroPointSet& zeros, const ModelParams& params);

/// Throws ErrorKind::inconsistent_zero_set when any bilinear residual exceeds tol.
void require_consistent(const Lambda0Fit& fit, double tol = 1e-8);

struct CubicReport {
    std::vector<cplx> samples;
    std::vector<double> relative;
    double max_relative = 0.0;
};

/// Draws points with Re u in [-1, 1] and Im u in [-pi/2, pi/2], keeping |Im u| at
/// least 0.05 away from every multiple of pi/6.
std::vector<cplx> cubic_sample_points(std::size_t count, std::uint64_t seed);

CubicReport verify_cubic(const SpectralFunction& f, const ModelParams& params, std::span<const cplx> samples);

struct F3Report {
    double quasi_periodicity = 0.0;  ///< F3(u + eta) = (-1)^{N-1} F3(u) at the samples
    double property1 = 0.0;          ///< F3(theta_j) = -a d Lambda(theta_j - 2 eta)
    double property2 = 0.0;          ///< F3(theta_j + eta) = -a d Lambda(theta_j + eta)
    double property3 = 0.0;          ///< F3(theta_j + 2 eta) = (-1)^N a d Lambda(theta_j + eta)

    double max() const;
};

cplx f3_function(cplx u, const SpectralFunction& f, cplx eta);

F3Report verify_f3_properties(const SpectralFunction& f, const ModelParams& params, std::span<const cplx> samples);

/// Relative Fourier weight of Lambda(i phi) outside modes |m| <= N-1, sampled at
/// u_k = i k pi / (2N), k = 0..4N-1.
double degree_tail(const std::function<cplx(cplx)>& lambda, int n_sites);

/// Recovers lambda0 and the N-1 zero points of a degree N-1 trigonometric polynomial
/// from 2N samples on the imaginary axis. Throws ErrorKind::precondition when the
/// leading coefficient vanishes (a zero at infinity).
SpectralFunction zeros_from_samples(const std::function<cplx(cplx)>& lambda, int n_sites);

/// Roots of c[0] x^n + c[1] x^{n-1} + ... + c[n] by Aberth iteration.
std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs);

}  // namespace twistxxz
