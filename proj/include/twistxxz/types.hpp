#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace twistxxz {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// The anisotropy at which the zero points obey homogeneous equations.
inline const cplx eta_third{0.0, pi / 3.0};

/// Chain configuration shared by every module.
///
/// `thetas` are the inhomogeneity parameters; the physical chain has all of
/// them zero. Identity checks at the points θ_j need them pairwise distinct.
struct ModelParams {
    int n_sites = 0;
    cplx eta = eta_third;
    std::vector<cplx> thetas;

    static ModelParams homogeneous(int n_sites, cplx eta = eta_third);

    /// Draws N distinct real thetas uniformly from [-spread, spread].
    static ModelParams random_inhomogeneous(int n_sites, std::uint64_t seed,
                                            double spread = 0.1,
                                            cplx eta = eta_third);

    void validate() const;
    bool is_homogeneous(double tol = 0.0) const;
    bool thetas_distinct(double tol = 1e-12) const;
};

}  // namespace twistxxz
