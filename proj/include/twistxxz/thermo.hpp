#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twistxxz/bae.hpp"
#include "twistxxz/kernels.hpp"
#include "twistxxz/types.hpp"

namespace twistxxz {

inline constexpr double quadrature_half_width = 25.0;

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive 61-point Gauss-Kronrod on [a, b], split at the given interior points.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breaks = {}, double tol = 1e-13);

/// Integral over the real line truncated to [-L, L]; the error adds the bound
/// |f(L)| / (3/2) per side for an e^{-3|x|/2} tail.
QuadratureResult integrate_line(const std::function<double(double)>& f, std::span<const double> breaks = {},
                                double half_width = quadrature_half_width);

cplx integrate_line_complex(const std::function<cplx(double)>& f, std::span<const double> breaks = {});

struct DeltaAtom {
    double position = 0.0;
    double weight = 0.0;
};

/// A density split into a smooth part and delta atoms that are never sampled.
struct DensityProfile {
    std::function<double(double)> smooth;
    std::vector<DeltaAtom> atoms;
    std::optional<int> system_size;  ///< empty for N = infinity
    std::vector<double> features;    ///< rapidities where the smooth part peaks

    double smooth_integral() const;
    double total_integral() const;
    /// Integral of g against the profile, atoms included.
    cplx integrate_against(const std::function<cplx(double)>& g) const;
};

/// rho for N = infinity: (3i/4pi)[csch(3x/2 + i pi/4) - csch(3x/2 - i pi/4)].
double rho_infinite(double lambda);

/// Smooth part of the finite-N ground-state density with boundary holes at +-hole_pos.
double rho_ground(double lambda, double hole_pos, std::optional<int> n);
DensityProfile ground_profile(std::optional<int> n, double hole_pos);

/// Hole contribution Delta(lambda); complex, only Delta(x) + Delta(-x) is real.
cplx hole_delta(double lambda);
/// Delta(x) + Delta(-x); throws ErrorKind::consistency if its imaginary part exceeds 1e-12.
double hole_pair_delta(double lambda);

struct GroundEnergyDensity {
    double closed_form = 0.0;
    double quadrature = 0.0;
};

/// (3 - 3 sqrt 3)/2 together with the quadrature of 2 sinh(eta) int coth(x - i pi/6) rho + cosh(eta).
/// Throws ErrorKind::consistency when they differ by more than tol.
GroundEnergyDensity ground_energy_density(double tol = 1e-8);

enum class ExcitationKind { type_one, type_two };

struct ExcitationSpec {
    ExcitationKind kind = ExcitationKind::type_one;
    double alpha = 0.0;
    std::optional<double> hole;  ///< type-II hole; defaults to alpha

    double hole_position() const { return hole.value_or(alpha); }
    void validate() const;
};

double excitation_energy(const ExcitationSpec& spec);

/// The same dispersion from the density change and the bare energy of the excited roots.
double excitation_energy_quadrature(const ExcitationSpec& spec);

/// Smooth part of delta rho at finite n.
double delta_rho(const ExcitationSpec& spec, double lambda, int n);
DensityProfile delta_rho_profile(const ExcitationSpec& spec, int n);

/// Ground profile plus the density change of each listed excitation.
DensityProfile excited_profile(std::span<const ExcitationSpec> specs, int n, double hole_pos);

/// 2 sinh(eta) times the integral of coth(x - i pi/6) against the profile.
cplx profile_energy(const DensityProfile& p);

/// 2 sinh(eta) coth(lambda - i pi/6): energy of one root in shifted coordinates.
cplx bare_root_energy(cplx lambda);

enum class Process { I_I, II_II, I_II };

const char* to_string(Process p) noexcept;
std::optional<Process> parse_process(const std::string& s);

struct ScatteringAmplitude {
    Process process = Process::I_I;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    cplx value;
};

ScatteringAmplitude smatrix(Process process, double alpha1, double alpha2);

/// The amplitude rebuilt from the phase integral of the thermodynamic BAE.
cplx smatrix_quadrature(Process process, double alpha1, double alpha2);

struct DensityGrid {
    std::vector<double> lambda;
    std::vector<double> values;
    int iterations = 0;

    double sup_distance(const std::function<double(double)>& f) const;
};

/// Solves rho = f + a_2 * rho on [-L, L] with the trapezoid rule by fixed-point iteration.
DensityGrid solve_density_equation(const std::function<double(double)>& driving, double half_width = 20.0,
                                   int points = 4001, double tol = 1e-13, int max_iter = 1000);

struct DensityCheckEntry {
    int n_sites = 0;
    double max_deviation = 0.0;
    double filling = 0.0;
    int samples = 0;
};

struct DensityCheckReport {
    std::vector<DensityCheckEntry> entries;
    bool nonincreasing = true;
};

/// Real parts of the shifted roots, sorted. Throws ErrorKind::precondition on complex roots.
std::vector<double> real_rapidities(const ZeroPointSet& zeros, cplx eta = eta_third);

/// Compares 1 / (N (lambda_{j+1} - lambda_j)) at the midpoints with profile.smooth on
/// |lambda| <= window. Throws ErrorKind::precondition on unsorted or complex roots.
DensityCheckReport finite_size_density_check(std::span<const ZeroPointSet> sets, const DensityProfile& profile,
                                             double window = 1.5, cplx eta = eta_third);

}  // namespace twistxxz
