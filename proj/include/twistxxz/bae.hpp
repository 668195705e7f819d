#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twistxxz/core.hpp"
#include "twistxxz/types.hpp"

namespace twistxxz {

struct SolverConfig {
    double tol = 1e-12;       ///< max |log residual| accepted as converged
    int max_iter = 200;
    double damping = 1.0;     ///< initial step factor, halved on backtracking
    double dedupe_tol = 1e-8; ///< two roots closer than this are a collision

    void validate() const;
};

/// The N-1 zero points z_j of Lambda(u); shifted roots are lambda_j = z_j + eta/2.
struct ZeroPointSet {
    std::vector<cplx> zeros;

    static ZeroPointSet from_shifted(std::span<const cplx> lambdas, cplx eta = eta_third);
    std::vector<cplx> shifted(cplx eta = eta_third) const;
    std::size_t size() const noexcept { return zeros.size(); }
};

/// Reduces Im(lambda) into (-pi/2, pi/2] using the i*pi periodicity of sinh.
cplx canonical_root(cplx lambda);

enum class RootLabel { real, half_line, string_upper, string_lower, other };

struct RootPattern {
    std::vector<RootLabel> labels;  ///< per root, same order as the set
    int real = 0;
    int half_line = 0;
    int strings = 0;                ///< number of complete 2-strings
    int other = 0;
    std::vector<double> half_line_centers;
    std::vector<double> string_centers;
    std::vector<std::string> warnings;

    /// "ground-like", "type-I", "type-II" or a composite description.
    std::string name() const;
};

/// Logarithmic residual of each zero-point equation (principal branch of LHS/RHS).
/// Throws ErrorKind::singular_configuration near a pole of either side.
std::vector<cplx> bae_residual(const ZeroPointSet& zeros, const ModelParams& params);

double max_abs(std::span<const cplx> v);

enum class SolveStatus {
    converged,
    max_iterations,
    line_search_failed,
    singular_jacobian,
    singular_configuration,
    collision,
};

const char* to_string(SolveStatus s) noexcept;

struct SolveResult {
    ZeroPointSet roots;
    SolveStatus status = SolveStatus::max_iterations;
    int iterations = 0;
    double residual = 0.0;                ///< final max |residual|
    std::vector<double> residual_history; ///< max |residual| per iterate
    std::string message;

    bool ok() const noexcept { return status == SolveStatus::converged; }
};

/// Damped Newton on the log-form equations with an analytic Jacobian.
SolveResult solve_newton(const ZeroPointSet& initial, const ModelParams& params,
                         const SolverConfig& cfg = {});

/// Follows a solution from `from` to `to` by moving the thetas in `steps` increments.
SolveResult continue_solution(const ZeroPointSet& start, const ModelParams& from,
                              const ModelParams& to, int steps = 4, const SolverConfig& cfg = {});

/// E = 2 sinh(eta) sum coth z_j + N cosh(eta). Throws ErrorKind::non_physical when
/// |Im E| exceeds imag_tol.
double energy_from_zeros(const ZeroPointSet& zeros, const ModelParams& params,
                         double imag_tol = 1e-8);
cplx complex_energy_from_zeros(const ZeroPointSet& zeros, const ModelParams& params);

RootPattern classify_roots(const ZeroPointSet& zeros, cplx eta = eta_third, double tol = 0.05);

/// Quantum numbers of the logarithmic equations, one list per root species:
/// real roots, half-line roots (Im lambda = -pi/2) and 2-string centres.
struct QuantumNumbers {
    std::vector<double> bulk;
    std::vector<double> half_line;
    std::vector<double> two_string;

    static QuantumNumbers ground(int n_sites);
    /// One root on the half line with centre quantum number J.
    static QuantumNumbers type_one(int n_sites, double j_value);
    /// One 2-string; the bulk hole sits at (N-1)/2 - j and J equals it, j = 1..N-2.
    static QuantumNumbers type_two(int n_sites, int j_index);

    std::size_t root_count() const { return bulk.size() + half_line.size() + 2 * two_string.size(); }
    /// Checks counts and the integer / half-odd rule of every species. Throws invalid_argument.
    void validate(int n_sites) const;
    std::string describe() const;
};

/// True when values of this species must be integers (else half-odd integers).
bool bulk_numbers_are_integers(int n_sites, int reals, int strings);
bool half_line_numbers_are_integers(int half_lines);
bool string_numbers_are_integers(int reals, int strings);

/// Initial roots from quantum numbers: solves the real logarithmic equations for
/// real roots and excitation centres, then places excitations on their lines.
ZeroPointSet seed_from_quantum_numbers(const QuantumNumbers& qn, const ModelParams& params,
                                       double string_offset = 0.02);

/// Seeds and solves, retrying a few string offsets. Returns the first converged result
/// whose pattern has the requested species counts, else the last attempt.
SolveResult solve_quantum_numbers(const QuantumNumbers& qn, const ModelParams& params,
                                  const SolverConfig& cfg = {});

struct MatchReport {
    struct Pair {
        std::size_t bae_index;
        std::size_t ed_index;
        double deviation;
    };
    std::vector<Pair> pairs;
    std::vector<std::size_t> unmatched_ed;
    std::vector<std::size_t> unmatched_bae;
    double max_deviation = 0.0;

    bool all_bae_matched() const { return unmatched_bae.empty(); }
};

/// Greedy nearest matching. Each BAE energy claims `states_per_solution` ED levels.
MatchReport match_spectrum(std::span<const double> ed, std::span<const double> bae, double tol,
                           int states_per_solution = 1);

struct ScanSolution {
    QuantumNumbers qn;
    ZeroPointSet roots;
    double energy = 0.0;
    RootPattern pattern;
};

struct ScanOptions {
    int max_half_line = -1;  ///< -1: no limit
    int max_strings = -1;
    double window = 1.0;     ///< quantum numbers range over |Q| < N/2 + window
    double max_rapidity = 10.0; ///< drops solutions with a root escaping to infinity
};

/// Solves every admissible quantum-number configuration and keeps the distinct
/// converged, collision-free solutions with real energy, sorted by energy.
std::vector<ScanSolution> scan_quantum_numbers(const ModelParams& params,
                                               const SolverConfig& cfg = {},
                                               const ScanOptions& opts = {});

/// True when the canonical root sets agree (as multisets) within tol.
bool same_roots(const ZeroPointSet& a, const ZeroPointSet& b, double tol, cplx eta = eta_third);

}  // namespace twistxxz
