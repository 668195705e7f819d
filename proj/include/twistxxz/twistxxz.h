/* C interface of the twistxxz library. */
#ifndef TWISTXXZ_H
#define TWISTXXZ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(TWISTXXZ_BUILDING_LIBRARY)
#define TXXZ_API __attribute__((visibility("default")))
#else
#define TXXZ_API
#endif

typedef struct {
    double re;
    double im;
} txxz_complex;

typedef enum {
    TXXZ_OK = 0,
    TXXZ_ERR_INVALID_ARGUMENT = 1,
    TXXZ_ERR_CAPACITY = 2,
    TXXZ_ERR_DEGENERATE_ANISOTROPY = 3,
    TXXZ_ERR_SINGULAR_CONFIGURATION = 4,
    TXXZ_ERR_SINGULAR_MATRIX = 5,
    TXXZ_ERR_PRECONDITION = 6,
    TXXZ_ERR_NON_PHYSICAL = 7,
    TXXZ_ERR_DEGENERACY_RESOLUTION = 8,
    TXXZ_ERR_INCONSISTENT_ZERO_SET = 9,
    TXXZ_ERR_CONSISTENCY = 10,
    TXXZ_ERR_IO = 11,
    TXXZ_ERR_NOT_CONVERGED = 12,
    TXXZ_ERR_BUFFER_TOO_SMALL = 13,
    TXXZ_ERR_INTERNAL = 14
} txxz_status;

/* Message of the last failed call on this thread ("" after a success). */
TXXZ_API const char* txxz_last_error(void);
TXXZ_API const char* txxz_status_name(txxz_status status);
TXXZ_API const char* txxz_version(void);

/* ---- model ---- */

typedef struct txxz_model txxz_model;

/* Homogeneous chain (all thetas zero). */
TXXZ_API txxz_status txxz_model_create(int n_sites, txxz_complex eta, txxz_model** out);
/* Distinct real thetas drawn uniformly from [-spread, spread]. */
TXXZ_API txxz_status txxz_model_create_random(int n_sites, uint64_t seed, double spread, txxz_complex eta,
                                              txxz_model** out);
TXXZ_API txxz_status txxz_model_set_thetas(txxz_model* model, const txxz_complex* thetas, size_t count);
TXXZ_API txxz_status txxz_model_get_thetas(const txxz_model* model, txxz_complex* out, size_t capacity);
TXXZ_API int txxz_model_sites(const txxz_model* model);
TXXZ_API txxz_complex txxz_model_eta(const txxz_model* model);
TXXZ_API void txxz_model_destroy(txxz_model* model);

/* ---- operators ---- */

/* 4x4 row-major R-matrix on auxiliary x quantum space. */
TXXZ_API txxz_status txxz_r_matrix(txxz_complex u, txxz_complex eta, txxz_complex out[16]);
/* Row-major 2^N x 2^N matrices; *dim receives 2^N. capacity counts entries. */
TXXZ_API txxz_status txxz_hamiltonian(const txxz_model* model, txxz_complex* out, size_t capacity, size_t* dim);
TXXZ_API txxz_status txxz_transfer_matrix(const txxz_model* model, txxz_complex u, txxz_complex* out,
                                          size_t capacity, size_t* dim);

typedef struct {
    double commutator;         /* max relative ||[t(u),t(v)]|| over the pairs */
    double quasi_periodicity;  /* max relative ||t(u+i pi) - (-1)^{N-1} t(u)|| */
    double hamiltonian;        /* relative distance of H from t'(0)t(0)^{-1}; negative when thetas are nonzero */
} txxz_transfer_report;

TXXZ_API txxz_status txxz_transfer_diagnostics(const txxz_model* model, uint64_t seed, int pairs,
                                               txxz_transfer_report* out);

/* ---- spectrum ---- */

typedef struct txxz_spectrum txxz_spectrum;

/* ED of H with joint (H, t, U) eigenstates; needs zero thetas. */
TXXZ_API txxz_status txxz_spectrum_compute(const txxz_model* model, txxz_spectrum** out);
/* Eigenstates of t(u0) for any real distinct thetas; eigenvalues are left empty. */
TXXZ_API txxz_status txxz_spectrum_transfer(const txxz_model* model, txxz_spectrum** out);
TXXZ_API size_t txxz_spectrum_size(const txxz_spectrum* spectrum);
/* Energies ascending (ED) ; fails for transfer-only spectra. */
TXXZ_API txxz_status txxz_spectrum_eigenvalues(const txxz_spectrum* spectrum, double* out, size_t capacity);
TXXZ_API txxz_status txxz_spectrum_parities(const txxz_spectrum* spectrum, int* out, size_t capacity);
TXXZ_API txxz_status txxz_spectrum_transfer_eigenvalue(const txxz_spectrum* spectrum, size_t index,
                                                       txxz_complex u, txxz_complex* out);
TXXZ_API void txxz_spectrum_destroy(txxz_spectrum* spectrum);

/* ---- zero points ---- */

typedef struct txxz_roots txxz_roots;

typedef struct {
    double tol;
    int max_iter;
    double damping;
    double dedupe_tol;
} txxz_solver_config;

typedef enum {
    TXXZ_SOLVE_CONVERGED = 0,
    TXXZ_SOLVE_MAX_ITERATIONS = 1,
    TXXZ_SOLVE_LINE_SEARCH_FAILED = 2,
    TXXZ_SOLVE_SINGULAR_JACOBIAN = 3,
    TXXZ_SOLVE_SINGULAR_CONFIGURATION = 4,
    TXXZ_SOLVE_COLLISION = 5
} txxz_solve_status;

typedef struct {
    txxz_solve_status status;
    int iterations;
    double residual;
} txxz_solve_report;

typedef enum {
    TXXZ_ROOT_REAL = 0,
    TXXZ_ROOT_HALF_LINE = 1,
    TXXZ_ROOT_STRING_UPPER = 2,
    TXXZ_ROOT_STRING_LOWER = 3,
    TXXZ_ROOT_OTHER = 4
} txxz_root_label;

typedef struct {
    int real;
    int half_line;
    int strings;
    int other;
    int warnings;
    char name[48];
} txxz_pattern;

TXXZ_API void txxz_solver_config_default(txxz_solver_config* cfg);

/* Shifted roots lambda_j = z_j + eta/2. */
TXXZ_API txxz_status txxz_roots_from_shifted(const txxz_complex* lambdas, size_t count, txxz_complex eta,
                                             txxz_roots** out);
TXXZ_API txxz_status txxz_roots_copy(const txxz_roots* roots, txxz_roots** out);
TXXZ_API size_t txxz_roots_count(const txxz_roots* roots);
TXXZ_API txxz_status txxz_roots_shifted(const txxz_roots* roots, txxz_complex* out, size_t capacity);
TXXZ_API txxz_status txxz_roots_zeros(const txxz_roots* roots, txxz_complex* out, size_t capacity);
TXXZ_API void txxz_roots_destroy(txxz_roots* roots);

/* Quantum numbers for real roots, half-line roots and 2-string centres. */
TXXZ_API txxz_status txxz_roots_seed(const txxz_model* model, const double* bulk, size_t n_bulk,
                                     const double* half_line, size_t n_half, const double* strings,
                                     size_t n_strings, txxz_roots** out);
/* Fills buffers with the built-in sets. kind: 0 ground, 1 type-I (value = J), 2 type-II (value = j). */
TXXZ_API txxz_status txxz_quantum_numbers(int n_sites, int kind, double value, double* bulk, size_t* n_bulk,
                                          double* half_line, size_t* n_half, double* strings, size_t* n_strings,
                                          size_t capacity);

/* Both return TXXZ_ERR_NOT_CONVERGED (with *out set to the last iterate) when the solve fails. */
TXXZ_API txxz_status txxz_roots_solve(const txxz_model* model, const txxz_roots* initial,
                                      const txxz_solver_config* cfg, txxz_roots** out, txxz_solve_report* report);
TXXZ_API txxz_status txxz_roots_solve_quantum(const txxz_model* model, const double* bulk, size_t n_bulk,
                                              const double* half_line, size_t n_half, const double* strings,
                                              size_t n_strings, const txxz_solver_config* cfg, txxz_roots** out,
                                              txxz_solve_report* report);
/* Continues a solution of `from` to the thetas of `to`. */
TXXZ_API txxz_status txxz_roots_continue(const txxz_model* from, const txxz_model* to, const txxz_roots* start,
                                         int steps, const txxz_solver_config* cfg, txxz_roots** out,
                                         txxz_solve_report* report);

TXXZ_API txxz_status txxz_roots_residual(const txxz_roots* roots, const txxz_model* model, double* max_abs);
TXXZ_API txxz_status txxz_roots_energy(const txxz_roots* roots, const txxz_model* model, double* out);
TXXZ_API txxz_status txxz_roots_complex_energy(const txxz_roots* roots, const txxz_model* model,
                                               txxz_complex* out);
TXXZ_API txxz_status txxz_roots_classify(const txxz_roots* roots, double tol, txxz_pattern* out, int* labels,
                                         size_t capacity);
TXXZ_API txxz_status txxz_roots_same(const txxz_roots* a, const txxz_roots* b, double tol, int* out);

/* Zero points of an ED / transfer eigenstate, recovered from Lambda on the imaginary axis. */
TXXZ_API txxz_status txxz_spectrum_zeros(const txxz_spectrum* spectrum, size_t index, txxz_roots** out,
                                         txxz_complex* lambda0);

typedef struct txxz_root_list txxz_root_list;

/* All distinct converged solutions of the admissible quantum-number configurations. */
TXXZ_API txxz_status txxz_scan(const txxz_model* model, const txxz_solver_config* cfg, txxz_root_list** out);
TXXZ_API size_t txxz_root_list_size(const txxz_root_list* list);
TXXZ_API txxz_status txxz_root_list_get(const txxz_root_list* list, size_t index, txxz_roots** out);
TXXZ_API void txxz_root_list_destroy(txxz_root_list* list);

typedef struct {
    size_t pairs;
    size_t unmatched_ed;
    size_t unmatched_bae;
    double max_deviation;
} txxz_match_summary;

/* Greedy nearest matching; bae_deviation[i] (optional, n_bae entries) gets the worst deviation of
   solution i, or -1 when it is not fully matched. */
TXXZ_API txxz_status txxz_match_spectrum(const double* ed, size_t n_ed, const double* bae, size_t n_bae,
                                         double tol, int states_per_solution, txxz_match_summary* out,
                                         double* bae_deviation);

/* ---- functional relations ---- */

TXXZ_API txxz_status txxz_a_function(const txxz_model* model, txxz_complex u, txxz_complex* out);
TXXZ_API txxz_status txxz_d_function(const txxz_model* model, txxz_complex u, txxz_complex* out);

typedef struct {
    txxz_complex lambda0;
    double bilinear;          /* max relative bilinear residual */
    double cubic;             /* max relative cubic residual */
    double quasi_periodicity; /* F3 checks */
    double property1;
    double property2;
    double property3;
    double degree_tail;
} txxz_identity_report;

/* Fits lambda0 and evaluates every relation at `samples` random points drawn from `seed`. */
TXXZ_API txxz_status txxz_verify_identities(const txxz_roots* roots, const txxz_model* model, size_t samples,
                                            uint64_t seed, txxz_identity_report* out);
TXXZ_API txxz_status txxz_lambda(const txxz_roots* roots, const txxz_model* model, txxz_complex u,
                                 txxz_complex* out);

/* ---- thermodynamic limit ---- */

typedef enum { TXXZ_TYPE_I = 0, TXXZ_TYPE_II = 1 } txxz_excitation;
typedef enum { TXXZ_PROCESS_I_I = 0, TXXZ_PROCESS_II_II = 1, TXXZ_PROCESS_I_II = 2 } txxz_process;

TXXZ_API txxz_status txxz_theta_m(double lambda, int m, double* out);
TXXZ_API txxz_status txxz_a_m(double lambda, int m, double* out);
TXXZ_API txxz_status txxz_a_m_fourier(double w, int m, double* out);
/* n <= 0 selects N = infinity. */
TXXZ_API txxz_status txxz_rho_ground(double lambda, double hole, int n, double* out);
TXXZ_API txxz_status txxz_hole_delta(double lambda, txxz_complex* out);
TXXZ_API txxz_status txxz_hole_pair_delta(double lambda, double* out);
TXXZ_API txxz_status txxz_ground_energy_density(double* closed_form, double* quadrature);
TXXZ_API txxz_status txxz_excitation_energy(txxz_excitation kind, double alpha, double* out);
TXXZ_API txxz_status txxz_excitation_energy_quadrature(txxz_excitation kind, double alpha, double* out);
TXXZ_API txxz_status txxz_delta_rho(txxz_excitation kind, double alpha, double lambda, int n, double* out);
/* Integral of ground + listed excitations (atoms included). */
TXXZ_API txxz_status txxz_filling(const txxz_excitation* kinds, const double* alphas, size_t count, int n,
                                  double hole, double* out);
TXXZ_API txxz_status txxz_smatrix(txxz_process process, double alpha1, double alpha2, txxz_complex* out);
TXXZ_API txxz_status txxz_smatrix_quadrature(txxz_process process, double alpha1, double alpha2,
                                             txxz_complex* out);
/* Sup distance between the closed form and the fixed-point solution of its integral equation.
   which: 0 ground density, 1 type-I change, 2 type-II change. */
TXXZ_API txxz_status txxz_integral_equation_check(int which, double alpha, double* sup_distance);

typedef struct {
    int n_sites;
    double energy_per_site;
    double max_deviation;
    double filling;
} txxz_density_entry;

/* Ground states for each size, compared with the N = infinity density on |lambda| <= window. */
TXXZ_API txxz_status txxz_ground_density_check(const int* sizes, size_t count, double window,
                                               txxz_density_entry* out, int* nonincreasing);

#ifdef __cplusplus
}
#endif

#endif
