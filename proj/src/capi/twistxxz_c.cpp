#include "twistxxz/twistxxz.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <random>
#include <string>

#include "twistxxz/bae.hpp"
#include "twistxxz/core.hpp"
#include "twistxxz/error.hpp"
#include "twistxxz/thermo.hpp"
#include "twistxxz/tq.hpp"

using namespace twistxxz;

struct txxz_model {
    ModelParams params;
};

struct txxz_spectrum {
    ModelParams params;
    std::vector<double> eigenvalues;  // empty for transfer-only spectra
    std::vector<int> parity;
    std::vector<std::vector<cplx>> vectors;
};

struct txxz_roots {
    ZeroPointSet set;
    cplx eta;
};

struct txxz_root_list {
    std::vector<txxz_roots> items;
};

namespace {

thread_local std::string last_error;

cplx to_cplx(txxz_complex z) { return {z.re, z.im}; }
txxz_complex from_cplx(cplx z) { return {z.real(), z.imag()}; }

txxz_status map_kind(ErrorKind k) {
    switch (k) {
        case ErrorKind::invalid_argument: return TXXZ_ERR_INVALID_ARGUMENT;
        case ErrorKind::capacity: return TXXZ_ERR_CAPACITY;
        case ErrorKind::degenerate_anisotropy: return TXXZ_ERR_DEGENERATE_ANISOTROPY;
        case ErrorKind::singular_configuration: return TXXZ_ERR_SINGULAR_CONFIGURATION;
        case ErrorKind::singular_matrix: return TXXZ_ERR_SINGULAR_MATRIX;
        case ErrorKind::precondition: return TXXZ_ERR_PRECONDITION;
        case ErrorKind::non_physical: return TXXZ_ERR_NON_PHYSICAL;
        case ErrorKind::degeneracy_resolution: return TXXZ_ERR_DEGENERACY_RESOLUTION;
        case ErrorKind::inconsistent_zero_set: return TXXZ_ERR_INCONSISTENT_ZERO_SET;
        case ErrorKind::consistency: return TXXZ_ERR_CONSISTENCY;
        case ErrorKind::io: return TXXZ_ERR_IO;
    }
    return TXXZ_ERR_INTERNAL;
}

struct StatusError {
    txxz_status status;
    std::string message;
};

[[noreturn]] void raise(txxz_status s, const std::string& msg) { throw StatusError{s, msg}; }

void need(const void* p, const char* name) {
    if (!p) raise(TXXZ_ERR_INVALID_ARGUMENT, std::string(name) + " is null");
}

void need_capacity(std::size_t have, std::size_t want) {
    if (have < want)
        raise(TXXZ_ERR_BUFFER_TOO_SMALL, "buffer holds " + std::to_string(have) + ", need " + std::to_string(want));
}

template <class F>
txxz_status guarded(F&& f) {
    try {
        const txxz_status s = f();
        if (s == TXXZ_OK) last_error.clear();
        return s;
    } catch (const StatusError& e) {
        last_error = e.message;
        return e.status;
    } catch (const Error& e) {
        last_error = e.what();
        return map_kind(e.kind());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return TXXZ_ERR_CAPACITY;
    } catch (const std::exception& e) {
        last_error = e.what();
        return TXXZ_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return TXXZ_ERR_INTERNAL;
    }
}

SolverConfig to_config(const txxz_solver_config* cfg) {
    SolverConfig c;
    if (cfg) {
        c.tol = cfg->tol;
        c.max_iter = cfg->max_iter;
        c.damping = cfg->damping;
        c.dedupe_tol = cfg->dedupe_tol;
    }
    c.validate();
    return c;
}

QuantumNumbers to_qn(const double* bulk, std::size_t nb, const double* half, std::size_t nh, const double* str,
                     std::size_t ns) {
    if ((nb && !bulk) || (nh && !half) || (ns && !str)) raise(TXXZ_ERR_INVALID_ARGUMENT, "quantum-number buffer is null");
    QuantumNumbers qn;
    qn.bulk.assign(bulk, bulk + nb);
    qn.half_line.assign(half, half + nh);
    qn.two_string.assign(str, str + ns);
    return qn;
}

txxz_status finish_solve(const SolveResult& r, cplx eta, txxz_roots** out, txxz_solve_report* report) {
    *out = new txxz_roots{r.roots, eta};
    if (report) *report = {static_cast<txxz_solve_status>(r.status), r.iterations, r.residual};
    if (!r.ok()) {
        last_error = std::string(to_string(r.status)) + (r.message.empty() ? "" : ": " + r.message);
        return TXXZ_ERR_NOT_CONVERGED;
    }
    return TXXZ_OK;
}

void copy_matrix(const DenseMatrix& m, txxz_complex* out, std::size_t capacity, std::size_t* dim) {
    if (dim) *dim = m.dim();
    if (!out) return;
    need_capacity(capacity, m.dim() * m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c) out[r * m.dim() + c] = from_cplx(m(r, c));
}

double rel(const DenseMatrix& a, const DenseMatrix& b) {
    const double s = std::max(a.frobenius_norm(), b.frobenius_norm());
    return s == 0.0 ? 0.0 : (a - b).frobenius_norm() / s;
}

ExcitationKind to_kind(txxz_excitation k) {
    if (k == TXXZ_TYPE_I) return ExcitationKind::type_one;
    if (k == TXXZ_TYPE_II) return ExcitationKind::type_two;
    raise(TXXZ_ERR_INVALID_ARGUMENT, "unknown excitation kind");
}

Process to_process(txxz_process p) {
    switch (p) {
        case TXXZ_PROCESS_I_I: return Process::I_I;
        case TXXZ_PROCESS_II_II: return Process::II_II;
        case TXXZ_PROCESS_I_II: return Process::I_II;
    }
    raise(TXXZ_ERR_INVALID_ARGUMENT, "unknown process");
}

std::optional<int> size_or_infinity(int n) {
    if (n <= 0) return std::nullopt;
    return n;
}

}  // namespace

extern "C" {

const char* txxz_last_error(void) { return last_error.c_str(); }

const char* txxz_status_name(txxz_status s) {
    switch (s) {
        case TXXZ_OK: return "ok";
        case TXXZ_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case TXXZ_ERR_CAPACITY: return "capacity";
        case TXXZ_ERR_DEGENERATE_ANISOTROPY: return "degenerate_anisotropy";
        case TXXZ_ERR_SINGULAR_CONFIGURATION: return "singular_configuration";
        case TXXZ_ERR_SINGULAR_MATRIX: return "singular_matrix";
        case TXXZ_ERR_PRECONDITION: return "precondition";
        case TXXZ_ERR_NON_PHYSICAL: return "non_physical";
        case TXXZ_ERR_DEGENERACY_RESOLUTION: return "degeneracy_resolution";
        case TXXZ_ERR_INCONSISTENT_ZERO_SET: return "inconsistent_zero_set";
        case TXXZ_ERR_CONSISTENCY: return "consistency";
        case TXXZ_ERR_IO: return "io";
        case TXXZ_ERR_NOT_CONVERGED: return "not_converged";
        case TXXZ_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
        case TXXZ_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* txxz_version(void) { return "0.1.0"; }

// ---- model

txxz_status txxz_model_create(int n_sites, txxz_complex eta, txxz_model** out) {
    return guarded([&] {
        need(out, "out");
        auto p = ModelParams::homogeneous(n_sites, to_cplx(eta));
        p.validate();
        *out = new txxz_model{std::move(p)};
        return TXXZ_OK;
    });
}

txxz_status txxz_model_create_random(int n_sites, uint64_t seed, double spread, txxz_complex eta, txxz_model** out) {
    return guarded([&] {
        need(out, "out");
        auto p = ModelParams::random_inhomogeneous(n_sites, seed, spread, to_cplx(eta));
        p.validate();
        *out = new txxz_model{std::move(p)};
        return TXXZ_OK;
    });
}

txxz_status txxz_model_set_thetas(txxz_model* model, const txxz_complex* thetas, size_t count) {
    return guarded([&] {
        need(model, "model");
        need(thetas, "thetas");
        if (count != static_cast<std::size_t>(model->params.n_sites))
            raise(TXXZ_ERR_INVALID_ARGUMENT, "need one theta per site");
        ModelParams p = model->params;
        for (std::size_t i = 0; i < count; ++i) p.thetas[i] = to_cplx(thetas[i]);
        p.validate();
        model->params = std::move(p);
        return TXXZ_OK;
    });
}

txxz_status txxz_model_get_thetas(const txxz_model* model, txxz_complex* out, size_t capacity) {
    return guarded([&] {
        need(model, "model");
        need(out, "out");
        need_capacity(capacity, model->params.thetas.size());
        for (std::size_t i = 0; i < model->params.thetas.size(); ++i) out[i] = from_cplx(model->params.thetas[i]);
        return TXXZ_OK;
    });
}

int txxz_model_sites(const txxz_model* model) { return model ? model->params.n_sites : 0; }

txxz_complex txxz_model_eta(const txxz_model* model) {
    return model ? from_cplx(model->params.eta) : txxz_complex{0.0, 0.0};
}

void txxz_model_destroy(txxz_model* model) { delete model; }

// ---- operators

txxz_status txxz_r_matrix(txxz_complex u, txxz_complex eta, txxz_complex out[16]) {
    return guarded([&] {
        need(out, "out");
        copy_matrix(build_r_matrix(to_cplx(u), to_cplx(eta)), out, 16, nullptr);
        return TXXZ_OK;
    });
}

txxz_status txxz_hamiltonian(const txxz_model* model, txxz_complex* out, size_t capacity, size_t* dim) {
    return guarded([&] {
        need(model, "model");
        copy_matrix(build_hamiltonian(model->params), out, capacity, dim);
        return TXXZ_OK;
    });
}

txxz_status txxz_transfer_matrix(const txxz_model* model, txxz_complex u, txxz_complex* out, size_t capacity,
                                 size_t* dim) {
    return guarded([&] {
        need(model, "model");
        copy_matrix(build_transfer_matrix(to_cplx(u), model->params), out, capacity, dim);
        return TXXZ_OK;
    });
}

txxz_status txxz_transfer_diagnostics(const txxz_model* model, uint64_t seed, int pairs, txxz_transfer_report* out) {
    return guarded([&] {
        need(model, "model");
        need(out, "out");
        if (pairs < 1) raise(TXXZ_ERR_INVALID_ARGUMENT, "pairs must be positive");
        const auto& p = model->params;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> re(-1.0, 1.0), im(-pi / 2.0, pi / 2.0);
        const double sign = (p.n_sites - 1) % 2 ? -1.0 : 1.0;
        txxz_transfer_report rep{0.0, 0.0, -1.0};
        for (int k = 0; k < pairs; ++k) {
            const cplx u{re(rng), im(rng)}, v{re(rng), im(rng)};
            const auto tu = build_transfer_matrix(u, p);
            const auto tv = build_transfer_matrix(v, p);
            rep.commutator = std::max(rep.commutator, commutator(tu, tv).frobenius_norm() /
                                                          (tu.frobenius_norm() * tv.frobenius_norm()));
            rep.quasi_periodicity =
                std::max(rep.quasi_periodicity, rel(build_transfer_matrix(u + I * pi, p), sign * tu));
        }
        if (p.is_homogeneous()) rep.hamiltonian = rel(hamiltonian_from_transfer(p), build_hamiltonian(p));
        *out = rep;
        return TXXZ_OK;
    });
}

// ---- spectrum

txxz_status txxz_spectrum_compute(const txxz_model* model, txxz_spectrum** out) {
    return guarded([&] {
        need(model, "model");
        need(out, "out");
        auto r = solve_chain(model->params, true);
        *out = new txxz_spectrum{model->params, std::move(r.eigenvalues), std::move(r.parity),
                                 std::move(r.eigenvectors)};
        return TXXZ_OK;
    });
}

txxz_status txxz_spectrum_transfer(const txxz_model* model, txxz_spectrum** out) {
    return guarded([&] {
        need(model, "model");
        need(out, "out");
        auto r = transfer_eigenstates(model->params);
        std::vector<int> parity;
        for (const auto& v : r.eigenvectors) {
            const auto uv = apply_parity(v);
            cplx ov = 0.0;
            double nn = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                ov += std::conj(v[i]) * uv[i];
                nn += std::norm(v[i]);
            }
            const double s = (ov / nn).real();
            parity.push_back(std::abs(std::abs(s) - 1.0) < 1e-8 ? (s > 0 ? 1 : -1) : 0);
        }
        *out = new txxz_spectrum{model->params, {}, std::move(parity), std::move(r.eigenvectors)};
        return TXXZ_OK;
    });
}

size_t txxz_spectrum_size(const txxz_spectrum* s) { return s ? s->vectors.size() : 0; }

txxz_status txxz_spectrum_eigenvalues(const txxz_spectrum* s, double* out, size_t capacity) {
    return guarded([&] {
        need(s, "spectrum");
        need(out, "out");
        if (s->eigenvalues.empty()) raise(TXXZ_ERR_PRECONDITION, "spectrum has no energies");
        need_capacity(capacity, s->eigenvalues.size());
        std::copy(s->eigenvalues.begin(), s->eigenvalues.end(), out);
        return TXXZ_OK;
    });
}

txxz_status txxz_spectrum_parities(const txxz_spectrum* s, int* out, size_t capacity) {
    return guarded([&] {
        need(s, "spectrum");
        need(out, "out");
        need_capacity(capacity, s->parity.size());
        std::copy(s->parity.begin(), s->parity.end(), out);
        return TXXZ_OK;
    });
}

txxz_status txxz_spectrum_transfer_eigenvalue(const txxz_spectrum* s, size_t index, txxz_complex u,
                                              txxz_complex* out) {
    return guarded([&] {
        need(s, "spectrum");
        need(out, "out");
        if (index >= s->vectors.size()) raise(TXXZ_ERR_INVALID_ARGUMENT, "state index out of range");
        *out = from_cplx(transfer_eigenvalue_on_state(to_cplx(u), s->params, s->vectors[index]));
        return TXXZ_OK;
    });
}

void txxz_spectrum_destroy(txxz_spectrum* s) { delete s; }

txxz_status txxz_spectrum_zeros(const txxz_spectrum* s, size_t index, txxz_roots** out, txxz_complex* lambda0) {
    return guarded([&] {
        need(s, "spectrum");
        need(out, "out");
        if (index >= s->vectors.size()) raise(TXXZ_ERR_INVALID_ARGUMENT, "state index out of range");
        const auto& v = s->vectors[index];
        auto lam = [&](cplx u) { return transfer_eigenvalue_on_state(u, s->params, v); };
        const auto f = zeros_from_samples(lam, s->params.n_sites);
        if (lambda0) *lambda0 = from_cplx(f.lambda0);
        *out = new txxz_roots{ZeroPointSet{f.zeros}, s->params.eta};
        return TXXZ_OK;
    });
}

// ---- roots

void txxz_solver_config_default(txxz_solver_config* cfg) {
    if (!cfg) return;
    const SolverConfig c;
    *cfg = {c.tol, c.max_iter, c.damping, c.dedupe_tol};
}

txxz_status txxz_roots_from_shifted(const txxz_complex* lambdas, size_t count, txxz_complex eta, txxz_roots** out) {
    return guarded([&] {
        need(out, "out");
        if (count && !lambdas) raise(TXXZ_ERR_INVALID_ARGUMENT, "lambdas is null");
        std::vector<cplx> l(count);
        for (std::size_t i = 0; i < count; ++i) l[i] = to_cplx(lambdas[i]);
        *out = new txxz_roots{ZeroPointSet::from_shifted(l, to_cplx(eta)), to_cplx(eta)};
        return TXXZ_OK;
    });
}

txxz_status txxz_roots_copy(const txxz_roots* roots, txxz_roots** out) {
    return guarded([&] {
        need(roots, "roots");
        need(out, "out");
        *out = new txxz_roots{*roots};
        return TXXZ_OK;
    });
}

size_t txxz_roots_count(const txxz_roots* roots) { return roots ? roots->set.size() : 0; }

txxz_status txxz_roots_shifted(const txxz_roots* roots, txxz_complex* out, size_t capacity) {
    return guarded([&] {
        need(roots, "roots");
        need(out, "out");
        need_capacity(capacity, roots->set.size());
        const auto l = roots->set.shifted(roots->eta);
        for (std::size_t i = 0; i < l.size(); ++i) out[i] = from_cplx(l[i]);
        return TXXZ_OK;
    });
}

txxz_status txxz_roots_zeros(const txxz_roots* roots, txxz_complex* out, size_t capacity) {
    return guarded([&] {
        need(roots, "roots");
        need(out, "out");
        need_capacity(capacity, roots->set.size());
        for (std::size_t i = 0; i < roots->set.size(); ++i) out[i] = from_cplx(roots->set.zeros[i]);
        return TXXZ_OK;
    });
}

void txxz_roots_destroy(txxz_roots* roots) { delete roots; }

txxz_status txxz_roots_seed(const txxz_model* model, const double* bulk, size_t n_bulk, const double* half_line,
                            size_t n_half, const double* strings, size_t n_strings, txxz_roots** out) {
    return guarded([&] {
        need(model, "model");
        need(out, "out");
        const auto qn = to_qn(bulk, n_bulk, half_line, n_half, strings, n_strings);
        *out = new txxz_roots{seed_from_quantum_numbers(qn, model->params), model->params.eta};
        return TXXZ_OK;
    });
}

txxz_status txxz_quantum_numbers(int n_sites, int kind, double value, double* bulk, size_t* n_bulk,
                                 double* half_line, size_t* n_half, double* strings, size_t* n_strings,
                                 size_t capacity) {
    return guarded([&] {
        need(n_bulk, "n_bulk");
        need(n_half, "n_half");
        need(n_strings, "n_strings");
        QuantumNumbers qn;
        switch (kind) {
            case 0: qn = QuantumNumbers::ground(n_sites); break;
            case 1: qn = QuantumNumbers::type_one(n_sites, value); break;
            case 2:
                if (value != static_cast<int>(value)) raise(TXXZ_ERR_INVALID_ARGUMENT, "type-II index must be an integer");
                qn = QuantumNumbers::type_two(n_sites, static_cast<int>(value));
                break;
            default: raise(TXXZ_ERR_INVALID_ARGUMENT, "kind must be 0, 1 or 2");
        }
        *n_bulk = qn.bulk.size();
        *n_half = qn.half_line.size();
        *n_strings = qn.two_string.size();
        auto put = [&](const std::vector<double>& v, double* dst) {
            if (v.empty()) return;
            need(dst, "quantum-number buffer");
            need_capacity(capacity, v.size());
            std::copy(v.begin(), v.end(), dst);
        };
        put(qn.bulk, bulk);
        put(qn.half_line, half_line);
        put(qn.two_string, strings);
        return TXXZ_OK;
    });
}

txxz_status txxz_roots_solve(const txxz_model* model, const txxz_roots* initial, const txxz_solver_config* cfg,
                             txxz_roots** out, txxz_solve_report* report) {
    return guarded([&] {
        need(model, "model");
        need(initial, "initial");
        need(out, "out");
        return finish_solve(solve_newton(initial->set, model->params, to_config(cfg)), model->params.eta, out,
                            report);
    });
}

txxz_status txxz_roots_solve_quantum(const txxz_model* model, const double* bulk, size_t n_bulk,
                                     const double* half_line, size_t n_half, const double* strings, size_t n_strings,
                                     const txxz_solver_config* cfg, txxz_roots** out, txxz_solve_report* report) {
    return guarded([&] {
        need(model, "model");
        need(out, "out");
        const auto qn = to_qn(bulk, n_bulk, half_line, n_half, strings, n_strings);
        return finish_solve(solve_quantum_numbers(qn, model->params, to_config(cfg)), model->params.eta, out,
                            report);
    });
}

txxz_status txxz_roots_continue(const txxz_model* from, const txxz_model* to, const txxz_roots* start, int steps,
                                const txxz_solver_config* cfg, txxz_roots** out, txxz_solve_report* report) {
    return guarded([&] {
        need(from, "from");
        need(to, "to");
        need(start, "start");
        need(out, "out");
        return finish_solve(continue_solution(start->set, from->params, to->params, steps, to_config(cfg)),
                            to->params.eta, out, report);
    });
}

txxz_status txxz_roots_residual(const txxz_roots* roots, const txxz_model* model, double* max_abs_out) {
    return guarded([&] {
        need(roots, "roots");
        need(model, "model");
        need(max_abs_out, "out");
        *max_abs_out = max_abs(bae_residual(roots->set, model->params));
        return TXXZ_OK;
    });
}

txxz_status txxz_roots_energy(const txxz_roots* roots, const txxz_model* model, double* out) {
    return guarded([&] {
        need(roots, "roots");
        need(model, "model");
        need(out, "out");
        *out = energy_from_zeros(roots->set, model->params);
        return TXXZ_OK;
    });
}

txxz_status txxz_roots_complex_energy(const txxz_roots* roots, const txxz_model* model, txxz_complex* out) {
    return guarded([&] {
        need(roots, "roots");
        need(model, "model");
        need(out, "out");
        *out = from_cplx(complex_energy_from_zeros(roots->set, model->params));
        return TXXZ_OK;
    });
}

txxz_status txxz_roots_classify(const txxz_roots* roots, double tol, txxz_pattern* out, int* labels,
                                size_t capacity) {
    return guarded([&] {
        need(roots, "roots");
        need(out, "out");
        const auto pat = classify_roots(roots->set, roots->eta, tol);
        out->real = pat.real;
        out->half_line = pat.half_line;
        out->strings = pat.strings;
        out->other = pat.other;
        out->warnings = static_cast<int>(pat.warnings.size());
        const std::string name = pat.name();
        std::memset(out->name, 0, sizeof out->name);
        std::strncpy(out->name, name.c_str(), sizeof out->name - 1);
        if (labels) {
            need_capacity(capacity, pat.labels.size());
            for (std::size_t i = 0; i < pat.labels.size(); ++i) labels[i] = static_cast<int>(pat.labels[i]);
        }
        return TXXZ_OK;
    });
}

txxz_status txxz_roots_same(const txxz_roots* a, const txxz_roots* b, double tol, int* out) {
    return guarded([&] {
        need(a, "a");
        need(b, "b");
        need(out, "out");
        *out = same_roots(a->set, b->set, tol, a->eta) ? 1 : 0;
        return TXXZ_OK;
    });
}

txxz_status txxz_scan(const txxz_model* model, const txxz_solver_config* cfg, txxz_root_list** out) {
    return guarded([&] {
        need(model, "model");
        need(out, "out");
        const auto sols = scan_quantum_numbers(model->params, to_config(cfg));
        auto* list = new txxz_root_list;
        for (const auto& s : sols) list->items.push_back({s.roots, model->params.eta});
        *out = list;
        return TXXZ_OK;
    });
}

size_t txxz_root_list_size(const txxz_root_list* list) { return list ? list->items.size() : 0; }

txxz_status txxz_root_list_get(const txxz_root_list* list, size_t index, txxz_roots** out) {
    return guarded([&] {
        need(list, "list");
        need(out, "out");
        if (index >= list->items.size()) raise(TXXZ_ERR_INVALID_ARGUMENT, "index out of range");
        *out = new txxz_roots{list->items[index]};
        return TXXZ_OK;
    });
}

void txxz_root_list_destroy(txxz_root_list* list) { delete list; }

txxz_status txxz_match_spectrum(const double* ed, size_t n_ed, const double* bae, size_t n_bae, double tol,
                                int states_per_solution, txxz_match_summary* out, double* bae_deviation) {
    return guarded([&] {
        need(out, "out");
        if ((n_ed && !ed) || (n_bae && !bae)) raise(TXXZ_ERR_INVALID_ARGUMENT, "energy buffer is null");
        const auto rep = match_spectrum({ed, n_ed}, {bae, n_bae}, tol, states_per_solution);
        *out = {rep.pairs.size(), rep.unmatched_ed.size(), rep.unmatched_bae.size(), rep.max_deviation};
        if (bae_deviation) {
            std::fill(bae_deviation, bae_deviation + n_bae, 0.0);
            for (const auto& p : rep.pairs)
                bae_deviation[p.bae_index] = std::max(bae_deviation[p.bae_index], p.deviation);
            for (auto i : rep.unmatched_bae) bae_deviation[i] = -1.0;
        }
        return TXXZ_OK;
    });
}

// ---- functional relations

txxz_status txxz_a_function(const txxz_model* model, txxz_complex u, txxz_complex* out) {
    return guarded([&] {
        need(model, "model");
        need(out, "out");
        *out = from_cplx(a_function(to_cplx(u), model->params));
        return TXXZ_OK;
    });
}

txxz_status txxz_d_function(const txxz_model* model, txxz_complex u, txxz_complex* out) {
    return guarded([&] {
        need(model, "model");
        need(out, "out");
        *out = from_cplx(d_function(to_cplx(u), model->params));
        return TXXZ_OK;
    });
}

txxz_status txxz_verify_identities(const txxz_roots* roots, const txxz_model* model, size_t samples, uint64_t seed,
                                   txxz_identity_report* out) {
    return guarded([&] {
        need(roots, "roots");
        need(model, "model");
        need(out, "out");
        if (samples == 0) raise(TXXZ_ERR_INVALID_ARGUMENT, "samples must be positive");
        const auto fit = fit_lambda0(roots->set, model->params);
        const auto pts = cubic_sample_points(samples, seed);
        const auto cubic = verify_cubic(fit.function, model->params, pts);
        const auto f3 = verify_f3_properties(fit.function, model->params, pts);
        out->lambda0 = from_cplx(fit.function.lambda0);
        out->bilinear = fit.report.max_relative();
        out->cubic = cubic.max_relative;
        out->quasi_periodicity = f3.quasi_periodicity;
        out->property1 = f3.property1;
        out->property2 = f3.property2;
        out->property3 = f3.property3;
        out->degree_tail = degree_tail(fit.function, model->params.n_sites);
        return TXXZ_OK;
    });
}

txxz_status txxz_lambda(const txxz_roots* roots, const txxz_model* model, txxz_complex u, txxz_complex* out) {
    return guarded([&] {
        need(roots, "roots");
        need(model, "model");
        need(out, "out");
        *out = from_cplx(fit_lambda0(roots->set, model->params).function(to_cplx(u)));
        return TXXZ_OK;
    });
}

// ---- thermodynamic limit

txxz_status txxz_theta_m(double lambda, int m, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = theta_m(lambda, m);
        return TXXZ_OK;
    });
}

txxz_status txxz_a_m(double lambda, int m, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = a_m(lambda, m);
        return TXXZ_OK;
    });
}

txxz_status txxz_a_m_fourier(double w, int m, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = a_m_fourier(w, m);
        return TXXZ_OK;
    });
}

txxz_status txxz_rho_ground(double lambda, double hole, int n, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = rho_ground(lambda, hole, size_or_infinity(n));
        return TXXZ_OK;
    });
}

txxz_status txxz_hole_delta(double lambda, txxz_complex* out) {
    return guarded([&] {
        need(out, "out");
        *out = from_cplx(hole_delta(lambda));
        return TXXZ_OK;
    });
}

txxz_status txxz_hole_pair_delta(double lambda, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = hole_pair_delta(lambda);
        return TXXZ_OK;
    });
}

txxz_status txxz_ground_energy_density(double* closed_form, double* quadrature) {
    return guarded([&] {
        const auto g = ground_energy_density();
        if (closed_form) *closed_form = g.closed_form;
        if (quadrature) *quadrature = g.quadrature;
        return TXXZ_OK;
    });
}

txxz_status txxz_excitation_energy(txxz_excitation kind, double alpha, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = excitation_energy({to_kind(kind), alpha, {}});
        return TXXZ_OK;
    });
}

txxz_status txxz_excitation_energy_quadrature(txxz_excitation kind, double alpha, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = excitation_energy_quadrature({to_kind(kind), alpha, {}});
        return TXXZ_OK;
    });
}

txxz_status txxz_delta_rho(txxz_excitation kind, double alpha, double lambda, int n, double* out) {
    return guarded([&] {
        need(out, "out");
        if (n < 1) raise(TXXZ_ERR_INVALID_ARGUMENT, "n must be positive");
        *out = delta_rho({to_kind(kind), alpha, {}}, lambda, n);
        return TXXZ_OK;
    });
}

txxz_status txxz_filling(const txxz_excitation* kinds, const double* alphas, size_t count, int n, double hole,
                         double* out) {
    return guarded([&] {
        need(out, "out");
        if (count && (!kinds || !alphas)) raise(TXXZ_ERR_INVALID_ARGUMENT, "excitation buffer is null");
        if (n < 1) raise(TXXZ_ERR_INVALID_ARGUMENT, "n must be positive");
        std::vector<ExcitationSpec> specs;
        for (std::size_t i = 0; i < count; ++i) specs.push_back({to_kind(kinds[i]), alphas[i], {}});
        *out = excited_profile(specs, n, hole).total_integral();
        return TXXZ_OK;
    });
}

txxz_status txxz_smatrix(txxz_process process, double alpha1, double alpha2, txxz_complex* out) {
    return guarded([&] {
        need(out, "out");
        *out = from_cplx(smatrix(to_process(process), alpha1, alpha2).value);
        return TXXZ_OK;
    });
}

txxz_status txxz_smatrix_quadrature(txxz_process process, double alpha1, double alpha2, txxz_complex* out) {
    return guarded([&] {
        need(out, "out");
        *out = from_cplx(smatrix_quadrature(to_process(process), alpha1, alpha2));
        return TXXZ_OK;
    });
}

txxz_status txxz_integral_equation_check(int which, double alpha, double* sup_distance) {
    return guarded([&] {
        need(sup_distance, "out");
        switch (which) {
            case 0:
                *sup_distance = solve_density_equation([](double x) { return a_m(x, 1); }).sup_distance(rho_infinite);
                break;
            case 1: {
                const ExcitationSpec s{ExcitationKind::type_one, alpha, {}};
                *sup_distance = solve_density_equation([&](double x) { return -a_m(x - alpha, 1); })
                                    .sup_distance([&](double x) { return delta_rho(s, x, 1); });
                break;
            }
            case 2: {
                const ExcitationSpec s{ExcitationKind::type_two, alpha, {}};
                *sup_distance = solve_density_equation([&](double x) { return a_m(x - alpha, 4) - a_m(x - alpha, 2); })
                                    .sup_distance([&](double x) { return delta_rho(s, x, 1); });
                break;
            }
            default: raise(TXXZ_ERR_INVALID_ARGUMENT, "which must be 0, 1 or 2");
        }
        return TXXZ_OK;
    });
}

txxz_status txxz_ground_density_check(const int* sizes, size_t count, double window, txxz_density_entry* out,
                                      int* nonincreasing) {
    return guarded([&] {
        need(sizes, "sizes");
        need(out, "out");
        if (count == 0) raise(TXXZ_ERR_INVALID_ARGUMENT, "no sizes given");
        std::vector<ZeroPointSet> sets;
        std::vector<double> energies;
        for (std::size_t i = 0; i < count; ++i) {
            const auto p = ModelParams::homogeneous(sizes[i]);
            const auto r = solve_quantum_numbers(QuantumNumbers::ground(sizes[i]), p);
            if (!r.ok()) raise(TXXZ_ERR_NOT_CONVERGED, "ground state of N=" + std::to_string(sizes[i]) + ": " + r.message);
            energies.push_back(energy_from_zeros(r.roots, p) / sizes[i]);
            std::vector<cplx> lam;
            for (double x : real_rapidities(r.roots)) lam.emplace_back(x, 0.0);
            sets.push_back(ZeroPointSet::from_shifted(lam));
        }
        const auto rep = finite_size_density_check(sets, ground_profile(std::nullopt, 0.0), window);
        for (std::size_t i = 0; i < count; ++i)
            out[i] = {rep.entries[i].n_sites, energies[i], rep.entries[i].max_deviation, rep.entries[i].filling};
        if (nonincreasing) *nonincreasing = rep.nonincreasing ? 1 : 0;
        return TXXZ_OK;
    });
}

}  // extern "C"
