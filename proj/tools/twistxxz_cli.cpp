#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twistxxz/twistxxz.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_convergence = 3;
constexpr int exit_io = 4;
constexpr int exit_internal = 1;

const txxz_complex eta_default{0.0, M_PI / 3.0};

struct CliError {
    int code;
    std::string message;
};

int exit_code_for(txxz_status s) {
    switch (s) {
        case TXXZ_OK: return exit_ok;
        case TXXZ_ERR_NOT_CONVERGED: return exit_convergence;
        case TXXZ_ERR_IO: return exit_io;
        case TXXZ_ERR_INTERNAL: return exit_internal;
        default: return exit_validation;
    }
}

void check(txxz_status s, const std::string& what) {
    if (s != TXXZ_OK)
        throw CliError{exit_code_for(s), what + ": " + txxz_status_name(s) + ": " + txxz_last_error()};
}

struct ModelDeleter { void operator()(txxz_model* p) const { txxz_model_destroy(p); } };
struct RootsDeleter { void operator()(txxz_roots* p) const { txxz_roots_destroy(p); } };
struct SpectrumDeleter { void operator()(txxz_spectrum* p) const { txxz_spectrum_destroy(p); } };
struct ListDeleter { void operator()(txxz_root_list* p) const { txxz_root_list_destroy(p); } };
using Model = std::unique_ptr<txxz_model, ModelDeleter>;
using Roots = std::unique_ptr<txxz_roots, RootsDeleter>;
using Spectrum = std::unique_ptr<txxz_spectrum, SpectrumDeleter>;
using RootList = std::unique_ptr<txxz_root_list, ListDeleter>;

Model homogeneous_model(int n) {
    txxz_model* m = nullptr;
    check(txxz_model_create(n, eta_default, &m), "model");
    return Model(m);
}

Model random_model(int n, std::uint64_t seed, double spread) {
    txxz_model* m = nullptr;
    check(txxz_model_create_random(n, seed, spread, eta_default, &m), "model");
    return Model(m);
}

std::string num(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

json cjson(txxz_complex z) { return json{{"re", z.re}, {"im", z.im}}; }

std::vector<txxz_complex> shifted(const txxz_roots* r) {
    std::vector<txxz_complex> v(txxz_roots_count(r));
    if (!v.empty()) check(txxz_roots_shifted(r, v.data(), v.size()), "roots");
    return v;
}

int thread_count() {
    if (const char* env = std::getenv("TWISTXXZ_THREADS")) {
        int n = 0;
        auto [p, ec] = std::from_chars(env, env + std::strlen(env), n);
        if (ec != std::errc() || *p != '\0' || n < 1)
            throw CliError{exit_validation, std::string("TWISTXXZ_THREADS must be a positive integer, got '") + env + "'"};
        return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// fn(i) for i in [0, count) on TWISTXXZ_THREADS workers.
template <class F>
void parallel_for(std::size_t count, F&& fn) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(thread_count()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Output {
    std::string format = "json";
    std::string path;
};

void emit(const Output& out, const json& doc, const Table& table) {
    std::ostringstream s;
    if (out.format == "json") {
        s << doc.dump(2) << '\n';
    } else {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) s << (i ? "," : "") << cells[i];
            s << '\n';
        };
        line(table.header);
        for (const auto& r : table.rows) line(r);
    }
    if (out.path.empty()) {
        std::cout << s.str() << std::flush;
        return;
    }
    std::ofstream f(out.path);
    if (!f) throw CliError{exit_io, "cannot open '" + out.path + "' for writing"};
    f << s.str();
    f.close();
    if (!f) throw CliError{exit_io, "failed writing '" + out.path + "'"};
}

void add_output_options(CLI::App* app, Output& out) {
    app->add_option("--format", out.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--output,-o", out.path, "Write to this file instead of stdout");
}

std::vector<double> grid(const std::string& spec) {
    // a:b:n
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || p != item.data() + item.size())
            throw CliError{exit_validation, "bad grid '" + spec + "', expected a:b:n"};
        parts.push_back(v);
    }
    if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2]) || parts[1] < parts[0])
        throw CliError{exit_validation, "bad grid '" + spec + "', expected a:b:n with a <= b and n >= 1"};
    const int n = static_cast<int>(parts[2]);
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(n == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (n - 1));
    return g;
}

txxz_solver_config solver_config(double tol, int max_iter, double damping) {
    txxz_solver_config c;
    txxz_solver_config_default(&c);
    c.tol = tol;
    c.max_iter = max_iter;
    c.damping = damping;
    return c;
}

json pattern_json(const txxz_roots* r) {
    txxz_pattern pat{};
    check(txxz_roots_classify(r, 0.05, &pat, nullptr, 0), "classify");
    return json{{"name", pat.name}, {"real", pat.real}, {"half_line", pat.half_line},
                {"strings", pat.strings}, {"other", pat.other}};
}

json solution_json(const txxz_roots* r, const txxz_model* m, const txxz_solve_report* rep) {
    json j;
    json roots = json::array();
    for (auto z : shifted(r)) roots.push_back(cjson(z));
    j["roots"] = roots;
    if (rep) {
        j["status"] = rep->status == TXXZ_SOLVE_CONVERGED ? "converged" : "failed";
        j["iterations"] = rep->iterations;
    }
    double res = 0.0;
    const auto rs = txxz_roots_residual(r, m, &res);
    j["residual"] = rs == TXXZ_OK ? json(res) : json(nullptr);
    txxz_complex e{};
    if (txxz_roots_complex_energy(r, m, &e) == TXXZ_OK) {
        j["energy"] = e.re;
        j["energy_imag"] = e.im;
    }
    j["pattern"] = pattern_json(r);
    return j;
}

void solution_rows(Table& t, std::size_t index, const json& sol) {
    std::size_t k = 0;
    for (const auto& z : sol["roots"]) {
        t.rows.push_back({std::to_string(index), std::to_string(k++), num(z["re"].get<double>()),
                          num(z["im"].get<double>()),
                          sol.contains("energy") ? num(sol["energy"].get<double>()) : "",
                          sol["residual"].is_null() ? "" : num(sol["residual"].get<double>()),
                          sol.contains("status") ? sol["status"].get<std::string>() : "",
                          sol["pattern"]["name"].get<std::string>()});
    }
}

// ---- ed

struct EdArgs {
    int n = 6;
};

int run_ed(const EdArgs& a, const Output& out) {
    auto m = homogeneous_model(a.n);
    txxz_spectrum* raw = nullptr;
    check(txxz_spectrum_compute(m.get(), &raw), "ed");
    Spectrum s(raw);
    const std::size_t dim = txxz_spectrum_size(s.get());
    std::vector<double> e(dim);
    std::vector<int> par(dim);
    check(txxz_spectrum_eigenvalues(s.get(), e.data(), dim), "ed");
    check(txxz_spectrum_parities(s.get(), par.data(), dim), "ed");
    json doc{{"command", "ed"}, {"n", a.n}, {"eta", cjson(eta_default)}};
    json states = json::array();
    Table t{{"index", "energy", "parity"}, {}};
    for (std::size_t i = 0; i < dim; ++i) {
        states.push_back({{"index", i}, {"energy", e[i]}, {"parity", par[i]}});
        t.rows.push_back({std::to_string(i), num(e[i]), std::to_string(par[i])});
    }
    doc["states"] = states;
    emit(out, doc, t);
    return exit_ok;
}

// ---- bae

struct BaeArgs {
    int n = 6;
    std::string state = "ground";
    double value = 0.0;
    std::vector<double> bulk, half, strings;
    std::vector<std::string> roots;
    bool scan = false;
    double tol = 1e-12;
    int max_iter = 200;
    double damping = 1.0;
    std::optional<std::uint64_t> seed;
    double spread = 0.1;
    bool compare_ed = false;
    int states_per_solution = 2;
};

std::vector<txxz_complex> parse_roots(const std::vector<std::string>& items) {
    std::vector<txxz_complex> out;
    for (const auto& s : items) {
        const auto colon = s.find(':');
        const std::string re = s.substr(0, colon);
        const std::string im = colon == std::string::npos ? "0" : s.substr(colon + 1);
        txxz_complex z{};
        auto r1 = std::from_chars(re.data(), re.data() + re.size(), z.re);
        auto r2 = std::from_chars(im.data(), im.data() + im.size(), z.im);
        if (r1.ec != std::errc() || r1.ptr != re.data() + re.size() || r2.ec != std::errc() ||
            r2.ptr != im.data() + im.size())
            throw CliError{exit_validation, "bad root '" + s + "', expected re:im"};
        out.push_back(z);
    }
    return out;
}

int run_bae(const BaeArgs& a, const Output& out) {
    auto m = a.seed ? random_model(a.n, *a.seed, a.spread) : homogeneous_model(a.n);
    const auto cfg = solver_config(a.tol, a.max_iter, a.damping);
    json doc{{"command", "bae"}, {"n", a.n}, {"eta", cjson(eta_default)},
             {"solver", {{"tol", a.tol}, {"max_iter", a.max_iter}, {"damping", a.damping}}}};
    if (a.seed) {
        doc["seed"] = *a.seed;
        doc["spread"] = a.spread;
    }
    std::vector<txxz_complex> thetas(a.n);
    check(txxz_model_get_thetas(m.get(), thetas.data(), thetas.size()), "model");
    json th = json::array();
    for (auto t : thetas) th.push_back(cjson(t));
    doc["thetas"] = th;

    Table t{{"solution", "root", "re", "im", "energy", "residual", "status", "pattern"}, {}};
    json sols = json::array();
    bool all_converged = true;
    std::vector<double> energies;

    if (a.scan) {
        txxz_root_list* raw = nullptr;
        check(txxz_scan(m.get(), &cfg, &raw), "scan");
        RootList list(raw);
        for (std::size_t i = 0; i < txxz_root_list_size(list.get()); ++i) {
            txxz_roots* r = nullptr;
            check(txxz_root_list_get(list.get(), i, &r), "scan");
            Roots roots(r);
            auto j = solution_json(roots.get(), m.get(), nullptr);
            j["status"] = "converged";
            if (j.contains("energy")) energies.push_back(j["energy"].get<double>());
            solution_rows(t, i, j);
            sols.push_back(j);
        }
        doc["mode"] = "scan";
    } else {
        txxz_roots* r = nullptr;
        txxz_solve_report rep{};
        txxz_status s;
        if (!a.roots.empty()) {
            const auto init = parse_roots(a.roots);
            txxz_roots* seed = nullptr;
            check(txxz_roots_from_shifted(init.data(), init.size(), eta_default, &seed), "roots");
            Roots seeded(seed);
            s = txxz_roots_solve(m.get(), seeded.get(), &cfg, &r, &rep);
            doc["mode"] = "roots";
            json in = json::array();
            for (auto z : init) in.push_back(cjson(z));
            doc["initial"] = in;
        } else {
            std::vector<double> bulk = a.bulk, half = a.half, str = a.strings;
            if (bulk.empty() && half.empty() && str.empty()) {
                const int kind = a.state == "ground" ? 0 : a.state == "type1" ? 1 : 2;
                const std::size_t cap = static_cast<std::size_t>(std::max(a.n, 1));
                bulk.resize(cap);
                half.resize(cap);
                str.resize(cap);
                std::size_t nb = 0, nh = 0, ns = 0;
                check(txxz_quantum_numbers(a.n, kind, a.value, bulk.data(), &nb, half.data(), &nh, str.data(), &ns,
                                           cap),
                      "quantum numbers");
                bulk.resize(nb);
                half.resize(nh);
                str.resize(ns);
                doc["state"] = a.state;
                if (kind) doc["value"] = a.value;
            }
            doc["mode"] = "quantum_numbers";
            doc["quantum_numbers"] = {{"bulk", bulk}, {"half_line", half}, {"strings", str}};
            s = txxz_roots_solve_quantum(m.get(), bulk.data(), bulk.size(), half.data(), half.size(), str.data(),
                                         str.size(), &cfg, &r, &rep);
        }
        if (s != TXXZ_OK && s != TXXZ_ERR_NOT_CONVERGED) check(s, "solve");
        Roots roots(r);
        auto j = solution_json(roots.get(), m.get(), &rep);
        if (s != TXXZ_OK) {
            all_converged = false;
            j["message"] = txxz_last_error();
        }
        if (j.contains("energy")) energies.push_back(j["energy"].get<double>());
        solution_rows(t, 0, j);
        sols.push_back(j);
    }
    doc["solutions"] = sols;

    if (a.compare_ed) {
        if (a.seed) throw CliError{exit_validation, "--compare-ed needs the homogeneous chain"};
        txxz_spectrum* raw = nullptr;
        check(txxz_spectrum_compute(m.get(), &raw), "ed");
        Spectrum sp(raw);
        std::vector<double> ed(txxz_spectrum_size(sp.get()));
        check(txxz_spectrum_eigenvalues(sp.get(), ed.data(), ed.size()), "ed");
        txxz_match_summary ms{};
        std::vector<double> dev(energies.size());
        check(txxz_match_spectrum(ed.data(), ed.size(), energies.data(), energies.size(), 1e-6,
                                  a.states_per_solution, &ms, dev.data()),
              "match");
        doc["ed_match"] = {{"ed_states", ed.size()}, {"pairs", ms.pairs}, {"unmatched_ed", ms.unmatched_ed},
                           {"unmatched_bae", ms.unmatched_bae}, {"max_deviation", ms.max_deviation}};
    }
    emit(out, doc, t);
    return all_converged ? exit_ok : exit_convergence;
}

// ---- verify

struct VerifyArgs {
    int n = 4;
    std::uint64_t seed = 1;
    double spread = 0.1;
    std::size_t samples = 20;
    int pairs = 10;
    int steps = 4;
    std::size_t max_states = 0;
    double bilinear_tol = 1e-8;
    double cubic_tol = 1e-6;
    std::size_t min_states = 5;
};

json transfer_json(const txxz_transfer_report& r) {
    json j{{"commutator", r.commutator}, {"quasi_periodicity", r.quasi_periodicity}};
    j["hamiltonian"] = r.hamiltonian < 0.0 ? json(nullptr) : json(r.hamiltonian);
    return j;
}

int run_verify(const VerifyArgs& a, const Output& out) {
    auto from = homogeneous_model(a.n);
    auto to = random_model(a.n, a.seed, a.spread);
    std::vector<txxz_complex> thetas(a.n);
    check(txxz_model_get_thetas(to.get(), thetas.data(), thetas.size()), "model");

    txxz_transfer_report th{}, ti{};
    check(txxz_transfer_diagnostics(from.get(), a.seed, a.pairs, &th), "transfer");
    check(txxz_transfer_diagnostics(to.get(), a.seed, a.pairs, &ti), "transfer");
    const bool transfer_ok = th.commutator < 1e-10 && ti.commutator < 1e-10 && th.quasi_periodicity < 1e-10 &&
                             ti.quasi_periodicity < 1e-10 && th.hamiltonian >= 0.0 && th.hamiltonian < 1e-6;

    auto scan_cfg = solver_config(1e-12, 40, 1.0);
    txxz_root_list* raw = nullptr;
    check(txxz_scan(from.get(), &scan_cfg, &raw), "scan");
    RootList list(raw);
    std::size_t count = txxz_root_list_size(list.get());
    if (a.max_states) count = std::min(count, a.max_states);

    const auto cfg = solver_config(1e-12, 200, 1.0);
    std::vector<json> states(count);
    std::vector<int> passed(count, 0);
    parallel_for(count, [&](std::size_t i) {
        txxz_roots* start = nullptr;
        check(txxz_root_list_get(list.get(), i, &start), "scan");
        Roots s(start);
        txxz_roots* moved = nullptr;
        txxz_solve_report rep{};
        const auto st = txxz_roots_continue(from.get(), to.get(), s.get(), a.steps, &cfg, &moved, &rep);
        Roots r(moved);
        json j{{"index", i}, {"converged", st == TXXZ_OK}, {"iterations", rep.iterations}, {"residual", rep.residual}};
        double e0 = 0.0;
        if (txxz_roots_energy(s.get(), from.get(), &e0) == TXXZ_OK) j["homogeneous_energy"] = e0;
        if (st == TXXZ_OK) {
            json roots = json::array();
            for (auto z : shifted(r.get())) roots.push_back(cjson(z));
            j["roots"] = roots;
            txxz_identity_report idr{};
            const auto vs = txxz_verify_identities(r.get(), to.get(), a.samples, a.seed, &idr);
            if (vs == TXXZ_OK) {
                j["lambda0"] = cjson(idr.lambda0);
                j["bilinear"] = idr.bilinear;
                j["cubic"] = idr.cubic;
                j["f3"] = {{"quasi_periodicity", idr.quasi_periodicity}, {"property1", idr.property1},
                           {"property2", idr.property2}, {"property3", idr.property3}};
                j["degree_tail"] = idr.degree_tail;
                passed[i] = idr.bilinear < a.bilinear_tol && idr.cubic < a.cubic_tol;
            } else {
                j["error"] = std::string(txxz_status_name(vs)) + ": " + txxz_last_error();
            }
        } else {
            j["error"] = txxz_last_error();
        }
        j["pass"] = passed[i] == 1;
        states[i] = std::move(j);
    });

    std::size_t n_pass = 0;
    for (int p : passed) n_pass += p;
    json th_arr = json::array();
    for (auto t : thetas) th_arr.push_back(cjson(t));
    json doc{{"command", "verify"}, {"n", a.n}, {"seed", a.seed}, {"spread", a.spread}, {"thetas", th_arr},
             {"samples", a.samples},
             {"thresholds", {{"bilinear", a.bilinear_tol}, {"cubic", a.cubic_tol}, {"min_states", a.min_states}}},
             {"transfer", {{"homogeneous", transfer_json(th)}, {"inhomogeneous", transfer_json(ti)}}},
             {"states", states}, {"states_passed", n_pass}};
    const bool ok = transfer_ok && n_pass >= a.min_states;
    doc["pass"] = ok;

    Table t{{"state", "converged", "bilinear", "cubic", "f3_max", "degree_tail", "pass"}, {}};
    for (const auto& s : states) {
        std::string f3 = "", bl = "", cu = "", dt = "";
        if (s.contains("bilinear")) {
            bl = num(s["bilinear"].get<double>());
            cu = num(s["cubic"].get<double>());
            double m = 0.0;
            for (const auto& [k, v] : s["f3"].items()) m = std::max(m, v.get<double>());
            f3 = num(m);
            dt = num(s["degree_tail"].get<double>());
        }
        t.rows.push_back({std::to_string(s["index"].get<std::size_t>()), s["converged"].get<bool>() ? "1" : "0", bl,
                          cu, f3, dt, s["pass"].get<bool>() ? "1" : "0"});
    }
    emit(out, doc, t);
    return ok ? exit_ok : exit_validation;
}

// ---- thermo

struct ThermoArgs {
    std::string quantity = "eg";
    double alpha = 0.0;
    std::string grid_spec;
    int n = 0;
    double hole = 0.0;
    bool quadrature = false;
    std::vector<std::string> excite;
    std::vector<int> sizes{8, 16, 32, 64};
    double window = 1.5;
};

txxz_excitation excitation_kind(const std::string& s) {
    if (s == "I" || s == "1" || s == "type1") return TXXZ_TYPE_I;
    if (s == "II" || s == "2" || s == "type2") return TXXZ_TYPE_II;
    throw CliError{exit_validation, "unknown excitation '" + s + "', expected I or II"};
}

int run_thermo(const ThermoArgs& a, const Output& out) {
    const std::string& q = a.quantity;
    json doc{{"command", "thermo"}, {"quantity", q}};
    Table t;

    if (q == "eg") {
        double closed = 0.0, quad = 0.0;
        check(txxz_ground_energy_density(&closed, &quad), "eg");
        doc["value"] = closed;
        doc["quadrature"] = quad;
        t = {{"quantity", "value", "quadrature"}, {{q, num(closed), num(quad)}}};
    } else if (q == "de1" || q == "de2") {
        const auto kind = q == "de1" ? TXXZ_TYPE_I : TXXZ_TYPE_II;
        const auto alphas = a.grid_spec.empty() ? std::vector<double>{a.alpha} : grid(a.grid_spec);
        t.header = {"alpha", "value"};
        if (a.quadrature) t.header.push_back("quadrature");
        json samples = json::array();
        for (double al : alphas) {
            double v = 0.0;
            check(txxz_excitation_energy(kind, al, &v), q);
            json s{{"alpha", al}, {"value", v}};
            std::vector<std::string> row{num(al), num(v)};
            if (a.quadrature) {
                double qv = 0.0;
                check(txxz_excitation_energy_quadrature(kind, al, &qv), q);
                s["quadrature"] = qv;
                row.push_back(num(qv));
            }
            samples.push_back(s);
            t.rows.push_back(row);
        }
        if (a.grid_spec.empty()) {
            doc["alpha"] = a.alpha;
            doc["value"] = samples[0]["value"];
            if (a.quadrature) doc["quadrature"] = samples[0]["quadrature"];
        } else {
            doc["samples"] = samples;
        }
    } else if (q == "rho" || q == "drho1" || q == "drho2" || q == "delta") {
        const auto lambdas = grid(a.grid_spec.empty() ? "-4:4:81" : a.grid_spec);
        if ((q == "drho1" || q == "drho2") && a.n < 1) throw CliError{exit_validation, q + " needs --n >= 1"};
        json samples = json::array();
        t.header = q == "delta" ? std::vector<std::string>{"lambda", "re", "im", "pair"}
                                : std::vector<std::string>{"lambda", "value"};
        for (double x : lambdas) {
            if (q == "delta") {
                txxz_complex d{};
                double pair = 0.0;
                check(txxz_hole_delta(x, &d), q);
                check(txxz_hole_pair_delta(x, &pair), q);
                samples.push_back({{"lambda", x}, {"delta", cjson(d)}, {"pair", pair}});
                t.rows.push_back({num(x), num(d.re), num(d.im), num(pair)});
                continue;
            }
            double v = 0.0;
            if (q == "rho")
                check(txxz_rho_ground(x, a.hole, a.n, &v), q);
            else
                check(txxz_delta_rho(q == "drho1" ? TXXZ_TYPE_I : TXXZ_TYPE_II, a.alpha, x, a.n, &v), q);
            samples.push_back({{"lambda", x}, {"value", v}});
            t.rows.push_back({num(x), num(v)});
        }
        if (q != "delta") {
            doc["n"] = a.n > 0 ? json(a.n) : json("infinity");
            if (q == "rho") doc["hole"] = a.hole;
            else doc["alpha"] = a.alpha;
        }
        doc["samples"] = samples;
    } else if (q == "filling") {
        if (a.n < 1) throw CliError{exit_validation, "filling needs --n >= 1"};
        std::vector<txxz_excitation> kinds;
        std::vector<double> alphas;
        json ex = json::array();
        for (const auto& e : a.excite) {
            const auto at = e.find('@');
            kinds.push_back(excitation_kind(e.substr(0, at)));
            double al = a.alpha;
            if (at != std::string::npos) {
                const std::string s = e.substr(at + 1);
                auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), al);
                if (ec != std::errc() || p != s.data() + s.size())
                    throw CliError{exit_validation, "bad excitation '" + e + "', expected KIND@alpha"};
            }
            alphas.push_back(al);
            ex.push_back({{"kind", kinds.back() == TXXZ_TYPE_I ? "I" : "II"}, {"alpha", al}});
        }
        double v = 0.0;
        check(txxz_filling(kinds.data(), alphas.data(), kinds.size(), a.n, a.hole, &v), q);
        doc["n"] = a.n;
        doc["hole"] = a.hole;
        doc["excitations"] = ex;
        doc["value"] = v;
        t = {{"n", "excitations", "value"}, {{std::to_string(a.n), std::to_string(kinds.size()), num(v)}}};
    } else if (q == "density-check") {
        std::vector<txxz_density_entry> entries(a.sizes.size());
        int mono = 0;
        check(txxz_ground_density_check(a.sizes.data(), a.sizes.size(), a.window, entries.data(), &mono), q);
        double eg = 0.0;
        check(txxz_ground_energy_density(&eg, nullptr), q);
        json arr = json::array();
        t.header = {"n", "energy_per_site", "gap", "max_deviation", "filling"};
        for (const auto& e : entries) {
            arr.push_back({{"n", e.n_sites}, {"energy_per_site", e.energy_per_site},
                           {"gap", e.energy_per_site - eg}, {"max_deviation", e.max_deviation},
                           {"filling", e.filling}});
            t.rows.push_back({std::to_string(e.n_sites), num(e.energy_per_site), num(e.energy_per_site - eg),
                              num(e.max_deviation), num(e.filling)});
        }
        doc["window"] = a.window;
        doc["eg"] = eg;
        doc["entries"] = arr;
        doc["nonincreasing"] = mono == 1;
    } else if (q == "inteq") {
        json arr = json::array();
        t.header = {"equation", "alpha", "sup_distance"};
        const char* names[] = {"ground", "type1", "type2"};
        for (int w = 0; w < 3; ++w) {
            double d = 0.0;
            check(txxz_integral_equation_check(w, a.alpha, &d), q);
            arr.push_back({{"equation", names[w]}, {"sup_distance", d}});
            t.rows.push_back({names[w], num(a.alpha), num(d)});
        }
        doc["alpha"] = a.alpha;
        doc["equations"] = arr;
    } else {
        throw CliError{exit_validation, "unknown quantity '" + q + "'"};
    }
    emit(out, doc, t);
    return exit_ok;
}

// ---- scatter

struct ScatterArgs {
    std::string process = "I_I";
    double a1 = 0.0, a2 = 0.0;
    std::string grid_spec;
    bool quadrature = false;
};

int run_scatter(const ScatterArgs& a, const Output& out) {
    txxz_process p;
    if (a.process == "I_I") p = TXXZ_PROCESS_I_I;
    else if (a.process == "II_II") p = TXXZ_PROCESS_II_II;
    else if (a.process == "I_II") p = TXXZ_PROCESS_I_II;
    else throw CliError{exit_validation, "unknown process '" + a.process + "'"};

    std::vector<std::pair<double, double>> points;
    if (a.grid_spec.empty()) {
        points.emplace_back(a.a1, a.a2);
    } else {
        const auto g = grid(a.grid_spec);
        for (double x : g)
            for (double y : g) points.emplace_back(x, y);
    }
    json values = json::array();
    Table t{{"alpha1", "alpha2", "re", "im"}, {}};
    if (a.quadrature) {
        t.header.push_back("quadrature_re");
        t.header.push_back("quadrature_im");
    }
    for (auto [x, y] : points) {
        txxz_complex s{};
        check(txxz_smatrix(p, x, y, &s), "smatrix");
        json j{{"alpha1", x}, {"alpha2", y}, {"s", cjson(s)}};
        std::vector<std::string> row{num(x), num(y), num(s.re), num(s.im)};
        if (a.quadrature) {
            txxz_complex sq{};
            check(txxz_smatrix_quadrature(p, x, y, &sq), "smatrix");
            j["s_quadrature"] = cjson(sq);
            row.push_back(num(sq.re));
            row.push_back(num(sq.im));
        }
        values.push_back(j);
        t.rows.push_back(row);
    }
    json doc{{"command", "scatter"}, {"process", a.process}, {"values", values}};
    emit(out, doc, t);
    return exit_ok;
}

// ---- table1

struct Table1Args {
    std::string fixture = std::string(TWISTXXZ_DATA_DIR) + "/table1.csv";
    double tol = 1e-12;
    int max_iter = 200;
    double threshold = 1e-3;
    double ed_tol = 1e-8;
    double root_tol = 1e-3;
};

struct FixtureRow {
    int level = 0;
    std::vector<txxz_complex> lambdas;
    double energy = 0.0;
};

std::vector<FixtureRow> load_fixture(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw CliError{exit_io, "cannot read fixture '" + path + "'"};
    std::string line;
    std::getline(f, line);
    std::vector<FixtureRow> rows;
    int line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) {
            double v = 0.0;
            auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc() || p != c.data() + c.size())
                throw CliError{exit_validation, path + ":" + std::to_string(line_no) + ": bad number '" + c + "'"};
            cells.push_back(v);
        }
        if (cells.size() < 4 || cells.size() % 2)
            throw CliError{exit_validation, path + ":" + std::to_string(line_no) + ": expected level, re/im pairs, energy"};
        FixtureRow r;
        r.level = static_cast<int>(cells.front());
        r.energy = cells.back();
        for (std::size_t i = 1; i + 1 < cells.size(); i += 2) r.lambdas.push_back({cells[i], cells[i + 1]});
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw CliError{exit_validation, "fixture '" + path + "' has no rows"};
    return rows;
}

int run_table1(const Table1Args& a, const Output& out) {
    const auto rows = load_fixture(a.fixture);
    const int n = static_cast<int>(rows.front().lambdas.size()) + 1;
    for (const auto& r : rows)
        if (static_cast<int>(r.lambdas.size()) + 1 != n)
            throw CliError{exit_validation, "fixture rows have different root counts"};
    auto m = homogeneous_model(n);
    const auto cfg = solver_config(a.tol, a.max_iter, 1.0);

    struct Level {
        bool converged = false;
        int iterations = 0;
        double residual = 0.0;
        double energy = std::nan("");
        bool roots_match = false;
        std::vector<txxz_complex> roots;
        std::string error;
    };
    std::vector<Level> levels(rows.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        auto& lv = levels[i];
        txxz_roots* seed = nullptr;
        check(txxz_roots_from_shifted(rows[i].lambdas.data(), rows[i].lambdas.size(), eta_default, &seed), "fixture");
        Roots s(seed);
        txxz_roots* r = nullptr;
        txxz_solve_report rep{};
        const auto st = txxz_roots_solve(m.get(), s.get(), &cfg, &r, &rep);
        if (st != TXXZ_OK && st != TXXZ_ERR_NOT_CONVERGED) check(st, "level " + std::to_string(rows[i].level));
        Roots solved(r);
        lv.converged = st == TXXZ_OK;
        lv.iterations = rep.iterations;
        lv.residual = rep.residual;
        lv.roots = shifted(solved.get());
        if (!lv.converged) {
            lv.error = txxz_last_error();
            return;
        }
        int same = 0;
        check(txxz_roots_same(solved.get(), s.get(), a.root_tol, &same), "compare");
        lv.roots_match = same == 1;
        const auto es = txxz_roots_energy(solved.get(), m.get(), &lv.energy);
        if (es != TXXZ_OK) {
            lv.converged = false;
            lv.error = std::string(txxz_status_name(es)) + ": " + txxz_last_error();
        }
    });

    txxz_spectrum* raw = nullptr;
    check(txxz_spectrum_compute(m.get(), &raw), "ed");
    Spectrum sp(raw);
    std::vector<double> ed(txxz_spectrum_size(sp.get()));
    check(txxz_spectrum_eigenvalues(sp.get(), ed.data(), ed.size()), "ed");

    std::vector<double> energies;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i].converged) {
            energies.push_back(levels[i].energy);
            idx.push_back(i);
        }
    const int per = static_cast<std::size_t>(2 * rows.size()) == ed.size() ? 2 : 1;
    txxz_match_summary ms{};
    std::vector<double> dev(energies.size());
    check(txxz_match_spectrum(ed.data(), ed.size(), energies.data(), energies.size(), a.ed_tol, per, &ms, dev.data()),
          "match");
    std::vector<double> ed_dev(levels.size(), -1.0);
    for (std::size_t k = 0; k < idx.size(); ++k) ed_dev[idx[k]] = dev[k];

    json lv_json = json::array();
    Table t{{"level", "printed_energy", "energy", "printed_deviation", "ed_deviation", "roots_match", "converged",
             "pass"},
            {}};
    std::size_t matched = 0, failed = 0, diverged = 0;
    double max_printed = 0.0, max_ed = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& lv = levels[i];
        json j{{"level", rows[i].level}, {"printed_energy", rows[i].energy}, {"converged", lv.converged},
               {"iterations", lv.iterations}, {"residual", lv.residual}};
        json roots = json::array();
        for (auto z : lv.roots) roots.push_back(cjson(z));
        j["roots"] = roots;
        bool pass = false;
        std::string pd, edd;
        if (lv.converged) {
            const double d = std::abs(lv.energy - rows[i].energy);
            max_printed = std::max(max_printed, d);
            j["energy"] = lv.energy;
            j["printed_deviation"] = d;
            j["roots_match"] = lv.roots_match;
            pd = num(d);
            if (ed_dev[i] >= 0.0) {
                j["ed_deviation"] = ed_dev[i];
                max_ed = std::max(max_ed, ed_dev[i]);
                edd = num(ed_dev[i]);
            } else {
                j["ed_deviation"] = nullptr;
            }
            pass = d <= a.threshold && lv.roots_match && ed_dev[i] >= 0.0;
        } else {
            ++diverged;
            j["error"] = lv.error;
        }
        j["pass"] = pass;
        matched += pass;
        failed += !pass;
        lv_json.push_back(j);
        t.rows.push_back({std::to_string(rows[i].level), num(rows[i].energy), lv.converged ? num(lv.energy) : "", pd,
                          edd, lv.converged && lv.roots_match ? "1" : "0", lv.converged ? "1" : "0", pass ? "1" : "0"});
    }
    json doc{{"command", "table1"}, {"fixture", a.fixture}, {"n", n},
             {"tolerances", {{"solver", a.tol}, {"printed", a.threshold}, {"ed", a.ed_tol}, {"roots", a.root_tol}}},
             {"levels", lv_json}, {"matched", matched}, {"total", rows.size()},
             {"max_printed_deviation", max_printed}, {"max_ed_deviation", max_ed},
             {"ed_unmatched", ms.unmatched_ed}};
    emit(out, doc, t);
    if (diverged) return exit_convergence;
    return failed ? exit_validation : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Antiperiodic XXZ chain at eta = i pi/3: ED, zero-point BAE, identity checks and thermodynamics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(txxz_version()));

    Output out;
    EdArgs ed;
    BaeArgs bae;
    VerifyArgs ver;
    ThermoArgs th;
    ScatterArgs sc;
    Table1Args tb;

    auto* c_ed = app.add_subcommand("ed", "Exact diagonalization of the Hamiltonian");
    c_ed->add_option("--n,-n", ed.n, "Number of sites (<= 12)")->check(CLI::Range(1, 64));
    add_output_options(c_ed, out);

    auto* c_bae = app.add_subcommand("bae", "Solve the zero-point equations");
    c_bae->add_option("--n,-n", bae.n, "Number of sites")->check(CLI::Range(2, 4096));
    auto* o_state = c_bae->add_option("--state", bae.state, "ground, type1 or type2")
                        ->check(CLI::IsMember({"ground", "type1", "type2"}));
    c_bae->add_option("--value", bae.value, "J for type1, j for type2");
    auto* o_bulk = c_bae->add_option("--bulk", bae.bulk, "Real-root quantum numbers")->delimiter(',');
    auto* o_half = c_bae->add_option("--half", bae.half, "Half-line quantum numbers")->delimiter(',');
    auto* o_str = c_bae->add_option("--strings", bae.strings, "2-string quantum numbers")->delimiter(',');
    auto* o_roots = c_bae->add_option("--roots", bae.roots, "Initial shifted roots re:im, comma separated")
                        ->delimiter(',');
    auto* o_scan = c_bae->add_flag("--scan", bae.scan, "Solve every admissible quantum-number configuration");
    o_roots->excludes(o_scan)->excludes(o_state)->excludes(o_bulk)->excludes(o_half)->excludes(o_str);
    o_scan->excludes(o_state)->excludes(o_bulk)->excludes(o_half)->excludes(o_str);
    o_state->excludes(o_bulk)->excludes(o_half)->excludes(o_str);
    c_bae->add_option("--tol", bae.tol)->check(CLI::PositiveNumber);
    c_bae->add_option("--max-iter", bae.max_iter)->check(CLI::PositiveNumber);
    c_bae->add_option("--damping", bae.damping)->check(CLI::Range(1e-6, 1.0));
    c_bae->add_option("--seed", bae.seed, "Draw random inhomogeneities with this seed");
    c_bae->add_option("--spread", bae.spread, "Inhomogeneities lie in [-spread, spread]")->check(CLI::PositiveNumber);
    c_bae->add_flag("--compare-ed", bae.compare_ed, "Match the energies against exact diagonalization");
    c_bae->add_option("--states-per-solution", bae.states_per_solution)->check(CLI::Range(1, 8));
    add_output_options(c_bae, out);

    auto* c_ver = app.add_subcommand("verify", "Check the functional relations on random inhomogeneous chains");
    c_ver->add_option("--n,-n", ver.n)->check(CLI::Range(2, 8));
    c_ver->add_option("--seed", ver.seed);
    c_ver->add_option("--spread", ver.spread)->check(CLI::PositiveNumber);
    c_ver->add_option("--samples", ver.samples)->check(CLI::PositiveNumber);
    c_ver->add_option("--pairs", ver.pairs)->check(CLI::PositiveNumber);
    c_ver->add_option("--steps", ver.steps)->check(CLI::PositiveNumber);
    c_ver->add_option("--states", ver.max_states, "Check at most this many states (0: all)");
    c_ver->add_option("--min-states", ver.min_states);
    c_ver->add_option("--bilinear-tol", ver.bilinear_tol)->check(CLI::PositiveNumber);
    c_ver->add_option("--cubic-tol", ver.cubic_tol)->check(CLI::PositiveNumber);
    add_output_options(c_ver, out);

    auto* c_th = app.add_subcommand("thermo", "Thermodynamic-limit quantities");
    c_th->add_option("--quantity", th.quantity, "eg, de1, de2, rho, drho1, drho2, delta, filling, density-check, inteq")
        ->check(CLI::IsMember({"eg", "de1", "de2", "rho", "drho1", "drho2", "delta", "filling", "density-check",
                               "inteq"}));
    c_th->add_option("--alpha", th.alpha);
    c_th->add_option("--grid", th.grid_spec, "a:b:n sample grid");
    c_th->add_option("--n,-n", th.n, "Chain length (0: infinity)")->check(CLI::NonNegativeNumber);
    c_th->add_option("--hole", th.hole, "Boundary-hole rapidity of the finite-N density");
    c_th->add_flag("--quadrature", th.quadrature, "Also evaluate the quadrature form");
    c_th->add_option("--excite", th.excite, "Excitations KIND[@alpha], KIND in {I, II}")->delimiter(',');
    c_th->add_option("--sizes", th.sizes, "Chain lengths for density-check")->delimiter(',');
    c_th->add_option("--window", th.window)->check(CLI::PositiveNumber);
    add_output_options(c_th, out);

    auto* c_sc = app.add_subcommand("scatter", "Two-excitation S-matrices");
    c_sc->add_option("--process", sc.process, "I_I, II_II or I_II")->check(CLI::IsMember({"I_I", "II_II", "I_II"}));
    c_sc->add_option("--a1", sc.a1);
    c_sc->add_option("--a2", sc.a2);
    c_sc->add_option("--grid", sc.grid_spec, "a:b:n grid used for both rapidities");
    c_sc->add_flag("--quadrature", sc.quadrature, "Also rebuild the amplitude from its phase integral");
    add_output_options(c_sc, out);

    auto* c_tb = app.add_subcommand("table1", "Reproduce the N=6 spectrum from the bundled root fixture");
    c_tb->add_option("--fixture", tb.fixture, "CSV of printed roots and energies");
    c_tb->add_option("--tol", tb.tol, "Newton tolerance")->check(CLI::PositiveNumber);
    c_tb->add_option("--max-iter", tb.max_iter)->check(CLI::PositiveNumber);
    c_tb->add_option("--threshold", tb.threshold, "Allowed |E - E_printed|")->check(CLI::PositiveNumber);
    c_tb->add_option("--ed-tol", tb.ed_tol, "Allowed |E - E_ed|")->check(CLI::PositiveNumber);
    c_tb->add_option("--root-tol", tb.root_tol, "Allowed drift of converged roots from the fixture")
        ->check(CLI::PositiveNumber);
    add_output_options(c_tb, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }

    try {
        if (*c_ed) return run_ed(ed, out);
        if (*c_bae) return run_bae(bae, out);
        if (*c_ver) return run_verify(ver, out);
        if (*c_th) return run_thermo(th, out);
        if (*c_sc) return run_scatter(sc, out);
        if (*c_tb) return run_table1(tb, out);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_validation;
}
