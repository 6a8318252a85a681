// Batch front-end: solves and sweeps over the lattice/coupled-mode/soliton
// operations, emitting CSV tables, JSON results and per-invocation manifests.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "gapsol/coupled_mode.hpp"
#include "gapsol/errors.hpp"
#include "gapsol/lattice1d.hpp"
#include "gapsol/lattice2d.hpp"
#include "gapsol/soliton.hpp"

using nlohmann::json;

namespace {

struct Manifest {
    std::string command;
    json parameters;
    std::vector<std::string> outputs;
    json convergence;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const std::string& data_path);
};

/** Atomic write: data lands under its final name completely or not at all. */
void write_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

void Manifest::write(const std::string& data_path) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    json m{{"command", command},
           {"parameters", parameters},
           {"version", GAPSOL_VERSION},
           {"wall_time_ms",
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()},
           {"outputs", outputs}};
    if (!convergence.is_null()) m["convergence"] = convergence;
    write_atomic(data_path + ".manifest.json", m.dump(2) + "\n");
}

/** Emit to --out (with manifest) or stdout. */
void emit(const std::string& out, const std::string& text, Manifest& manifest) {
    if (out.empty()) {
        std::cout << text;
    } else {
        write_atomic(out, text);
        manifest.outputs.push_back(out);
        manifest.write(out);
    }
}

double fit_slope(const std::vector<double>& eps, const std::vector<double>& err,
                 double* intercept = nullptr) {
    const int n = static_cast<int>(eps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(eps[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (intercept) *intercept = std::exp((sy - slope * sx) / n);
    return slope;
}

template <typename T, typename Fn>
std::vector<std::invoke_result_t<Fn, T>> parallel_map(const std::vector<T>& items, int jobs,
                                                      Fn fn) {
    using R = std::invoke_result_t<Fn, T>;
    std::vector<R> out(items.size());
    if (jobs < 1) jobs = 1;
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1))
            out[i] = fn(items[i]);
    };
    std::vector<std::future<void>> pool;
    for (int j = 1; j < jobs; ++j) pool.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : pool) f.get();
    return out;
}

json potential_json(const gapsol::PotentialSpec& w) {
    json coeffs = json::array();
    for (const auto& [m, v] : w.coeffs())
        if (m > 0) coeffs.push_back({{"m", m}, {"w", v}});
    return coeffs;
}

struct PeriodicRow {
    double eps, c_seed, amplitude, deviation;
};

PeriodicRow run_periodic(int n, double omega, int sigma, char branch, double eps,
                         const gapsol::PotentialSpec& potential) {
    gapsol::BranchResult r = gapsol::periodic_branch(n, omega, sigma, eps, branch, potential);
    return {eps, r.c, std::abs(r.field.get(n)), r.sup_deviation};
}

gapsol::SolitonSolveResult run_soliton(const gapsol::CoupledModeParams& params,
                                       const gapsol::SolverConfig& cfg,
                                       const gapsol::PotentialSpec& potential) {
    return gapsol::solve_soliton(params, cfg, potential);
}

int run(int argc, char** argv) {
    CLI::App app{"gapsol: gap solitons of the periodic nonlinear Schrodinger problem\n"
                 "omega^2 U + U'' + eps W(x) U = sigma |U|^2 U via its Fourier lattice\n"
                 "system and the coupled-mode reduction"};
    app.require_subcommand(1);

    std::string potential_path, out;
    std::vector<double> eps_list;
    int n = 1, sigma = 1, jobs = 1;
    double omega = 0.0;

    // gap-edges
    auto* ge = app.add_subcommand("gap-edges", "Leading-order spectral gap edges in omega^2");
    ge->add_option("--n", n, "resonance index n (omega ~ n/2)")->capture_default_str();
    ge->add_option("--eps", eps_list, "epsilon values")->required()->delimiter(',');
    ge->add_option("--potential", potential_path, "potential JSON file")->required();
    ge->add_option("--out", out, "output CSV path (default stdout)");

    // periodic-branch
    auto* pb = app.add_subcommand("periodic-branch",
                                  "Continue the periodic branch seeded from the dispersion "
                                  "relation Omega +- w_{2n} = 3 sigma c^2");
    std::string branch = "+";
    pb->add_option("--n", n, "resonance index n")->capture_default_str();
    pb->add_option("--omega", omega, "detuning Omega (omega^2 = n^2/4 + eps Omega)")
        ->capture_default_str();
    pb->add_option("--sigma", sigma, "nonlinearity sign, +1 or -1")->capture_default_str();
    pb->add_option("--branch", branch, "branch sign, + or -")->capture_default_str();
    pb->add_option("--eps", eps_list, "epsilon values")->required()->delimiter(',');
    pb->add_option("--potential", potential_path, "potential JSON file")->required();
    pb->add_option("--out", out, "output CSV path (default stdout)");
    pb->add_option("--jobs", jobs, "max concurrent solves")->capture_default_str();

    // soliton
    auto* so = app.add_subcommand("soliton", "Pseudo-spectral gap-soliton solve");
    double s_eps = 0.0;
    gapsol::SolverConfig cfg;
    so->add_option("--n", n, "resonance index n")->capture_default_str();
    so->add_option("--omega", omega, "detuning Omega inside the gap")->capture_default_str();
    so->add_option("--sigma", sigma, "nonlinearity sign, +1 or -1")->capture_default_str();
    so->add_option("--eps", s_eps, "epsilon (> 0)")->required();
    so->add_option("--potential", potential_path, "potential JSON file")->required();
    so->add_option("--periods", cfg.periods, "potential periods K, domain [-pi K, pi K]")
        ->capture_default_str();
    so->add_option("--grid", cfg.grid_points, "grid points N (power of two)")
        ->capture_default_str();
    so->add_option("--cutoff", cfg.mode_cutoff,
                   "cosine-mode cutoff (0: min(N/6 - 1, 16 K))")
        ->capture_default_str();
    so->add_option("--tol", cfg.tol, "Newton sup-norm tolerance")->capture_default_str();
    so->add_option("--out", out, "output prefix: writes <out>.json and <out>.csv")->required();

    // convergence
    auto* cv = app.add_subcommand("convergence",
                                  "Error-vs-epsilon study against the coupled-mode field");
    std::string mode = "periodic";
    cv->add_option("--mode", mode, "periodic or soliton")
        ->check(CLI::IsMember({"periodic", "soliton"}))
        ->capture_default_str();
    cv->add_option("--n", n, "resonance index n")->capture_default_str();
    cv->add_option("--omega", omega, "detuning Omega")->capture_default_str();
    cv->add_option("--sigma", sigma, "nonlinearity sign")->capture_default_str();
    cv->add_option("--branch", branch, "periodic branch sign")->capture_default_str();
    cv->add_option("--eps", eps_list, "epsilon values (>= 2)")->required()->delimiter(',');
    cv->add_option("--potential", potential_path, "potential JSON file")->required();
    cv->add_option("--periods", cfg.periods, "soliton mode: periods K")->capture_default_str();
    cv->add_option("--grid", cfg.grid_points, "soliton mode: grid points N")
        ->capture_default_str();
    cv->add_option("--cutoff", cfg.mode_cutoff, "soliton mode: cosine-mode cutoff (0: auto)")
        ->capture_default_str();
    cv->add_option("--out", out, "output JSON path (default stdout)");
    cv->add_option("--jobs", jobs, "max concurrent solves")->capture_default_str();

    // resonant-set
    auto* rs = app.add_subcommand("resonant-set",
                                  "Enumerate S_n = {m : |m|^2 = |n|^2} on the parity lattice");
    int n1 = 1, n2 = 1, radius = -1;
    rs->add_option("--n1", n1, "first component of n")->capture_default_str();
    rs->add_option("--n2", n2, "second component of n")->capture_default_str();
    rs->add_option("--radius", radius, "search radius (-1: minimal complete)")
        ->capture_default_str();
    rs->add_option("--out", out, "output JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    Manifest manifest;

    if (*ge) {
        gapsol::PotentialSpec w = gapsol::load_potential(potential_path);
        manifest.command = "gap-edges";
        manifest.parameters = {{"n", n}, {"eps", eps_list}, {"potential", potential_path}};
        std::ostringstream csv;
        csv << "eps,lower,upper\n";
        for (double e : eps_list) {
            auto [lo, hi] = gapsol::gap_edges(n, e, w);
            csv << e << "," << lo << "," << hi << "\n";
        }
        emit(out, csv.str(), manifest);
        return 0;
    }

    if (*pb) {
        gapsol::PotentialSpec w = gapsol::load_potential(potential_path);
        if (branch != "+" && branch != "-")
            throw std::invalid_argument("--branch must be + or -");
        manifest.command = "periodic-branch";
        manifest.parameters = {{"n", n},           {"omega", omega},
                               {"sigma", sigma},   {"branch", branch},
                               {"eps", eps_list},  {"potential", potential_path},
                               {"jobs", jobs}};
        auto rows = parallel_map(eps_list, jobs, [&](double e) {
            return run_periodic(n, omega, sigma, branch[0], e, w);
        });
        std::ostringstream csv;
        csv << "eps,c_seed,amplitude,sup_deviation\n";
        std::vector<double> errs;
        for (const auto& r : rows) {
            csv << r.eps << "," << r.c_seed << "," << r.amplitude << "," << r.deviation << "\n";
            errs.push_back(r.deviation);
        }
        if (rows.size() >= 2) {
            const double slope = fit_slope(eps_list, errs);
            csv << "# fitted_slope," << slope << "\n";
            manifest.convergence = {{"fitted_slope", slope}};
        }
        emit(out, csv.str(), manifest);
        return 0;
    }

    if (*so) {
        gapsol::PotentialSpec w = gapsol::load_potential(potential_path);
        if (s_eps <= 0.0)
            throw gapsol::InvalidRegime("soliton: eps must be positive");
        gapsol::CoupledModeParams params{n, w.w2m(n), omega, sigma, s_eps};
        manifest.command = "soliton";
        manifest.parameters = {{"n", n},       {"omega", omega},        {"sigma", sigma},
                               {"eps", s_eps}, {"periods", cfg.periods}, {"grid", cfg.grid_points},
                               {"tol", cfg.tol}, {"potential", potential_path}};
        gapsol::SolitonSolveResult r = run_soliton(params, cfg, w);
        gapsol::SolitonProfile profile(params);
        gapsol::PartitionReport part = gapsol::partition_diagnostic(r.field, params);
        json result{{"params",
                     {{"n", n},
                      {"w2n", params.w2n},
                      {"omega", omega},
                      {"sigma", sigma},
                      {"eps", s_eps}}},
                    {"config",
                     {{"periods", cfg.periods}, {"grid", cfg.grid_points}, {"tol", cfg.tol}}},
                    {"potential", potential_json(w)},
                    {"peak", r.peak},
                    {"sup_error", gapsol::error_vs_cm(r.field, profile)},
                    {"partition",
                     {{"mass_plus", part.mass_plus},
                      {"mass_minus", part.mass_minus},
                      {"mass_zero", part.mass_zero},
                      {"ratio", part.ratio}}},
                    {"newton_iters", r.iterations},
                    {"residual", r.residual}};
        write_atomic(out + ".json", result.dump(2) + "\n");
        std::ostringstream csv;
        csv << "x,U\n";
        csv.precision(15);
        for (int j = 0; j < r.field.size(); ++j)
            csv << r.field.x(j) << "," << r.field.u[j] << "\n";
        write_atomic(out + ".csv", csv.str());
        manifest.outputs = {out + ".json", out + ".csv"};
        manifest.convergence = {{"newton_iters", r.iterations}, {"residual", r.residual}};
        manifest.write(out);
        return 0;
    }

    if (*cv) {
        gapsol::PotentialSpec w = gapsol::load_potential(potential_path);
        if (eps_list.size() < 2)
            throw std::invalid_argument("convergence: need >= 2 epsilon values to fit a slope");
        manifest.command = "convergence";
        manifest.parameters = {{"mode", mode},     {"n", n},
                               {"omega", omega},   {"sigma", sigma},
                               {"branch", branch}, {"eps", eps_list},
                               {"potential", potential_path}, {"jobs", jobs}};
        std::vector<double> errs;
        if (mode == "periodic") {
            auto rows = parallel_map(eps_list, jobs, [&](double e) {
                return run_periodic(n, omega, sigma, branch[0], e, w).deviation;
            });
            errs = rows;
        } else {
            errs = parallel_map(eps_list, jobs, [&](double e) {
                gapsol::CoupledModeParams params{n, w.w2m(n), omega, sigma, e};
                gapsol::SolitonSolveResult r = run_soliton(params, cfg, w);
                return gapsol::error_vs_cm(r.field, gapsol::SolitonProfile(params));
            });
        }
        double constant = 0.0;
        const double slope = fit_slope(eps_list, errs, &constant);
        json points = json::array();
        for (size_t i = 0; i < eps_list.size(); ++i)
            points.push_back({{"eps", eps_list[i]}, {"error", errs[i]}});
        json result{{"mode", mode},
                    {"points", points},
                    {"fitted_slope", slope},
                    {"constant", constant}};
        manifest.convergence = {{"fitted_slope", slope}, {"constant", constant}};
        emit(out, result.dump(2) + "\n", manifest);
        return 0;
    }

    if (*rs) {
        gapsol::ResonantSet2D set = gapsol::resonant_set({n1, n2}, radius);
        manifest.command = "resonant-set";
        manifest.parameters = {{"n", {n1, n2}}, {"radius", radius}};
        json members = json::array();
        for (const auto& m : set.members) members.push_back({m.first, m.second});
        auto pname = [](gapsol::Parity p) {
            return p == gapsol::Parity::Even ? "even" : "odd";
        };
        json result{{"n", {set.n.first, set.n.second}},
                    {"parity", {pname(set.parity1), pname(set.parity2)}},
                    {"members", members},
                    {"dim", set.dim()}};
        emit(out, result.dump(2) + "\n", manifest);
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const gapsol::NoConvergence& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const gapsol::SingularJacobian& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const gapsol::BranchNotPresent& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const gapsol::InvalidRegime& e) {
        std::cerr << "invalid regime: " << e.what() << "\n";
        return 1;
    } catch (const gapsol::DomainTooSmall& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
