// Acceptance suite: each criterion prints one PASS/FAIL line with its
// measured quantities, pinned tolerances inline. Run all or --criterion k.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gapsol/coupled_mode.hpp"
#include "gapsol/errors.hpp"
#include "gapsol/lattice1d.hpp"
#include "gapsol/lattice2d.hpp"
#include "gapsol/soliton.hpp"

using namespace gapsol;

namespace {

double fit_slope(const std::vector<double>& eps, const std::vector<double>& err) {
    const int n = static_cast<int>(eps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(eps[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// 1. Dispersion-relation reproduction: converged amplitude vs the closed-form seed.
bool criterion1(std::string& msg) {
    auto pot = PotentialSpec::from_pairs({{1, 0.5}});
    const double eps = 0.05;
    double worst = 0.0;
    for (double omega : {0.2, 0.5, 1.0}) {
        const auto t0 = std::chrono::steady_clock::now();
        BranchResult r = periodic_branch(1, omega, +1, eps, '+', pot);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double amp = std::sqrt(eps) * std::abs(r.field.get(1)); // physical amplitude
        worst = std::max(worst, std::abs(amp / std::sqrt(eps) - r.c));
        if (secs >= 1.0) {
            msg = "runtime " + std::to_string(secs) + " s >= 1 s";
            return false;
        }
    }
    msg = "max |amp/sqrt(eps) - c| = " + std::to_string(worst) + " (tol 0.5*eps = 0.025)";
    return worst <= 0.5 * eps;
}

// 2. Periodic error-scaling: sup deviation from the two-mode field, slope >= 1.4.
bool criterion2(std::string& msg) {
    auto pot = PotentialSpec::from_pairs({{1, 0.5}});
    std::vector<double> eps{0.2, 0.1, 0.05, 0.025}, dev;
    for (double e : eps) dev.push_back(periodic_branch(1, 0.5, +1, e, '+', pot).sup_deviation);
    const double slope = fit_slope(eps, dev);
    msg = "fitted slope = " + std::to_string(slope) + " (require >= 1.4, bound 3/2)";
    return slope >= 1.4;
}

// 3. Soliton error-scaling: slope >= 0.83 and a single constant C covers the sweep.
// Soliton sweep configuration shared by criteria 3 and 6.  The box must hold
// >= 15 decay lengths of the eps = 0.04 envelope, which forces K = 192
// periods at kappa ~ 0.97; a gentle potential keeps eps w^2 small so the
// sweep stays inside the coupled-mode asymptotic regime.
SolverConfig soliton_sweep_config() {
    SolverConfig cfg;
    cfg.periods = 192;
    cfg.grid_points = 16384;
    cfg.mode_cutoff = 1536;
    return cfg;
}

CoupledModeParams soliton_sweep_params(double eps) { return {1, 1.0, -0.25, +1, eps}; }

PotentialSpec soliton_sweep_potential() { return PotentialSpec::from_pairs({{1, 1.0}}); }

bool criterion3(std::string& msg) {
    auto pot = soliton_sweep_potential();
    SolverConfig cfg = soliton_sweep_config();
    std::vector<double> eps{0.16, 0.08, 0.04}, err;
    for (double e : eps) {
        CoupledModeParams p = soliton_sweep_params(e);
        SolitonSolveResult r = solve_soliton(p, cfg, pot);
        err.push_back(error_vs_cm(r.field, SolitonProfile(p)));
    }
    const double slope = fit_slope(eps, err);
    // single frozen constant; measured max err/eps^{5/6} is 0.80 here
    const double c = 1.0;
    bool bounded = true;
    for (size_t i = 0; i < eps.size(); ++i)
        bounded = bounded && err[i] <= c * std::pow(eps[i], 5.0 / 6.0);
    msg = "fitted slope = " + std::to_string(slope) + " (require >= 0.83), C = " +
          std::to_string(c) + (bounded ? ", bound holds" : ", bound violated");
    return slope >= 0.83 && bounded;
}

// 4. Exact-soliton residual and decay-rate fit.
bool criterion4(std::string& msg) {
    SolitonProfile prof({1, 1.0, 0.3, +1, 0.0});
    std::vector<double> ys;
    for (double y = -20.0; y <= 20.0; y += 0.05) ys.push_back(y);
    const double res = cme_residual(prof, ys);
    const double y1 = 8.0, y2 = 18.0;
    const double rate =
        -(std::log(std::abs(prof.a(y2))) - std::log(std::abs(prof.a(y1)))) / (y2 - y1);
    const double rel = std::abs(rate - prof.kappa()) / prof.kappa();
    msg = "residual = " + std::to_string(res) + " (tol 1e-6), decay-rate error = " +
          std::to_string(100 * rel) + "% (tol 1%)";
    return res <= 1e-6 && rel <= 0.01;
}

// 5. Dirac kernel residuals at h = 0.01 and 4th-order decay under h -> h/2.
bool criterion5(std::string& msg) {
    SolitonProfile prof({1, 1.0, 0.0, +1, 0.0});
    auto residuals = [&](double h) {
        std::vector<double> ys = uniform_grid(30.0, h);
        DiracOperator op(prof, ys);
        return kernel_check(op, prof, ys);
    };
    auto [t1, g1] = residuals(0.01);
    auto [t2, g2] = residuals(0.005);
    msg = "residuals (h=0.01): " + std::to_string(t1) + ", " + std::to_string(g1) +
          " (tol 1e-5); decay factors " + std::to_string(t1 / t2) + ", " +
          std::to_string(g1 / g2) + " (require >= 16)";
    return t1 <= 1e-5 && g1 <= 1e-5 && t1 / t2 >= 16.0 && g1 / g2 >= 16.0;
}

// 6. Partition diagnostic: ratio/eps^{1/3} bounded and ratio monotone in eps.
bool criterion6(std::string& msg) {
    auto pot = soliton_sweep_potential();
    SolverConfig cfg = soliton_sweep_config();
    std::vector<double> eps{0.16, 0.08, 0.04}, ratios;
    for (double e : eps) {
        CoupledModeParams p = soliton_sweep_params(e);
        SolitonSolveResult r = solve_soliton(p, cfg, pot);
        ratios.push_back(partition_diagnostic(r.field, p).ratio);
    }
    double bound = 0.0;
    for (size_t i = 0; i < eps.size(); ++i)
        bound = std::max(bound, ratios[i] / std::cbrt(eps[i]));
    const bool monotone = ratios[0] > ratios[1] && ratios[1] > ratios[2];
    // measured max ratio/eps^{1/3} is 0.955 at this configuration
    msg = "ratio/eps^{1/3} max = " + std::to_string(bound) +
          " (frozen bound 1.2); ratios " + std::to_string(ratios[0]) + " > " +
          std::to_string(ratios[1]) + " > " + std::to_string(ratios[2]) +
          (monotone ? " monotone" : " NOT monotone");
    return bound <= 1.2 && monotone;
}

// 7. Non-resonant uniqueness: 50 random small starts all converge to zero.
bool criterion7(std::string& msg) {
    auto pot = PotentialSpec::from_pairs({{1, 0.5}});
    LatticeProblem1D p;
    p.potential = pot;
    p.omega_sq = 0.3;
    p.eps = 0.004;
    p.sigma = +1;
    p.parity = Parity::Odd;
    p.trunc = 16;
    if (!off_resonant(p.omega_sq, p.eps, p.potential, p.parity, p.trunc)) {
        msg = "setup error: parameters not off-resonant";
        return false;
    }
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        LatticeField1D u0(p.parity, p.trunc);
        for (int i = 0; i < u0.size(); ++i) u0.data()[i] = cplx(d(rng), d(rng));
        const double norm = weighted_norm(u0, 0.0);
        for (int i = 0; i < u0.size(); ++i) u0.data()[i] *= 0.1 / norm; // ||U0|| = 0.1
        try {
            worst = std::max(worst, weighted_norm(newton_solve(u0, p), 0.0));
        } catch (const std::exception& e) {
            msg = std::string("solve failed: ") + e.what();
            return false;
        }
    }
    msg = "max converged norm over 50 starts = " + std::to_string(worst) + " (tol 1e-10)";
    return worst <= 1e-10;
}

// 8. Resonant sets: printed example, brute-force oracle, parity/cardinality counts.
bool criterion8(std::string& msg) {
    ResonantSet2D s11 = resonant_set({1, 1});
    const std::vector<Index2> doc{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
    if (s11.members != doc) {
        msg = "S_{(1,1)} mismatch";
        return false;
    }
    // independent brute force for S_{(5,0)} over |m_i| <= 10
    std::vector<Index2> oracle;
    for (int m1 = -10; m1 <= 10; ++m1)
        for (int m2 = -10; m2 <= 10; ++m2)
            if (m1 % 2 != 0 && m2 % 2 == 0 && m1 * m1 + m2 * m2 == 25)
                oracle.push_back({m1, m2});
    ResonantSet2D s50 = resonant_set({5, 0}, 10);
    if (s50.members != oracle || s50.dim() != 6) {
        msg = "S_{(5,0)} mismatch vs brute force";
        return false;
    }
    for (int n1 = 0; n1 <= 6; ++n1)
        for (int n2 = 0; n2 <= 6; ++n2) {
            const int d = resonant_set({n1, n2}).dim();
            bool ok = d > 0;
            if (n2 == 0 && n1 % 2 == 1) ok = ok && d >= 2;
            if (n2 == 0 && n1 != 0 && n1 % 2 == 0) ok = ok && d >= 4;
            if ((n1 - n2) % 2 != 0 && n1 > 0 && n2 > 0) ok = ok && d >= 4;
            if ((n1 - n2) % 2 == 0 && n1 != n2 && n1 > 0 && n2 > 0) ok = ok && d >= 8;
            if (!ok) {
                msg = "resonant-set count failed at n=(" + std::to_string(n1) + "," +
                      std::to_string(n2) + "), dim=" + std::to_string(d);
                return false;
            }
        }
    msg = "S_{(1,1)} exact, S_{(5,0)} = 6-element oracle, cardinality bounds hold on {0..6}^2";
    return true;
}

// 9. Oracle equivalences: FD Jacobians, cm4 = 2D projection at eps=0, algebra bounds.
bool criterion9(std::string& msg) {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> d(-1.0, 1.0);

    // 1D Jacobian vs central differences
    LatticeProblem1D p1;
    p1.potential = PotentialSpec::from_pairs({{1, 0.5}, {2, 0.3}});
    p1.omega_sq = 0.3;
    p1.eps = 0.05;
    p1.parity = Parity::Odd;
    p1.trunc = 9;
    LatticeField1D u1(p1.parity, p1.trunc);
    for (int i = 0; i < u1.size(); ++i) u1.data()[i] = 0.5 * cplx(d(rng), d(rng));
    Eigen::MatrixXd j1 = jacobian(u1, p1);
    const int s1 = u1.size();
    const double h = 1e-6;
    double fd_worst = 0.0;
    for (int k = 0; k < 2 * s1; ++k) {
        LatticeField1D up = u1, um = u1;
        const cplx delta = k < s1 ? cplx(h, 0.0) : cplx(0.0, h);
        up.data()[k % s1] += delta;
        um.data()[k % s1] -= delta;
        LatticeField1D fp = residual(up, p1), fm = residual(um, p1);
        for (int i = 0; i < s1; ++i) {
            const cplx dv = (fp.data()[i] - fm.data()[i]) / (2.0 * h);
            fd_worst = std::max(fd_worst, std::abs(j1(i, k) - dv.real()));
            fd_worst = std::max(fd_worst, std::abs(j1(s1 + i, k) - dv.imag()));
        }
    }

    // cm4 vs generic Lyapunov-Schmidt projection at eps=0, 100 random points
    auto w2d = PotentialSpec2D::from_pairs({{2, 2, 0.3}, {0, 2, 0.1}, {2, 0, 0.2}, {2, -2, 0.4}});
    ResonantSet2D set = resonant_set({1, 1});
    LatticeProblem2D p2 = LatticeProblem2D::at_resonance({1, 1}, 0.2, 0.0, +1, w2d, 5);
    double cm_worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        std::vector<cplx> a(4);
        for (auto& z : a) z = 0.5 * cplx(d(rng), d(rng));
        auto res = bifurcation_residual_2d(a, p2, set);
        auto cm = cm4_residual({a[0], a[1], a[2], a[3]}, 0.2, +1, 0.3, 0.1, 0.2, 0.4);
        for (int j = 0; j < 4; ++j) cm_worst = std::max(cm_worst, std::abs(res[j] - cm[j]));
    }

    // Banach algebra bounds; frozen C = 2.6 has wide headroom over the
    // measured trial maxima (~1.05 in 1D, ~0.77 in 2D)
    double r1d = 0.0, r2d = 0.0;
    for (int t = 0; t < 100; ++t) {
        LatticeField1D a(Parity::Odd, 8), b(Parity::Odd, 8);
        for (int i = 0; i < a.size(); ++i) a.data()[i] = cplx(d(rng), d(rng));
        for (int i = 0; i < b.size(); ++i) b.data()[i] = cplx(d(rng), d(rng));
        LatticeField1D c = convolve(a, b, 16);
        for (double s : {0.6, 2.0})
            r1d = std::max(r1d, weighted_norm(c, s) / (weighted_norm(a, s) * weighted_norm(b, s)));
        LatticeField2D a2(Parity::Odd, Parity::Even, 4), b2(Parity::Odd, Parity::Even, 4);
        for (int i = 0; i < a2.size(); ++i) a2.data()[i] = cplx(d(rng), d(rng));
        for (int i = 0; i < b2.size(); ++i) b2.data()[i] = cplx(d(rng), d(rng));
        LatticeField2D c2 = convolve(a2, b2, 8);
        for (double s : {1.1, 2.0})
            r2d = std::max(r2d,
                           weighted_norm(c2, s) / (weighted_norm(a2, s) * weighted_norm(b2, s)));
    }

    msg = "FD deviation = " + std::to_string(fd_worst) + " (tol 1e-6); cm4 deviation = " +
          std::to_string(cm_worst) + " (tol 1e-12); algebra ratios " + std::to_string(r1d) +
          " / " + std::to_string(r2d) + " (frozen C = 2.6)";
    return fd_worst <= 1e-6 && cm_worst <= 1e-12 && r1d <= 2.6 && r2d <= 2.6;
}

// 10. Symmetry suite: A/B conjugate symmetry, realness under b = conj(a),
// soliton reversibility.
bool criterion10(std::string& msg) {
    auto pot = PotentialSpec::from_pairs({{1, 0.5}});
    LatticeProblem1D p = LatticeProblem1D::at_resonance(1, 0.5, 0.01, +1, pot, 9);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> d(-0.4, 0.4);
    double ab_worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const cplx a(d(rng), d(rng)), b(d(rng), d(rng));
        auto [A, B] = bifurcation_residual(a, b, p, 1);
        auto [A2, B2] = bifurcation_residual(std::conj(b), std::conj(a), p, 1);
        ab_worst = std::max({ab_worst, std::abs(A - std::conj(B2)), std::abs(B - std::conj(A2))});
    }

    BranchResult r = periodic_branch(1, 0.5, +1, 0.05, '+', pot);
    std::vector<double> xs;
    for (int i = 0; i < 512; ++i) xs.push_back(4.0 * M_PI * i / 512);
    double im_worst = 0.0;
    for (auto z : synthesize(r.field, 0.05, xs)) im_worst = std::max(im_worst, std::abs(z.imag()));

    auto spot = PotentialSpec::from_pairs({{1, 3.0}});
    CoupledModeParams sp{1, 3.0, 0.0, +1, 0.08};
    SolitonSolveResult sr = solve_soliton(sp, SolverConfig{}, spot);
    const int n = sr.field.size();
    double rev = 0.0;
    for (int j = 1; j < n; ++j)
        rev = std::max(rev, std::abs(sr.field.u[j] - sr.field.u[n - j]));

    msg = "|A(a,b) - conj(B(conj b, conj a))| = " + std::to_string(ab_worst) +
          " (tol 1e-8); max Im = " + std::to_string(im_worst) +
          " (tol 1e-10); |U(x)-U(-x)| = " + std::to_string(rev) + " (tol 1e-10)";
    return ab_worst <= 1e-8 && im_worst <= 1e-10 && rev <= 1e-10;
}

struct Criterion {
    const char* name;
    bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {"dispersion-relation reproduction", criterion1},
    {"periodic error-scaling slope >= 1.4", criterion2},
    {"soliton error-scaling slope >= 0.83", criterion3},
    {"exact-soliton residual and decay rate", criterion4},
    {"Dirac kernel residuals and 4th-order decay", criterion5},
    {"partition-diagnostic scaling", criterion6},
    {"non-resonant uniqueness over 50 starts", criterion7},
    {"resonant sets and cardinality counts", criterion8},
    {"oracle equivalences (FD, cm4, algebra)", criterion9},
    {"symmetry suite", criterion10},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc - 1; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);
    int failures = 0;
    for (int k = 1; k <= 10; ++k) {
        if (only != 0 && k != only) continue;
        const Criterion& c = kCriteria[k - 1];
        std::string msg;
        bool ok = false;
        try {
            ok = c.fn(msg);
        } catch (const std::exception& e) {
            msg = std::string("exception: ") + e.what();
        }
        std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", k, c.name, msg.c_str());
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
