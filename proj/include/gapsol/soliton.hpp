#ifndef GAPSOL_SOLITON_HPP
#define GAPSOL_SOLITON_HPP

#include <vector>

#include "gapsol/coupled_mode.hpp"
#include "gapsol/fourier.hpp"

namespace gapsol {

/** Pseudo-spectral configuration. Domain is [-pi K, pi K] with K potential
 * periods; N uniform grid points. Newton works on the cosine modes
 * cos(p x / K), p = 0..mode_cutoff, which must resolve all nonlinear
 * harmonics of the solution (3 * mode_cutoff < N/2 keeps the cubic
 * dealiased). */
struct SolverConfig {
    int periods = 64;      // K
    int grid_points = 8192; // N, power of two, >= 64 K
    double tol = 1e-10;
    int max_iter = 50;
    int mode_cutoff = 0; // 0 -> min(N/6 - 1, 16 K), keeps the cubic dealiased
    double omega_guard = 0.9; // require |Omega| <= guard * |w_{2n}|
    double seed_scale = 1.0;  // -1 flips the seed sign

    int cutoff() const {
        return mode_cutoff > 0 ? mode_cutoff : std::min(grid_points / 6 - 1, 16 * periods);
    }
};

/** Real samples U(x_j) on x_j = -pi K + j h, h = 2 pi K / N. */
struct GridField {
    int periods = 0;
    std::vector<double> u;

    int size() const { return static_cast<int>(u.size()); }
    double step() const { return 2.0 * M_PI * periods / size(); }
    double x(int j) const { return -M_PI * periods + j * step(); }
    double sup() const;
};

struct SolitonSolveResult {
    GridField field;
    int iterations = 0;
    double residual = 0.0; // full-grid sup-norm residual at exit
    double peak = 0.0;
};

/** L1-type masses of |U^(k)| (1+k^2)^{q/2} over the windows
 * R'_+ = [n/2 - eps^r, n/2 + eps^r], R'_- mirrored, R'_0 the complement. */
struct PartitionReport {
    double mass_plus = 0.0;
    double mass_minus = 0.0;
    double mass_zero = 0.0;
    double ratio = 0.0; // mass_zero / (mass_plus + mass_minus)
};

/** Newton on the pseudo-spectral residual omega^2 U + U'' + eps W U - sigma U^3
 * restricted to real even functions, seeded from the coupled-mode field.
 * Throws RegimeInvalid, DomainTooSmall, NoConvergence. */
SolitonSolveResult solve_soliton(const CoupledModeParams& params, const SolverConfig& cfg,
                                 const PotentialSpec& potential);

/** sup_x |U(x) - sqrt(eps)(a(eps x) e^{inx/2} + conj a(eps x) e^{-inx/2})|. */
double error_vs_cm(const GridField& field, const SolitonProfile& profile);

PartitionReport partition_diagnostic(const GridField& field, const CoupledModeParams& params,
                                     double q = 0.0, double window_exponent = 2.0 / 3.0);

/** Independent sup-norm residual of the elliptic equation, separate from the
 * Newton loop's own convergence test. */
double residual_check(const GridField& field, const CoupledModeParams& params,
                      const PotentialSpec& potential);

/** Leading-order coupled-mode field sampled on the grid of cfg. */
GridField seed_field(const CoupledModeParams& params, const SolverConfig& cfg);

} // namespace gapsol

#endif
