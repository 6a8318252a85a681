#ifndef GAPSOL_LATTICE1D_HPP
#define GAPSOL_LATTICE1D_HPP

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "gapsol/fourier.hpp"

namespace gapsol {

/** The 1D nonlinear lattice system
 *  (w^2 - m^2/4) U_m + eps (W*U)_m - eps sigma N(U)_m = 0.  */
struct LatticeProblem1D {
    PotentialSpec potential;
    double omega_sq = 0.0;
    double eps = 0.0;
    int sigma = +1; // +1 or -1
    Parity parity = Parity::Odd;
    int trunc = 8;
    /** Detuning Omega when the problem is parametrized as
     * omega^2 = n^2/4 + eps*Omega; required by the bifurcation operations. */
    std::optional<double> resonance_omega;

    /** Problem pinned at the resonance omega^2 = n^2/4 + eps*Omega. */
    static LatticeProblem1D at_resonance(int n, double omega_detuning, double eps, int sigma,
                                         PotentialSpec potential, int trunc);
};

LatticeField1D residual(const LatticeField1D& u, const LatticeProblem1D& p);

/** Exact derivative of the residual in split real/imaginary coordinates
 * (Re U_0..Re U_{S-1}, Im U_0..Im U_{S-1}); dense 2S x 2S. */
Eigen::MatrixXd jacobian(const LatticeField1D& u, const LatticeProblem1D& p);

/** Symmetry subspace used to remove gauge/translation degeneracy at
 * resonance. CosineReal: U_{-m} = U_m real (even real solutions).
 * SineImag: U_m = i r_m with r_{-m} = -r_m (odd real solutions). */
enum class Symmetry { None, CosineReal, SineImag };

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 50;
    Symmetry symmetry = Symmetry::None;
    double rcond_min = 1e-12;
};

/** Newton iteration on the lattice residual; returns U with
 * ||residual||_{s=0} <= tol. Throws NoConvergence or SingularJacobian. */
LatticeField1D newton_solve(const LatticeField1D& u0, const LatticeProblem1D& p,
                            const NewtonOptions& opts = {});

/** The unique small complement solution g in Ker(L)^perp (g_{+-n} = 0) of the
 * projected system with (a, b) held fixed at the kernel modes. */
LatticeField1D solve_g(cplx a, cplx b, const LatticeProblem1D& p, int n,
                       const NewtonOptions& opts = {});

/** The two kernel-projection equations evaluated at U = a e_n + b e_{-n} + g;
 * reduces to (Omega a + w_{2n} b - sigma(|a|^2+2|b|^2)a, ...) at eps = 0. */
std::pair<cplx, cplx> bifurcation_residual(cplx a, cplx b, const LatticeProblem1D& p, int n,
                                           const NewtonOptions& opts = {});

/** Leading-order spectral gap in omega^2: (n^2/4 - eps|w_{2n}|, n^2/4 + eps|w_{2n}|). */
std::pair<double, double> gap_edges(int n, double eps, const PotentialSpec& potential);

struct BranchResult {
    LatticeField1D field;
    double c = 0.0; // dispersion-relation amplitude c
    cplx a, b;      // kernel-mode seed
    double sup_deviation = 0.0;
    int iterations = 0;
};

/** Solve for the periodic/anti-periodic branch seeded from the nonlinear
 * dispersion relation Omega +- w_{2n} = 3 sigma c^2; branch '+' is b = a,
 * branch '-' is b = -a (realized as a = ic, b = conj(a)).
 * Throws BranchNotPresent when the sign condition fails. */
BranchResult periodic_branch(int n, double omega_detuning, int sigma, double eps, char branch,
                             const PotentialSpec& potential, int trunc = -1,
                             const NewtonOptions& opts = {});

/** Operational form of "bounded away from resonance":
 * min_m |omega^2 - m^2/4| >= 10 eps sum|w_{2m}|. */
bool off_resonant(double omega_sq, double eps, const PotentialSpec& potential, Parity parity,
                  int trunc);

/** sup_x |U(x) - sqrt(eps)(a e^{inx/2} + b e^{-inx/2})| sampled over two
 * potential periods. */
double periodic_deviation(const LatticeField1D& u, double eps, int n, cplx a, cplx b);

} // namespace gapsol

#endif
