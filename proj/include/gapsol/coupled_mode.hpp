#ifndef GAPSOL_COUPLED_MODE_HPP
#define GAPSOL_COUPLED_MODE_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gapsol/fourier.hpp"

namespace gapsol {

/** Parameters of the coupled-mode reduction at the resonance
 * omega^2 = n^2/4 + eps*Omega. */
struct CoupledModeParams {
    int n = 1;
    double w2n = 1.0;
    double omega = 0.0; // detuning Omega
    int sigma = +1;
    double eps = 0.0;

    double omega_sq() const { return 0.25 * n * n + eps * omega; }
};

/** Evaluator for the exact gap-soliton orbit
 *  a(y) = sqrt(2/3) sqrt(w^2-O^2) / (sqrt(w-O) cosh(ky) + i sqrt(w+O) sinh(ky)),
 *  b = conj(a), with decay rate kappa = sqrt(w^2 - O^2)/n.
 * The mirrored regime sigma = -1, w_{2n} < 0 is reached through the sign map
 * (a, b, Omega, sigma, w) -> (conj a, conj b, -Omega, -sigma, -w). */
class SolitonProfile {
  public:
    explicit SolitonProfile(const CoupledModeParams& params);

    const CoupledModeParams& params() const { return params_; }
    double kappa() const { return kappa_; }

    /** (a(y), b(y)). */
    std::pair<cplx, cplx> eval(double y) const;
    cplx a(double y) const { return eval(y).first; }

  private:
    CoupledModeParams params_;
    double kappa_;
    bool mirrored_;
};

/** (a(y), b(y)) of the exact soliton; throws InvalidRegime outside
 * |Omega| < |w_{2n}|, sigma*w_{2n} > 0. */
std::pair<cplx, cplx> soliton_exact(const CoupledModeParams& params, double y);

/** Amplitude c = sqrt((Omega +- w_{2n}) / (3 sigma)) of the y-independent
 * branch, or nullopt when the radicand is negative. */
std::optional<double> dispersion_amplitude(double omega, double w2n, int sigma, char branch);

/** Max modulus over the grid of the coupled-mode residuals
 *  i n a' + Omega a + w b - sigma(|a|^2+2|b|^2) a   and its partner,
 * with a' from Richardson-extrapolated central differences. */
double cme_residual(const std::function<std::pair<cplx, cplx>(double)>& orbit,
                    const CoupledModeParams& params, std::span<const double> ys,
                    double diff_step = 1e-3);
double cme_residual(const SolitonProfile& profile, std::span<const double> ys,
                    double diff_step = 1e-3);

/** sqrt(eps) (a(eps x) e^{inx/2} + conj(a(eps x)) e^{-inx/2}); real valued. */
std::vector<cplx> leading_order_field(const SolitonProfile& profile, std::span<const double> xs);

/** Discretized self-adjoint 4x4-component Dirac operator linearizing the
 * coupled-mode system about the soliton, in variable order
 * (alpha, conj alpha, beta, conj beta). d/dy uses a 6th-order periodic
 * central stencil; apply() is matrix-free, dense() for small grids. */
class DiracOperator {
  public:
    DiracOperator(const SolitonProfile& profile, std::span<const double> ys);

    int grid_size() const { return static_cast<int>(ys_.size()); }
    double step() const { return h_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
    Eigen::MatrixXcd dense() const;

  private:
    std::vector<double> ys_;
    std::vector<cplx> a_, b_;
    std::vector<double> w0_; // Omega - 2 sigma (|a|^2 + |b|^2)
    double h_;
    double w2n_;
    int n_;
    int sigma_;
};

/** Relative residuals ||A v||/||v|| for the translation eigenvector
 * (a', conj a', b', conj b') and the gauge eigenvector (ia, -i conj a, ib,
 * -i conj b). */
std::pair<double, double> kernel_check(const DiracOperator& op, const SolitonProfile& profile,
                                       std::span<const double> ys);

/** Uniform grid [-ymax, ymax] with step h (ymax adjusted to a multiple of h). */
std::vector<double> uniform_grid(double ymax, double h);

} // namespace gapsol

#endif
