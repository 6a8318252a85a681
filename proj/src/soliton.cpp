#include "gapsol/soliton.hpp"


#include <Eigen/Dense>
#include <cmath>
#include <fftw3.h>
#include <mutex>

#include "gapsol/errors.hpp"

namespace gapsol {

namespace {

// FFTW plan creation/destruction is not thread-safe.
std::mutex fftw_mutex;

/** r2c/c2r workspace of fixed size with cosine-mode accessors. The field is
 * real and even about x = 0; physical mode p corresponds to cos(p x / K) and
 * picks up the factor (-1)^p from the grid offset x_0 = -pi K. */
class CosineTransform {
  public:
    explicit CosineTransform(int n) : n_(n) {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        real_ = fftw_alloc_real(n);
        spec_ = fftw_alloc_complex(n / 2 + 1);
        fwd_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE);
    }
    ~CosineTransform() {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(spec_);
    }
    CosineTransform(const CosineTransform&) = delete;
    CosineTransform& operator=(const CosineTransform&) = delete;

    /** Grid samples -> cosine coefficients r_p, p = 0..pmax. */
    void analyze(const std::vector<double>& u, std::vector<double>& modes, int pmax) {
        std::copy(u.begin(), u.end(), real_);
        fftw_execute(fwd_);
        modes.assign(pmax + 1, 0.0);
        for (int p = 0; p <= pmax && p <= n_ / 2; ++p)
            modes[p] = ((p & 1) ? -1.0 : 1.0) * spec_[p][0] / n_;
    }

    /** Cosine coefficients -> grid samples. */
    void synthesize(const std::vector<double>& modes, std::vector<double>& u) {
        const int nh = n_ / 2;
        for (int p = 0; p <= nh; ++p) {
            const int pm = p < static_cast<int>(modes.size()) ? p : -1;
            spec_[p][0] = pm >= 0 ? ((p & 1) ? -modes[p] : modes[p]) : 0.0;
            spec_[p][1] = 0.0;
        }
        fftw_execute(bwd_);
        u.assign(real_, real_ + n_);
    }

    /** |U^(k_p)| amplitudes (unnormalized FFT magnitudes / n). */
    void spectrum_abs(const std::vector<double>& u, std::vector<double>& amp) {
        std::copy(u.begin(), u.end(), real_);
        fftw_execute(fwd_);
        amp.assign(n_ / 2 + 1, 0.0);
        for (int p = 0; p <= n_ / 2; ++p)
            amp[p] = std::hypot(spec_[p][0], spec_[p][1]) / n_;
    }

  private:
    int n_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan fwd_, bwd_;
};

std::vector<double> grid_xs(const SolverConfig& cfg) {
    std::vector<double> xs(cfg.grid_points);
    const double h = 2.0 * M_PI * cfg.periods / cfg.grid_points;
    for (int j = 0; j < cfg.grid_points; ++j) xs[j] = -M_PI * cfg.periods + j * h;
    return xs;
}

void validate_config(const SolverConfig& cfg) {
    if (cfg.periods < 1) throw std::invalid_argument("SolverConfig: periods must be >= 1");
    const int n = cfg.grid_points;
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("SolverConfig: grid_points must be a power of two");
    if (n < 64 * cfg.periods)
        throw std::invalid_argument("SolverConfig: need grid_points >= 64 * periods");
    if (3 * cfg.cutoff() >= n / 2)
        throw std::invalid_argument("SolverConfig: mode cutoff too large for dealiased cubic");
}

/** Full-grid residual omega^2 u + u'' + eps W u - sigma u^3 for a field whose
 * spectrum lives on modes 0..modes.size()-1. */
std::vector<double> grid_residual(const std::vector<double>& u, const std::vector<double>& modes,
                                  const std::vector<double>& wgrid, const CoupledModeParams& cm,
                                  const SolverConfig& cfg, CosineTransform& fft) {
    const double k0 = 1.0 / cfg.periods;
    std::vector<double> d2modes(modes.size());
    for (size_t p = 0; p < modes.size(); ++p) d2modes[p] = -(p * k0) * (p * k0) * modes[p];
    std::vector<double> d2u;
    fft.synthesize(d2modes, d2u);
    const double osq = cm.omega_sq();
    std::vector<double> res(u.size());
    for (size_t j = 0; j < u.size(); ++j)
        res[j] = osq * u[j] + d2u[j] + cm.eps * wgrid[j] * u[j] -
                 cm.sigma * u[j] * u[j] * u[j];
    return res;
}

} // namespace

double GridField::sup() const {
    double s = 0.0;
    for (double v : u) s = std::max(s, std::abs(v));
    return s;
}

GridField seed_field(const CoupledModeParams& params, const SolverConfig& cfg) {
    GridField f;
    f.periods = cfg.periods;
    f.u.assign(cfg.grid_points, 0.0);
    if (params.eps == 0.0) return f;
    SolitonProfile profile(params);
    std::vector<double> xs = grid_xs(cfg);
    std::vector<cplx> samples = leading_order_field(profile, xs);
    for (int j = 0; j < cfg.grid_points; ++j) f.u[j] = cfg.seed_scale * samples[j].real();
    return f;
}

SolitonSolveResult solve_soliton(const CoupledModeParams& params, const SolverConfig& cfg,
                                 const PotentialSpec& potential) {
    validate_config(cfg);
    if (params.eps < 0) throw InvalidRegime("solve_soliton: eps must be >= 0");
    if (params.eps == 0.0) {
        SolitonSolveResult res;
        res.field.periods = cfg.periods;
        res.field.u.assign(cfg.grid_points, 0.0);
        return res;
    }
    SolitonProfile profile(params); // throws InvalidRegime outside the gap
    if (std::abs(params.omega) > cfg.omega_guard * std::abs(params.w2n))
        throw InvalidRegime("solve_soliton: |Omega| too close to the gap edge");

    // Domain checks: >= 15 decay lengths, and seed negligible at the boundary.
    const double kappa = profile.kappa();
    if (M_PI * cfg.periods < 15.0 / (params.eps * kappa))
        throw DomainTooSmall("solve_soliton: box shorter than 15 decay lengths");

    GridField seed = seed_field(params, cfg);
    const double peak0 = seed.sup();
    if (std::abs(seed.u.front()) > 1e-8 * peak0)
        throw DomainTooSmall("solve_soliton: seed not decayed at the boundary");

    const int n = cfg.grid_points;
    const int jmax = cfg.cutoff();
    const double k0 = 1.0 / cfg.periods;
    CosineTransform fft(n);

    std::vector<double> xs = grid_xs(cfg);
    std::vector<double> wgrid(n);
    for (int j = 0; j < n; ++j) wgrid[j] = potential.eval(xs[j]);

    std::vector<double> modes;
    fft.analyze(seed.u, modes, jmax);

    auto sup_norm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s = std::max(s, std::abs(x));
        return s;
    };

    auto l2_norm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };

    int total_iterations = 0;
    double final_sup = 0.0;

    // Damped Newton in mode space at the given eps; updates `modes` in place
    // and returns true once the grid sup-residual drops below cfg.tol.
    auto run_newton = [&](std::vector<double>& mvec, const CoupledModeParams& pp) -> bool {
        std::vector<double> u, fmodes, qmodes, q(n), trial(jmax + 1), ut;
        fft.synthesize(mvec, u);
        std::vector<double> resid = grid_residual(u, mvec, wgrid, pp, cfg, fft);
        double sup = sup_norm(resid);
        double rl2 = l2_norm(resid);
        for (int it = 0; it <= cfg.max_iter; ++it) {
            if (sup <= cfg.tol) {
                final_sup = sup;
                return true;
            }
            if (it == cfg.max_iter) return false;

            fft.analyze(resid, fmodes, jmax);
            // q = eps W - 3 sigma u^2 drives the mode-coupling part of the Jacobian.
            for (int j = 0; j < n; ++j)
                q[j] = pp.eps * wgrid[j] - 3.0 * pp.sigma * u[j] * u[j];
            fft.analyze(q, qmodes, 2 * jmax);

            Eigen::MatrixXd jac(jmax + 1, jmax + 1);
            const double osq = pp.omega_sq();
            for (int p = 0; p <= jmax; ++p) {
                for (int c = 0; c <= jmax; ++c) {
                    double v = c == 0 ? qmodes[p] : qmodes[std::abs(p - c)] + qmodes[p + c];
                    if (p == c) v += osq - (p * k0) * (p * k0);
                    jac(p, c) = v;
                }
            }
            Eigen::Map<Eigen::VectorXd> fv(fmodes.data(), jmax + 1);

            // Accepts the step only on sufficient decrease of the grid l2
            // residual, so a least-squares plateau is detected quickly
            // instead of being ground down by vanishing improvements.
            auto try_step = [&](const Eigen::VectorXd& dx, double lambda) {
                for (int p = 0; p <= jmax; ++p) trial[p] = mvec[p] + lambda * dx[p];
                fft.synthesize(trial, ut);
                std::vector<double> rt = grid_residual(ut, trial, wgrid, pp, cfg, fft);
                const double lt = l2_norm(rt);
                if (lt >= 0.999 * rl2) return false;
                mvec.swap(trial);
                u.swap(ut);
                resid.swap(rt);
                sup = sup_norm(resid);
                rl2 = lt;
                return true;
            };

            // Plain Newton with short backtracking; quadratic near the solution.
            Eigen::VectorXd dx = Eigen::PartialPivLU<Eigen::MatrixXd>(jac).solve(-fv);
            bool accepted = false;
            for (double lambda : {1.0, 0.5, 0.25}) {
                if ((accepted = try_step(dx, lambda))) break;
            }

            // A discrete linearized mode can sit arbitrarily close to zero
            // inside the spectral gap, which makes the raw Newton direction
            // useless. Levenberg-Marquardt regularization recovers a descent
            // direction when one exists.
            if (!accepted) {
                Eigen::MatrixXd jtj = jac.transpose() * jac;
                Eigen::VectorXd jtf = jac.transpose() * fv;
                double mu = 1e-10 * jtj.diagonal().maxCoeff();
                for (int lm = 0; lm < 14 && !accepted; ++lm, mu *= 10.0) {
                    Eigen::MatrixXd reg = jtj;
                    reg.diagonal().array() += mu;
                    dx = reg.ldlt().solve(-jtf);
                    accepted = try_step(dx, 1.0);
                }
            }
            if (!accepted) return false;
            ++total_iterations;
        }
        return false;
    };

    if (!run_newton(modes, params)) {
        // The leading-order seed can fall outside the Newton basin when a
        // soft localized mode of the linearization sits near zero.  The
        // soliton branch itself is smooth in eps, so restart from a stiffer
        // regime where the seed is reliable and continue down to the target.
        const double hi = 2.0 * params.eps;
        CoupledModeParams pp = params;
        pp.eps = hi;
        GridField anchor = seed_field(pp, cfg);
        fft.analyze(anchor.u, modes, jmax);
        if (!run_newton(modes, pp))
            throw NoConvergence("solve_soliton: no convergence (continuation anchor)");
        const int steps = 4;
        for (int s = 1; s <= steps; ++s) {
            pp.eps = s == steps ? params.eps
                                : hi * std::pow(params.eps / hi, double(s) / steps);
            if (!run_newton(modes, pp))
                throw NoConvergence("solve_soliton: no convergence (continuation)");
        }
    }

    SolitonSolveResult res;
    res.field.periods = cfg.periods;
    fft.synthesize(modes, res.field.u);
    res.iterations = total_iterations;
    res.residual = final_sup;
    res.peak = res.field.sup();
    return res;
}

double error_vs_cm(const GridField& field, const SolitonProfile& profile) {
    const auto& p = profile.params();
    if (p.eps == 0.0) return field.sup();
    double worst = 0.0;
    for (int j = 0; j < field.size(); ++j) {
        const double x = field.x(j);
        const cplx a = profile.a(p.eps * x);
        const cplx ph = std::polar(1.0, 0.5 * p.n * x);
        const double lead = std::sqrt(p.eps) * 2.0 * (a * ph).real();
        worst = std::max(worst, std::abs(field.u[j] - lead));
    }
    return worst;
}

PartitionReport partition_diagnostic(const GridField& field, const CoupledModeParams& params,
                                     double q, double window_exponent) {
    const int n = field.size();
    CosineTransform fft(n);
    std::vector<double> amp;
    fft.spectrum_abs(field.u, amp);
    const double k0 = 1.0 / field.periods;
    const double center = 0.5 * params.n;
    const double half_width = std::pow(params.eps, window_exponent);
    PartitionReport rep;
    // Real field: |U^(-k)| = |U^(k)|; sum both signs of k explicitly.
    for (int p = 0; p <= n / 2; ++p) {
        const double k = p * k0;
        const double weight = std::pow(1.0 + k * k, 0.5 * q) * amp[p] * k0;
        const int copies = (p == 0 || p == n / 2) ? 1 : 2;
        for (int s = 0; s < copies; ++s) {
            const double ks = s == 0 ? k : -k;
            if (std::abs(ks - center) <= half_width)
                rep.mass_plus += weight;
            else if (std::abs(ks + center) <= half_width)
                rep.mass_minus += weight;
            else
                rep.mass_zero += weight;
        }
    }
    const double denom = rep.mass_plus + rep.mass_minus;
    rep.ratio = denom > 0.0 ? rep.mass_zero / denom : 0.0;
    return rep;
}

double residual_check(const GridField& field, const CoupledModeParams& params,
                      const PotentialSpec& potential) {
    const int n = field.size();
    SolverConfig cfg;
    cfg.periods = field.periods;
    cfg.grid_points = n;
    CosineTransform fft(n);
    std::vector<double> modes;
    fft.analyze(field.u, modes, n / 2);
    std::vector<double> wgrid(n);
    for (int j = 0; j < n; ++j) wgrid[j] = potential.eval(field.x(j));
    std::vector<double> resid = grid_residual(field.u, modes, wgrid, params, cfg, fft);
    double sup = 0.0;
    for (double v : resid) sup = std::max(sup, std::abs(v));
    return sup;
}

} // namespace gapsol
