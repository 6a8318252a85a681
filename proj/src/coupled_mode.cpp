#include "gapsol/coupled_mode.hpp"

#include <cmath>

#include "gapsol/errors.hpp"

namespace gapsol {

namespace {

/** Richardson-extrapolated central difference, O(h^4). */
template <typename F>
cplx diff4(const F& f, double y, double h) {
    return (8.0 * (f(y + h) - f(y - h)) - (f(y + 2 * h) - f(y - 2 * h))) / (12.0 * h);
}

std::pair<cplx, cplx> base_orbit(double w, double omega, double kappa, double y) {
    // sigma = +1, w > 0 form
    const double num = std::sqrt(2.0 / 3.0) * std::sqrt(w * w - omega * omega);
    const cplx den(std::sqrt(w - omega) * std::cosh(kappa * y),
                   std::sqrt(w + omega) * std::sinh(kappa * y));
    const cplx a = num / den;
    return {a, std::conj(a)};
}

} // namespace

SolitonProfile::SolitonProfile(const CoupledModeParams& params) : params_(params) {
    if (params.w2n == 0.0 || params.sigma * params.w2n <= 0.0)
        throw InvalidRegime("soliton requires sigma * w_{2n} > 0");
    if (std::abs(params.omega) >= std::abs(params.w2n))
        throw InvalidRegime("soliton requires |Omega| < |w_{2n}|");
    kappa_ = std::sqrt(params.w2n * params.w2n - params.omega * params.omega) /
             static_cast<double>(params.n);
    mirrored_ = params.sigma < 0;
}

std::pair<cplx, cplx> SolitonProfile::eval(double y) const {
    if (!mirrored_) return base_orbit(params_.w2n, params_.omega, kappa_, y);
    // sigma = -1, w_{2n} < 0: conjugate of the (+1, -w, -Omega) orbit.
    auto [a, b] = base_orbit(-params_.w2n, -params_.omega, kappa_, y);
    return {std::conj(a), std::conj(b)};
}

std::pair<cplx, cplx> soliton_exact(const CoupledModeParams& params, double y) {
    return SolitonProfile(params).eval(y);
}

std::optional<double> dispersion_amplitude(double omega, double w2n, int sigma, char branch) {
    if (branch != '+' && branch != '-')
        throw std::invalid_argument("dispersion_amplitude: branch must be '+' or '-'");
    const double sign = branch == '+' ? 1.0 : -1.0;
    const double radicand = (omega + sign * w2n) / (3.0 * sigma);
    if (radicand < 0.0) return std::nullopt;
    return std::sqrt(radicand);
}

double cme_residual(const std::function<std::pair<cplx, cplx>(double)>& orbit,
                    const CoupledModeParams& params, std::span<const double> ys,
                    double diff_step) {
    const double n = params.n, w = params.w2n, omega = params.omega;
    const double sg = params.sigma;
    auto fa = [&](double y) { return orbit(y).first; };
    auto fb = [&](double y) { return orbit(y).second; };
    const cplx iu(0.0, 1.0);
    double worst = 0.0;
    for (double y : ys) {
        auto [a, b] = orbit(y);
        cplx da = diff4(fa, y, diff_step);
        cplx db = diff4(fb, y, diff_step);
        cplx r1 = iu * n * da + omega * a + w * b - sg * (std::norm(a) + 2.0 * std::norm(b)) * a;
        cplx r2 = -iu * n * db + omega * b + w * a - sg * (2.0 * std::norm(a) + std::norm(b)) * b;
        worst = std::max(worst, std::max(std::abs(r1), std::abs(r2)));
    }
    return worst;
}

double cme_residual(const SolitonProfile& profile, std::span<const double> ys, double diff_step) {
    return cme_residual([&](double y) { return profile.eval(y); }, profile.params(), ys,
                        diff_step);
}

std::vector<cplx> leading_order_field(const SolitonProfile& profile, std::span<const double> xs) {
    const auto& p = profile.params();
    const double amp = std::sqrt(p.eps);
    std::vector<cplx> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        const cplx a = profile.a(p.eps * x);
        const cplx ph = std::polar(1.0, 0.5 * p.n * x);
        out[i] = amp * (a * ph + std::conj(a * ph));
    }
    return out;
}

std::vector<double> uniform_grid(double ymax, double h) {
    const int half = static_cast<int>(std::lround(ymax / h));
    std::vector<double> ys(2 * half + 1);
    for (int i = 0; i <= 2 * half; ++i) ys[i] = (i - half) * h;
    return ys;
}

DiracOperator::DiracOperator(const SolitonProfile& profile, std::span<const double> ys)
    : ys_(ys.begin(), ys.end()) {
    if (ys_.size() < 7) throw std::invalid_argument("DiracOperator: grid too small");
    h_ = ys_[1] - ys_[0];
    const auto& p = profile.params();
    n_ = p.n;
    sigma_ = p.sigma;
    w2n_ = p.w2n;
    a_.resize(ys_.size());
    b_.resize(ys_.size());
    w0_.resize(ys_.size());
    for (size_t j = 0; j < ys_.size(); ++j) {
        auto [a, b] = profile.eval(ys_[j]);
        a_[j] = a;
        b_[j] = b;
        w0_[j] = p.omega - 2.0 * p.sigma * (std::norm(a) + std::norm(b));
    }
}

Eigen::VectorXcd DiracOperator::apply(const Eigen::VectorXcd& v) const {
    const int n = grid_size();
    if (v.size() != 4 * n) throw std::invalid_argument("DiracOperator::apply: size mismatch");
    Eigen::VectorXcd out(4 * n);
    const cplx iu(0.0, 1.0);
    auto wrap = [n](int j) { return (j % n + n) % n; };
    // 6th-order periodic central stencil for d/dy on component c
    auto deriv = [&](int c, int j) {
        const int o = c * n;
        return (45.0 * (v[o + wrap(j + 1)] - v[o + wrap(j - 1)]) -
                9.0 * (v[o + wrap(j + 2)] - v[o + wrap(j - 2)]) +
                (v[o + wrap(j + 3)] - v[o + wrap(j - 3)])) /
               (60.0 * h_);
    };
    const double sg = sigma_;
    for (int j = 0; j < n; ++j) {
        const cplx a = a_[j], b = b_[j];
        const cplx ab = std::conj(a), bb = std::conj(b);
        const double w0 = w0_[j];
        const cplx v1 = v[j], v2 = v[n + j], v3 = v[2 * n + j], v4 = v[3 * n + j];
        out[j] = iu * static_cast<double>(n_) * deriv(0, j) + w0 * v1 - sg * a * a * v2 +
                 (w2n_ - 2.0 * sg * a * bb) * v3 - 2.0 * sg * a * b * v4;
        out[n + j] = -sg * ab * ab * v1 - iu * static_cast<double>(n_) * deriv(1, j) + w0 * v2 -
                     2.0 * sg * ab * bb * v3 + (w2n_ - 2.0 * sg * ab * b) * v4;
        out[2 * n + j] = (w2n_ - 2.0 * sg * ab * b) * v1 - 2.0 * sg * a * b * v2 -
                         iu * static_cast<double>(n_) * deriv(2, j) + w0 * v3 - sg * b * b * v4;
        out[3 * n + j] = -2.0 * sg * ab * bb * v1 + (w2n_ - 2.0 * sg * a * bb) * v2 -
                         sg * bb * bb * v3 + iu * static_cast<double>(n_) * deriv(3, j) + w0 * v4;
    }
    return out;
}

Eigen::MatrixXcd DiracOperator::dense() const {
    const int dim = 4 * grid_size();
    Eigen::MatrixXcd m(dim, dim);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
    for (int c = 0; c < dim; ++c) {
        e[c] = 1.0;
        m.col(c) = apply(e);
        e[c] = 0.0;
    }
    return m;
}

std::pair<double, double> kernel_check(const DiracOperator& op, const SolitonProfile& profile,
                                       std::span<const double> ys) {
    const int n = static_cast<int>(ys.size());
    if (n != op.grid_size()) throw std::invalid_argument("kernel_check: grid mismatch");
    auto fa = [&](double y) { return profile.eval(y).first; };
    auto fb = [&](double y) { return profile.eval(y).second; };
    const double hd = 1e-3;
    Eigen::VectorXcd vt(4 * n), vg(4 * n);
    const cplx iu(0.0, 1.0);
    for (int j = 0; j < n; ++j) {
        const cplx da = diff4(fa, ys[j], hd);
        const cplx db = diff4(fb, ys[j], hd);
        auto [a, b] = profile.eval(ys[j]);
        vt[j] = da;
        vt[n + j] = std::conj(da);
        vt[2 * n + j] = db;
        vt[3 * n + j] = std::conj(db);
        vg[j] = iu * a;
        vg[n + j] = -iu * std::conj(a);
        vg[2 * n + j] = iu * b;
        vg[3 * n + j] = -iu * std::conj(b);
    }
    return {op.apply(vt).norm() / vt.norm(), op.apply(vg).norm() / vg.norm()};
}

} // namespace gapsol
