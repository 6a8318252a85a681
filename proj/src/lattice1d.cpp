#include "gapsol/lattice1d.hpp"

#include <cmath>
#include <vector>

#include "gapsol/errors.hpp"

namespace gapsol {

namespace {

// Eigen's PartialPivLU::rcond() can report a healthy value even for an
// exactly singular matrix, so combine it with the pivot ratio of the U
// factor. Returns a value comparable against NewtonOptions::rcond_min.
double conditioning_estimate(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
    const Eigen::VectorXd d = lu.matrixLU().diagonal().cwiseAbs();
    const double dmax = d.maxCoeff();
    if (!(dmax > 0.0)) return 0.0;
    return std::min(lu.rcond(), d.minCoeff() / dmax);
}

Eigen::VectorXd to_real(const LatticeField1D& u) {
    const int s = u.size();
    Eigen::VectorXd x(2 * s);
    for (int i = 0; i < s; ++i) {
        x[i] = u.data()[i].real();
        x[s + i] = u.data()[i].imag();
    }
    return x;
}

LatticeField1D from_real(const Eigen::VectorXd& x, Parity parity, int trunc) {
    LatticeField1D u(parity, trunc);
    const int s = u.size();
    for (int i = 0; i < s; ++i) u.data()[i] = cplx(x[i], x[s + i]);
    return u;
}

double residual_norm0(const LatticeField1D& f) { return weighted_norm(f, 0.0); }

/** Coordinates of a symmetry-restricted field. CosineReal keeps Re U_m for
 * m >= 0 with U_{-m} = U_m; SineImag keeps Im U_m for m > 0 with
 * U_{-m} = -U_m, U_m purely imaginary. */
struct SymmetryBasis {
    std::vector<int> modes; // lattice index per reduced variable
    Symmetry kind;
    Parity parity;
    int trunc;

    SymmetryBasis(Symmetry kind, Parity parity, int trunc)
        : kind(kind), parity(parity), trunc(trunc) {
        LatticeField1D probe(parity, trunc);
        for (int i = 0; i < probe.size(); ++i) {
            int m = probe.index_at(i);
            if (kind == Symmetry::CosineReal ? m >= 0 : m > 0) modes.push_back(m);
        }
    }

    int dim() const { return static_cast<int>(modes.size()); }

    LatticeField1D embed(const Eigen::VectorXd& r) const {
        LatticeField1D u(parity, trunc);
        for (int k = 0; k < dim(); ++k) {
            int m = modes[k];
            if (kind == Symmetry::CosineReal) {
                u.set(m, r[k]);
                if (m != 0) u.set(-m, r[k]);
            } else {
                u.set(m, cplx(0.0, r[k]));
                u.set(-m, cplx(0.0, -r[k]));
            }
        }
        return u;
    }

    Eigen::VectorXd project(const LatticeField1D& u) const {
        Eigen::VectorXd r(dim());
        for (int k = 0; k < dim(); ++k) {
            int m = modes[k];
            if (kind == Symmetry::CosineReal)
                r[k] = 0.5 * (u.get(m).real() + u.get(-m).real());
            else
                r[k] = 0.5 * (u.get(m).imag() - u.get(-m).imag());
        }
        return r;
    }

    /** Reduced residual: real part (cosine) or imaginary part (sine) of the
     * residual at the kept modes. */
    Eigen::VectorXd restrict_field(const LatticeField1D& f) const {
        Eigen::VectorXd g(dim());
        for (int k = 0; k < dim(); ++k)
            g[k] = kind == Symmetry::CosineReal ? f.get(modes[k]).real() : f.get(modes[k]).imag();
        return g;
    }

    /** Reduced Jacobian R J E from the full real-coordinate Jacobian. */
    Eigen::MatrixXd reduce(const Eigen::MatrixXd& jac, const LatticeField1D& probe) const {
        const int s = probe.size();
        Eigen::MatrixXd red(dim(), dim());
        for (int c = 0; c < dim(); ++c) {
            Eigen::VectorXd col = Eigen::VectorXd::Zero(2 * s);
            int m = modes[c];
            if (kind == Symmetry::CosineReal) {
                col[probe.slot(m)] = 1.0;
                if (m != 0) col[probe.slot(-m)] = 1.0;
            } else {
                col[s + probe.slot(m)] = 1.0;
                col[s + probe.slot(-m)] = -1.0;
            }
            Eigen::VectorXd jcol = jac * col;
            for (int r = 0; r < dim(); ++r) {
                int mr = modes[r];
                red(r, c) = kind == Symmetry::CosineReal ? jcol[probe.slot(mr)]
                                                         : jcol[s + probe.slot(mr)];
            }
        }
        return red;
    }
};

} // namespace

LatticeProblem1D LatticeProblem1D::at_resonance(int n, double omega_detuning, double eps,
                                                int sigma, PotentialSpec potential, int trunc) {
    LatticeProblem1D p;
    p.potential = std::move(potential);
    p.omega_sq = 0.25 * n * n + eps * omega_detuning;
    p.eps = eps;
    p.sigma = sigma;
    p.parity = parity_of(n);
    p.trunc = trunc;
    p.resonance_omega = omega_detuning;
    return p;
}

LatticeField1D residual(const LatticeField1D& u, const LatticeProblem1D& p) {
    LatticeField1D wu = apply_potential(p.potential, u);
    LatticeField1D nu = cubic_term(u);
    LatticeField1D out(u.parity(), u.truncation());
    for (int i = 0; i < out.size(); ++i) {
        double m = out.index_at(i);
        out.data()[i] = (p.omega_sq - 0.25 * m * m) * u.data()[i] + p.eps * wu.data()[i] -
                        p.eps * static_cast<double>(p.sigma) * nu.data()[i];
    }
    return out;
}

Eigen::MatrixXd jacobian(const LatticeField1D& u, const LatticeProblem1D& p) {
    const int s = u.size();
    const double es = p.eps * p.sigma;
    // Holomorphic block A_{mk} = (w^2 - m^2/4) d_{mk} + eps w_{m-k}
    //                            - 2 eps sigma (U * R conj U)_{m-k},
    // anti-holomorphic block B_{mk} = -eps sigma (U * U)_{m+k}.
    LatticeField1D urcu = convolve(u, reverse_conjugate(u), 2 * u.truncation());
    LatticeField1D uu = convolve(u, u, 2 * u.truncation());
    Eigen::MatrixXcd a(s, s), b(s, s);
    for (int i = 0; i < s; ++i) {
        int m = u.index_at(i);
        for (int j = 0; j < s; ++j) {
            int k = u.index_at(j);
            cplx av = p.eps * p.potential.w2m((m - k) / 2) - 2.0 * es * urcu.get(m - k);
            if (i == j) av += p.omega_sq - 0.25 * m * m;
            a(i, j) = av;
            b(i, j) = -es * uu.get(m + k);
        }
    }
    Eigen::MatrixXd jac(2 * s, 2 * s);
    jac.topLeftCorner(s, s) = a.real() + b.real();
    jac.topRightCorner(s, s) = -a.imag() + b.imag();
    jac.bottomLeftCorner(s, s) = a.imag() + b.imag();
    jac.bottomRightCorner(s, s) = a.real() - b.real();
    return jac;
}

LatticeField1D newton_solve(const LatticeField1D& u0, const LatticeProblem1D& p,
                            const NewtonOptions& opts) {
    if (opts.tol <= 0) throw std::invalid_argument("newton_solve: tol must be > 0");
    if (u0.parity() != p.parity || u0.truncation() != p.trunc)
        throw std::invalid_argument("newton_solve: field/problem shape mismatch");

    if (opts.symmetry == Symmetry::None) {
        LatticeField1D u = u0;
        for (int it = 0; it < opts.max_iter; ++it) {
            LatticeField1D f = residual(u, p);
            if (residual_norm0(f) <= opts.tol) return u;
            Eigen::MatrixXd jac = jacobian(u, p);
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
            if (!(conditioning_estimate(lu) >= opts.rcond_min))
                throw SingularJacobian("newton_solve: Jacobian conditioning below threshold");
            Eigen::VectorXd dx = lu.solve(-to_real(f));
            u = from_real(to_real(u) + dx, p.parity, p.trunc);
        }
        throw NoConvergence("newton_solve: max_iter exceeded");
    }

    SymmetryBasis basis(opts.symmetry, p.parity, p.trunc);
    Eigen::VectorXd r = basis.project(u0);
    for (int it = 0; it < opts.max_iter; ++it) {
        LatticeField1D u = basis.embed(r);
        LatticeField1D f = residual(u, p);
        if (residual_norm0(f) <= opts.tol) return u;
        Eigen::MatrixXd red = basis.reduce(jacobian(u, p), u);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(red);
        if (!(conditioning_estimate(lu) >= opts.rcond_min))
            throw SingularJacobian("newton_solve: reduced Jacobian is singular");
        r += lu.solve(-basis.restrict_field(f));
    }
    throw NoConvergence("newton_solve: max_iter exceeded");
}

LatticeField1D solve_g(cplx a, cplx b, const LatticeProblem1D& p, int n,
                       const NewtonOptions& opts) {
    LatticeField1D probe(p.parity, p.trunc);
    if (!probe.contains(n) || !probe.contains(-n))
        throw std::invalid_argument("solve_g: kernel index n outside lattice");
    const int s = probe.size();
    const int sn = probe.slot(n), smn = probe.slot(-n);
    std::vector<int> keep; // complement slots
    keep.reserve(s - 2);
    for (int i = 0; i < s; ++i)
        if (i != sn && i != smn) keep.push_back(i);
    const int d = static_cast<int>(keep.size());

    auto assemble = [&](const Eigen::VectorXd& gr) {
        LatticeField1D u(p.parity, p.trunc);
        for (int k = 0; k < d; ++k) u.data()[keep[k]] = cplx(gr[k], gr[d + k]);
        u.data()[sn] = a;
        u.data()[smn] = b;
        return u;
    };

    Eigen::VectorXd gr = Eigen::VectorXd::Zero(2 * d);
    for (int it = 0; it < opts.max_iter; ++it) {
        LatticeField1D u = assemble(gr);
        LatticeField1D f = residual(u, p);
        Eigen::VectorXd fr(2 * d);
        for (int k = 0; k < d; ++k) {
            fr[k] = f.data()[keep[k]].real();
            fr[d + k] = f.data()[keep[k]].imag();
        }
        if (fr.norm() <= opts.tol) {
            LatticeField1D g = u;
            g.data()[sn] = 0.0;
            g.data()[smn] = 0.0;
            return g;
        }
        Eigen::MatrixXd jac = jacobian(u, p);
        Eigen::MatrixXd sub(2 * d, 2 * d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                sub(r, c) = jac(keep[r], keep[c]);
                sub(r, d + c) = jac(keep[r], s + keep[c]);
                sub(d + r, c) = jac(s + keep[r], keep[c]);
                sub(d + r, d + c) = jac(s + keep[r], s + keep[c]);
            }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(sub);
        if (!(conditioning_estimate(lu) >= opts.rcond_min))
            throw SingularJacobian("solve_g: projected Jacobian is singular");
        gr += lu.solve(-fr);
    }
    throw NoConvergence("solve_g: max_iter exceeded");
}

std::pair<cplx, cplx> bifurcation_residual(cplx a, cplx b, const LatticeProblem1D& p, int n,
                                           const NewtonOptions& opts) {
    if (!p.resonance_omega)
        throw std::invalid_argument("bifurcation_residual: problem lacks resonance detuning");
    const double omega = *p.resonance_omega;
    const double w2n = p.potential.w2m(n);
    if (p.eps == 0.0) {
        LatticeField1D u(p.parity, p.trunc);
        u.set(n, a);
        u.set(-n, b);
        LatticeField1D nu = cubic_term(u);
        const double sg = p.sigma;
        return {omega * a + w2n * b - sg * nu.get(n), omega * b + w2n * a - sg * nu.get(-n)};
    }
    LatticeField1D g = solve_g(a, b, p, n, opts);
    LatticeField1D u = g;
    u.set(n, a);
    u.set(-n, b);
    LatticeField1D f = residual(u, p);
    return {f.get(n) / p.eps, f.get(-n) / p.eps};
}

std::pair<double, double> gap_edges(int n, double eps, const PotentialSpec& potential) {
    if (eps < 0) throw std::invalid_argument("gap_edges: eps must be >= 0");
    const double mid = 0.25 * n * n;
    const double half = eps * std::abs(potential.w2m(n));
    return {mid - half, mid + half};
}

double periodic_deviation(const LatticeField1D& u, double eps, int n, cplx a, cplx b) {
    const int npts = 1024;
    const double amp = std::sqrt(eps);
    std::vector<double> xs(npts);
    for (int i = 0; i < npts; ++i) xs[i] = 4.0 * M_PI * i / npts;
    std::vector<cplx> samples = synthesize(u, eps, xs);
    double dev = 0.0;
    for (int i = 0; i < npts; ++i) {
        cplx leading = amp * (a * std::polar(1.0, 0.5 * n * xs[i]) +
                              b * std::polar(1.0, -0.5 * n * xs[i]));
        dev = std::max(dev, std::abs(samples[i] - leading));
    }
    return dev;
}

BranchResult periodic_branch(int n, double omega_detuning, int sigma, double eps, char branch,
                             const PotentialSpec& potential, int trunc,
                             const NewtonOptions& opts_in) {
    if (branch != '+' && branch != '-')
        throw std::invalid_argument("periodic_branch: branch must be '+' or '-'");
    const double w2n = potential.w2m(n);
    const double sign = branch == '+' ? 1.0 : -1.0;
    const double radicand = (omega_detuning + sign * w2n) / (3.0 * sigma);
    if (radicand <= 0.0)
        throw BranchNotPresent("periodic_branch: (Omega +- w_{2n})/(3 sigma) <= 0");
    const double c = std::sqrt(radicand);

    if (trunc < 0) trunc = std::max(9 * n, 3 * n + 2 * potential.truncation());
    LatticeProblem1D p = LatticeProblem1D::at_resonance(n, omega_detuning, eps, sigma,
                                                        potential, trunc);
    NewtonOptions opts = opts_in;
    opts.symmetry = branch == '+' ? Symmetry::CosineReal : Symmetry::SineImag;

    cplx a = branch == '+' ? cplx(c, 0.0) : cplx(0.0, c);
    cplx b = std::conj(a);
    LatticeField1D u0(p.parity, p.trunc);
    u0.set(n, a);
    u0.set(-n, b);

    BranchResult res{newton_solve(u0, p, opts), c, a, b, 0.0, 0};
    res.sup_deviation = periodic_deviation(res.field, eps, n, a, b);
    return res;
}

bool off_resonant(double omega_sq, double eps, const PotentialSpec& potential, Parity parity,
                  int trunc) {
    LatticeField1D probe(parity, trunc);
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < probe.size(); ++i) {
        double m = probe.index_at(i);
        gap = std::min(gap, std::abs(omega_sq - 0.25 * m * m));
    }
    return gap >= 10.0 * eps * potential.sum_abs();
}

} // namespace gapsol
