#include "gapsol/lattice2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gapsol/errors.hpp"

namespace gapsol {

namespace {

// See the matching helper in lattice1d.cpp: Eigen's rcond() alone can miss
// an exactly singular matrix, so fold in the U-factor pivot ratio.
double conditioning_estimate(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
    const Eigen::VectorXd d = lu.matrixLU().diagonal().cwiseAbs();
    const double dmax = d.maxCoeff();
    if (!(dmax > 0.0)) return 0.0;
    return std::min(lu.rcond(), d.minCoeff() / dmax);
}

int axis_max(Parity p, int trunc) {
    if (trunc < 0) throw std::invalid_argument("truncation must be >= 0");
    const bool even = p == Parity::Even;
    int m = trunc;
    if (matches(p, m)) return m;
    return even || m >= 1 ? m - 1 : -1; // odd parity, trunc 0 -> empty axis
}

} // namespace

int ResonantSet2D::index_of(Index2 m) const {
    for (int j = 0; j < dim(); ++j)
        if (members[j] == m) return j;
    return -1;
}

ResonantSet2D resonant_set(Index2 n, int radius) {
    const long nsq = static_cast<long>(n.first) * n.first + static_cast<long>(n.second) * n.second;
    const int min_radius = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(nsq))));
    if (radius < 0) radius = min_radius;
    if (radius < min_radius)
        throw std::invalid_argument("resonant_set: search radius smaller than |n|");

    ResonantSet2D set;
    set.n = n;
    set.parity1 = parity_of(n.first);
    set.parity2 = parity_of(n.second);
    for (int m1 = -radius; m1 <= radius; ++m1) {
        if (!matches(set.parity1, m1)) continue;
        for (int m2 = -radius; m2 <= radius; ++m2) {
            if (!matches(set.parity2, m2)) continue;
            if (static_cast<long>(m1) * m1 + static_cast<long>(m2) * m2 == nsq)
                set.members.push_back({m1, m2});
        }
    }
    std::sort(set.members.begin(), set.members.end());
    // The printed four-component system fixes its own component order.
    const std::vector<Index2> doc{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
    std::vector<Index2> doc_sorted = doc;
    std::sort(doc_sorted.begin(), doc_sorted.end());
    if (set.members == doc_sorted) set.members = doc;
    return set;
}

LatticeField2D::LatticeField2D(Parity parity1, Parity parity2, int truncation)
    : p1_(parity1), p2_(parity2), trunc_(truncation),
      max1_(axis_max(parity1, truncation)), max2_(axis_max(parity2, truncation)) {
    c_.assign(static_cast<size_t>(axis_size1()) * axis_size2(), cplx{0.0});
}

bool LatticeField2D::contains(Index2 m) const {
    return matches(p1_, m.first) && matches(p2_, m.second) && std::abs(m.first) <= max1_ &&
           std::abs(m.second) <= max2_;
}

cplx LatticeField2D::get(Index2 m) const { return contains(m) ? c_[slot(m)] : cplx{0.0}; }

void LatticeField2D::set(Index2 m, cplx v) {
    if (!contains(m)) throw std::out_of_range("LatticeField2D::set: index outside lattice");
    c_[slot(m)] = v;
}

Index2 LatticeField2D::index_at(int i) const {
    const int n2 = axis_size2();
    return {-max1_ + 2 * (i / n2), -max2_ + 2 * (i % n2)};
}

int LatticeField2D::slot(Index2 m) const {
    return ((m.first + max1_) / 2) * axis_size2() + (m.second + max2_) / 2;
}

PotentialSpec2D PotentialSpec2D::from_pairs(
    const std::vector<std::tuple<int, int, double>>& entries) {
    PotentialSpec2D spec;
    for (const auto& [m1, m2, v] : entries) {
        if ((m1 & 1) || (m2 & 1))
            throw std::invalid_argument("PotentialSpec2D: indices must be even");
        if (m1 == 0 && m2 == 0)
            throw std::invalid_argument("PotentialSpec2D: zero-mean potential, w_{0,0} fixed to 0");
        for (Index2 key : {Index2{m1, m2}, Index2{-m1, -m2}}) {
            auto [it, fresh] = spec.coeffs_.emplace(key, v);
            if (!fresh && it->second != v)
                throw std::invalid_argument("PotentialSpec2D: conflicting duplicate entry");
        }
        spec.trunc_ = std::max({spec.trunc_, std::abs(m1), std::abs(m2)});
    }
    return spec;
}

double PotentialSpec2D::w(Index2 m) const {
    auto it = coeffs_.find(m);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double PotentialSpec2D::sum_abs() const {
    double s = 0.0;
    for (const auto& [m, v] : coeffs_) s += std::abs(v);
    return s;
}

LatticeField2D convolve(const LatticeField2D& u, const LatticeField2D& v, int out_trunc) {
    if (u.truncation() != v.truncation())
        throw std::invalid_argument("convolve: truncation mismatch");
    LatticeField2D out(combine(u.parity1(), v.parity1()), combine(u.parity2(), v.parity2()),
                       out_trunc);
    for (int i = 0; i < out.size(); ++i) {
        const Index2 m = out.index_at(i);
        cplx acc{0.0};
        for (int j = 0; j < u.size(); ++j) {
            const Index2 k = u.index_at(j);
            const cplx uk = u.data()[j];
            if (uk == cplx{0.0}) continue;
            acc += uk * v.get({m.first - k.first, m.second - k.second});
        }
        out.data()[i] = acc;
    }
    return out;
}

LatticeField2D convolve(const LatticeField2D& u, const LatticeField2D& v) {
    return convolve(u, v, u.truncation());
}

LatticeField2D reverse_conjugate(const LatticeField2D& u) {
    LatticeField2D out(u.parity1(), u.parity2(), u.truncation());
    for (int i = 0; i < out.size(); ++i) {
        const Index2 m = out.index_at(i);
        out.data()[i] = std::conj(u.get({-m.first, -m.second}));
    }
    return out;
}

LatticeField2D cubic_term(const LatticeField2D& u) {
    LatticeField2D mid = convolve(u, reverse_conjugate(u), 2 * u.truncation());
    const int m_tr = u.truncation();
    LatticeField2D out(u.parity1(), u.parity2(), m_tr);
    for (int i = 0; i < out.size(); ++i) {
        const Index2 m = out.index_at(i);
        cplx acc{0.0};
        for (int j = 0; j < u.size(); ++j) {
            const Index2 k = u.index_at(j);
            const cplx uk = u.data()[j];
            if (uk == cplx{0.0}) continue;
            acc += mid.get({m.first - k.first, m.second - k.second}) * uk;
        }
        out.data()[i] = acc;
    }
    return out;
}

LatticeField2D apply_potential(const PotentialSpec2D& w, const LatticeField2D& u) {
    LatticeField2D out(u.parity1(), u.parity2(), u.truncation());
    for (int i = 0; i < out.size(); ++i) {
        const Index2 m = out.index_at(i);
        cplx acc{0.0};
        for (const auto& [d, wv] : w.coeffs())
            acc += wv * u.get({m.first - d.first, m.second - d.second});
        out.data()[i] = acc;
    }
    return out;
}

double weighted_norm(const LatticeField2D& u, double s) {
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) {
        const Index2 m = u.index_at(i);
        const double msq = static_cast<double>(m.first) * m.first +
                           static_cast<double>(m.second) * m.second;
        acc += std::pow(1.0 + 0.25 * msq, s) * std::norm(u.data()[i]);
    }
    return std::sqrt(acc);
}

LatticeProblem2D LatticeProblem2D::at_resonance(Index2 n, double omega_detuning, double eps,
                                                int sigma, PotentialSpec2D potential, int trunc) {
    LatticeProblem2D p;
    const double nsq = static_cast<double>(n.first) * n.first +
                       static_cast<double>(n.second) * n.second;
    p.omega_sq = 0.25 * nsq + eps * omega_detuning;
    p.eps = eps;
    p.sigma = sigma;
    p.parity1 = parity_of(n.first);
    p.parity2 = parity_of(n.second);
    p.trunc = trunc;
    p.potential = std::move(potential);
    p.resonance_omega = omega_detuning;
    return p;
}

LatticeField2D residual_2d(const LatticeField2D& u, const LatticeProblem2D& p) {
    LatticeField2D wu = apply_potential(p.potential, u);
    LatticeField2D nu = cubic_term(u);
    LatticeField2D out(u.parity1(), u.parity2(), u.truncation());
    for (int i = 0; i < out.size(); ++i) {
        const Index2 m = out.index_at(i);
        const double msq = static_cast<double>(m.first) * m.first +
                           static_cast<double>(m.second) * m.second;
        out.data()[i] = (p.omega_sq - 0.25 * msq) * u.data()[i] +
                        p.eps * (wu.data()[i] - static_cast<double>(p.sigma) * nu.data()[i]);
    }
    return out;
}

Eigen::MatrixXd jacobian_2d(const LatticeField2D& u, const LatticeProblem2D& p) {
    const int s = u.size();
    // A_{mk} = dF_m/dU_k, B_{mk} = dF_m/dconj(U_k); radius-2M products cover
    // the index differences/sums that occur.
    LatticeField2D uru = convolve(u, reverse_conjugate(u), 2 * u.truncation());
    LatticeField2D uu = convolve(u, u, 2 * u.truncation());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(s, s);
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(s, s);
    const double sig = static_cast<double>(p.sigma);
    for (int i = 0; i < s; ++i) {
        const Index2 m = u.index_at(i);
        const double msq = static_cast<double>(m.first) * m.first +
                           static_cast<double>(m.second) * m.second;
        for (int j = 0; j < s; ++j) {
            const Index2 k = u.index_at(j);
            const Index2 diff{m.first - k.first, m.second - k.second};
            const Index2 sum{m.first + k.first, m.second + k.second};
            cplx av = p.eps * (p.potential.w(diff) - 2.0 * sig * uru.get(diff));
            if (i == j) av += p.omega_sq - 0.25 * msq;
            a(i, j) = av;
            b(i, j) = -p.eps * sig * uu.get(sum);
        }
    }
    Eigen::MatrixXd jac(2 * s, 2 * s);
    jac.topLeftCorner(s, s) = a.real() + b.real();
    jac.topRightCorner(s, s) = -a.imag() + b.imag();
    jac.bottomLeftCorner(s, s) = a.imag() + b.imag();
    jac.bottomRightCorner(s, s) = a.real() - b.real();
    return jac;
}

namespace {

LatticeField2D embed_kernel(std::span<const cplx> a, const ResonantSet2D& set,
                            const LatticeProblem2D& p) {
    LatticeField2D u(p.parity1, p.parity2, p.trunc);
    for (int j = 0; j < set.dim(); ++j) {
        if (!u.contains(set.members[j]))
            throw std::invalid_argument("solve_g_2d: truncation does not cover S_n");
        u.set(set.members[j], a[j]);
    }
    return u;
}

// Newton on the complement slots with the kernel amplitudes held fixed;
// returns the full field U = a + g.
LatticeField2D solve_full_2d(std::span<const cplx> a, const LatticeProblem2D& p,
                             const ResonantSet2D& set, const NewtonOptions& opts) {
    if (static_cast<int>(a.size()) != set.dim())
        throw std::invalid_argument("solve_g_2d: amplitude count != dim(S_n)");
    if (set.parity1 != p.parity1 || set.parity2 != p.parity2)
        throw std::invalid_argument("solve_g_2d: parity mismatch between set and problem");
    LatticeField2D u = embed_kernel(a, set, p);
    const int s = u.size();
    std::vector<int> comp; // complement slots
    comp.reserve(s);
    for (int i = 0; i < s; ++i)
        if (!set.contains(u.index_at(i))) comp.push_back(i);
    const int c = static_cast<int>(comp.size());

    for (int it = 0; it < opts.max_iter; ++it) {
        LatticeField2D f = residual_2d(u, p);
        Eigen::VectorXd rhs(2 * c);
        double rnorm = 0.0;
        for (int i = 0; i < c; ++i) {
            rhs[i] = f.data()[comp[i]].real();
            rhs[c + i] = f.data()[comp[i]].imag();
            rnorm += std::norm(f.data()[comp[i]]);
        }
        if (std::sqrt(rnorm) <= opts.tol) return u;

        Eigen::MatrixXd full = jacobian_2d(u, p);
        Eigen::MatrixXd jac(2 * c, 2 * c);
        for (int i = 0; i < c; ++i)
            for (int j = 0; j < c; ++j) {
                jac(i, j) = full(comp[i], comp[j]);
                jac(i, c + j) = full(comp[i], s + comp[j]);
                jac(c + i, j) = full(s + comp[i], comp[j]);
                jac(c + i, c + j) = full(s + comp[i], s + comp[j]);
            }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        if (!(conditioning_estimate(lu) >= opts.rcond_min))
            throw SingularJacobian("solve_g_2d: complement Jacobian ill-conditioned");
        Eigen::VectorXd dx = lu.solve(-rhs);
        for (int i = 0; i < c; ++i)
            u.data()[comp[i]] += cplx(dx[i], dx[c + i]);
    }
    throw NoConvergence("solve_g_2d: max_iter exceeded");
}

} // namespace

LatticeField2D solve_g_2d(std::span<const cplx> a, const LatticeProblem2D& p,
                          const ResonantSet2D& set, const NewtonOptions& opts) {
    LatticeField2D g = solve_full_2d(a, p, set, opts);
    for (const Index2& m : set.members) g.set(m, cplx{0.0});
    return g;
}

std::vector<cplx> bifurcation_residual_2d(std::span<const cplx> a, const LatticeProblem2D& p,
                                          const ResonantSet2D& set, const NewtonOptions& opts) {
    if (!p.resonance_omega)
        throw std::invalid_argument("bifurcation_residual_2d: resonance_omega required");
    std::vector<cplx> res(set.dim());
    if (p.eps == 0.0) {
        // Direct limit: Omega a_j + (W*U)_{m_j} - sigma N(U)_{m_j} on S_n.
        LatticeField2D u = embed_kernel(a, set, p);
        LatticeField2D wu = apply_potential(p.potential, u);
        LatticeField2D nu = cubic_term(u);
        for (int j = 0; j < set.dim(); ++j) {
            const Index2 m = set.members[j];
            res[j] = *p.resonance_omega * a[j] + wu.get(m) -
                     static_cast<double>(p.sigma) * nu.get(m);
        }
        return res;
    }
    LatticeField2D u = solve_full_2d(a, p, set, opts);
    LatticeField2D f = residual_2d(u, p);
    for (int j = 0; j < set.dim(); ++j) res[j] = f.get(set.members[j]) / p.eps;
    return res;
}

std::array<cplx, 4> cm4_residual(const std::array<cplx, 4>& a, double omega_detuning, int sigma,
                                 double w22, double w02, double w20, double w2m2) {
    const auto& [a1, a2, a3, a4] = a;
    const double om = omega_detuning;
    const double sg = sigma;
    const double n1 = std::norm(a1), n2 = std::norm(a2), n3 = std::norm(a3), n4 = std::norm(a4);
    std::array<cplx, 4> r;
    r[0] = om * a1 + w22 * a2 + w02 * a3 + w20 * a4 -
           sg * ((n1 + 2 * n2 + 2 * n3 + 2 * n4) * a1 + 2.0 * std::conj(a2) * a3 * a4);
    r[1] = om * a2 + w22 * a1 + w20 * a3 + w02 * a4 -
           sg * ((2 * n1 + n2 + 2 * n3 + 2 * n4) * a2 + 2.0 * std::conj(a1) * a3 * a4);
    r[2] = om * a3 + w2m2 * a4 + w02 * a1 + w20 * a2 -
           sg * ((2 * n1 + 2 * n2 + n3 + 2 * n4) * a3 + 2.0 * std::conj(a4) * a1 * a2);
    r[3] = om * a4 + w2m2 * a3 + w20 * a1 + w02 * a2 -
           sg * ((2 * n1 + 2 * n2 + 2 * n3 + n4) * a4 + 2.0 * std::conj(a3) * a1 * a2);
    return r;
}

} // namespace gapsol
