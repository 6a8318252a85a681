#ifndef GAPSOL_LATTICE2D_HPP
#define GAPSOL_LATTICE2D_HPP

#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gapsol/fourier.hpp"
#include "gapsol/lattice1d.hpp" // NewtonOptions

namespace gapsol {

using Index2 = std::pair<int, int>;

/** Solution set of |m|^2 = |n|^2 on the parity lattice Z'_1 x Z'_2 fixed by
 * the parities of n. Members are listed lexicographically, except for the
 * |n| = (1,1) resonance which keeps the documented order
 * {(1,1), (-1,-1), (1,-1), (-1,1)}. */
struct ResonantSet2D {
    Index2 n{0, 0};
    Parity parity1 = Parity::Even;
    Parity parity2 = Parity::Even;
    std::vector<Index2> members;

    int dim() const { return static_cast<int>(members.size()); }
    /** Index j_m of m in the set, or -1. */
    int index_of(Index2 m) const;
    bool contains(Index2 m) const { return index_of(m) >= 0; }
};

/** Exhaustive enumeration within |m_i| <= radius; radius < |n| is rejected,
 * radius = -1 picks the minimal complete radius ceil(|n|). */
ResonantSet2D resonant_set(Index2 n, int radius = -1);

/** Complex coefficients U_m on the fixed-parity 2D lattice, truncated to
 * |m_1|, |m_2| <= M. Same conventions as LatticeField1D per axis. */
class LatticeField2D {
  public:
    LatticeField2D(Parity parity1, Parity parity2, int truncation);

    Parity parity1() const { return p1_; }
    Parity parity2() const { return p2_; }
    int truncation() const { return trunc_; }
    int max1() const { return max1_; }
    int max2() const { return max2_; }
    /** Stored coefficients per axis / in total. */
    int axis_size1() const { return max1_ + 1; }
    int axis_size2() const { return max2_ + 1; }
    int size() const { return static_cast<int>(c_.size()); }

    bool contains(Index2 m) const;
    cplx get(Index2 m) const;
    void set(Index2 m, cplx v);

    Index2 index_at(int i) const;
    int slot(Index2 m) const;

    std::span<const cplx> data() const { return c_; }
    std::span<cplx> data() { return c_; }

  private:
    Parity p1_, p2_;
    int trunc_;
    int max1_, max2_;
    std::vector<cplx> c_;
};

/** Real, even (w_{-m} = w_m), zero-mean coefficients w_m of a 2D potential on
 * the even-even lattice. */
class PotentialSpec2D {
  public:
    PotentialSpec2D() = default;
    /** Entries (m1, m2, w) with both components even, (m1,m2) != (0,0); the
     * mirror image is applied automatically. Conflicting duplicates rejected. */
    static PotentialSpec2D from_pairs(const std::vector<std::tuple<int, int, double>>& entries);

    double w(Index2 m) const;
    int truncation() const { return trunc_; }
    double sum_abs() const;
    const std::map<Index2, double>& coeffs() const { return coeffs_; }

  private:
    std::map<Index2, double> coeffs_;
    int trunc_ = 0;
};

/** Truncated 2D convolution (U*V)_m = sum_k U_k V_{m-k}. Inputs must share
 * their truncation radius. */
LatticeField2D convolve(const LatticeField2D& u, const LatticeField2D& v, int out_trunc);
LatticeField2D convolve(const LatticeField2D& u, const LatticeField2D& v);

LatticeField2D reverse_conjugate(const LatticeField2D& u);

/** N(U)_m = (U * R conj(U) * U)_m, exact on |m_i| <= M via an intermediate
 * radius-2M product, truncated back to M. */
LatticeField2D cubic_term(const LatticeField2D& u);

LatticeField2D apply_potential(const PotentialSpec2D& w, const LatticeField2D& u);

/** l^2_s norm sqrt( sum (1 + |m|^2/4)^s |U_m|^2 ), s > 1 for the algebra. */
double weighted_norm(const LatticeField2D& u, double s);

/** The 2D nonlinear lattice system
 *  (w^2 - |m|^2/4) U_m + eps (W*U)_m - eps sigma N(U)_m = 0. */
struct LatticeProblem2D {
    PotentialSpec2D potential;
    double omega_sq = 0.0;
    double eps = 0.0;
    int sigma = +1;
    Parity parity1 = Parity::Odd;
    Parity parity2 = Parity::Odd;
    int trunc = 5;
    std::optional<double> resonance_omega; // detuning Omega

    static LatticeProblem2D at_resonance(Index2 n, double omega_detuning, double eps, int sigma,
                                         PotentialSpec2D potential, int trunc);
};

LatticeField2D residual_2d(const LatticeField2D& u, const LatticeProblem2D& p);

/** Dense derivative in split coordinates (Re U, Im U), 2S x 2S. */
Eigen::MatrixXd jacobian_2d(const LatticeField2D& u, const LatticeProblem2D& p);

/** The unique small complement solution g in Ker(L)^perp (g_m = 0 on S_n)
 * with the kernel amplitudes a held fixed. */
LatticeField2D solve_g_2d(std::span<const cplx> a, const LatticeProblem2D& p,
                          const ResonantSet2D& set, const NewtonOptions& opts = {});

/** The d_S kernel-projection equations at U = sum a_j e_{m_j} + g; at eps = 0
 * they reduce to Omega a_j + (W*U)_{m_j} - sigma N(U)_{m_j}. */
std::vector<cplx> bifurcation_residual_2d(std::span<const cplx> a, const LatticeProblem2D& p,
                                          const ResonantSet2D& set,
                                          const NewtonOptions& opts = {});

/** The explicit four-component system of the S_{(1,1)} resonance (left minus
 * right of the displayed equations), component order
 * {(1,1), (-1,-1), (1,-1), (-1,1)}; w_{0,0} = 0. */
std::array<cplx, 4> cm4_residual(const std::array<cplx, 4>& a, double omega_detuning, int sigma,
                                 double w22, double w02, double w20, double w2m2);

} // namespace gapsol

#endif
