#ifndef GAPSOL_FOURIER_HPP
#define GAPSOL_FOURIER_HPP

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gapsol {

using cplx = std::complex<double>;

/** Index class of the half-integer Fourier lattice: even integers give
 * 2pi-periodic fields, odd integers anti-periodic ones. */
enum class Parity { Even, Odd };

inline Parity combine(Parity a, Parity b) {
    return a == b ? Parity::Even : Parity::Odd;
}

inline bool matches(Parity p, int m) {
    return ((m & 1) == 0) == (p == Parity::Even);
}

inline Parity parity_of(int m) { return (m & 1) ? Parity::Odd : Parity::Even; }

/** Complex coefficients U_m on a fixed-parity integer lattice, truncated to
 * |m| <= M. Coefficients outside the truncation are implicitly zero.
 * Immutable by convention once built; all operations return new values. */
class LatticeField1D {
  public:
    LatticeField1D(Parity parity, int truncation);

    Parity parity() const { return parity_; }
    int truncation() const { return trunc_; }
    /** Largest index of this parity with |m| <= truncation. */
    int max_index() const { return max_; }
    /** Number of stored coefficients. */
    int size() const { return static_cast<int>(c_.size()); }

    bool contains(int m) const { return matches(parity_, m) && std::abs(m) <= max_; }
    /** Coefficient U_m; zero outside the truncated lattice. */
    cplx get(int m) const { return contains(m) ? c_[slot(m)] : cplx{0.0}; }
    void set(int m, cplx v);

    /** Lattice index stored at slot i (i in [0, size)). */
    int index_at(int i) const { return -max_ + 2 * i; }
    int slot(int m) const { return (m + max_) / 2; }

    std::span<const cplx> data() const { return c_; }
    std::span<cplx> data() { return c_; }

  private:
    Parity parity_;
    int trunc_;
    int max_;
    std::vector<cplx> c_;
};

/** Real, even, zero-mean Fourier coefficients w_{2m} of a 2pi-periodic
 * potential W(x). Stored mirrored: w_{-2m} = w_{2m}. */
class PotentialSpec {
  public:
    PotentialSpec() = default;
    /** Build from entries (m, w_{2m}) with m >= 1; the mirror image and the
     * zero mean w_0 = 0 are applied automatically. Duplicate m rejected. */
    static PotentialSpec from_pairs(const std::vector<std::pair<int, double>>& entries);

    /** Coefficient w_{2m}. */
    double w2m(int m) const;
    /** Truncation radius M_W: all |m| > M_W coefficients vanish. */
    int truncation() const { return trunc_; }
    /** Sum of |w_{2m}| over all m (both signs). */
    double sum_abs() const;
    /** W(x) = sum_m w_{2m} e^{imx}, real by symmetry. */
    double eval(double x) const;

    const std::map<int, double>& coeffs() const { return coeffs_; }

  private:
    std::map<int, double> coeffs_; // m -> w_{2m}, both signs stored
    int trunc_ = 0;
};

/** Load a potential from a JSON document {"coeffs":[{"m":int,"w":real},...]}
 * listing w_{2m} for m >= 1. Throws std::runtime_error on malformed input. */
PotentialSpec load_potential(const std::string& path);
PotentialSpec parse_potential(const std::string& json_text);

/** Truncated convolution (U*V)_m = sum_k U_k V_{m-k} for |m| <= out_trunc.
 * Both inputs must share their truncation radius. */
LatticeField1D convolve(const LatticeField1D& u, const LatticeField1D& v, int out_trunc);
LatticeField1D convolve(const LatticeField1D& u, const LatticeField1D& v);

/** (R conj(U))_m = conj(U_{-m}), the inversion applied to the conjugate as it
 * enters N(U, conj U, U). */
LatticeField1D reverse_conjugate(const LatticeField1D& u);

/** N(U, conj U, U)_m = sum_{m1,m2} U_{m1} conj(U_{-m2}) U_{m-m1-m2}, exact for
 * inputs supported on |m| <= M and truncated to |m| <= M on output. */
LatticeField1D cubic_term(const LatticeField1D& u);

/** (W*U)_m = sum_k w_{m-k} U_k truncated to the lattice of U. */
LatticeField1D apply_potential(const PotentialSpec& w, const LatticeField1D& u);

/** l^2_s norm sqrt( sum (1 + m^2/4)^s |U_m|^2 ). */
double weighted_norm(const LatticeField1D& u, double s);

/** U(x) = sqrt(eps) sum_m U_m e^{imx/2} at each grid point. */
std::vector<cplx> synthesize(const LatticeField1D& u, double eps, std::span<const double> xs);

/** True when U_{-m} = conj(U_m) for all m, within tol. */
bool is_real_symmetric(const LatticeField1D& u, double tol = 1e-12);

} // namespace gapsol

#endif
