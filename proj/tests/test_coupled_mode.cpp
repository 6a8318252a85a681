#include <doctest.h>

#include <cmath>
#include <random>

#include "gapsol/coupled_mode.hpp"
#include "gapsol/errors.hpp"

using namespace gapsol;

TEST_CASE("exact soliton values") {
    CoupledModeParams p{1, 1.0, 0.0, +1, 0.0};
    auto [a0, b0] = soliton_exact(p, 0.0);
    CHECK(a0.real() == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(a0.imag() == doctest::Approx(0.0));
    CHECK(b0 == a0);

    CoupledModeParams p2{2, 0.5, 0.3, +1, 0.0};
    CHECK(SolitonProfile(p2).kappa() == doctest::Approx(0.2));

    // Omega=0, w=1: |a(y)|^2 = (2/3)/cosh(2y); at y=5 ~ (2/3)*2e^{-10}
    auto [a5, b5] = soliton_exact(p, 5.0);
    CHECK(std::norm(a5) ==
          doctest::Approx((2.0 / 3.0) * 2.0 * std::exp(-10.0)).epsilon(0.01));
}

TEST_CASE("regime validation") {
    CHECK_THROWS_AS(soliton_exact({1, 1.0, 1.0, +1, 0.0}, 0.0), InvalidRegime); // |O| = w
    CHECK_THROWS_AS(soliton_exact({1, 1.0, 1.5, +1, 0.0}, 0.0), InvalidRegime);
    CHECK_THROWS_AS(soliton_exact({1, -1.0, 0.0, +1, 0.0}, 0.0), InvalidRegime); // sigma*w < 0
    CHECK_THROWS_AS(soliton_exact({1, 1.0, 0.0, -1, 0.0}, 0.0), InvalidRegime);
}

TEST_CASE("reversibility and decay") {
    SolitonProfile prof({1, 1.0, 0.4, +1, 0.0});
    for (double y : {0.1, 0.7, 2.3, 6.0}) {
        CHECK(std::abs(prof.a(-y) - std::conj(prof.a(y))) < 1e-14);
        auto [a, b] = prof.eval(y);
        CHECK(std::abs(b - std::conj(a)) < 1e-14);
    }
    // log|a| asymptotically linear with slope -kappa (1%)
    const double y1 = 8.0, y2 = 18.0;
    const double slope =
        (std::log(std::abs(prof.a(y2))) - std::log(std::abs(prof.a(y1)))) / (y2 - y1);
    CHECK(std::abs(-slope - prof.kappa()) < 0.01 * prof.kappa());
}

TEST_CASE("coupled-mode residual") {
    SolitonProfile prof({1, 1.0, 0.3, +1, 0.0});
    std::vector<double> ys;
    for (double y = -20.0; y <= 20.0; y += 0.25) ys.push_back(y);
    CHECK(cme_residual(prof, ys) < 1e-6);

    // mirrored regime sigma=-1, w<0 satisfies the same system
    SolitonProfile mirr({1, -1.0, 0.3, -1, 0.0});
    CHECK(cme_residual(mirr, ys) < 1e-6);

    // constant orbit on the dispersion relation: residual 0 exactly
    CoupledModeParams pc{1, 0.5, 0.4, +1, 0.0};
    const double c = std::sqrt((pc.omega + pc.w2n) / 3.0);
    auto flat = [c](double) { return std::pair<cplx, cplx>{c, c}; };
    CHECK(cme_residual(flat, pc, ys) < 1e-14);
    auto zero = [](double) { return std::pair<cplx, cplx>{0.0, 0.0}; };
    CHECK(cme_residual(zero, pc, ys) == 0.0);
}

TEST_CASE("dispersion amplitude") {
    CHECK(*dispersion_amplitude(1.0, 0.5, +1, '+') == doctest::Approx(std::sqrt(0.5)));
    CHECK(*dispersion_amplitude(-0.5, 0.5, +1, '+') == doctest::Approx(0.0));
    CHECK(*dispersion_amplitude(-1.0, 0.5, -1, '+') == doctest::Approx(std::sqrt(1.0 / 6.0)));
    CHECK_FALSE(dispersion_amplitude(-1.0, 0.5, +1, '+').has_value());
    CHECK_THROWS(dispersion_amplitude(0.0, 0.5, +1, 'x'));
}

TEST_CASE("leading order field") {
    SolitonProfile prof({1, 1.0, 0.0, +1, 0.04});
    std::vector<double> xs{0.0, 0.3, 1.1, 4.7};
    auto f = leading_order_field(prof, xs);
    CHECK(f[0].real() == doctest::Approx(2.0 * 0.2 * std::sqrt(2.0 / 3.0)));
    for (auto z : f) CHECK(std::abs(z.imag()) < 1e-12);
}

TEST_CASE("dirac operator hermiticity") {
    SolitonProfile prof({1, 1.0, 0.2, +1, 0.0});
    std::vector<double> ys = uniform_grid(5.0, 0.1);
    DiracOperator op(prof, ys);
    Eigen::MatrixXcd m = op.dense();
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dirac symbol on a constant-coefficient window") {
    // Far in the soliton tail the operator is constant-coefficient; discrete
    // plane waves diagonalize it with eigenvalues Omega +- sqrt(n^2 s(p)^2 + w^2),
    // s(p) = (45 sin(ph) - 9 sin(2ph) + sin(3ph)) / (30h), each doubly degenerate.
    const double w = 1.0, omega = 0.15;
    SolitonProfile prof({1, w, omega, +1, 0.0});
    const int N = 128;
    const double h = 0.05;
    std::vector<double> ys(N);
    for (int j = 0; j < N; ++j) ys[j] = 80.0 + j * h;
    DiracOperator op(prof, ys);
    const double p = 2.0 * M_PI * 5.0 / (N * h);
    const double s =
        (45.0 * std::sin(p * h) - 9.0 * std::sin(2.0 * p * h) + std::sin(3.0 * p * h)) /
        (30.0 * h);
    // components (1,3) couple through [[omega - s, w], [w, omega + s]]
    const double root = std::sqrt(s * s + w * w);
    for (double lam : {omega + root, omega - root}) {
        Eigen::Vector2d evec(w, lam - (omega - s));
        evec.normalize();
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4 * N);
        for (int j = 0; j < N; ++j) {
            const cplx ph = std::polar(1.0, p * j * h);
            v[j] = evec[0] * ph;
            v[2 * N + j] = evec[1] * ph;
        }
        Eigen::VectorXcd av = op.apply(v);
        CHECK((av - lam * v).norm() / v.norm() < 1e-10);
    }
}

TEST_CASE("dirac kernel residuals") {
    SolitonProfile prof({1, 1.0, 0.0, +1, 0.0});
    std::vector<double> ys = uniform_grid(20.0, 0.02);
    DiracOperator op(prof, ys);
    auto [rt, rg] = kernel_check(op, prof, ys);
    CHECK(rt < 1e-5);
    CHECK(rg < 1e-5);

    // a random vector is far from the kernel
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Eigen::VectorXcd v(4 * op.grid_size());
    for (int i = 0; i < v.size(); ++i) v[i] = cplx(d(rng), d(rng));
    CHECK(op.apply(v).norm() / v.norm() > 0.1);
}

TEST_CASE("uniform grid") {
    std::vector<double> ys = uniform_grid(2.0, 0.5);
    CHECK(ys.size() == 9);
    CHECK(ys.front() == doctest::Approx(-2.0));
    CHECK(ys.back() == doctest::Approx(2.0));
    CHECK(ys[4] == doctest::Approx(0.0));
}
