#ifndef GAPSOL_ERRORS_HPP
#define GAPSOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gapsol {

/** Newton iteration exhausted max_iter without meeting the tolerance. */
struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

/** Jacobian conditioning beyond threshold; signals a resonance that was not
 * removed by a symmetry restriction. */
struct SingularJacobian : std::runtime_error {
    explicit SingularJacobian(const std::string& what) : std::runtime_error(what) {}
};

/** The requested nonlinear branch does not exist (sign condition fails). */
struct BranchNotPresent : std::runtime_error {
    explicit BranchNotPresent(const std::string& what) : std::runtime_error(what) {}
};

/** Soliton parameters outside the valid regime (|Omega| >= |w_{2n}|,
 * sigma*w_{2n} <= 0, or too close to the algebraic-decay boundary). */
struct InvalidRegime : std::runtime_error {
    explicit InvalidRegime(const std::string& what) : std::runtime_error(what) {}
};

/** Computational box too small for the decay rate of the seeded soliton. */
struct DomainTooSmall : std::runtime_error {
    explicit DomainTooSmall(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gapsol

#endif
