#pragma once

#include <complex>

#include <Eigen/Dense>

#include "cra/lattice.hpp"

namespace cra {

// Single-excitation propagator M = exp(-i A t). Unitary and (complex)
// symmetric because A is real symmetric.
struct Propagator {
    double time = 0.0;
    Eigen::MatrixXcd matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
    int N() const { return dim() - 3; }
    int left() const { return 0; }
    int right() const { return dim() - 2; }
    int aux() const { return dim() - 1; }
};

// Cached eigendecomposition A = V diag(lambda) V^T, so propagators at
// many times reuse one solve: M(t) = V diag(exp(-i lambda t)) V^T.
class SpectralPropagator {
public:
    explicit SpectralPropagator(const CouplingMatrix& A);

    Propagator at(double t) const;

    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }

private:
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
};

Propagator propagator(const CouplingMatrix& A, double t);

// Closed-form boundary/zero-mode amplitudes of the three-mode effective
// model (j0 = 0), i.e. the coefficients of c0^dag(t):
//   a0  = 1 + (-1 + cos(sqrt(2) g_z t)) / 2
//   aN1 = (-1)^(z-1) (-1 + cos(sqrt(2) g_z t)) / 2
//   az  = i sin(sqrt(2) g_z t) / sqrt(2)
// They form the conjugate of the first column of
// effective_propagator_uncoupled(t).
struct EffectiveAmplitudes {
    std::complex<double> a0;
    std::complex<double> aN1;
    std::complex<double> az;
};

EffectiveAmplitudes effective_boundary_amplitudes(double g_z, int z, double t);

// exp(-i H_E t) for the three-mode model (left boundary, zero mode,
// right boundary) with H_E coupling g_z and parity (-1)^(z-1) on the
// right leg.
Eigen::Matrix3cd effective_propagator_uncoupled(double g_z, int z, double t);

// exp(-i H t) for the four-mode star model (left boundary, zero mode,
// right boundary, auxiliary) with legs g_z, (-1)^(z-1) g_z, J_z.
// Eigenvalues are {0, 0, +-sqrt(2 g_z^2 + J_z^2)}. Requires J_z != 0.
Eigen::Matrix4cd effective_propagator_coupled(double g_z, double j_z, int z,
                                              double t);

}  // namespace cra
