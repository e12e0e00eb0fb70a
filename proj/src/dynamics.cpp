#include "cra/dynamics.hpp"

#include <cmath>
#include <complex>

namespace cra {

namespace {
using namespace std::complex_literals;

Eigen::MatrixXcd evolve(const Eigen::MatrixXd& V, const Eigen::VectorXd& lam,
                        double t) {
    Eigen::VectorXcd phases(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        phases(i) = std::exp(-1.0i * lam(i) * t);
    }
    return V * phases.asDiagonal() * V.transpose();
}
}  // namespace

SpectralPropagator::SpectralPropagator(const CouplingMatrix& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A.entries);
    if (solver.info() != Eigen::Success) {
        throw EigFailure("eigendecomposition of the coupling matrix failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

Propagator SpectralPropagator::at(double t) const {
    return Propagator{t, evolve(eigenvectors_, eigenvalues_, t)};
}

Propagator propagator(const CouplingMatrix& A, double t) {
    return SpectralPropagator(A).at(t);
}

EffectiveAmplitudes effective_boundary_amplitudes(double g_z, int z,
                                                  double t) {
    const double phase = std::sqrt(2.0) * g_z * t;
    const double c = std::cos(phase);
    const double parity = (z % 2 == 0) ? -1.0 : 1.0;  // (-1)^(z-1)
    EffectiveAmplitudes out;
    out.a0 = 1.0 + (-1.0 + c) / 2.0;
    out.aN1 = parity * (-1.0 + c) / 2.0;
    out.az = 1.0i * std::sin(phase) / std::sqrt(2.0);
    return out;
}

Eigen::Matrix3cd effective_propagator_uncoupled(double g_z, int z, double t) {
    const double parity = (z % 2 == 0) ? -1.0 : 1.0;
    Eigen::Matrix3d H;
    H << 0.0, g_z, 0.0,
         g_z, 0.0, parity * g_z,
         0.0, parity * g_z, 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(H);
    if (solver.info() != Eigen::Success) {
        throw EigFailure("effective three-mode eigendecomposition failed");
    }
    return evolve(solver.eigenvectors(), solver.eigenvalues(), t);
}

Eigen::Matrix4cd effective_propagator_coupled(double g_z, double j_z, int z,
                                              double t) {
    if (j_z == 0.0) {
        throw DegenerateTap("four-mode star model needs J_z != 0");
    }
    const double parity = (z % 2 == 0) ? -1.0 : 1.0;
    Eigen::Matrix4d H;
    H << 0.0, g_z, 0.0, 0.0,
         g_z, 0.0, parity * g_z, j_z,
         0.0, parity * g_z, 0.0, 0.0,
         0.0, j_z, 0.0, 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(H);
    if (solver.info() != Eigen::Success) {
        throw EigFailure("effective four-mode eigendecomposition failed");
    }
    return evolve(solver.eigenvectors(), solver.eigenvalues(), t);
}

}  // namespace cra
