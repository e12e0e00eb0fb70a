#include "cra/lattice.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cra {

namespace {
constexpr double pi = std::numbers::pi;
}

int NetworkConfig::zero_mode() const {
    if (N % 2 == 0) {
        throw EvenChainLength("chain length N = " + std::to_string(N) +
                              " is even; the zero mode needs odd N");
    }
    return (N + 1) / 2;
}

void NetworkConfig::validate() const {
    if (N < 1) {
        throw ValidationError("chain length N must be >= 1, got " +
                              std::to_string(N));
    }
    if (m < 1 || m > N) {
        throw ValidationError("tap site m = " + std::to_string(m) +
                              " outside chain 1.." + std::to_string(N));
    }
    if (!(kappa > 0.0)) {
        throw ValidationError("kappa must be positive, got " +
                              std::to_string(kappa));
    }
    if (g0 < 0.0 || j0 < 0.0) {
        throw ValidationError("couplings g0, j0 must be non-negative");
    }
    if (!std::isfinite(kappa) || !std::isfinite(g0) || !std::isfinite(j0)) {
        throw ValidationError("couplings must be finite");
    }
}

CouplingMatrix build_coupling_matrix(const NetworkConfig& config) {
    config.validate();
    const int n = config.N;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(config.dim(), config.dim());
    A(0, 1) = config.g0;
    A(n, n + 1) = config.g0;
    for (int i = 1; i < n; ++i) {
        A(i, i + 1) = config.kappa;
    }
    A(config.m, config.aux()) = config.j0;
    A = A + A.transpose().eval();
    return CouplingMatrix{std::move(A)};
}

ChainSpectrum chain_spectrum(int N, double kappa) {
    if (N < 1) {
        throw ValidationError("chain length N must be >= 1, got " +
                              std::to_string(N));
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw ValidationError("kappa must be positive and finite");
    }
    ChainSpectrum out;
    out.energies.resize(N);
    out.transform.resize(N, N);
    const double norm = std::sqrt(2.0 / (N + 1));
    for (int k = 1; k <= N; ++k) {
        out.energies(k - 1) = 2.0 * kappa * std::cos(k * pi / (N + 1));
        for (int i = 1; i <= N; ++i) {
            out.transform(i - 1, k - 1) = norm * std::sin(i * k * pi / (N + 1));
        }
    }
    return out;
}

ModeCouplings mode_couplings(const NetworkConfig& config) {
    config.validate();
    const int z = config.zero_mode();
    const int N = config.N;
    const double norm = std::sqrt(2.0 / (N + 1));
    ModeCouplings out;
    out.z = z;
    out.g.resize(N);
    out.j.resize(N);
    for (int k = 1; k <= N; ++k) {
        out.g(k - 1) = config.g0 * norm * std::sin(k * pi / (N + 1));
        // sin(mk pi/(N+1)) vanishes identically when (N+1) | mk; snap it so
        // decoupled taps are detected exactly rather than left at ~1e-16.
        const long long mk = static_cast<long long>(config.m) * k;
        out.j(k - 1) = (mk % (N + 1) == 0)
                           ? 0.0
                           : config.j0 * norm * std::sin(mk * pi / (N + 1));
    }
    return out;
}

double swap_time(const NetworkConfig& config) {
    config.validate();
    const ModeCouplings mc = mode_couplings(config);
    if (mc.g_z() == 0.0) {
        throw ZeroCoupling("swap time diverges: g0 = 0");
    }
    return pi / (std::sqrt(2.0) * mc.g_z());
}

}  // namespace cra
