#pragma once

#include <complex>
#include <optional>
#include <string>

#include "cra/lattice.hpp"

namespace cra {

enum class Regime { transmit, reflect };

// Leading-order leakage weights of the perturbative treatment:
//   Delta_t(t) = sum_{k<z} (g_k^2/eps_k^2) [1 - (-1)^(k+z-1) cos(eps_k t)]
//   Delta_r(t) = (g_z^2 / 2 J_z^2) [1 - cos(J_z t)]
double delta_t(const NetworkConfig& config, double t);
double delta_r(const NetworkConfig& config, double t);

// Time-independent weight sum_{k<z} g_k^2/eps_k^2. For N = 7 it equals
// 7 g0^2 / (16 kappa^2) since sum_{k=1..3} tan^2(k pi/8) = 7.
double offresonant_weight(const NetworkConfig& config);

// Infidelity estimate plus its time-independent upper bound for one
// input class at one time.
struct BoundReport {
    double delta = 0.0;                // Delta_t or Delta_r at this time
    double infidelity_estimate = 0.0;  // leading-order sigma
    double upper_bound = 0.0;          // oscillatory bracket at its maximum
    Regime regime = Regime::transmit;
    std::string input;
};

// Fock |n>: sigma_t ~ 4 n Delta_t <= 8 n sum g_k^2/eps_k^2,
//           sigma_r ~ 4 n Delta_r <= 4 n g_z^2/J_z^2.
BoundReport transmission_bound(const NetworkConfig& config, int n, double t);
BoundReport reflection_bound(const NetworkConfig& config, int n, double t);

// Haar average over d levels: <sigma> ~ 2d(d-1)/(d+1) Delta, capped by
// 4d(d-1)/(d+1) sum g_k^2/eps_k^2 (transmit) or
// 2d(d-1)/(d+1) g_z^2/J_z^2 (reflect).
BoundReport average_bounds(const NetworkConfig& config, int d, double t,
                           Regime regime);

// First-order-corrected propagator elements:
//   transmit: M_{0,N+1} ~ (-1)^z (1 - 2 Delta_t(t))
//   reflect:  M_{0,0}   ~ 1 - 2 Delta_r(t), absent when J_z j0 = 0.
struct PerturbativeElements {
    std::complex<double> transmit;
    std::optional<std::complex<double>> reflect;
};

PerturbativeElements perturbative_matrix_elements(const NetworkConfig& config,
                                                  double t);

}  // namespace cra
