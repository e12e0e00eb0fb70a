#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cra/dynamics.hpp"

namespace cra {

// Finite Fock superposition sum_n alpha_n |n>, n = 0..d-1.
struct SuperpositionState {
    Eigen::VectorXcd amplitudes;

    int levels() const { return static_cast<int>(amplitudes.size()); }

    // Throws ValidationError unless the norm is 1 within 1e-12.
    void validate() const;
};

// Transfer coefficients of an n-photon Fock state into mode mu:
//   f_mu(r, n) = sqrt(C(n, r)) (M_{0,mu})^(n-r) delta_mu^(r/2),
//   delta_mu = 1 - |M_{0,mu}|^2  (clamped to [0, 1]).
// r photons leak out of mode mu, n - r arrive.
class FCoefficients {
public:
    FCoefficients(std::complex<double> m0mu, int n_max);

    std::complex<double> at(int r, int n) const;
    double delta() const { return delta_; }
    std::complex<double> element() const { return m0mu_; }
    int n_max() const { return n_max_; }

private:
    std::complex<double> m0mu_;
    double delta_ = 0.0;
    int n_max_ = 0;
    std::vector<std::complex<double>> table_;  // row n holds f(0..n, n)
};

FCoefficients f_coefficients(const Propagator& M, int mu, int n_max);

// Exact binomial coefficient as double; exact for n <= 62.
double binomial(int n, int r);

// Transmission/reflection fidelity pair for one input.
struct TransportReport {
    double F_t = 0.0;
    double F_r = 0.0;
    double time = 0.0;
    std::string input;

    double sigma_t() const { return 1.0 - F_t; }
    double sigma_r() const { return 1.0 - F_r; }
};

// Fock input |n>: F_t = |M_{0,N+1}|^(2n), F_r = |M_{0,0}|^(2n).
TransportReport fock_fidelities(const Propagator& M, int n);

// Reduced state of mode mu after evolving |n> (Fock) or a superposition
// from the left boundary; basis |0>..|n_max> with n_max = n or d-1.
Eigen::MatrixXcd reduced_density_matrix(const Propagator& M, int n, int mu);
Eigen::MatrixXcd reduced_density_matrix(const Propagator& M,
                                        const SuperpositionState& psi, int mu);

// Superposition input. Transmission fidelity includes the phase
// corrector P = exp(i z pi c^dag c) on the receiving mode; reflection
// needs none.
TransportReport superposition_fidelities(const Propagator& M,
                                         const SuperpositionState& psi, int z);

// Haar average of the superposition fidelities over d-level pure states
// (Hurwitz measure), closed form
//   <F> = 1/(d(d+1)) [ sum_{n<d} sum_{r<=n} |f(r,n)|^2
//                      + sum_{n,n'<d} phi(n,n') f(0,n) f*(0,n') ]
// with phi the P-corrector phase (-1)^{(n+n')z} on transmission and 1 on
// reflection.
TransportReport average_fidelities(const Propagator& M, int d, int z);

// Monte-Carlo estimate of the same average: states drawn as normalized
// complex Gaussian vectors. Deterministic for a given seed regardless of
// worker count (fixed-size sample blocks with per-block substreams,
// reduced in block order).
struct HaarAverageResult {
    double F_t = 0.0;
    double F_r = 0.0;
    double stderr_t = 0.0;
    double stderr_r = 0.0;
    std::int64_t samples = 0;
};

HaarAverageResult haar_average_oracle(const Propagator& M, int d, int z,
                                      std::int64_t samples, std::uint64_t seed,
                                      int workers = 1);

}  // namespace cra
