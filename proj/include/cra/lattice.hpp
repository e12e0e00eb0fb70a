#pragma once

#include <Eigen/Dense>

#include "cra/errors.hpp"

namespace cra {

// Two boundary resonators coupled through an N-site chain, plus one
// auxiliary resonator tapped onto chain site m. Site indexing of the
// composite system: 0 = left boundary, 1..N = chain, N+1 = right
// boundary, N+2 = auxiliary.
struct NetworkConfig {
    int N = 7;           // chain length
    int m = 3;           // chain site carrying the auxiliary tap, 1-based
    double kappa = 1.0;  // intrachain hopping
    double g0 = 0.01;    // boundary <-> chain coupling
    double j0 = 0.0;     // auxiliary <-> chain coupling

    int dim() const { return N + 3; }
    int left() const { return 0; }
    int right() const { return N + 1; }
    int aux() const { return N + 2; }

    // Zero-mode index z = (N+1)/2; requires odd N.
    int zero_mode() const;

    // Throws ValidationError subtypes on malformed parameters.
    void validate() const;
};

// Dense single-excitation coupling matrix of the composite network:
// real symmetric, zero diagonal, nonzeros g0 on (0,1) and (N,N+1),
// kappa on consecutive chain sites, j0 on (m,N+2).
struct CouplingMatrix {
    Eigen::MatrixXd entries;

    int dim() const { return static_cast<int>(entries.rows()); }
    int N() const { return dim() - 3; }
};

CouplingMatrix build_coupling_matrix(const NetworkConfig& config);

// Spectrum of the bare chain: energies eps_k = 2 kappa cos(k pi/(N+1))
// for k = 1..N and the orthogonal transform
// S(i,k) = sqrt(2/(N+1)) sin(i k pi/(N+1)) (rows i = chain sites).
struct ChainSpectrum {
    Eigen::VectorXd energies;   // index k-1
    Eigen::MatrixXd transform;  // N x N, columns are chain eigenmodes
};

ChainSpectrum chain_spectrum(int N, double kappa);

// Couplings of the boundary and auxiliary resonators to the chain
// eigenmodes: g_k = g0 sqrt(2/(N+1)) sin(k pi/(N+1)),
// J_k = j0 sqrt(2/(N+1)) sin(m k pi/(N+1)).
struct ModeCouplings {
    Eigen::VectorXd g;  // index k-1
    Eigen::VectorXd j;  // index k-1
    int z = 0;          // zero-mode index, 1-based

    double g_z() const { return g(z - 1); }
    double j_z() const { return j(z - 1); }
};

ModeCouplings mode_couplings(const NetworkConfig& config);

// Time of the boundary-to-boundary swap through the zero mode,
// tau = pi / (sqrt(2) g_z). Requires odd N and g0 > 0.
double swap_time(const NetworkConfig& config);

}  // namespace cra
