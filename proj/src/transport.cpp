#include "cra/transport.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "cra/errors.hpp"

namespace cra {

namespace {

constexpr int kMaxPhotons = 62;  // C(62,31) still fits in 64-bit exactly
constexpr double kImagTolerance = 1e-10;

double real_or_throw(std::complex<double> value, const char* what) {
    if (std::abs(value.imag()) > kImagTolerance) {
        throw InternalConsistencyError(std::string(what) +
                                       " has imaginary residue above 1e-10");
    }
    return value.real();
}

// (-1)^(n z)
double parity_phase(int n, int z) { return ((n * z) % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double binomial(int n, int r) {
    if (n < 0 || n > kMaxPhotons) {
        throw ValidationError("binomial(n, r) supports 0 <= n <= 62, got n = " +
                              std::to_string(n));
    }
    if (r < 0 || r > n) return 0.0;
    static const auto table = [] {
        std::array<std::array<unsigned long long, kMaxPhotons + 1>,
                   kMaxPhotons + 1>
            t{};
        for (int i = 0; i <= kMaxPhotons; ++i) {
            t[i][0] = t[i][i] = 1;
            for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
        }
        return t;
    }();
    return static_cast<double>(table[n][r]);
}

FCoefficients::FCoefficients(std::complex<double> m0mu, int n_max)
    : m0mu_(m0mu), n_max_(n_max) {
    if (n_max < 0 || n_max > kMaxPhotons) {
        throw ValidationError("photon number must be in 0..62, got " +
                              std::to_string(n_max));
    }
    delta_ = std::clamp(1.0 - std::norm(m0mu), 0.0, 1.0);
    const double sqrt_delta = std::sqrt(delta_);
    std::vector<std::complex<double>> mpow(n_max + 1), spow(n_max + 1);
    mpow[0] = 1.0;
    spow[0] = 1.0;
    for (int i = 1; i <= n_max; ++i) {
        mpow[i] = mpow[i - 1] * m0mu;
        spow[i] = spow[i - 1] * sqrt_delta;
    }
    table_.resize(static_cast<size_t>(n_max + 1) * (n_max + 2) / 2);
    size_t idx = 0;
    for (int n = 0; n <= n_max; ++n) {
        for (int r = 0; r <= n; ++r) {
            table_[idx++] = std::sqrt(binomial(n, r)) * mpow[n - r] * spow[r];
        }
    }
}

std::complex<double> FCoefficients::at(int r, int n) const {
    if (n < 0 || n > n_max_) {
        throw ValidationError("f(r, n): n out of range");
    }
    if (r < 0 || r > n) return 0.0;
    return table_[static_cast<size_t>(n) * (n + 1) / 2 + r];
}

FCoefficients f_coefficients(const Propagator& M, int mu, int n_max) {
    if (mu < 0 || mu >= M.dim()) {
        throw ValidationError("mode index out of range");
    }
    return FCoefficients(M.matrix(0, mu), n_max);
}

TransportReport fock_fidelities(const Propagator& M, int n) {
    if (n < 0) {
        throw ValidationError("photon number must be >= 0");
    }
    TransportReport out;
    out.time = M.time;
    out.input = "fock n=" + std::to_string(n);
    out.F_t = std::pow(std::norm(M.matrix(0, M.right())), n);
    out.F_r = std::pow(std::norm(M.matrix(0, M.left())), n);
    return out;
}

void SuperpositionState::validate() const {
    if (levels() < 1) {
        throw ValidationError("superposition needs at least one level");
    }
    if (levels() > kMaxPhotons + 1) {
        throw ValidationError("superposition supports at most 63 levels");
    }
    if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-12) {
        throw ValidationError("superposition amplitudes are not normalized");
    }
}

Eigen::MatrixXcd reduced_density_matrix(const Propagator& M, int n, int mu) {
    if (n < 0 || n > kMaxPhotons) {
        throw ValidationError("photon number must be in 0..62");
    }
    const FCoefficients f = f_coefficients(M, mu, n);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    for (int r = 0; r <= n; ++r) {
        rho(n - r, n - r) += std::norm(f.at(r, n));
    }
    return rho;
}

Eigen::MatrixXcd reduced_density_matrix(const Propagator& M,
                                        const SuperpositionState& psi,
                                        int mu) {
    psi.validate();
    const int d = psi.levels();
    const FCoefficients f = f_coefficients(M, mu, d - 1);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        for (int n2 = 0; n2 < d; ++n2) {
            const auto pair =
                psi.amplitudes(n) * std::conj(psi.amplitudes(n2));
            for (int r = 0; r <= std::min(n, n2); ++r) {
                rho(n - r, n2 - r) += pair * f.at(r, n) * std::conj(f.at(r, n2));
            }
        }
    }
    return rho;
}

namespace {

// Shared core of the superposition fidelity: overlap of the reduced
// state of mode mu with the (phase-corrected) input.
double superposition_overlap(const FCoefficients& f,
                             const Eigen::VectorXcd& alpha, int z,
                             bool phased, const char* what) {
    const int d = static_cast<int>(alpha.size());
    std::complex<double> acc = 0.0;
    for (int n = 0; n < d; ++n) {
        for (int n2 = 0; n2 < d; ++n2) {
            const double phase = phased ? parity_phase(n + n2, z) : 1.0;
            std::complex<double> core = 0.0;
            for (int r = 0; r <= std::min(n, n2); ++r) {
                core += alpha(n2 - r) * std::conj(alpha(n - r)) * f.at(r, n) *
                        std::conj(f.at(r, n2));
            }
            acc += phase * alpha(n) * std::conj(alpha(n2)) * core;
        }
    }
    return real_or_throw(acc, what);
}

}  // namespace

TransportReport superposition_fidelities(const Propagator& M,
                                         const SuperpositionState& psi,
                                         int z) {
    psi.validate();
    const int d = psi.levels();
    const FCoefficients ft = f_coefficients(M, M.right(), d - 1);
    const FCoefficients fr = f_coefficients(M, M.left(), d - 1);
    TransportReport out;
    out.time = M.time;
    out.input = "superposition d=" + std::to_string(d);
    out.F_t = superposition_overlap(ft, psi.amplitudes, z, true,
                                    "transmission fidelity");
    out.F_r = superposition_overlap(fr, psi.amplitudes, z, false,
                                    "reflection fidelity");
    return out;
}

namespace {

double haar_closed_form(const FCoefficients& f, int d, int z, bool phased) {
    double leak = 0.0;
    std::complex<double> direct = 0.0;
    for (int n = 0; n < d; ++n) {
        for (int r = 0; r <= n; ++r) {
            leak += std::norm(f.at(r, n));
        }
        direct += (phased ? parity_phase(n, z) : 1.0) * f.at(0, n);
    }
    return (leak + std::norm(direct)) / (d * (d + 1.0));
}

}  // namespace

TransportReport average_fidelities(const Propagator& M, int d, int z) {
    if (d < 1 || d > kMaxPhotons + 1) {
        throw ValidationError("average dimension d must be in 1..63");
    }
    const FCoefficients ft = f_coefficients(M, M.right(), d - 1);
    const FCoefficients fr = f_coefficients(M, M.left(), d - 1);
    TransportReport out;
    out.time = M.time;
    out.input = "haar d=" + std::to_string(d);
    out.F_t = haar_closed_form(ft, d, z, true);
    out.F_r = haar_closed_form(fr, d, z, false);
    return out;
}

namespace {

struct BlockSums {
    double ft = 0.0, ft2 = 0.0, fr = 0.0, fr2 = 0.0;
    std::int64_t count = 0;
};

constexpr std::int64_t kBlockSize = 4096;

BlockSums run_block(const FCoefficients& ft, const FCoefficients& fr, int d,
                    int z, std::uint64_t seed, std::int64_t block,
                    std::int64_t count) {
    // seed_seq keeps 32 bits per entry, so split the 64-bit inputs.
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block),
                      static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd alpha(d);
    BlockSums sums;
    for (std::int64_t s = 0; s < count; ++s) {
        for (int i = 0; i < d; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            alpha(i) = std::complex<double>(re, im);
        }
        alpha /= alpha.norm();
        const double vt =
            superposition_overlap(ft, alpha, z, true, "sampled F_t");
        const double vr =
            superposition_overlap(fr, alpha, z, false, "sampled F_r");
        sums.ft += vt;
        sums.ft2 += vt * vt;
        sums.fr += vr;
        sums.fr2 += vr * vr;
    }
    sums.count = count;
    return sums;
}

}  // namespace

HaarAverageResult haar_average_oracle(const Propagator& M, int d, int z,
                                      std::int64_t samples,
                                      std::uint64_t seed, int workers) {
    if (d < 1 || d > kMaxPhotons + 1) {
        throw ValidationError("average dimension d must be in 1..63");
    }
    if (samples < 1) {
        throw ValidationError("Monte-Carlo sample count must be >= 1");
    }
    const FCoefficients ft = f_coefficients(M, M.right(), d - 1);
    const FCoefficients fr = f_coefficients(M, M.left(), d - 1);

    const std::int64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
    std::vector<BlockSums> partial(blocks);
    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        for (std::int64_t b = next.fetch_add(1); b < blocks;
             b = next.fetch_add(1)) {
            const std::int64_t count =
                std::min(kBlockSize, samples - b * kBlockSize);
            partial[b] = run_block(ft, fr, d, z, seed, b, count);
        }
    };
    const int nthreads = std::max(
        1, static_cast<int>(std::min<std::int64_t>(workers, blocks)));
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // Reduce in block order so the result is worker-count independent.
    BlockSums total;
    for (const BlockSums& b : partial) {
        total.ft += b.ft;
        total.ft2 += b.ft2;
        total.fr += b.fr;
        total.fr2 += b.fr2;
        total.count += b.count;
    }
    const double n = static_cast<double>(total.count);
    HaarAverageResult out;
    out.samples = total.count;
    out.F_t = total.ft / n;
    out.F_r = total.fr / n;
    if (total.count > 1) {
        const double vart =
            std::max(0.0, (total.ft2 - total.ft * total.ft / n) / (n - 1.0));
        const double varr =
            std::max(0.0, (total.fr2 - total.fr * total.fr / n) / (n - 1.0));
        out.stderr_t = std::sqrt(vart / n);
        out.stderr_r = std::sqrt(varr / n);
    }
    return out;
}

}  // namespace cra
