#include "cra/bounds.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace cra {

namespace {

// g_z^2 / J_z^2; the mode-coupling normalizations cancel so this is
// finite whenever J_z != 0.
double zero_mode_ratio(const NetworkConfig& config) {
    const ModeCouplings mc = mode_couplings(config);
    if (mc.j_z() == 0.0) {
        throw DegenerateTap(
            "auxiliary tap decouples from the zero mode (J_z = 0)");
    }
    const double r = mc.g_z() / mc.j_z();
    return r * r;
}

// 2d(d-1)/(d+1)
double average_weight(int d) {
    if (d < 1) {
        throw ValidationError("average dimension d must be >= 1");
    }
    return 2.0 * d * (d - 1.0) / (d + 1.0);
}

}  // namespace

double offresonant_weight(const NetworkConfig& config) {
    const ModeCouplings mc = mode_couplings(config);
    const ChainSpectrum spec = chain_spectrum(config.N, config.kappa);
    double sum = 0.0;
    for (int k = 1; k < mc.z; ++k) {
        const double ratio = mc.g(k - 1) / spec.energies(k - 1);
        sum += ratio * ratio;
    }
    return sum;
}

double delta_t(const NetworkConfig& config, double t) {
    const ModeCouplings mc = mode_couplings(config);
    const ChainSpectrum spec = chain_spectrum(config.N, config.kappa);
    double sum = 0.0;
    for (int k = 1; k < mc.z; ++k) {
        const double ratio = mc.g(k - 1) / spec.energies(k - 1);
        const double parity = ((k + mc.z - 1) % 2 == 0) ? 1.0 : -1.0;
        sum += ratio * ratio *
               (1.0 - parity * std::cos(spec.energies(k - 1) * t));
    }
    return sum;
}

double delta_r(const NetworkConfig& config, double t) {
    const ModeCouplings mc = mode_couplings(config);
    if (mc.j_z() == 0.0) {
        throw DegenerateTap(
            "auxiliary tap decouples from the zero mode (J_z = 0)");
    }
    const double ratio = mc.g_z() / mc.j_z();
    return 0.5 * ratio * ratio * (1.0 - std::cos(mc.j_z() * t));
}

BoundReport transmission_bound(const NetworkConfig& config, int n, double t) {
    if (n < 1) {
        throw ValidationError("photon number must be >= 1");
    }
    BoundReport out;
    out.regime = Regime::transmit;
    out.input = "fock n=" + std::to_string(n);
    out.delta = delta_t(config, t);
    out.infidelity_estimate = 4.0 * n * out.delta;
    out.upper_bound = 8.0 * n * offresonant_weight(config);
    return out;
}

BoundReport reflection_bound(const NetworkConfig& config, int n, double t) {
    if (n < 1) {
        throw ValidationError("photon number must be >= 1");
    }
    BoundReport out;
    out.regime = Regime::reflect;
    out.input = "fock n=" + std::to_string(n);
    out.delta = delta_r(config, t);
    out.infidelity_estimate = 4.0 * n * out.delta;
    out.upper_bound = 4.0 * n * zero_mode_ratio(config);
    return out;
}

BoundReport average_bounds(const NetworkConfig& config, int d, double t,
                           Regime regime) {
    const double weight = average_weight(d);
    BoundReport out;
    out.regime = regime;
    out.input = "haar d=" + std::to_string(d);
    if (regime == Regime::transmit) {
        out.delta = delta_t(config, t);
        out.upper_bound = 2.0 * weight * offresonant_weight(config);
    } else {
        out.delta = delta_r(config, t);
        out.upper_bound = weight * zero_mode_ratio(config);
    }
    out.infidelity_estimate = weight * out.delta;
    return out;
}

PerturbativeElements perturbative_matrix_elements(const NetworkConfig& config,
                                                  double t) {
    const int z = config.zero_mode();
    const double parity = (z % 2 == 0) ? 1.0 : -1.0;  // (-1)^z
    PerturbativeElements out;
    out.transmit = parity * (1.0 - 2.0 * delta_t(config, t));
    const ModeCouplings mc = mode_couplings(config);
    if (config.j0 > 0.0 && mc.j_z() != 0.0) {
        out.reflect = 1.0 - 2.0 * delta_r(config, t);
    }
    return out;
}

}  // namespace cra
