#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cra/bounds.hpp"
#include "cra/transport.hpp"

namespace cra {

enum class VaryParameter { j0_over_kappa, g0_over_kappa };

// Output column selectors. bound_* apply to Fock inputs, avg_bound_* to
// Haar-average inputs, mc_* to Haar-average inputs when mc_samples > 0;
// the four fidelity selectors apply to both input kinds.
enum class Selector {
    F_t,
    F_r,
    sigma_t,
    sigma_r,
    bound_t,
    bound_r,
    avg_bound_t,
    avg_bound_r,
    mc_F_t,
    mc_F_r,
    mc_err_t,
    mc_err_r,
};

std::string selector_name(Selector s);
Selector parse_selector(const std::string& name);

// Strictly increasing uniform grid, endpoints inclusive.
std::vector<double> uniform_grid(double start, double stop, int points);

struct SweepSpec {
    NetworkConfig base;
    VaryParameter vary = VaryParameter::j0_over_kappa;
    std::vector<double> grid;     // varied ratio, in units of kappa
    std::vector<int> fock_n;      // Fock inputs |n>
    std::vector<int> average_d;   // Haar-average inputs over d levels
    bool use_swap_time = true;    // evaluate at tau(g0) per grid point
    double time = 0.0;            // used when use_swap_time is false
    std::vector<Selector> outputs;
    std::int64_t mc_samples = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Flat key = value text; keys: N, m, kappa, g0, j0, time (number or
// "tau"), n_list, d_list (comma separated), vary ("j0_over_kappa" or
// "g0_over_kappa"), grid_start, grid_stop, grid_points, mc_samples,
// seed. Unknown keys are rejected. Outputs default to every selector
// applicable to the requested inputs.
SweepSpec parse_config_text(const std::string& text);
SweepSpec load_config(const std::string& path);

struct SweepRow {
    double vary_value = 0.0;
    std::vector<double> columns;
};

struct SweepResult {
    std::vector<std::string> header;  // "vary" plus one name per column
    std::vector<SweepRow> rows;
};

// Evaluates every grid point at t = tau (or the fixed time) and fills
// the requested columns. Rows are computed independently (workers > 1
// splits the grid) and always assembled in grid order, so output is
// identical for any worker count.
SweepResult run_sweep(const SweepSpec& spec, int workers = 1);

// 12 significant digits, LF line endings.
std::string to_csv(const SweepResult& result);
void write_csv(const SweepResult& result, std::ostream& out);

struct BoundViolation {
    double vary_value = 0.0;
    std::string column;
    double sigma = 0.0;
    double bound = 0.0;
};

struct VerifyReport {
    bool passed = true;
    std::vector<BoundViolation> violations;
    int points = 0;
    int checks = 0;

    std::string message() const;
};

// Checks sigma <= bound at every grid point for every bound selector the
// spec requests (bound_t/bound_r for each Fock input, avg_bound_t/
// avg_bound_r for each average input). bound_scale is a test hook that
// rescales every bound before comparison.
VerifyReport verify_bounds(const SweepSpec& spec, int workers = 1,
                           double bound_scale = 1.0);

// Named grids reproducing the reference figures: fig2a, fig2b, fig3a,
// fig3b, fig4a, fig4b, figA1a, figA1b, figA2a, figA2b, figA3a, figA3b.
SweepSpec figure_preset(const std::string& name);
std::vector<std::string> preset_names();

struct SwapDemoReport {
    NetworkConfig config;
    int n = 1;
    double tau = 0.0;
    TransportReport uncoupled;       // j0 = 0
    TransportReport coupled;         // as configured; valid if has_coupled
    bool has_coupled = false;
    EffectiveAmplitudes amplitudes;  // three-mode model at tau
};

SwapDemoReport swap_demo(const NetworkConfig& config, int n);
void print_swap_demo(const SwapDemoReport& report, std::ostream& out);

}  // namespace cra
