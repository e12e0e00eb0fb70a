#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cra/sweep.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::vector<int> fock_n;
    std::vector<int> average_d;
    long long samples = -1;
    long long seed = -1;
    int parallel = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_inputs) {
    cmd->add_option("--config", opt.config_path,
                    "flat key = value parameter file");
    cmd->add_option("--out", opt.out_path, "output CSV path (default stdout)");
    if (with_inputs) {
        cmd->add_option("--n", opt.fock_n, "Fock input photon numbers");
        cmd->add_option("--d", opt.average_d,
                        "Haar-average superposition dimensions");
    }
    cmd->add_option("--samples", opt.samples,
                    "Monte-Carlo samples per average input (0 disables)");
    cmd->add_option("--seed", opt.seed, "Monte-Carlo seed");
    cmd->add_option("--parallel", opt.parallel, "worker thread count")
        ->check(CLI::PositiveNumber);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw cra::ValidationError("cannot open config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Overrides are appended as config lines so one parser handles both.
cra::SweepSpec build_spec(const CommonOptions& opt) {
    std::string text =
        opt.config_path.empty() ? std::string() : read_file(opt.config_path);
    auto append_list = [&text](const char* key, const std::vector<int>& vs) {
        if (vs.empty()) return;
        text += '\n';
        text += key;
        text += " =";
        for (size_t i = 0; i < vs.size(); ++i) {
            text += (i ? "," : " ") + std::to_string(vs[i]);
        }
    };
    append_list("n_list", opt.fock_n);
    append_list("d_list", opt.average_d);
    if (opt.samples >= 0) {
        text += "\nmc_samples = " + std::to_string(opt.samples);
    }
    if (opt.seed >= 0) {
        text += "\nseed = " + std::to_string(opt.seed);
    }
    return cra::parse_config_text(text);
}

void emit_csv(const cra::SweepResult& result, const std::string& out_path) {
    if (out_path.empty()) {
        cra::write_csv(result, std::cout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw cra::ValidationError("cannot open output file '" + out_path +
                                   "'");
    }
    cra::write_csv(result, out);
}

int dispatch(const CLI::App& app, const CommonOptions& opt,
             const CLI::App* sweep_cmd, const CLI::App* verify_cmd,
             const CLI::App* demo_cmd, const CLI::App* repro_cmd,
             const std::string& preset, int demo_n) {
    if (app.got_subcommand(sweep_cmd)) {
        emit_csv(cra::run_sweep(build_spec(opt), opt.parallel), opt.out_path);
        return 0;
    }
    if (app.got_subcommand(verify_cmd)) {
        const cra::SweepSpec spec = build_spec(opt);
        if (!opt.out_path.empty()) {
            emit_csv(cra::run_sweep(spec, opt.parallel), opt.out_path);
        }
        const cra::VerifyReport report = cra::verify_bounds(spec, opt.parallel);
        if (!report.passed) {
            const cra::BoundViolation& v = report.violations.front();
            throw cra::BoundViolated(report.message(), v.vary_value, v.column,
                                     v.sigma, v.bound);
        }
        std::cout << report.message() << "\n";
        return 0;
    }
    if (app.got_subcommand(demo_cmd)) {
        const cra::SweepSpec spec = build_spec(opt);
        cra::print_swap_demo(cra::swap_demo(spec.base, demo_n), std::cout);
        return 0;
    }
    if (app.got_subcommand(repro_cmd)) {
        cra::SweepSpec spec = cra::figure_preset(preset);
        if (opt.samples >= 0) spec.mc_samples = opt.samples;
        if (opt.seed >= 0) spec.seed = static_cast<std::uint64_t>(opt.seed);
        emit_csv(cra::run_sweep(spec, opt.parallel), opt.out_path);
        return 0;
    }
    throw cra::ValidationError("no subcommand given");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "multiphoton transport through a coupled-resonator chain: exact "
        "fidelities, perturbative bounds, parameter sweeps"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string preset;
    int demo_n = 1;

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "evaluate fidelities over a grid");
    add_common(sweep_cmd, opt, true);

    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "check infidelities against their bounds on a grid");
    add_common(verify_cmd, opt, true);

    CLI::App* demo_cmd = app.add_subcommand(
        "swap-demo", "one-shot transfer summary at the swap time");
    demo_cmd->add_option("--config", opt.config_path,
                         "flat key = value parameter file");
    demo_cmd->add_option("--n", demo_n, "Fock input photon number")
        ->check(CLI::NonNegativeNumber);

    CLI::App* repro_cmd = app.add_subcommand(
        "reproduce", "emit the CSV behind a reference figure");
    repro_cmd
        ->add_option("preset", preset,
                     "one of: fig2a fig2b fig3a fig3b fig4a fig4b figA1a "
                     "figA1b figA2a figA2b figA3a figA3b")
        ->required();
    repro_cmd->add_option("--out", opt.out_path,
                          "output CSV path (default stdout)");
    repro_cmd->add_option("--samples", opt.samples,
                          "Monte-Carlo samples per average input");
    repro_cmd->add_option("--seed", opt.seed, "Monte-Carlo seed");
    repro_cmd->add_option("--parallel", opt.parallel, "worker thread count")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return dispatch(app, opt, sweep_cmd, verify_cmd, demo_cmd, repro_cmd,
                        preset, demo_n);
    } catch (const cra::BoundViolated& e) {
        std::cerr << "bound violation: " << e.what() << "\n";
        return 3;
    } catch (const cra::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cra::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "unexpected failure: " << e.what() << "\n";
        return 4;
    }
}
