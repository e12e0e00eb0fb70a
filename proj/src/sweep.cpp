#include "cra/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "cra/dynamics.hpp"

namespace cra {

namespace {

const std::map<std::string, Selector>& selector_table() {
    static const std::map<std::string, Selector> table = {
        {"F_t", Selector::F_t},
        {"F_r", Selector::F_r},
        {"sigma_t", Selector::sigma_t},
        {"sigma_r", Selector::sigma_r},
        {"bound_t", Selector::bound_t},
        {"bound_r", Selector::bound_r},
        {"avg_bound_t", Selector::avg_bound_t},
        {"avg_bound_r", Selector::avg_bound_r},
        {"mc_F_t", Selector::mc_F_t},
        {"mc_F_r", Selector::mc_F_r},
        {"mc_err_t", Selector::mc_err_t},
        {"mc_err_r", Selector::mc_err_r},
    };
    return table;
}

bool fock_applicable(Selector s) {
    switch (s) {
        case Selector::F_t:
        case Selector::F_r:
        case Selector::sigma_t:
        case Selector::sigma_r:
        case Selector::bound_t:
        case Selector::bound_r:
            return true;
        default:
            return false;
    }
}

bool average_applicable(Selector s, bool with_mc) {
    switch (s) {
        case Selector::F_t:
        case Selector::F_r:
        case Selector::sigma_t:
        case Selector::sigma_r:
        case Selector::avg_bound_t:
        case Selector::avg_bound_r:
            return true;
        case Selector::mc_F_t:
        case Selector::mc_F_r:
        case Selector::mc_err_t:
        case Selector::mc_err_r:
            return with_mc;
        default:
            return false;
    }
}

bool is_mc(Selector s) {
    return s == Selector::mc_F_t || s == Selector::mc_F_r ||
           s == Selector::mc_err_t || s == Selector::mc_err_r;
}

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-cell Monte-Carlo substream, independent of worker scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::int64_t point, int d) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(point) *
                                            1000003ULL +
                                        static_cast<std::uint64_t>(d)));
}

// Column plan: per input, the selectors actually emitted, in order.
struct ColumnPlan {
    std::vector<Selector> fock;
    std::vector<Selector> average;
};

ColumnPlan make_plan(const SweepSpec& spec) {
    const bool with_mc = spec.mc_samples > 0;
    ColumnPlan plan;
    for (Selector s : spec.outputs) {
        if (fock_applicable(s)) plan.fock.push_back(s);
        if (average_applicable(s, with_mc)) plan.average.push_back(s);
    }
    if (with_mc &&
        std::none_of(plan.average.begin(), plan.average.end(), is_mc)) {
        plan.average.insert(plan.average.end(),
                            {Selector::mc_F_t, Selector::mc_F_r,
                             Selector::mc_err_t, Selector::mc_err_r});
    }
    return plan;
}

std::vector<std::string> make_header(const SweepSpec& spec,
                                     const ColumnPlan& plan) {
    std::vector<std::string> header{"vary"};
    for (int n : spec.fock_n) {
        for (Selector s : plan.fock) {
            header.push_back(selector_name(s) + "[n=" + std::to_string(n) +
                             "]");
        }
    }
    for (int d : spec.average_d) {
        for (Selector s : plan.average) {
            header.push_back(selector_name(s) + "[d=" + std::to_string(d) +
                             "]");
        }
    }
    return header;
}

NetworkConfig config_at(const SweepSpec& spec, double x) {
    NetworkConfig cfg = spec.base;
    if (spec.vary == VaryParameter::j0_over_kappa) {
        cfg.j0 = x * cfg.kappa;
    } else {
        cfg.g0 = x * cfg.kappa;
    }
    return cfg;
}

SweepRow compute_row(const SweepSpec& spec, const ColumnPlan& plan,
                     std::int64_t point) {
    const double x = spec.grid[point];
    NetworkConfig cfg = config_at(spec, x);
    cfg.validate();
    const double t = spec.use_swap_time ? swap_time(cfg) : spec.time;
    const int z = cfg.zero_mode();
    const Propagator M = propagator(build_coupling_matrix(cfg), t);

    SweepRow row;
    row.vary_value = x;
    auto fock_value = [&](Selector s, const TransportReport& rep,
                          int n) -> double {
        switch (s) {
            case Selector::F_t: return rep.F_t;
            case Selector::F_r: return rep.F_r;
            case Selector::sigma_t: return rep.sigma_t();
            case Selector::sigma_r: return rep.sigma_r();
            case Selector::bound_t:
                return transmission_bound(cfg, n, t).upper_bound;
            case Selector::bound_r:
                return reflection_bound(cfg, n, t).upper_bound;
            default:
                throw ValidationError("selector not valid for Fock input");
        }
    };
    for (int n : spec.fock_n) {
        const TransportReport rep = fock_fidelities(M, n);
        for (Selector s : plan.fock) row.columns.push_back(fock_value(s, rep, n));
    }
    for (int d : spec.average_d) {
        const TransportReport rep = average_fidelities(M, d, z);
        std::optional<HaarAverageResult> mc;
        auto mc_result = [&]() -> const HaarAverageResult& {
            if (!mc) {
                mc = haar_average_oracle(M, d, z, spec.mc_samples,
                                         derive_seed(spec.seed, point, d));
            }
            return *mc;
        };
        for (Selector s : plan.average) {
            switch (s) {
                case Selector::F_t: row.columns.push_back(rep.F_t); break;
                case Selector::F_r: row.columns.push_back(rep.F_r); break;
                case Selector::sigma_t:
                    row.columns.push_back(rep.sigma_t());
                    break;
                case Selector::sigma_r:
                    row.columns.push_back(rep.sigma_r());
                    break;
                case Selector::avg_bound_t:
                    row.columns.push_back(
                        average_bounds(cfg, d, t, Regime::transmit)
                            .upper_bound);
                    break;
                case Selector::avg_bound_r:
                    row.columns.push_back(
                        average_bounds(cfg, d, t, Regime::reflect)
                            .upper_bound);
                    break;
                case Selector::mc_F_t:
                    row.columns.push_back(mc_result().F_t);
                    break;
                case Selector::mc_F_r:
                    row.columns.push_back(mc_result().F_r);
                    break;
                case Selector::mc_err_t:
                    row.columns.push_back(mc_result().stderr_t);
                    break;
                case Selector::mc_err_r:
                    row.columns.push_back(mc_result().stderr_r);
                    break;
                default:
                    throw ValidationError(
                        "selector not valid for average input");
            }
        }
    }
    return row;
}

void trim(std::string& s) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(s.back())) s.pop_back();
    size_t i = 0;
    while (i < s.size() && issp(s[i])) ++i;
    s.erase(0, i);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': bad number '" +
                              value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': bad integer '" +
                              value + "'");
    }
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        trim(item);
        if (item.empty()) continue;
        out.push_back(static_cast<int>(parse_int(key, item)));
    }
    return out;
}

}  // namespace

std::string selector_name(Selector s) {
    for (const auto& [name, sel] : selector_table()) {
        if (sel == s) return name;
    }
    throw ValidationError("unknown selector");
}

Selector parse_selector(const std::string& name) {
    const auto& table = selector_table();
    const auto it = table.find(name);
    if (it == table.end()) {
        throw ValidationError("unknown column selector '" + name + "'");
    }
    return it->second;
}

std::vector<double> uniform_grid(double start, double stop, int points) {
    if (points < 2 || !(stop > start)) {
        throw GridNotIncreasing(
            "grid needs at least two points with stop > start");
    }
    std::vector<double> grid(points);
    const double step = (stop - start) / (points - 1);
    for (int i = 0; i < points; ++i) grid[i] = start + i * step;
    grid.back() = stop;
    return grid;
}

void SweepSpec::validate() const {
    base.validate();
    base.zero_mode();
    if (grid.size() < 2) {
        throw GridNotIncreasing("sweep grid needs at least two points");
    }
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!(grid[i] < grid[i + 1])) {
            throw GridNotIncreasing("sweep grid must be strictly increasing");
        }
    }
    if (grid.front() < 0.0) {
        throw ValidationError("sweep grid values must be non-negative");
    }
    if (fock_n.empty() && average_d.empty()) {
        throw ValidationError("sweep needs at least one input (n or d)");
    }
    for (int n : fock_n) {
        if (n < 0) throw ValidationError("photon number must be >= 0");
    }
    for (int d : average_d) {
        if (d < 1) throw ValidationError("average dimension must be >= 1");
    }
    if (outputs.empty()) {
        throw ValidationError("sweep requests no output columns");
    }
    if (mc_samples < 0) {
        throw ValidationError("mc_samples must be >= 0");
    }
    if (!use_swap_time && !(time >= 0.0 && std::isfinite(time))) {
        throw ValidationError("explicit time must be finite and >= 0");
    }
}

SweepResult run_sweep(const SweepSpec& spec, int workers) {
    spec.validate();
    const ColumnPlan plan = make_plan(spec);
    SweepResult result;
    result.header = make_header(spec, plan);
    const std::int64_t npoints = static_cast<std::int64_t>(spec.grid.size());
    result.rows.resize(npoints);

    std::atomic<std::int64_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::int64_t i = next.fetch_add(1); i < npoints;
             i = next.fetch_add(1)) {
            if (failed.load()) return;
            try {
                result.rows[i] = compute_row(spec, plan, i);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    const int nthreads = std::max(
        1, static_cast<int>(std::min<std::int64_t>(workers, npoints)));
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) std::rethrow_exception(first_error);
    return result;
}

std::string to_csv(const SweepResult& result) {
    std::string out;
    for (size_t i = 0; i < result.header.size(); ++i) {
        if (i) out += ',';
        out += result.header[i];
    }
    out += '\n';
    for (const SweepRow& row : result.rows) {
        out += format_g(row.vary_value);
        for (double v : row.columns) {
            out += ',';
            out += format_g(v);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const SweepResult& result, std::ostream& out) {
    out << to_csv(result);
}

std::string VerifyReport::message() const {
    if (passed) {
        return "verified " + std::to_string(checks) + " checks over " +
               std::to_string(points) + " grid points";
    }
    const BoundViolation& v = violations.front();
    return "bound violated at vary=" + format_g(v.vary_value) + ": " +
           v.column + " sigma=" + format_g(v.sigma) + " exceeds bound=" +
           format_g(v.bound);
}

VerifyReport verify_bounds(const SweepSpec& spec, int workers,
                           double bound_scale) {
    SweepSpec checked = spec;
    // Every bound column needs its sigma partner in the output set.
    auto ensure = [&](Selector s) {
        if (std::find(checked.outputs.begin(), checked.outputs.end(), s) ==
            checked.outputs.end()) {
            checked.outputs.push_back(s);
        }
    };
    bool any_bound = false;
    for (Selector s : spec.outputs) {
        if (s == Selector::bound_t || s == Selector::avg_bound_t) {
            ensure(Selector::sigma_t);
            any_bound = true;
        }
        if (s == Selector::bound_r || s == Selector::avg_bound_r) {
            ensure(Selector::sigma_r);
            any_bound = true;
        }
    }
    if (!any_bound) {
        throw ValidationError("verify needs at least one bound column");
    }

    const SweepResult result = run_sweep(checked, workers);
    const auto col = [&](const std::string& name) {
        const auto it =
            std::find(result.header.begin(), result.header.end(), name);
        return it == result.header.end()
                   ? -1
                   : static_cast<int>(it - result.header.begin()) - 1;
    };

    struct Pair {
        int sigma_col;
        int bound_col;
        std::string name;
    };
    std::vector<Pair> pairs;
    auto add_pair = [&](const std::string& sigma, const std::string& bound) {
        const int sc = col(sigma);
        const int bc = col(bound);
        if (sc >= 0 && bc >= 0) pairs.push_back({sc, bc, bound});
    };
    for (int n : checked.fock_n) {
        const std::string tag = "[n=" + std::to_string(n) + "]";
        add_pair("sigma_t" + tag, "bound_t" + tag);
        add_pair("sigma_r" + tag, "bound_r" + tag);
    }
    for (int d : checked.average_d) {
        const std::string tag = "[d=" + std::to_string(d) + "]";
        add_pair("sigma_t" + tag, "avg_bound_t" + tag);
        add_pair("sigma_r" + tag, "avg_bound_r" + tag);
    }

    VerifyReport report;
    report.points = static_cast<int>(result.rows.size());
    for (const SweepRow& row : result.rows) {
        for (const Pair& p : pairs) {
            const double sigma = row.columns[p.sigma_col];
            const double bound = bound_scale * row.columns[p.bound_col];
            ++report.checks;
            if (sigma > bound) {
                report.passed = false;
                report.violations.push_back(
                    {row.vary_value, p.name, sigma, bound});
            }
        }
    }
    return report;
}

SweepSpec parse_config_text(const std::string& text) {
    SweepSpec spec;
    spec.base = NetworkConfig{};
    double grid_start = 0.0, grid_stop = 0.1;
    int grid_points = 101;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        trim(key);
        trim(value);
        if (key == "N") {
            spec.base.N = static_cast<int>(parse_int(key, value));
        } else if (key == "m") {
            spec.base.m = static_cast<int>(parse_int(key, value));
        } else if (key == "kappa") {
            spec.base.kappa = parse_double(key, value);
        } else if (key == "g0") {
            spec.base.g0 = parse_double(key, value);
        } else if (key == "j0") {
            spec.base.j0 = parse_double(key, value);
        } else if (key == "time") {
            if (value == "tau") {
                spec.use_swap_time = true;
            } else {
                spec.use_swap_time = false;
                spec.time = parse_double(key, value);
            }
        } else if (key == "n_list") {
            spec.fock_n = parse_int_list(key, value);
        } else if (key == "d_list") {
            spec.average_d = parse_int_list(key, value);
        } else if (key == "vary") {
            if (value == "j0_over_kappa") {
                spec.vary = VaryParameter::j0_over_kappa;
            } else if (value == "g0_over_kappa") {
                spec.vary = VaryParameter::g0_over_kappa;
            } else {
                throw ValidationError("config key 'vary': expected "
                                      "j0_over_kappa or g0_over_kappa");
            }
        } else if (key == "grid_start") {
            grid_start = parse_double(key, value);
        } else if (key == "grid_stop") {
            grid_stop = parse_double(key, value);
        } else if (key == "grid_points") {
            grid_points = static_cast<int>(parse_int(key, value));
        } else if (key == "mc_samples") {
            spec.mc_samples = parse_int(key, value);
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else {
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
        }
    }
    spec.grid = uniform_grid(grid_start, grid_stop, grid_points);

    // Each bound is only emitted by default when its regime holds across
    // the whole grid: transmission bounds need the aux fully off, and
    // reflection bounds need J_z != 0 even at the smallest coupling. A grid
    // that crosses regimes gets fidelity columns only.
    bool transmit_ok = false;
    bool reflect_ok = false;
    try {
        const NetworkConfig lo = config_at(spec, spec.grid.front());
        lo.validate();
        reflect_ok = mode_couplings(lo).j_z() != 0.0;
        transmit_ok = config_at(spec, spec.grid.back()).j0 == 0.0;
    } catch (const Error&) {
        transmit_ok = false;
        reflect_ok = false;
    }

    spec.outputs = {Selector::F_t, Selector::F_r, Selector::sigma_t,
                    Selector::sigma_r};
    if (!spec.fock_n.empty()) {
        if (transmit_ok) spec.outputs.push_back(Selector::bound_t);
        if (reflect_ok) spec.outputs.push_back(Selector::bound_r);
    }
    if (!spec.average_d.empty()) {
        if (transmit_ok) spec.outputs.push_back(Selector::avg_bound_t);
        if (reflect_ok) spec.outputs.push_back(Selector::avg_bound_r);
        if (spec.mc_samples > 0) {
            spec.outputs.insert(spec.outputs.end(),
                                {Selector::mc_F_t, Selector::mc_F_r,
                                 Selector::mc_err_t, Selector::mc_err_r});
        }
    }
    return spec;
}

SweepSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::vector<std::string> preset_names() {
    return {"fig2a",  "fig2b",  "fig3a",  "fig3b",  "fig4a",  "fig4b",
            "figA1a", "figA1b", "figA2a", "figA2b", "figA3a", "figA3b"};
}

SweepSpec figure_preset(const std::string& name) {
    SweepSpec spec;
    spec.base = NetworkConfig{7, 3, 1.0, 0.01, 0.0};
    spec.use_swap_time = true;

    const auto j0_sweep = [&spec] {
        spec.vary = VaryParameter::j0_over_kappa;
        spec.grid = uniform_grid(0.0, 0.1, 101);
        spec.outputs = {Selector::F_t, Selector::F_r};
    };
    const auto g0_sweep = [&spec](double j0, Selector sigma, Selector bound) {
        spec.base.j0 = j0;
        spec.vary = VaryParameter::g0_over_kappa;
        spec.grid = uniform_grid(0.001, 0.02, 101);
        spec.outputs = {sigma, bound};
    };

    if (name == "fig2a") {
        j0_sweep();
        spec.fock_n = {2, 3, 5};
    } else if (name == "fig2b") {
        j0_sweep();
        spec.base.g0 = 0.005;
        spec.fock_n = {2, 3, 5};
    } else if (name == "fig3a") {
        g0_sweep(0.0, Selector::sigma_t, Selector::bound_t);
        spec.fock_n = {2};
    } else if (name == "fig3b") {
        g0_sweep(0.0, Selector::sigma_t, Selector::bound_t);
        spec.fock_n = {5};
    } else if (name == "fig4a") {
        g0_sweep(0.1, Selector::sigma_r, Selector::bound_r);
        spec.fock_n = {2};
    } else if (name == "fig4b") {
        g0_sweep(0.1, Selector::sigma_r, Selector::bound_r);
        spec.fock_n = {5};
    } else if (name == "figA1a") {
        j0_sweep();
        spec.average_d = {2, 3, 5};
    } else if (name == "figA1b") {
        j0_sweep();
        spec.base.g0 = 0.005;
        spec.average_d = {2, 3, 5};
    } else if (name == "figA2a") {
        g0_sweep(0.0, Selector::sigma_t, Selector::avg_bound_t);
        spec.average_d = {3};
    } else if (name == "figA2b") {
        g0_sweep(0.0, Selector::sigma_t, Selector::avg_bound_t);
        spec.average_d = {5};
    } else if (name == "figA3a") {
        g0_sweep(0.1, Selector::sigma_r, Selector::avg_bound_r);
        spec.average_d = {3};
    } else if (name == "figA3b") {
        g0_sweep(0.1, Selector::sigma_r, Selector::avg_bound_r);
        spec.average_d = {5};
    } else {
        std::string names;
        for (const auto& p : preset_names()) names += " " + p;
        throw ValidationError("unknown preset '" + name + "'; expected one of" +
                              names);
    }
    return spec;
}

SwapDemoReport swap_demo(const NetworkConfig& config, int n) {
    config.validate();
    if (n < 0) {
        throw ValidationError("photon number must be >= 0");
    }
    SwapDemoReport report;
    report.config = config;
    report.n = n;
    report.tau = swap_time(config);

    NetworkConfig transmit = config;
    transmit.j0 = 0.0;
    report.uncoupled = fock_fidelities(
        propagator(build_coupling_matrix(transmit), report.tau), n);
    if (config.j0 > 0.0) {
        report.coupled = fock_fidelities(
            propagator(build_coupling_matrix(config), report.tau), n);
        report.has_coupled = true;
    }
    const ModeCouplings mc = mode_couplings(config);
    report.amplitudes =
        effective_boundary_amplitudes(mc.g_z(), mc.z, report.tau);
    return report;
}

void print_swap_demo(const SwapDemoReport& report, std::ostream& out) {
    const NetworkConfig& c = report.config;
    out << "network: N=" << c.N << " m=" << c.m << " kappa=" << format_g(c.kappa)
        << " g0=" << format_g(c.g0) << " j0=" << format_g(c.j0) << "\n";
    out << "input: fock n=" << report.n << "\n";
    out << "tau = " << format_g(report.tau) << "\n";
    out << "j0=0 (transmit):   F_t = " << format_g(report.uncoupled.F_t)
        << "  F_r = " << format_g(report.uncoupled.F_r) << "\n";
    if (report.has_coupled) {
        out << "j0=" << format_g(c.j0)
            << " (reflect): F_t = " << format_g(report.coupled.F_t)
            << "  F_r = " << format_g(report.coupled.F_r) << "\n";
    }
    const auto cx = [](std::complex<double> v) {
        return format_g(v.real()) + (v.imag() < 0 ? " - " : " + ") +
               format_g(std::abs(v.imag())) + "i";
    };
    out << "effective amplitudes at tau: a0 = " << cx(report.amplitudes.a0)
        << "  aN1 = " << cx(report.amplitudes.aN1)
        << "  az = " << cx(report.amplitudes.az) << "\n";
}

}  // namespace cra
