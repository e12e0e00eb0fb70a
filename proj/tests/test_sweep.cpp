#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cra/sweep.hpp"

using namespace cra;

namespace {

int column_index(const SweepResult& result, const std::string& name) {
    for (size_t i = 1; i < result.header.size(); ++i) {
        if (result.header[i] == name) return static_cast<int>(i) - 1;
    }
    return -1;
}

}  // namespace

TEST_CASE("uniform grid: exact endpoints and spacing") {
    const std::vector<double> grid = uniform_grid(0.0, 0.1, 101);
    REQUIRE(grid.size() == 101);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 0.1);
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        CHECK(grid[i + 1] - grid[i] == doctest::Approx(0.001).epsilon(1e-12));
        CHECK(grid[i] < grid[i + 1]);
    }
    CHECK_THROWS_AS(uniform_grid(0.0, 0.1, 1), GridNotIncreasing);
    CHECK_THROWS_AS(uniform_grid(0.1, 0.1, 5), GridNotIncreasing);
}

TEST_CASE("selector names survive a round trip") {
    for (Selector s :
         {Selector::F_t, Selector::F_r, Selector::sigma_t, Selector::sigma_r,
          Selector::bound_t, Selector::bound_r, Selector::avg_bound_t,
          Selector::avg_bound_r, Selector::mc_F_t, Selector::mc_F_r,
          Selector::mc_err_t, Selector::mc_err_r}) {
        CHECK(parse_selector(selector_name(s)) == s);
    }
    CHECK_THROWS_AS(parse_selector("bogus"), ValidationError);
}

TEST_CASE("sweep spec validation rejects malformed requests") {
    SweepSpec spec;
    spec.base = NetworkConfig{7, 3, 1.0, 0.01, 0.0};
    spec.fock_n = {2};
    spec.outputs = {Selector::F_t};

    spec.grid = {0.0};
    CHECK_THROWS_AS(spec.validate(), GridNotIncreasing);
    spec.grid = {0.1, 0.1};
    CHECK_THROWS_AS(spec.validate(), GridNotIncreasing);
    spec.grid = {0.2, 0.1};
    CHECK_THROWS_AS(spec.validate(), GridNotIncreasing);

    spec.grid = {0.0, 0.1};
    spec.fock_n = {};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.fock_n = {2};
    spec.outputs = {};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.outputs = {Selector::F_t};
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("figure presets expand to the reference grids") {
    const std::vector<std::string> names = preset_names();
    CHECK(names.size() == 12);
    for (const std::string& name : names) CHECK_NOTHROW(figure_preset(name));
    CHECK_THROWS_AS(figure_preset("fig9z"), ValidationError);

    const SweepSpec fig2a = figure_preset("fig2a");
    CHECK(fig2a.vary == VaryParameter::j0_over_kappa);
    REQUIRE(fig2a.grid.size() == 101);
    CHECK(fig2a.grid.front() == 0.0);
    CHECK(fig2a.grid.back() == 0.1);
    CHECK(fig2a.base.g0 == 0.01);
    CHECK(fig2a.fock_n == std::vector<int>{2, 3, 5});
    CHECK(fig2a.average_d.empty());
    CHECK(fig2a.outputs == std::vector<Selector>{Selector::F_t, Selector::F_r});
    CHECK(fig2a.use_swap_time);

    CHECK(figure_preset("fig2b").base.g0 == 0.005);

    const SweepSpec fig3a = figure_preset("fig3a");
    CHECK(fig3a.vary == VaryParameter::g0_over_kappa);
    CHECK(fig3a.grid.front() == 0.001);
    CHECK(fig3a.grid.back() == 0.02);
    CHECK(fig3a.base.j0 == 0.0);
    CHECK(fig3a.fock_n == std::vector<int>{2});
    CHECK(fig3a.outputs ==
          std::vector<Selector>{Selector::sigma_t, Selector::bound_t});

    const SweepSpec figA3b = figure_preset("figA3b");
    CHECK(figA3b.base.j0 == 0.1);
    CHECK(figA3b.average_d == std::vector<int>{5});
    CHECK(figA3b.outputs ==
          std::vector<Selector>{Selector::sigma_r, Selector::avg_bound_r});
}

TEST_CASE("coupling sweep reproduces the switch between regimes") {
    const SweepResult result = run_sweep(figure_preset("fig2a"), 4);
    REQUIRE(result.rows.size() == 101);
    REQUIRE(result.header.size() == 7);
    CHECK(result.header ==
          std::vector<std::string>{"vary", "F_t[n=2]", "F_r[n=2]", "F_t[n=3]",
                                   "F_r[n=3]", "F_t[n=5]", "F_r[n=5]"});

    const int ft2 = column_index(result, "F_t[n=2]");
    const int fr2 = column_index(result, "F_r[n=2]");
    const int ft5 = column_index(result, "F_t[n=5]");
    const int fr5 = column_index(result, "F_r[n=5]");
    const SweepRow& first = result.rows.front();
    const SweepRow& last = result.rows.back();

    CHECK(first.vary_value == 0.0);
    CHECK(first.columns[ft2] ==
          doctest::Approx(0.9998032042149485).epsilon(1e-10));
    CHECK(first.columns[ft5] ==
          doctest::Approx(0.999508083151079).epsilon(1e-10));
    CHECK(first.columns[fr2] <= 1e-10);

    CHECK(last.vary_value == 0.1);
    CHECK(last.columns[fr2] ==
          doctest::Approx(0.9266066997124436).epsilon(1e-10));
    CHECK(last.columns[fr5] ==
          doctest::Approx(0.826491877793783).epsilon(1e-10));
    CHECK(last.columns[ft2] <= 1e-2);

    // reflection fidelity grows along the sweep at the two sampled ends
    CHECK(first.columns[fr2] < last.columns[fr2]);
}

TEST_CASE("csv serialization: exact header, LF endings, fixed precision") {
    SweepSpec spec = figure_preset("fig3a");
    const std::string csv = to_csv(run_sweep(spec, 2));

    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header == "vary,sigma_t[n=2],bound_t[n=2]");
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.back() == '\n');
    CHECK(csv.substr(header.size() + 1, 6) == "0.001,");

    int lines = 0;
    for (char c : csv) lines += (c == '\n');
    CHECK(lines == 102);
}

TEST_CASE("worker count never changes the result") {
    const SweepSpec spec = figure_preset("fig4a");
    const std::string one = to_csv(run_sweep(spec, 1));
    CHECK(to_csv(run_sweep(spec, 3)) == one);
    CHECK(to_csv(run_sweep(spec, 8)) == one);
}

TEST_CASE("monte carlo columns are deterministic across workers") {
    SweepSpec spec;
    spec.base = NetworkConfig{7, 3, 1.0, 0.01, 0.0};
    spec.vary = VaryParameter::j0_over_kappa;
    spec.grid = {0.05, 0.1};
    spec.average_d = {2};
    spec.outputs = {Selector::mc_F_t, Selector::mc_err_t, Selector::F_t};
    spec.mc_samples = 8192;
    spec.seed = 20240917;

    const std::string one = to_csv(run_sweep(spec, 1));
    CHECK(to_csv(run_sweep(spec, 3)) == one);
    CHECK(to_csv(run_sweep(spec, 8)) == one);

    // estimator lands near the closed form
    const SweepResult result = run_sweep(spec, 4);
    const int mc = column_index(result, "mc_F_t[d=2]");
    const int err = column_index(result, "mc_err_t[d=2]");
    const int exact = column_index(result, "F_t[d=2]");
    REQUIRE(mc >= 0);
    REQUIRE(err >= 0);
    REQUIRE(exact >= 0);
    for (const SweepRow& row : result.rows) {
        CHECK(std::abs(row.columns[mc] - row.columns[exact]) <=
              5.0 * row.columns[err]);
    }

    SweepSpec reseeded = spec;
    reseeded.seed = 1;
    CHECK(to_csv(run_sweep(reseeded, 1)) != one);
}

TEST_CASE("config text parsing round-trips every field") {
    const std::string text =
        "# demo configuration\n"
        "N = 5\n"
        "m = 1\n"
        "kappa = 2.0\n"
        "g0 = 0.02\n"
        "j0 = 0.05\n"
        "time = tau\n"
        "n_list = 2,3\n"
        "d_list = 4\n"
        "vary = g0_over_kappa\n"
        "grid_start = 0.002\n"
        "grid_stop = 0.01\n"
        "grid_points = 5\n"
        "mc_samples = 4096\n"
        "seed = 99\n";
    const SweepSpec spec = parse_config_text(text);
    CHECK(spec.base.N == 5);
    CHECK(spec.base.m == 1);
    CHECK(spec.base.kappa == 2.0);
    CHECK(spec.base.g0 == 0.02);
    CHECK(spec.base.j0 == 0.05);
    CHECK(spec.use_swap_time);
    CHECK(spec.fock_n == std::vector<int>{2, 3});
    CHECK(spec.average_d == std::vector<int>{4});
    CHECK(spec.vary == VaryParameter::g0_over_kappa);
    REQUIRE(spec.grid.size() == 5);
    CHECK(spec.grid.front() == 0.002);
    CHECK(spec.grid.back() == 0.01);
    CHECK(spec.mc_samples == 4096);
    CHECK(spec.seed == 99);
    CHECK_NOTHROW(spec.validate());

    const SweepSpec timed = parse_config_text("n_list = 1\ntime = 450\n");
    CHECK(!timed.use_swap_time);
    CHECK(timed.time == 450.0);

    CHECK_THROWS_AS(parse_config_text("bogus = 3\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("N 7\n"), ValidationError);
}

TEST_CASE("default outputs only include bounds valid across the grid") {
    const auto has = [](const SweepSpec& spec, Selector wanted) {
        for (Selector s : spec.outputs) {
            if (s == wanted) return true;
        }
        return false;
    };

    // j0 sweep from 0 crosses regimes: fidelity columns only, and verify
    // refuses the spec instead of checking an inapplicable bound
    const SweepSpec plain = parse_config_text("n_list = 2\n");
    CHECK(!has(plain, Selector::bound_t));
    CHECK(!has(plain, Selector::bound_r));
    CHECK(has(plain, Selector::F_t));
    CHECK(has(plain, Selector::sigma_r));
    CHECK_THROWS_AS(verify_bounds(plain, 1), ValidationError);

    // g0 sweep with the aux off: transmission bound only
    const SweepSpec transmit = parse_config_text(
        "n_list = 2\nvary = g0_over_kappa\n"
        "grid_start = 0.001\ngrid_stop = 0.02\n");
    CHECK(has(transmit, Selector::bound_t));
    CHECK(!has(transmit, Selector::bound_r));

    // g0 sweep with fixed j0 > 0: reflection bound only
    const SweepSpec reflect = parse_config_text(
        "n_list = 5\nd_list = 5\nj0 = 0.1\nvary = g0_over_kappa\n"
        "grid_start = 0.001\ngrid_stop = 0.02\n");
    CHECK(!has(reflect, Selector::bound_t));
    CHECK(has(reflect, Selector::bound_r));
    CHECK(!has(reflect, Selector::avg_bound_t));
    CHECK(has(reflect, Selector::avg_bound_r));

    // end to end: the reflect-regime config verifies cleanly for n = d = 5
    const VerifyReport report = verify_bounds(reflect, 4);
    CHECK(report.passed);
    CHECK(report.violations.empty());
}

TEST_CASE("verify: transmission and n=5 reflection grids satisfy the bounds") {
    for (const char* name : {"fig3a", "fig3b", "fig4b", "figA2a", "figA2b",
                             "figA3b"}) {
        const VerifyReport report = verify_bounds(figure_preset(name), 4);
        CHECK(report.passed);
        CHECK(report.violations.empty());
        CHECK(report.points == 101);
        CHECK(report.checks == 101);
        CHECK(report.message().find("verified") == 0);
    }
}

TEST_CASE("verify: the n=2 reflection grid has one violating point") {
    const VerifyReport report = verify_bounds(figure_preset("fig4a"), 4);
    CHECK(!report.passed);
    REQUIRE(report.violations.size() == 1);
    const BoundViolation& v = report.violations.front();
    CHECK(v.vary_value == doctest::Approx(0.00214).epsilon(1e-9));
    CHECK(v.column == "bound_r[n=2]");
    CHECK(v.sigma == doctest::Approx(0.0036646462811388281).epsilon(1e-10));
    CHECK(v.bound == doctest::Approx(0.0036636799999999995).epsilon(1e-10));
    CHECK(v.sigma > v.bound);
    CHECK(report.message().find("bound violated at vary=0.00214") == 0);
}

TEST_CASE("verify: the d=3 averaged reflection grid has one violating point") {
    const VerifyReport report = verify_bounds(figure_preset("figA3a"), 4);
    CHECK(!report.passed);
    REQUIRE(report.violations.size() == 1);
    const BoundViolation& v = report.violations.front();
    CHECK(v.vary_value == doctest::Approx(0.00214).epsilon(1e-9));
    CHECK(v.column == "avg_bound_r[d=3]");
    CHECK(v.sigma == doctest::Approx(0.001375083248975284).epsilon(1e-10));
    CHECK(v.bound == doctest::Approx(0.0013738799999999998).epsilon(1e-10));
}

TEST_CASE("verify: scaled-down bounds flag every point") {
    const VerifyReport report = verify_bounds(figure_preset("fig3a"), 4, 0.01);
    CHECK(!report.passed);
    CHECK(report.violations.size() >= 1);
    const BoundViolation& v = report.violations.front();
    CHECK(v.sigma > v.bound);
    CHECK(v.column == "bound_t[n=2]");
}

TEST_CASE("verify: rejects specs without bound columns") {
    SweepSpec spec = figure_preset("fig2a");
    CHECK_THROWS_AS(verify_bounds(spec, 1), ValidationError);
}

TEST_CASE("swap demo covers both regimes") {
    const SwapDemoReport transmit = swap_demo({7, 3, 1.0, 0.01, 0.0}, 3);
    CHECK(transmit.tau == doctest::Approx(444.28829381583654).epsilon(1e-12));
    CHECK(!transmit.has_coupled);
    CHECK(transmit.uncoupled.F_t >= 0.998);
    CHECK(std::abs(transmit.amplitudes.a0) <= 1e-12);
    CHECK(std::abs(std::abs(transmit.amplitudes.aN1) - 1.0) <= 1e-12);

    const SwapDemoReport reflect = swap_demo({7, 3, 1.0, 0.01, 0.1}, 2);
    REQUIRE(reflect.has_coupled);
    CHECK(reflect.coupled.F_r ==
          doctest::Approx(0.9266066997124436).epsilon(1e-10));
    CHECK(reflect.uncoupled.F_t >= 0.999);

    const SwapDemoReport vacuum = swap_demo({7, 3, 1.0, 0.01, 0.0}, 0);
    CHECK(vacuum.uncoupled.F_t == 1.0);
    CHECK(vacuum.uncoupled.F_r == 1.0);

    std::ostringstream out;
    print_swap_demo(reflect, out);
    const std::string text = out.str();
    CHECK(text.find("tau = 444.288293816") != std::string::npos);
    CHECK(text.find("F_t") != std::string::npos);
    CHECK(text.find("(reflect)") != std::string::npos);
}
