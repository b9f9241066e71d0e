#include <doctest.h>

#include <cmath>
#include <sstream>

#include "biotfs/experiments.hpp"

using namespace biotfs;

namespace {

const char* kSampleConfig = R"(# sample experiment
model = quadratic_div
K0 = 1e-6
K1 = 1e-1
lambda = 1e2
S = 1e-4
tau = 1e-2
mesh_level = 0
L_policy = lstar
stop_rule = increment
tol = 1e-6
max_iter = 100

[sweep lambda]
values = 1e1 1e2

[sweep mesh_level]
values = 0 1
)";

}  // namespace

TEST_CASE("config parsing, expansion and digesting") {
    std::istringstream is(kSampleConfig);
    const Sweep sweep = parse_config(is);
    CHECK(sweep.base.model.variant == Permeability::QuadraticDiv);
    CHECK(sweep.base.lambda == 1e2);
    CHECK(sweep.base.h() == 1.0 / 16);
    REQUIRE(sweep.axes.size() == 2);

    const auto grid = sweep.expand();
    REQUIRE(grid.size() == 4);
    // first axis outermost
    CHECK(grid[0].lambda == 1e1);
    CHECK(grid[0].mesh_level == 0);
    CHECK(grid[1].lambda == 1e1);
    CHECK(grid[1].mesh_level == 1);
    CHECK(grid[2].lambda == 1e2);

    // digests separate configs and are stable
    CHECK(grid[0].digest() != grid[1].digest());
    CHECK(grid[0].digest() == grid[0].digest());
}

TEST_CASE("config errors carry line numbers") {
    std::istringstream bad1("model = quadratic_div\nwhat_is_this = 3\n");
    CHECK_THROWS_AS(parse_config(bad1), ParseError);
    try {
        std::istringstream bad2("model = quadratic_div\nwhat_is_this = 3\n");
        parse_config(bad2);
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream bad3("tau 0.5\n");
    CHECK_THROWS_AS(parse_config(bad3), ParseError);
    std::istringstream bad4("[sweep]\nvalues = 1\n");
    CHECK_THROWS_AS(parse_config(bad4), ParseError);
}

TEST_CASE("L policies resolve against L*") {
    ExperimentConfig cfg;
    cfg.lambda = 1e2;
    cfg.l_policy = LPolicy::LStar;
    CHECK(cfg.resolve_L() == doctest::Approx(1.0 / 100.5).epsilon(1e-15));
    cfg.l_policy = LPolicy::LStarScaled;
    cfg.l_scale = 2.0;
    CHECK(cfg.resolve_L() == doctest::Approx(2.0 / 100.5).epsilon(1e-15));
    cfg.l_policy = LPolicy::Explicit;
    cfg.l_value = 0.125;
    CHECK(cfg.resolve_L() == 0.125);
}

TEST_CASE("run_single produces a converged record on the linear model") {
    ExperimentConfig cfg;
    cfg.model = {Permeability::Constant, 1e-6, 0.0};
    cfg.mesh_level = 0;
    IterationTrace trace;
    const RunRecord rec = run_single(cfg, &trace);
    CHECK(rec.converged);
    CHECK(rec.error.empty());
    CHECK(rec.iters > 0);
    CHECK(rec.final_increment < cfg.tol);
    CHECK(std::isnan(rec.measured_contraction));  // not tracked by default
    CHECK(rec.theory_bound > 0.0);
    CHECK(rec.theory_bound < 1.0);
    CHECK(rec.config_digest.size() == 16);

    CHECK(static_cast<int>(trace.records.size()) == rec.iters);
    std::ostringstream os;
    write_trace_csv(trace, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "iter,increment_norm,residual_ratio,ep_l2,eu_energy");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == rec.iters);
}

TEST_CASE("empty grid gives a header-only CSV") {
    std::ostringstream os;
    write_csv({}, os);
    std::istringstream is(os.str());
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) ++lines;
    CHECK(lines == 1);
    std::istringstream back(os.str());
    CHECK(read_csv(back).empty());
}

TEST_CASE("CSV round trip reproduces records exactly") {
    std::vector<ExperimentConfig> grid;
    for (int level : {0, 0}) {
        ExperimentConfig cfg;
        cfg.model = {Permeability::QuadraticDiv, 1e-6, 1e-1};
        cfg.mesh_level = level;
        cfg.track_errors = grid.empty();  // one row with NaN contraction, one without
        grid.push_back(cfg);
    }
    grid[1].track_errors = false;
    const auto rows = run_sweep(grid, 2);

    std::ostringstream os;
    write_csv(rows, os);
    std::istringstream is(os.str());
    const auto parsed = read_csv(is);
    REQUIRE(parsed.size() == rows.size());
    auto same = [](double a, double b) {
        return (std::isnan(a) && std::isnan(b)) || a == b;
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].model == parsed[i].model);
        CHECK(same(rows[i].K0, parsed[i].K0));
        CHECK(same(rows[i].h, parsed[i].h));
        CHECK(same(rows[i].L, parsed[i].L));
        CHECK(rows[i].iters == parsed[i].iters);
        CHECK(rows[i].converged == parsed[i].converged);
        CHECK(same(rows[i].final_increment, parsed[i].final_increment));
        CHECK(same(rows[i].final_residual_ratio, parsed[i].final_residual_ratio));
        CHECK(same(rows[i].measured_contraction, parsed[i].measured_contraction));
        CHECK(same(rows[i].theory_bound, parsed[i].theory_bound));
        CHECK(rows[i].config_digest == parsed[i].config_digest);
    }
}

TEST_CASE("malformed CSV reports the offending line") {
    std::istringstream is("bogus header\n");
    CHECK_THROWS_AS(read_csv(is), ParseError);
}

TEST_CASE("sweep rows keep grid order under concurrency") {
    std::vector<ExperimentConfig> grid;
    for (double lambda : {1e1, 1e2, 1e3}) {
        ExperimentConfig cfg;
        cfg.model = {Permeability::Constant, 1e-6, 0.0};
        cfg.mesh_level = 0;
        cfg.lambda = lambda;
        grid.push_back(cfg);
    }
    const auto serial = run_sweep(grid, 1);
    const auto parallel = run_sweep(grid, 3);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].lambda == parallel[i].lambda);
        CHECK(serial[i].iters == parallel[i].iters);
        CHECK(serial[i].final_increment == parallel[i].final_increment);
        CHECK(serial[i].config_digest == parallel[i].config_digest);
    }
}

TEST_CASE("SVG plots are deterministic and leave gaps at failed runs") {
    std::vector<RunRecord> rows;
    for (int i = 0; i < 4; ++i) {
        RunRecord r;
        r.model = "constant";
        r.lambda = 1e2;
        r.h = 1.0 / (16 << i);
        r.stop_rule = "increment";
        r.iters = 20 + i;
        r.converged = i != 2;  // gap in the middle
        r.config_digest = "0";
        rows.push_back(r);
    }
    std::ostringstream a, b;
    write_svg_plot(rows, {"lambda", "test"}, a);
    write_svg_plot(rows, {"lambda", "test"}, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("<svg", 0) == 0);
    // three markers, not four
    std::size_t markers = 0, pos = 0;
    while ((pos = a.str().find("<circle", pos)) != std::string::npos) {
        ++markers;
        pos += 7;
    }
    CHECK(markers == 3);
    // the non-converged point breaks the line: only the first two points are
    // joined, the trailing isolated point keeps its marker without a path
    std::size_t paths = 0;
    pos = 0;
    while ((pos = a.str().find("<path", pos)) != std::string::npos) {
        ++paths;
        pos += 5;
    }
    CHECK(paths == 1);
    CHECK(a.str().find(" M") == std::string::npos);  // no mid-path moves

    // single-row chart still renders one marker
    std::vector<RunRecord> one{rows[0]};
    std::ostringstream c;
    write_svg_plot(one, {"lambda", ""}, c);
    markers = 0;
    pos = 0;
    while ((pos = c.str().find("<circle", pos)) != std::string::npos) {
        ++markers;
        pos += 7;
    }
    CHECK(markers == 1);
}

TEST_CASE("bound report emits one row per config") {
    std::vector<ExperimentConfig> configs;
    ExperimentConfig a;
    a.model = {Permeability::QuadraticDiv, 1e-6, 1e-1};
    a.beta_s = 0.4;  // avoid the coarse-mesh estimate in unit tests
    configs.push_back(a);
    ExperimentConfig b;
    b.model = {Permeability::SquaredAffine, 1e-6, 1e-1};  // k_min = 0 on [-1,1]
    b.beta_s = 0.4;
    configs.push_back(b);

    std::ostringstream os;
    write_bound_report(configs, os);
    std::istringstream is(os.str());
    std::string header, row1, row2;
    std::getline(is, header);
    CHECK(header == "lambda,tau,L,beta_s,c_inf,k_lip,k_min,bound");
    REQUIRE(std::getline(is, row1));
    REQUIRE(std::getline(is, row2));
    CHECK(row1.find("nan") == std::string::npos);
    CHECK(row2.find("nan") != std::string::npos);  // assumption violated on range
}
