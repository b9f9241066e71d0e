// Command-line front end: single runs, parameter sweeps, SVG plots,
// theory-bound reports, and the acceptance suite.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "biotfs/experiments.hpp"
#include "biotfs/verify.hpp"

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    const fs::path path = fs::path(dir) / name;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    std::cout << "writing " << path.string() << '\n';
    return os;
}

void print_record(const biotfs::RunRecord& r) {
    std::cout << "model=" << r.model << " K0=" << r.K0 << " lambda=" << r.lambda
              << " tau=" << r.tau << " h=" << r.h << " L=" << r.L
              << " stop=" << r.stop_rule << '\n';
    if (!r.error.empty()) {
        std::cout << "  error: " << r.error << '\n';
        return;
    }
    std::cout << "  iters=" << r.iters << " converged=" << (r.converged ? "yes" : "no")
              << " final_increment=" << r.final_increment
              << " final_residual_ratio=" << r.final_residual_ratio << '\n';
    std::cout << "  measured_contraction=" << r.measured_contraction
              << " theory_bound=" << r.theory_bound << " digest=" << r.config_digest
              << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-stress splitting experiments for nonlinear poroelasticity"};
    app.require_subcommand(1);

    std::string config_path, out_dir, csv_path, svg_path, series = "lambda", title;
    int jobs = 1, max_iter_override = 0;

    std::string trace_path;
    auto* run = app.add_subcommand("run", "run a single configuration");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory (writes run.csv)");
    run->add_option("--trace", trace_path, "write the per-iteration trace CSV here");
    run->add_option("--max-iter", max_iter_override, "override max_iter");

    auto* sweep = app.add_subcommand("sweep", "run a config grid, write CSV");
    sweep->add_option("--config", config_path, "config file with [sweep] sections")
        ->required();
    sweep->add_option("--out", out_dir, "output directory")->required();
    sweep->add_option("--jobs", jobs, "worker threads");
    sweep->add_option("--max-iter", max_iter_override, "override max_iter");

    auto* plot = app.add_subcommand("plot", "render a sweep CSV as an SVG chart");
    plot->add_option("--csv", csv_path, "sweep CSV")->required();
    plot->add_option("--series", series, "column defining the line series");
    plot->add_option("--title", title, "chart title");
    plot->add_option("--out", svg_path, "output SVG path")->required();

    auto* bounds = app.add_subcommand("bounds", "emit the theory-bound report");
    bounds->add_option("--config", config_path, "config file")->required();
    bounds->add_option("--out", out_dir, "output directory (writes bounds.csv)");

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    (void)verify;

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            biotfs::Sweep sw = biotfs::parse_config_file(config_path);
            if (max_iter_override > 0) sw.base.max_iter = max_iter_override;
            biotfs::IterationTrace trace;
            const biotfs::RunRecord rec = biotfs::run_single(sw.base, &trace);
            print_record(rec);
            if (!trace_path.empty()) {
                std::ofstream os(trace_path);
                if (!os) throw std::runtime_error("cannot write " + trace_path);
                biotfs::write_trace_csv(trace, os);
                std::cout << "writing " << trace_path << '\n';
            }
            if (!out_dir.empty()) {
                auto os = open_out(out_dir, "run.csv");
                biotfs::write_csv({rec}, os);
            }
            return rec.error.empty() ? 0 : 1;
        }
        if (sweep->parsed()) {
            biotfs::Sweep sw = biotfs::parse_config_file(config_path);
            if (max_iter_override > 0) sw.base.max_iter = max_iter_override;
            const auto grid = sw.expand();
            std::cout << "running " << grid.size() << " configurations with " << jobs
                      << " job(s)\n";
            const auto rows = biotfs::run_sweep(grid, jobs);
            auto os = open_out(out_dir, "sweep.csv");
            biotfs::write_csv(rows, os);
            int failed = 0;
            for (const auto& r : rows) failed += r.error.empty() ? 0 : 1;
            if (failed) std::cout << failed << " row(s) recorded an error\n";
            return 0;
        }
        if (plot->parsed()) {
            std::ifstream is(csv_path);
            if (!is) throw std::runtime_error("cannot open " + csv_path);
            const auto rows = biotfs::read_csv(is);
            std::ofstream os(svg_path);
            if (!os) throw std::runtime_error("cannot write " + svg_path);
            biotfs::write_svg_plot(rows, {series, title}, os);
            std::cout << "writing " << svg_path << '\n';
            return 0;
        }
        if (bounds->parsed()) {
            biotfs::Sweep sw = biotfs::parse_config_file(config_path);
            if (out_dir.empty()) {
                biotfs::write_bound_report(sw.expand(), std::cout);
            } else {
                auto os = open_out(out_dir, "bounds.csv");
                biotfs::write_bound_report(sw.expand(), os);
            }
            return 0;
        }
        if (verify->parsed()) {
            return biotfs::run_acceptance(std::cout) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
