#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "biotfs/fixedstress.hpp"
#include "biotfs/physics.hpp"

namespace biotfs {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class LPolicy { LStar, LStarScaled, Explicit };

/// One experiment: a single fixed-stress time step (or short series) on the
/// manufactured L-shape problem. Deterministic; no seeds.
struct ExperimentConfig {
    PermeabilityModel model{Permeability::Constant, 1e-6, 1e-1};
    double lambda = 1e2;
    double S = 1e-4;
    double tau = 1e-2;
    int mesh_level = 1;  // h = 1/16 * 2^-level
    LPolicy l_policy = LPolicy::LStar;
    double l_scale = 1.0;  // multiplier for LStarScaled
    double l_value = 0.0;  // explicit L
    std::string stop_rule = "increment";  // "increment" | "residual"
    double tol = 1e-6;
    int max_iter = 100;
    int n_steps = 1;
    bool track_errors = false;  // monolithic reference + contraction measurement
    double beta_s = 0.0;        // 0 = estimate on the coarse mesh

    double h() const { return 1.0 / (16 << mesh_level); }
    double resolve_L() const;
    void set(const std::string& key, const std::string& value);  // throws on unknown key
    std::string canonical() const;  // key=value lines, fixed order
    std::uint64_t digest() const;   // FNV-1a over canonical()
    void validate() const;
};

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

/// Base config plus sweep axes; the grid is the cartesian product with the
/// first axis outermost.
struct Sweep {
    ExperimentConfig base;
    std::vector<SweepAxis> axes;
    std::vector<ExperimentConfig> expand() const;
};

Sweep parse_config(std::istream& is);
Sweep parse_config_file(const std::string& path);

/// Flat result row; mirrors the CSV schema exactly.
struct RunRecord {
    std::string model;
    double K0 = 0, K1 = 0, lambda = 0, S = 0, tau = 0, h = 0, L = 0;
    std::string stop_rule;
    int iters = 0;
    bool converged = false;
    double final_increment = 0;
    double final_residual_ratio = 0;
    double measured_contraction = 0;  // NaN unless track_errors
    double theory_bound = 0;          // NaN when constants unavailable
    std::string config_digest;
    std::string error;
};

/// `trace_out`, when given, receives the last executed step's iteration
/// trace (for CSV serialization).
RunRecord run_single(const ExperimentConfig& config, IterationTrace* trace_out = nullptr);

/// Per-iteration trace rows:
/// iter,increment_norm,residual_ratio,ep_l2,eu_energy.
void write_trace_csv(const IterationTrace& trace, std::ostream& os);

/// Runs every config of the grid; rows keep grid order regardless of the
/// worker count. Per-row failures land in RunRecord::error.
std::vector<RunRecord> run_sweep(const std::vector<ExperimentConfig>& grid, int jobs = 1);

void write_csv(const std::vector<RunRecord>& rows, std::ostream& os);
std::vector<RunRecord> read_csv(std::istream& is);  // throws ParseError

struct PlotSpec {
    std::string series_key = "lambda";  // column whose values define the series
    std::string title;
};

/// Iteration-count-vs-h line chart; rows with converged == false leave gaps.
/// Byte-identical output for identical input.
void write_svg_plot(const std::vector<RunRecord>& rows, const PlotSpec& spec,
                    std::ostream& os);

/// Theory-bound report for a list of configs
/// (columns: lambda, tau, L, beta_s, c_inf, k_lip, k_min, bound).
void write_bound_report(const std::vector<ExperimentConfig>& configs, std::ostream& os);

/// Discrete inf-sup constant of the coarse (level 0) mesh, cached per process.
double default_beta_s();
/// sup |grad p_ex| by dense sampling, cached per process.
double default_c_inf();

}  // namespace biotfs
