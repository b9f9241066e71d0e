#include "biotfs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "biotfs/fixedstress.hpp"
#include "biotfs/manufactured.hpp"
#include "biotfs/theory.hpp"

namespace biotfs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw std::invalid_argument("not an integer: '" + s + "'");
    return static_cast<int>(v);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

const char* l_policy_name(LPolicy p) {
    switch (p) {
        case LPolicy::LStar: return "lstar";
        case LPolicy::LStarScaled: return "lstar_scaled";
        case LPolicy::Explicit: return "explicit";
    }
    return "?";
}

}  // namespace

double ExperimentConfig::resolve_L() const {
    switch (l_policy) {
        case LPolicy::LStar: return l_star(lambda, 2);
        case LPolicy::LStarScaled: return l_scale * l_star(lambda, 2);
        case LPolicy::Explicit: return l_value;
    }
    return 0.0;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "model") model.variant = permeability_from_name(value);
    else if (key == "K0") model.K0 = parse_double(value);
    else if (key == "K1") model.K1 = parse_double(value);
    else if (key == "lambda") lambda = parse_double(value);
    else if (key == "S") S = parse_double(value);
    else if (key == "tau") tau = parse_double(value);
    else if (key == "mesh_level") mesh_level = parse_int(value);
    else if (key == "L_policy") {
        if (value == "lstar") l_policy = LPolicy::LStar;
        else if (value == "lstar_scaled") l_policy = LPolicy::LStarScaled;
        else if (value == "explicit") l_policy = LPolicy::Explicit;
        else throw std::invalid_argument("unknown L_policy: '" + value + "'");
    } else if (key == "L_scale") l_scale = parse_double(value);
    else if (key == "L_value") l_value = parse_double(value);
    else if (key == "stop_rule") {
        if (value != "increment" && value != "residual")
            throw std::invalid_argument("unknown stop_rule: '" + value + "'");
        stop_rule = value;
    } else if (key == "tol") tol = parse_double(value);
    else if (key == "max_iter") max_iter = parse_int(value);
    else if (key == "n_steps") n_steps = parse_int(value);
    else if (key == "track_errors") {
        if (value == "on") track_errors = true;
        else if (value == "off") track_errors = false;
        else throw std::invalid_argument("track_errors must be on or off");
    } else if (key == "beta_s") {
        beta_s = (value == "auto") ? 0.0 : parse_double(value);
    } else {
        throw std::invalid_argument("unknown config key: '" + key + "'");
    }
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os << "model=" << permeability_name(model.variant) << '\n'
       << "K0=" << fmt(model.K0) << '\n'
       << "K1=" << fmt(model.K1) << '\n'
       << "lambda=" << fmt(lambda) << '\n'
       << "S=" << fmt(S) << '\n'
       << "tau=" << fmt(tau) << '\n'
       << "mesh_level=" << mesh_level << '\n'
       << "L_policy=" << l_policy_name(l_policy) << '\n'
       << "L_scale=" << fmt(l_scale) << '\n'
       << "L_value=" << fmt(l_value) << '\n'
       << "stop_rule=" << stop_rule << '\n'
       << "tol=" << fmt(tol) << '\n'
       << "max_iter=" << max_iter << '\n'
       << "n_steps=" << n_steps << '\n'
       << "track_errors=" << (track_errors ? "on" : "off") << '\n'
       << "beta_s=" << fmt(beta_s) << '\n';
    return os.str();
}

std::uint64_t ExperimentConfig::digest() const {
    const std::string s = canonical();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void ExperimentConfig::validate() const {
    if (model.K0 <= 0.0) throw std::invalid_argument("config: K0 must be > 0");
    if (lambda < 0.0) throw std::invalid_argument("config: lambda must be >= 0");
    if (S < 0.0) throw std::invalid_argument("config: S must be >= 0");
    if (tau <= 0.0) throw std::invalid_argument("config: tau must be > 0");
    if (mesh_level < 0) throw std::invalid_argument("config: mesh_level must be >= 0");
    if (resolve_L() <= 0.0) throw std::invalid_argument("config: L must resolve to > 0");
    if (tol <= 0.0 || tol >= 1.0) throw std::invalid_argument("config: tol in (0,1)");
    if (max_iter < 1) throw std::invalid_argument("config: max_iter must be >= 1");
    if (n_steps < 1) throw std::invalid_argument("config: n_steps must be >= 1");
    if (beta_s < 0.0) throw std::invalid_argument("config: beta_s must be >= 0");
}

std::vector<ExperimentConfig> Sweep::expand() const {
    std::vector<ExperimentConfig> grid{base};
    for (const SweepAxis& axis : axes) {
        std::vector<ExperimentConfig> next;
        next.reserve(grid.size() * axis.values.size());
        for (const ExperimentConfig& g : grid)
            for (const std::string& v : axis.values) {
                ExperimentConfig c = g;
                c.set(axis.key, v);
                next.push_back(std::move(c));
            }
        grid = std::move(next);
    }
    return grid;
}

Sweep parse_config(std::istream& is) {
    Sweep sweep;
    std::string line;
    int lineno = 0;
    SweepAxis* current_axis = nullptr;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(lineno, "unterminated section header");
            const std::string inner = trim(line.substr(1, line.size() - 2));
            if (inner.rfind("sweep", 0) != 0)
                throw ParseError(lineno, "unknown section '" + inner + "'");
            const std::string key = trim(inner.substr(5));
            if (key.empty()) throw ParseError(lineno, "sweep section needs a key");
            sweep.axes.push_back({key, {}});
            current_axis = &sweep.axes.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (current_axis) {
                if (key != "values")
                    throw std::invalid_argument("sweep sections only take 'values'");
                std::istringstream vs(value);
                std::string tok;
                while (vs >> tok) {
                    ExperimentConfig probe = sweep.base;  // validate key/value early
                    probe.set(current_axis->key, tok);
                    current_axis->values.push_back(tok);
                }
                if (current_axis->values.empty())
                    throw std::invalid_argument("empty values list");
            } else {
                sweep.base.set(key, value);
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(lineno, e.what());
        }
    }
    return sweep;
}

Sweep parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(is);
}

double default_beta_s() {
    static const double value = [] {
        const Mesh mesh = Mesh::build_lshape(0);
        const FunctionSpace u_space(mesh, SpaceKind::VectorP2);
        const FunctionSpace p_space(mesh, SpaceKind::ScalarP1);
        return estimate_inf_sup(mesh, u_space, p_space);
    }();
    return value;
}

double default_c_inf() {
    static const double value = manufactured::pressure_gradient_sup();
    return value;
}

namespace {

double bound_for(const ExperimentConfig& cfg, double* beta_out = nullptr,
                 double* k_lip_out = nullptr, double* k_min_out = nullptr) {
    const double beta = cfg.beta_s > 0.0 ? cfg.beta_s : default_beta_s();
    if (beta_out) *beta_out = beta;
    try {
        const AssumptionConstants ac = assumption_constants(cfg.model, -1.0, 1.0);
        if (k_lip_out) *k_lip_out = ac.k_lip;
        if (k_min_out) *k_min_out = ac.k_min;
        const TheoryConstants tc =
            make_theory_constants(cfg.lambda, cfg.resolve_L(), beta, default_c_inf(), ac);
        return contraction_bound(tc, cfg.tau);
    } catch (const ConductivityError&) {
        if (k_lip_out) *k_lip_out = kNaN;
        if (k_min_out) *k_min_out = kNaN;
        return kNaN;  // assumption violated on the dilation range
    }
}

RunRecord record_skeleton(const ExperimentConfig& cfg) {
    RunRecord r;
    r.model = permeability_name(cfg.model.variant);
    r.K0 = cfg.model.K0;
    r.K1 = cfg.model.K1;
    r.lambda = cfg.lambda;
    r.S = cfg.S;
    r.tau = cfg.tau;
    r.h = cfg.h();
    r.L = cfg.resolve_L();
    r.stop_rule = cfg.stop_rule;
    r.measured_contraction = kNaN;
    r.theory_bound = kNaN;
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(cfg.digest()));
    r.config_digest = buf;
    return r;
}

}  // namespace

RunRecord run_single(const ExperimentConfig& cfg, IterationTrace* trace_out) {
    cfg.validate();
    RunRecord rec = record_skeleton(cfg);
    rec.theory_bound = bound_for(cfg);

    const Mesh mesh = Mesh::build_lshape(cfg.mesh_level);
    const FunctionSpace u_space(mesh, SpaceKind::VectorP2);
    const FunctionSpace p_space(mesh, SpaceKind::ScalarP1);

    ModelParameters params;
    params.lambda = cfg.lambda;
    params.S = cfg.S;
    params.tau = cfg.tau;
    params.L = cfg.resolve_L();

    StoppingRule stop;
    stop.kind = cfg.stop_rule == "residual" ? StoppingRule::Kind::ResidualRatio
                                            : StoppingRule::Kind::Increment;
    stop.tol = cfg.tol;
    stop.max_iter = cfg.max_iter;

    const double lam = cfg.lambda, tau = cfg.tau, K0 = cfg.model.K0, S = cfg.S;
    StepData data;
    data.f = [lam](double x, double y) { return manufactured::body_force(x, y, lam); };
    data.g = [tau, K0, S](double x, double y) {
        return manufactured::flow_source(x, y, tau, K0, S);
    };

    StepState prev = zero_state(u_space, p_space);

    // reference for error tracking (first step only)
    StepState reference;
    bool have_reference = false;
    if (cfg.track_errors) {
        reference = monolithic_solve(prev, params, cfg.model, data).state;
        have_reference = true;
    }

    StepResult result;
    for (int step = 0; step < cfg.n_steps; ++step) {
        StepData step_data = data;
        if (step > 0) {
            // subsequent steps: stationary source tau*g_tilde plus the
            // previous discrete state
            step_data.g = [tau, K0](double x, double y) {
                return -tau * K0 * manufactured::pressure_laplacian(x, y);
            };
            step_data.prev_u = &prev.u;
            step_data.prev_p = &prev.p;
        }
        result = fixed_stress_step(prev, params, cfg.model, step_data, stop, nullptr,
                                   step == 0 && have_reference ? &reference : nullptr);
        if (result.trace.status == StepStatus::ConductivityBreakdown) {
            rec.error = result.trace.diagnostic;
            std::replace(rec.error.begin(), rec.error.end(), ',', ';');
            rec.iters = result.trace.iterations;
            rec.converged = false;
            if (trace_out) *trace_out = result.trace;
            return rec;
        }
        if (step == 0 && have_reference) {
            const auto& recs = result.trace.records;
            double worst = 0.0;
            for (std::size_t k = 1; k < recs.size(); ++k) {
                if (recs[k - 1].ep_l2 <= 0.0) continue;
                worst = std::max(worst, recs[k].ep_l2 / recs[k - 1].ep_l2);
            }
            rec.measured_contraction = recs.size() > 1 ? worst : kNaN;
        }
        prev = result.state;
    }

    rec.iters = result.trace.iterations;
    rec.converged = result.trace.converged;
    if (!result.trace.records.empty()) {
        rec.final_increment = result.trace.records.back().increment_norm;
        rec.final_residual_ratio = result.trace.records.back().residual_ratio;
    }
    if (trace_out) *trace_out = result.trace;
    return rec;
}

void write_trace_csv(const IterationTrace& trace, std::ostream& os) {
    os << "iter,increment_norm,residual_ratio,ep_l2,eu_energy\n";
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        const IterationRecord& r = trace.records[k];
        os << (k + 1) << ',' << fmt(r.increment_norm) << ',' << fmt(r.residual_ratio)
           << ',' << fmt(r.ep_l2) << ',' << fmt(r.eu_energy) << '\n';
    }
}

std::vector<RunRecord> run_sweep(const std::vector<ExperimentConfig>& grid, int jobs) {
    std::vector<RunRecord> out(grid.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) break;
            try {
                out[i] = run_single(grid[i]);
            } catch (const std::exception& e) {
                out[i] = record_skeleton(grid[i]);
                out[i].error = e.what();
                std::replace(out[i].error.begin(), out[i].error.end(), ',', ';');
            }
        }
    };
    if (jobs <= 1) {
        work();
    } else {
        // warm the shared caches before spawning workers
        default_beta_s();
        default_c_inf();
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return out;
}

namespace {

const char* kCsvHeader =
    "model,K0,K1,lambda,S,tau,h,L,stop_rule,iters,converged,final_increment,"
    "final_residual_ratio,measured_contraction,theory_bound,config_digest,error";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_csv(const std::vector<RunRecord>& rows, std::ostream& os) {
    os << kCsvHeader << '\n';
    for (const RunRecord& r : rows) {
        os << r.model << ',' << fmt(r.K0) << ',' << fmt(r.K1) << ',' << fmt(r.lambda)
           << ',' << fmt(r.S) << ',' << fmt(r.tau) << ',' << fmt(r.h) << ',' << fmt(r.L)
           << ',' << r.stop_rule << ',' << r.iters << ','
           << (r.converged ? "true" : "false") << ',' << fmt(r.final_increment) << ','
           << fmt(r.final_residual_ratio) << ',' << fmt(r.measured_contraction) << ','
           << fmt(r.theory_bound) << ',' << r.config_digest << ',' << r.error << '\n';
    }
}

std::vector<RunRecord> read_csv(std::istream& is) {
    std::string line;
    int lineno = 0;
    if (!std::getline(is, line)) throw ParseError(1, "empty CSV");
    ++lineno;
    if (trim(line) != kCsvHeader) throw ParseError(1, "unexpected CSV header");
    std::vector<RunRecord> rows;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 17) throw ParseError(lineno, "expected 17 fields");
        try {
            RunRecord r;
            r.model = f[0];
            r.K0 = parse_double(f[1]);
            r.K1 = parse_double(f[2]);
            r.lambda = parse_double(f[3]);
            r.S = parse_double(f[4]);
            r.tau = parse_double(f[5]);
            r.h = parse_double(f[6]);
            r.L = parse_double(f[7]);
            r.stop_rule = f[8];
            r.iters = parse_int(f[9]);
            if (f[10] != "true" && f[10] != "false")
                throw std::invalid_argument("converged must be true/false");
            r.converged = f[10] == "true";
            r.final_increment = parse_double(f[11]);
            r.final_residual_ratio = parse_double(f[12]);
            r.measured_contraction = parse_double(f[13]);
            r.theory_bound = parse_double(f[14]);
            r.config_digest = f[15];
            r.error = f[16];
            rows.push_back(std::move(r));
        } catch (const std::invalid_argument& e) {
            throw ParseError(lineno, e.what());
        }
    }
    return rows;
}

namespace {

std::string field_as_string(const RunRecord& r, const std::string& key) {
    char buf[40];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    if (key == "model") return r.model;
    if (key == "K0") return num(r.K0);
    if (key == "K1") return num(r.K1);
    if (key == "lambda") return num(r.lambda);
    if (key == "S") return num(r.S);
    if (key == "tau") return num(r.tau);
    if (key == "h") return num(r.h);
    if (key == "L") return num(r.L);
    if (key == "stop_rule") return r.stop_rule;
    throw std::invalid_argument("unknown series key: '" + key + "'");
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_svg_plot(const std::vector<RunRecord>& rows, const PlotSpec& spec,
                    std::ostream& os) {
    // distinct h values, coarse to fine
    std::vector<double> hs;
    for (const auto& r : rows)
        if (std::find(hs.begin(), hs.end(), r.h) == hs.end()) hs.push_back(r.h);
    std::sort(hs.rbegin(), hs.rend());

    // series in order of first appearance
    std::vector<std::string> series;
    for (const auto& r : rows) {
        const std::string v = field_as_string(r, spec.series_key);
        if (std::find(series.begin(), series.end(), v) == series.end())
            series.push_back(v);
    }

    int max_iters = 1;
    for (const auto& r : rows)
        if (r.converged) max_iters = std::max(max_iters, r.iters);
    const int y_top = ((max_iters + 9) / 10) * 10;

    const double width = 640, height = 440;
    const double ml = 64, mr = 160, mt = 40, mb = 56;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto xpos = [&](double h) {
        if (hs.size() == 1) return ml + 0.5 * pw;
        double t = 0.0;
        const double lo = -std::log2(hs.front()), hi = -std::log2(hs.back());
        t = (-std::log2(h) - lo) / (hi - lo);
        return ml + t * pw;
    };
    auto ypos = [&](double iters) { return mt + ph * (1.0 - iters / y_top); };

    char buf[256];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"440\" "
          "viewBox=\"0 0 640 440\">\n";
    os << "<rect width=\"640\" height=\"440\" fill=\"white\"/>\n";
    if (!spec.title.empty()) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"24\" font-family=\"sans-serif\" "
                      "font-size=\"14\" text-anchor=\"middle\">%s</text>\n",
                      ml + pw / 2, spec.title.c_str());
        os << buf;
    }
    // axes
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"black\"/>\n",
                  ml, mt + ph, ml + pw, mt + ph);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"black\"/>\n",
                  ml, mt, ml, mt + ph);
    os << buf;
    for (double h : hs) {
        const double x = xpos(h);
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"black\"/>\n",
                      x, mt + ph, x, mt + ph + 5);
        os << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                      "font-size=\"12\" text-anchor=\"middle\">1/%d</text>\n",
                      x, mt + ph + 20, static_cast<int>(std::lround(1.0 / h)));
        os << buf;
    }
    for (int t = 0; t <= 5; ++t) {
        const double iters = y_top * t / 5.0;
        const double y = ypos(iters);
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"black\"/>\n",
                      ml - 5, y, ml, y);
        os << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                      "font-size=\"12\" text-anchor=\"end\">%d</text>\n",
                      ml - 9, y + 4, static_cast<int>(std::lround(iters)));
        os << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                  "font-size=\"12\" text-anchor=\"middle\">h</text>\n",
                  ml + pw / 2, mt + ph + 40);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"18\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                  "text-anchor=\"middle\" transform=\"rotate(-90 18 %.1f)\">iterations"
                  "</text>\n",
                  mt + ph / 2, mt + ph / 2);
    os << buf;

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 8];
        // consecutive converged points form polyline segments; a missing or
        // non-converged point breaks the line
        std::vector<std::pair<double, double>> pts;
        std::vector<std::vector<std::pair<double, double>>> segments(1);
        for (double h : hs) {
            const RunRecord* found = nullptr;
            for (const auto& r : rows)
                if (r.h == h && field_as_string(r, spec.series_key) == series[s]) {
                    found = &r;
                    break;
                }
            if (!found || !found->converged) {
                if (!segments.back().empty()) segments.emplace_back();
                continue;
            }
            const double x = xpos(h), y = ypos(found->iters);
            segments.back().emplace_back(x, y);
            pts.emplace_back(x, y);
        }
        for (const auto& seg : segments) {
            if (seg.size() < 2) continue;
            std::string path;
            for (std::size_t i = 0; i < seg.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%s%.1f %.1f", i == 0 ? "M" : " L",
                              seg[i].first, seg[i].second);
                path += buf;
            }
            std::snprintf(buf, sizeof buf,
                          "<path d=\"%s\" fill=\"none\" stroke=\"%s\" "
                          "stroke-width=\"1.5\"/>\n",
                          path.c_str(), color);
            os << buf;
        }
        for (const auto& [x, y] : pts) {
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3\" fill=\"%s\"/>\n", x, y,
                          color);
            os << buf;
        }
        const double ly = mt + 14 + 18 * static_cast<double>(s);
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"%s\" stroke-width=\"1.5\"/>\n",
                      ml + pw + 12, ly - 4, ml + pw + 34, ly - 4, color);
        os << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                      "font-size=\"12\">%s=%s</text>\n",
                      ml + pw + 40, ly, spec.series_key.c_str(), series[s].c_str());
        os << buf;
    }
    os << "</svg>\n";
}

void write_bound_report(const std::vector<ExperimentConfig>& configs, std::ostream& os) {
    os << "lambda,tau,L,beta_s,c_inf,k_lip,k_min,bound\n";
    for (const ExperimentConfig& cfg : configs) {
        double beta = 0, k_lip = kNaN, k_min = kNaN;
        const double bound = bound_for(cfg, &beta, &k_lip, &k_min);
        os << fmt(cfg.lambda) << ',' << fmt(cfg.tau) << ',' << fmt(cfg.resolve_L()) << ','
           << fmt(beta) << ',' << fmt(default_c_inf()) << ',' << fmt(k_lip) << ','
           << fmt(k_min) << ',' << fmt(bound) << '\n';
    }
}

}  // namespace biotfs
