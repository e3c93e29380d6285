// Copyright 2026 The Cheshire Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cheshire/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cheshire/cli/svg.hpp"

namespace cheshire::cli {

namespace {

double to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Options shared by every subcommand.
struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool svg = false;
    std::string format = "csv";

    Format fmt() const { return format == "json" ? Format::Json : Format::Csv; }
};

class UsageError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

RunConfig config_of(const Common& c) {
    return c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
}

std::vector<double> positions(const ExperimentConfig& cfg, const std::vector<double>& phases) {
    std::vector<double> x;
    for (double p : phases) x.push_back(cfg.actuator.position(p));
    return x;
}

/// Data markers plus the fitted sinusoid, on the actuator axis.
void plot_counts(SvgPlot& plot, const std::string& name, const ExperimentConfig& cfg,
                 const std::vector<CountRecord>& recs) {
    std::vector<double> phases, counts;
    for (const CountRecord& r : recs) {
        phases.push_back(r.phase);
        counts.push_back(static_cast<double>(r.counts));
    }
    plot.add_points(name, positions(cfg, phases), counts);
    const FringeFit fit = fit_fringe(recs);
    std::vector<double> fx, fy;
    const double lo = phases.front(), hi = phases.back();
    for (int i = 0; i <= 400; ++i) {
        const double p = lo + (hi - lo) * i / 400.0;
        fx.push_back(p);
        fy.push_back(fit.evaluate(p));
    }
    plot.add_fit(fmt::format("fit, V = {:.3f}", fit.visibility), positions(cfg, fx), fy);
}

void emit(const Common& c, std::ostream& out, const std::string& command, const RunConfig& cfg, std::uint64_t seed,
          const std::string& body, const std::optional<std::string>& svg) {
    if (c.out.empty()) {
        if (c.svg) throw UsageError("--svg needs --out to name the output files");
        out << body;
        return;
    }
    RunManifest m = RunManifest::now(command, config_digest(cfg), seed);
    write_file(c.out, body);
    m.outputs.push_back(c.out);
    if (c.svg && svg) {
        const std::string path = sibling_path(c.out, ".svg");
        write_file(path, *svg);
        m.outputs.push_back(path);
    }
    write_file(sibling_path(c.out, ".manifest.json"), m.to_json().dump(2) + "\n");
}

int cmd_sweep(const Common& c, std::ostream& out) {
    const RunConfig cfg = config_of(c);
    const ExperimentConfig exp = cfg.experiment_config();
    const SweepCurve curve = sweep(exp);
    std::ostringstream body;
    write_sweep(body, curve, c.fmt());
    std::optional<std::string> svg;
    if (c.svg) {
        SvgPlot plot("Detection probability", "actuator position", "P_H");
        std::vector<double> phases, probs;
        for (const SweepPoint& p : curve.points) {
            phases.push_back(p.phase);
            probs.push_back(p.probability);
        }
        plot.add_line("pipeline", positions(exp, phases), probs);
        svg = plot.render();
    }
    emit(c, out, "sweep", cfg, c.seed.value_or(cfg.seed), body.str(), svg);
    return kExitOk;
}

int cmd_montecarlo(const Common& c, std::ostream& out) {
    const RunConfig cfg = config_of(c);
    const std::uint64_t seed = c.seed.value_or(cfg.seed);
    const ExperimentConfig exp = cfg.experiment_config();
    const auto records = simulate_sweep(exp, cfg.source_model(), cfg.jitter_model(), seed);
    std::ostringstream body;
    write_counts(body, records, c.fmt());
    std::optional<std::string> svg;
    if (c.svg) {
        SvgPlot plot("Coincidence counts", "actuator position", fmt::format("counts per {} s", cfg.bin_seconds));
        plot_counts(plot, "counts", exp, records);
        svg = plot.render();
    }
    emit(c, out, "montecarlo", cfg, seed, body.str(), svg);
    return kExitOk;
}

void put(nlohmann::json& j, std::vector<std::pair<std::string, Measurement>>& rows, const std::string& key,
         const Measurement& m) {
    j[key] = {{"value", m.value}, {"uncertainty", m.uncertainty}};
    rows.emplace_back(key, m);
}

int cmd_analyze(const Common& c, const std::string& counts_path, const std::string& reference_path,
                std::ostream& out) {
    const RunConfig cfg = config_of(c);
    const auto counts = load_counts_csv(counts_path);
    std::vector<CountRecord> reference;
    if (!reference_path.empty()) reference = load_counts_csv(reference_path);
    const CountsAnalysis a = analyze_counts(cfg, counts, reference_path.empty() ? nullptr : &reference);

    nlohmann::json j;
    std::vector<std::pair<std::string, Measurement>> rows;
    put(j, rows, "mean_level", {a.fit.mean_level, a.fit.stderr_.mean_level});
    put(j, rows, "visibility", {a.fit.visibility, a.fit.stderr_.visibility});
    put(j, rows, "phase_offset_rad", {a.fit.phase_offset, a.fit.stderr_.phase_offset});
    put(j, rows, "residual_rms", {a.fit.residual_rms, 0.0});
    put(j, rows, "mean_counts", {a.summary.mean, a.summary.sdm});
    const std::string k = a.arm ? (*a.arm == Arm::One ? "1" : "2") : "";
    if (a.pi_weak) put(j, rows, "re_pi_" + k, *a.pi_weak);
    if (a.sigma_weak) put(j, rows, "abs_sigma_pi_" + k, *a.sigma_weak);
    if (a.sigma_weak_first_order) put(j, rows, "abs_sigma_pi_" + k + "_first_order", *a.sigma_weak_first_order);

    std::ostringstream body;
    if (c.fmt() == Format::Json) {
        body << j.dump(2) << '\n';
    } else {
        body << "quantity,value,uncertainty\n";
        for (const auto& [name, m] : rows) {
            body << name << ',' << format_number(m.value) << ',' << format_number(m.uncertainty) << '\n';
        }
    }
    std::optional<std::string> svg;
    if (c.svg) {
        SvgPlot plot("Fringe fit", "actuator position", "counts");
        const ExperimentConfig exp = cfg.experiment_config();
        if (!reference.empty()) plot_counts(plot, "reference", exp, reference);
        plot_counts(plot, "counts", exp, counts);
        svg = plot.render();
    }
    emit(c, out, "analyze", cfg, c.seed.value_or(cfg.seed), body.str(), svg);
    return kExitOk;
}

int cmd_fresnel(const Common& c, double n, std::optional<double> theta_deg, std::ostream& out) {
    const double tb = brewster_angle(n);
    const double th = theta_deg ? to_rad(*theta_deg) : tb;
    const double rs = fresnel_s_reflectance(n, th);
    const double rp = fresnel_p_reflectance(n, th);
    std::ostringstream body;
    if (c.fmt() == Format::Json) {
        const nlohmann::json j = {{"refractive_index", n},
                                  {"incidence_deg", to_deg(th)},
                                  {"brewster_deg", to_deg(tb)},
                                  {"reflectance_s", rs},
                                  {"reflectance_p", rp},
                                  {"slide_transmission", 1.0 - rs}};
        body << j.dump(2) << '\n';
    } else {
        body << "refractive_index,incidence_deg,brewster_deg,reflectance_s,reflectance_p,slide_transmission\n";
        body << fmt::format("{},{},{},{},{},{}\n", format_number(n), format_number(to_deg(th)),
                            format_number(to_deg(tb)), format_number(rs), format_number(rp),
                            format_number(1.0 - rs));
    }
    if (c.out.empty()) {
        out << body.str();
    } else {
        write_file(c.out, body.str());
    }
    return kExitOk;
}

void write_figures(const RunConfig& cfg, std::uint64_t seed, const std::string& dir, std::vector<std::string>& files) {
    const DatasetPlan plan = cfg.dataset_plan();
    const SourceModel src = cfg.source_model();
    const JitterModel jitter = cfg.jitter_model();
    const std::string unit = fmt::format("counts per {} s", cfg.bin_seconds);
    std::uint64_t stream = 0;
    const auto run = [&](const ExperimentConfig& e) { return simulate_sweep(e, src, jitter, derive_seed(seed, stream++)); };
    const auto save = [&](const std::string& name, const SvgPlot& plot) {
        const std::string path = (std::filesystem::path(dir) / name).string();
        write_file(path, plot.render());
        files.push_back(path);
    };

    {
        SvgPlot plot("Weak measurements of presence", "actuator position", unit);
        ExperimentConfig e = plan.base;
        plot_counts(plot, "no filter", e, run(e));
        e.t1 = plan.filter_transmission;
        plot_counts(plot, "filter in arm 1", e, run(e));
        e = plan.base;
        e.t2 = plan.filter_transmission;
        plot_counts(plot, "filter in arm 2", e, run(e));
        save("fig_presence.svg", plot);
    }
    std::vector<double> angles = {0.0};
    angles.insert(angles.end(), plan.rotation_angles.begin(), plan.rotation_angles.end());
    for (const Arm arm : {Arm::Two, Arm::One}) {
        const int k = arm == Arm::One ? 1 : 2;
        SvgPlot plot(fmt::format("Polarization rotation in arm {}", k), "actuator position", unit);
        for (double a : angles) {
            ExperimentConfig e = plan.base;
            (arm == Arm::One ? e.theta1 : e.theta2) = a;
            plot_counts(plot, fmt::format("theta{} = {:g} deg", k, to_deg(a)), e, run(e));
        }
        save(fmt::format("fig_rotation_arm{}.svg", k), plot);
    }
    for (const Arm filtered : {Arm::One, Arm::Two}) {
        const Arm rotated = filtered == Arm::One ? Arm::Two : Arm::One;
        const int f = filtered == Arm::One ? 1 : 2, r = 3 - f;
        SvgPlot plot(fmt::format("Filter in arm {}, rotation in arm {}", f, r), "actuator position", unit);
        for (double a : angles) {
            ExperimentConfig e = plan.base;
            (filtered == Arm::One ? e.t1 : e.t2) = plan.filter_transmission;
            (rotated == Arm::One ? e.theta1 : e.theta2) = a;
            plot_counts(plot, fmt::format("theta{} = {:g} deg", r, to_deg(a)), e, run(e));
        }
        save(fmt::format("fig_simultaneous_filter{}.svg", f), plot);
    }
}

int cmd_reproduce(const Common& c, std::ostream& out) {
    const RunConfig cfg = config_of(c);
    const std::uint64_t seed = c.seed.value_or(cfg.seed);
    const std::string dir = c.out.empty() ? "reproduction" : c.out;
    const auto rows = comparison_table(cfg, seed);

    RunManifest m = RunManifest::now("reproduce-paper", config_digest(cfg), seed);
    const auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
    write_file(path("table.csv"), table_csv(rows));
    write_file(path("table.md"), table_markdown(rows));
    write_file(path("config.yaml"), serialize_config(cfg));
    m.outputs = {path("table.csv"), path("table.md"), path("config.yaml")};
    write_figures(cfg, derive_seed(seed, 0xF16ull), dir, m.outputs);
    write_file(path("manifest.json"), m.to_json().dump(2) + "\n");

    if (c.fmt() == Format::Json) {
        nlohmann::json j = nlohmann::json::array();
        for (const TableRow& r : rows) {
            j.push_back({{"quantity", r.quantity},
                         {"predicted", r.predicted},
                         {"simulated_mean", r.simulated_mean},
                         {"simulated_sd", r.simulated_sd},
                         {"published", r.published ? nlohmann::json(*r.published) : nlohmann::json()},
                         {"published_uncertainty",
                          r.published_uncertainty ? nlohmann::json(*r.published_uncertainty) : nlohmann::json()}});
        }
        out << j.dump(2) << '\n';
    } else {
        out << table_markdown(rows);
    }
    return kExitOk;
}

struct Accumulator {
    double sum = 0.0;
    double sum2 = 0.0;
    int n = 0;
    void add(double v) {
        sum += v;
        sum2 += v * v;
        ++n;
    }
    double mean() const { return n ? sum / n : 0.0; }
    double sd() const { return n > 1 ? std::sqrt(std::max(sum2 - sum * sum / n, 0.0) / (n - 1)) : 0.0; }
};

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

CountsAnalysis analyze_counts(const RunConfig& cfg, const std::vector<CountRecord>& counts,
                              const std::vector<CountRecord>* reference) {
    CountsAnalysis a;
    a.fit = fit_fringe(counts);
    a.summary = summarize(counts);
    const AnalysisOptions opt = cfg.analysis_options();

    if (reference) {
        if (!cfg.filter_arm) {
            throw UsageError("--reference needs filter.arm set in the config");
        }
        a.arm = cfg.filter_arm;
        a.pi_weak = estimate_pi_weak(summarize(*reference), a.summary, opt.reflectance, opt.delta_sigma);
    }
    const bool rot1 = cfg.theta1_deg != 0.0, rot2 = cfg.theta2_deg != 0.0;
    if (rot1 != rot2) {
        const Arm arm = rot1 ? Arm::One : Arm::Two;
        if (a.arm && *a.arm != arm) {
            return a;
        }
        a.arm = arm;
        const double theta = to_rad(rot1 ? cfg.theta1_deg : cfg.theta2_deg);
        const double pi = a.pi_weak ? a.pi_weak->value : (arm == Arm::One ? 0.0 : 1.0);
        const double vis = subtract_residual_visibility(a.fit.visibility, opt.residual_visibility_floor);
        a.sigma_weak = estimate_sigma_weak(vis, theta, opt.visibility_scale, pi, opt.method, a.fit.stderr_.visibility,
                                           opt.delta_sigma);
        a.sigma_weak_first_order = estimate_sigma_weak(vis, theta, opt.visibility_scale, pi, SigmaMethod::FirstOrder,
                                                       a.fit.stderr_.visibility, opt.delta_sigma);
    }
    return a;
}

std::vector<TableRow> comparison_table(const RunConfig& cfg, std::uint64_t seed) {
    const DatasetPlan plan = cfg.dataset_plan();
    const SourceModel src = cfg.source_model();
    const JitterModel jitter = cfg.jitter_model();
    AnalysisOptions opt = cfg.analysis_options();
    // Simulated fringes have no mode-overlap loss; V_m only rescales the visibilities
    // quoted for comparison with measured ones.
    opt.visibility_scale = 1.0;
    const double vm = cfg.visibility_scale;
    const double r = 1.0 - plan.filter_transmission;

    // Published values, keyed by rotation angle in degrees where relevant.
    const std::map<long, std::pair<double, double>> published_v = {{10, {0.21, 0.05}}, {20, {0.40, 0.05}}};
    const std::map<long, std::pair<double, double>> published_v_filtered = {{10, {0.26, 0.05}}, {20, {0.45, 0.05}}};
    const auto lookup = [](const std::map<long, std::pair<double, double>>& m, double deg, TableRow& row) {
        const long key = std::lround(deg);
        if (std::abs(deg - static_cast<double>(key)) < 1e-9 && m.count(key)) {
            row.published = m.at(key).first;
            row.published_uncertainty = m.at(key).second;
        }
    };

    std::vector<TableRow> rows;
    rows.push_back({"Re<Pi_1>_w", 0.0, 0, 0, -0.03, 0.04});
    rows.push_back({"Re<Pi_2>_w", 1.0, 0, 0, 1.02, 0.04});
    rows.push_back({"relative drop, filter arm 1", 0.0, 0, 0, (2526.0 - 2537.0) / 2526.0, std::nullopt});
    rows.push_back({"relative drop, filter arm 2", r, 0, 0, 0.151, 0.008});
    rows.push_back({"relative drop at theta=0, filter arm 2 vs arm 1", r, 0, 0, 0.154, 0.008});
    const std::size_t first_v = rows.size();
    for (double a : plan.rotation_angles) {
        ExperimentConfig e = plan.base;
        e.theta1 = a;
        TableRow row{fmt::format("V(theta1={:g} deg) x V_m", to_deg(a)), vm * exact_visibility(e.arms()), 0, 0,
                     std::nullopt, std::nullopt};
        lookup(published_v, to_deg(a), row);
        rows.push_back(row);
    }
    const std::size_t first_vf = rows.size();
    for (double a : plan.rotation_angles) {
        ExperimentConfig e = plan.base;
        e.theta1 = a;
        e.t2 = plan.filter_transmission;
        TableRow row{fmt::format("V(theta1={:g} deg, filter arm 2) x V_m", to_deg(a)),
                     vm * exact_visibility(e.arms()), 0, 0, std::nullopt, std::nullopt};
        lookup(published_v_filtered, to_deg(a), row);
        rows.push_back(row);
    }
    const std::size_t w1 = rows.size();
    rows.push_back({"|<sigma Pi_1>_w|", 1.0, 0, 0, 0.86, 0.21});
    rows.push_back({"|<sigma Pi_2>_w|", 0.0, 0, 0, 0.06, 0.20});

    std::vector<Accumulator> acc(rows.size());
    for (std::uint64_t s = 0; s < cfg.ensemble_seeds; ++s) {
        const std::uint64_t ds = derive_seed(seed, s);
        const ExperimentDataset data = simulate_dataset(plan, src, jitter, ds);
        const WeakValueReport rep = analyze_dataset(data, opt);
        const double n0 = summarize(data.no_filter).mean;
        const double n1 = summarize(data.filter_arm1).mean;
        const double n2 = summarize(data.filter_arm2).mean;
        acc[0].add(rep.re_pi_1->value);
        acc[1].add(rep.re_pi_2->value);
        acc[2].add((n0 - n1) / n0);
        acc[3].add((n0 - n2) / n0);
        acc[4].add((n1 - n2) / n1);
        std::size_t k = 0;
        for (const RotationSweep& rs : data.rotations) {
            if (rs.arm == Arm::One) acc[first_v + k++].add(vm * fit_fringe(rs.records).visibility);
        }
        for (std::size_t i = 0; i < plan.rotation_angles.size(); ++i) {
            ExperimentConfig e = plan.base;
            e.theta1 = plan.rotation_angles[i];
            e.t2 = plan.filter_transmission;
            // Streams past the dataset's own keep these sweeps independent of it.
            const auto recs = simulate_sweep(e, src, jitter, derive_seed(ds, 1000 + i));
            acc[first_vf + i].add(vm * fit_fringe(recs).visibility);
        }
        acc[w1].add(rep.abs_sigma_1->value);
        acc[w1 + 1].add(rep.abs_sigma_2->value);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].simulated_mean = acc[i].mean();
        rows[i].simulated_sd = acc[i].sd();
    }
    return rows;
}

std::string table_csv(const std::vector<TableRow>& rows) {
    std::string out = "quantity,predicted,simulated_mean,simulated_sd,published,published_uncertainty\n";
    for (const TableRow& r : rows) {
        out += fmt::format("\"{}\",{},{},{},{},{}\n", r.quantity, format_number(r.predicted),
                           format_number(r.simulated_mean), format_number(r.simulated_sd), opt_number(r.published),
                           opt_number(r.published_uncertainty));
    }
    return out;
}

std::string table_markdown(const std::vector<TableRow>& rows) {
    std::string out = "| quantity | predicted | simulated | published |\n|---|---|---|---|\n";
    for (const TableRow& r : rows) {
        std::string published = "n/a";
        if (r.published) {
            published = r.published_uncertainty ? fmt::format("{:.3f} +/- {:.3f}", *r.published, *r.published_uncertainty)
                                        : fmt::format("{:.4f}", *r.published);
        }
        std::string name;
        for (char ch : r.quantity) {
            if (ch == '|') name += '\\';
            name += ch;
        }
        out += fmt::format("| {} | {:.4f} | {:.4f} +/- {:.4f} | {} |\n", name, r.predicted, r.simulated_mean,
                           r.simulated_sd, published);
    }
    return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum Cheshire cat interferometer: simulation and analysis", "cheshire"};
    app.require_subcommand(1);
    app.set_version_flag("--version", CHESHIRE_VERSION);

    Common c;
    const auto add_common = [&c](CLI::App* sub, bool with_seed, bool with_svg) {
        sub->add_option("--config", c.config_path, "YAML run configuration");
        if (with_seed) sub->add_option("--seed", c.seed, "RNG seed (overrides the config)");
        sub->add_option("--out", c.out, "Output path");
        if (with_svg) sub->add_flag("--svg", c.svg, "Also write an SVG plot next to --out");
        sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Noiseless detection probability over the phase grid");
    add_common(sweep_cmd, true, true);
    CLI::App* mc_cmd = app.add_subcommand("montecarlo", "Simulated coincidence counts over the phase grid");
    add_common(mc_cmd, true, true);
    CLI::App* an_cmd = app.add_subcommand("analyze", "Fit a counts CSV and estimate weak values");
    add_common(an_cmd, true, true);
    std::string counts_path, reference_path;
    an_cmd->add_option("counts", counts_path, "Counts CSV (phase_rad,counts,duration_s)")->required();
    an_cmd->add_option("--reference", reference_path, "No-filter counts CSV for presence weak values");
    CLI::App* rp_cmd = app.add_subcommand("reproduce-paper", "Seed-ensemble comparison table and figures");
    add_common(rp_cmd, true, false);
    CLI::App* fr_cmd = app.add_subcommand("fresnel", "Brewster angle and slide reflectance");
    add_common(fr_cmd, false, false);
    double n = 1.5;
    std::optional<double> theta_deg;
    fr_cmd->add_option("--n", n, "Refractive index")->check(CLI::PositiveNumber);
    fr_cmd->add_option("--theta-deg", theta_deg, "Incidence angle in degrees (default: Brewster)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << CHESHIRE_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error: " << msg << '\n';
        return kExitUsage;
    }

    try {
        if (*sweep_cmd) return cmd_sweep(c, out);
        if (*mc_cmd) return cmd_montecarlo(c, out);
        if (*an_cmd) return cmd_analyze(c, counts_path, reference_path, out);
        if (*rp_cmd) return cmd_reproduce(c, out);
        if (*fr_cmd) return cmd_fresnel(c, n, theta_deg, out);
    } catch (const ConfigError& e) {
        err << "error: config: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputError& e) {
        err << "error: input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: runtime: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace cheshire::cli
