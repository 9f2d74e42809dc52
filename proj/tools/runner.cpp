#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "rieszlab/diagnostics.hpp"
#include "rieszlab/errors.hpp"
#include "rieszlab/summation.hpp"

namespace rieszlab::cli {

namespace fs = std::filesystem;

namespace {

struct RunContext {
    ExperimentConfig cfg;
    std::string hash;
    fs::path out_dir;
    fs::path tables_dir;
    Json results;
    Json plots = Json::array();

    explicit RunContext(const ExperimentConfig& c) : cfg(c), hash(c.hash()), out_dir(c.out) {
        tables_dir = out_dir / "tables";
        fs::create_directories(tables_dir);
        results["schema_version"] = kSchemaVersion;
        results["config_hash"] = hash;
        results["config"] = cfg.to_json();
    }

    void write_results() const {
        write_text_file((out_dir / "results.json").string(), results.dump(2) + "\n");
        if (!plots.empty()) {
            Json manifest;
            manifest["schema_version"] = kSchemaVersion;
            manifest["config_hash"] = hash;
            manifest["plots"] = plots;
            write_text_file((tables_dir / "plots.json").string(), manifest.dump(2) + "\n");
        }
    }

    void describe_plot(const std::string& table, const std::string& x,
                       const std::vector<std::string>& y, const std::string& series,
                       bool log_x, bool log_y) {
        Json p;
        p["table"] = table;
        p["x"] = x;
        p["y"] = y;
        if (!series.empty()) p["series_by"] = series;
        p["log_x"] = log_x;
        p["log_y"] = log_y;
        plots.push_back(p);
    }

    void write_manifest(const std::string& command, double duration_ms) const {
        Json manifest;
        manifest["schema_version"] = kSchemaVersion;
        manifest["tool_version"] = kToolVersion;
        manifest["command"] = command;
        manifest["config_hash"] = hash;
        manifest["threads"] = thread_count();
        manifest["duration_ms"] = duration_ms;
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        manifest["timestamp_unix_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
        write_text_file((out_dir / "run-manifest.json").string(), manifest.dump(2) + "\n");
    }

    void write_table(const std::string& name, const std::string& csv) const {
        write_text_file((tables_dir / name).string(),
                        "# schema=" + std::to_string(kSchemaVersion) + " config_hash=" + hash +
                            "\n" + csv);
    }
};

std::vector<std::uint32_t> sample_atoms(const DiscreteMeasure& mu, int want) {
    std::vector<std::uint32_t> out;
    const std::uint32_t stride =
        std::max<std::uint32_t>(1, mu.size() / std::max(1, want));
    for (std::uint32_t i = 0; i < mu.size() && static_cast<int>(out.size()) < want; i += stride)
        out.push_back(i);
    return out;
}

FDeltaParams fdelta_params(const ExperimentConfig& cfg, const DiscreteMeasure& mu) {
    FDeltaParams params;
    params.delta = cfg.delta;
    params.r0 = std::max(cfg.r0, mu.radius_floor());
    params.eps0 = cfg.eps0;
    params.c0 = cfg.c0;
    params.per_octave = cfg.per_octave;
    params.default_osc_grid(mu, cfg.osc_generations);
    return params;
}

Json measure_block(const DiscreteMeasure& mu, const Json& generator) {
    Json j;
    j["generator"] = generator;
    j["atom_count"] = mu.size();
    j["total_mass"] = mu.total_mass();
    j["resolution"] = mu.resolution();
    j["radius_floor"] = mu.radius_floor();
    return j;
}

// --- subcommand bodies -------------------------------------------------------

void cmd_generate(RunContext& ctx) {
    Json generator;
    const DiscreteMeasure mu = build_measure(ctx.cfg, generator);
    const std::string csv_path = (ctx.out_dir / "measure.csv").string();
    save_measure_csv(mu, csv_path);
    {
        // Trailing comment stamps the file without touching the column format.
        std::string body = read_text_file(csv_path);
        body += "# config_hash=" + ctx.hash + "\n";
        write_text_file(csv_path, body);
    }
    Json meta = measure_metadata(mu, AmbientParams::make(ctx.cfg.m, ctx.cfg.s), generator);
    meta["config_hash"] = ctx.hash;
    write_text_file((ctx.out_dir / "measure.meta.json").string(), meta.dump(2) + "\n");
    ctx.results["results"]["measure"] = measure_block(mu, generator);
}

void cmd_density(RunContext& ctx) {
    Json generator;
    const DiscreteMeasure mu = build_measure(ctx.cfg, generator);
    const auto pts = sample_atoms(mu, ctx.cfg.sample_points);
    const double hi = std::max(ctx.cfg.r0, mu.radius_floor() * 2.0);
    std::vector<double> radii = dyadic_refined_grid(mu.radius_floor(), hi, ctx.cfg.per_octave);
    std::reverse(radii.begin(), radii.end());

    std::ostringstream csv;
    csv << "point_index,radius,theta\n";
    Json profiles = Json::array();
    for (std::uint32_t idx : pts) {
        const auto prof = density_profile(mu, mu.atom(idx), radii, ctx.cfg.s);
        Json p;
        p["point_index"] = idx;
        p["theta_min"] = *std::min_element(prof.thetas.begin(), prof.thetas.end());
        p["theta_max"] = *std::max_element(prof.thetas.begin(), prof.thetas.end());
        profiles.push_back(p);
        for (std::size_t i = 0; i < prof.radii.size(); ++i)
            csv << idx << "," << format_double(prof.radii[i]) << ","
                << format_double(prof.thetas[i]) << "\n";
    }
    ctx.write_table("density_profile.csv", csv.str());
    ctx.describe_plot("density_profile.csv", "radius", {"theta"}, "point_index", true, false);
    ctx.results["results"]["measure"] = measure_block(mu, generator);
    ctx.results["results"]["density"] = profiles;
}

void cmd_transform(RunContext& ctx) {
    Json generator;
    const DiscreteMeasure mu = build_measure(ctx.cfg, generator);
    const auto profile = SmoothingProfile::build(ctx.cfg.s, ctx.cfg.rho);
    const auto pts = sample_atoms(mu, ctx.cfg.sample_points);
    const double eps = std::max(ctx.cfg.eps0, mu.radius_floor());

    std::ostringstream csv;
    csv << "point_index,eps";
    for (int a = 0; a < mu.dim(); ++a) csv << ",trunc_" << (a + 1);
    for (int a = 0; a < mu.dim(); ++a) csv << ",smooth_" << (a + 1);
    csv << "\n";
    for (std::uint32_t idx : pts) {
        const auto tr = truncated_riesz(mu, mu.atom(idx), eps, ctx.cfg.s);
        const auto sm = smoothed_riesz(mu, mu.atom(idx), eps, profile);
        csv << idx << "," << format_double(eps);
        for (int a = 0; a < mu.dim(); ++a) csv << "," << format_double(tr.value[a]);
        for (int a = 0; a < mu.dim(); ++a) csv << "," << format_double(sm.value[a]);
        csv << "\n";
    }
    ctx.write_table("transform.csv", csv.str());
    ctx.results["results"]["measure"] = measure_block(mu, generator);
    ctx.results["results"]["transform"] = {{"eps", eps}, {"points", pts.size()}};
}

SpreadSelection select_for(const ExperimentConfig& cfg, const DiscreteMeasure& mu, double r) {
    std::vector<std::uint32_t> ids(mu.size());
    for (std::uint32_t i = 0; i < mu.size(); ++i) ids[i] = i;
    const int n = AmbientParams::make(cfg.m, cfg.s).n;
    // Center on the atom whose ball carries the most mass among a sample.
    const auto candidates = sample_atoms(mu, 32);
    std::uint32_t best = candidates[0];
    double best_mass = -1.0;
    for (std::uint32_t idx : candidates) {
        const double mass = mu.ball_mass(mu.atom(idx), r);
        if (mass > best_mass) {
            best_mass = mass;
            best = idx;
        }
    }
    return select_spread_points(mu, ids, mu.atom(best), r, n + 2);
}

void cmd_select_points(RunContext& ctx) {
    Json generator;
    const DiscreteMeasure mu = build_measure(ctx.cfg, generator);
    const double r = std::max(ctx.cfg.r0, 8.0 * mu.radius_floor());
    const auto sel = select_for(ctx.cfg, mu, r);
    ctx.results["results"]["measure"] = measure_block(mu, generator);
    ctx.results["results"]["selection"] = to_json(sel);
}

void cmd_select_scale(RunContext& ctx) {
    Json generator;
    const DiscreteMeasure mu = build_measure(ctx.cfg, generator);
    const auto pts = sample_atoms(mu, ctx.cfg.sample_points);
    const double eps1 = std::max(ctx.cfg.r0 / ctx.cfg.tau, mu.radius_floor());
    Json scales = Json::array();
    for (std::uint32_t idx : pts) {
        const auto sel = select_scale(mu, mu.atom(idx), eps1, ctx.cfg.rho, ctx.cfg.s,
                                      ctx.cfg.max_k, ctx.cfg.per_octave);
        Json entry = to_json(sel);
        entry["point_index"] = idx;
        scales.push_back(entry);
    }
    ctx.results["results"]["measure"] = measure_block(mu, generator);
    ctx.results["results"]["scale_selection"] = scales;
}

void cmd_lemmas(RunContext& ctx) {
    Json generator;
    const DiscreteMeasure mu = build_measure(ctx.cfg, generator);
    const auto profile = SmoothingProfile::build(ctx.cfg.s, ctx.cfg.rho);
    const AmbientParams ambient = AmbientParams::make(ctx.cfg.m, ctx.cfg.s);
    ctx.results["results"]["measure"] = measure_block(mu, generator);
    Json& res = ctx.results["results"];

    // Expansion residual order (pooled study across scales and bases).
    {
        const auto bases = sample_atoms(mu, std::min(ctx.cfg.sample_points, 16));
        std::vector<double> eps_values;
        const double eps_anchor = std::max(16.0 * mu.radius_floor(), ctx.cfg.eps0);
        for (double f : {0.75, 0.85, 0.95, 1.05}) eps_values.push_back(f * eps_anchor);
        const std::vector<double> offsets{1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 0.2499};
        Vec dir(mu.dim());
        dir[0] = 1.0;
        const auto study = residual_order_study(mu, profile, bases, eps_values, offsets, dir);
        res["lemma1"] = {{"fitted_order", study.slope},
                         {"c1_min", study.c1_min},
                         {"c1_max", study.c1_max},
                         {"rel_offsets", study.rel_offsets},
                         {"rms_residual", study.rms_residual}};
    }

    // Spread selection feeding the hull-distance bound.
    const double r = std::max(ctx.cfg.r0, 8.0 * mu.radius_floor());
    const auto sel = select_for(ctx.cfg, mu, r);
    res["selection"] = to_json(sel);
    {
        const double eps = 20.0 * r * 1.6;
        const auto l3 = lemma3_check(mu, sel, eps, profile);
        res["lemma3"] = to_json(l3);
        res["lemma3"]["eps"] = eps;
    }

    // Scale selection and the functional lower bound at each sampled base.
    {
        const auto pts = sample_atoms(mu, ctx.cfg.sample_points);
        const double eps1 = std::max(r / ctx.cfg.tau, mu.radius_floor());
        Json blocks = Json::array();
        int passes = 0;
        for (std::uint32_t idx : pts) {
            const Vec y0 = mu.atom(idx);
            const auto scale =
                select_scale(mu, y0, eps1, ctx.cfg.rho, ctx.cfg.s, ctx.cfg.max_k, ctx.cfg.per_octave);
            std::vector<Vec> frame_pts{y0};
            for (std::size_t j = 1; j < sel.points.size(); ++j)
                frame_pts.push_back(y0 + (sel.points[j] - sel.points[0]));
            const AffineFrame frame = orthonormalize(frame_pts);
            const auto l4 = lemma4_check(mu, y0, frame, scale, profile);
            Json entry = to_json(l4);
            entry["point_index"] = idx;
            entry["k"] = scale.k;
            blocks.push_back(entry);
            passes += l4.pass ? 1 : 0;
        }
        res["lemma4"] = {{"checks", blocks},
                         {"pass_fraction",
                          static_cast<double>(passes) / static_cast<double>(pts.size())},
                         {"vacuous", ambient.integer_exponent()}};
    }

    // Pair oscillation across retained points.
    {
        FDeltaParams params = fdelta_params(ctx.cfg, mu);
        const auto filt = f_delta_filter(mu, params, profile);
        res["fdelta"] = {{"retained", filt.retained.size()},
                         {"reject_growth", filt.reject_growth},
                         {"reject_osc", filt.reject_osc},
                         {"reject_cap", filt.reject_cap}};
        const double r5 = std::min(0.5 * params.delta * params.eps0, r);
        const double eps5 = 0.5 * params.eps0;
        Json l5j;
        try {
            const auto l5 = lemma5_check(mu, filt.retained, sel.x0, r5, eps5, params, profile);
            l5j = to_json(l5);
        } catch (const PipelineError& e) {
            l5j = {{"skipped", e.what()}};
        }
        res["lemma5"] = l5j;
    }

    // Flat table row.
    std::ostringstream csv;
    csv << "config_hash,family,s,rho,lemma1_order,lemma3_c4,lemma4_pass_fraction,lemma5_ratio\n";
    csv << ctx.hash << "," << ctx.cfg.family << "," << format_double(ctx.cfg.s) << ","
        << format_double(ctx.cfg.rho) << "," << format_double(res["lemma1"]["fitted_order"].get<double>())
        << "," << format_double(res["lemma3"]["empirical_c4"].get<double>()) << ","
        << format_double(res["lemma4"]["pass_fraction"].get<double>()) << ","
        << (res["lemma5"].contains("ratio") ? format_double(res["lemma5"]["ratio"].get<double>())
                                            : std::string("nan"))
        << "\n";
    ctx.write_table("diagnostics.csv", csv.str());
}

void cmd_pv_scan(RunContext& ctx) {
    Json generator;
    const DiscreteMeasure mu = build_measure(ctx.cfg, generator);
    const auto profile = SmoothingProfile::build(ctx.cfg.s, ctx.cfg.rho);
    const auto pts = sample_atoms(mu, ctx.cfg.sample_points);
    const auto grid = dyadic_eps_grid(ctx.cfg.pv_eps_max, ctx.cfg.pv_generations);

    std::ostringstream csv;
    csv << "point_index,eps";
    for (int a = 0; a < mu.dim(); ++a) csv << ",comp_" << (a + 1);
    csv << ",osc_tail\n";

    Json scans = Json::array();
    const auto theta_grid = limsup_radii_grid(mu);
    for (std::uint32_t idx : pts) {
        const auto scan = pv_scan(mu, mu.atom(idx), grid, profile);
        const double theta =
            upper_density_estimate(mu, mu.atom(idx), ctx.cfg.s, theta_grid).value;
        const auto cls =
            pv_classify(scan, ctx.cfg.tol_conv, ctx.cfg.tol_osc_factor * theta);
        Json entry = to_json(cls);
        entry["point_index"] = idx;
        entry["theta_estimate"] = theta;
        entry["truncated_grid"] = scan.truncated_grid;
        scans.push_back(entry);
        for (std::size_t i = 0; i < scan.eps.size(); ++i) {
            csv << idx << "," << format_double(scan.eps[i]);
            for (int a = 0; a < mu.dim(); ++a) csv << "," << format_double(scan.values[i].value[a]);
            csv << "," << format_double(scan.osc_tail[i]) << "\n";
        }
        // Per-point file in the plain scan format.
        save_pv_scan_csv(scan, mu.dim(),
                         (ctx.tables_dir / ("pv_scan_point" + std::to_string(idx) + ".csv")).string(),
                         ctx.hash);
    }
    ctx.write_table("pv_scan.csv", csv.str());
    std::vector<std::string> comps;
    for (int a = 0; a < mu.dim(); ++a) comps.push_back("comp_" + std::to_string(a + 1));
    comps.push_back("osc_tail");
    ctx.describe_plot("pv_scan.csv", "eps", comps, "point_index", true, false);
    ctx.results["results"]["measure"] = measure_block(mu, generator);
    ctx.results["results"]["pv"] = {{"grid", Json(grid)}, {"classifications", scans}};
}

void cmd_contradiction(RunContext& ctx) {
    Json generator;
    const DiscreteMeasure mu = build_measure(ctx.cfg, generator);
    const auto profile = SmoothingProfile::build(ctx.cfg.s, ctx.cfg.rho);
    ContradictionOptions opts;
    opts.max_k = ctx.cfg.max_k;
    opts.r0 = ctx.cfg.r0;
    opts.eps0 = ctx.cfg.eps0;
    opts.c0 = ctx.cfg.c0;
    opts.per_octave = ctx.cfg.per_octave;
    opts.osc_generations = ctx.cfg.osc_generations;
    const auto rep = contradiction_ratio(mu, profile, ctx.cfg.tau, opts);
    ctx.results["results"]["measure"] = measure_block(mu, generator);
    ctx.results["results"]["contradiction"] = to_json(rep);

    std::ostringstream csv;
    csv << "config_hash,family,s,tau,lhs,rhs,ratio,eps,r,k\n";
    csv << ctx.hash << "," << ctx.cfg.family << "," << format_double(ctx.cfg.s) << ","
        << format_double(rep.tau) << "," << format_double(rep.lhs) << ","
        << format_double(rep.rhs) << "," << format_double(rep.ratio) << ","
        << format_double(rep.eps) << "," << format_double(rep.r) << "," << rep.k << "\n";
    ctx.write_table("contradiction.csv", csv.str());
}

void cmd_verify_phi(RunContext& ctx) {
    const auto profile = SmoothingProfile::build(ctx.cfg.s, ctx.cfg.rho);
    const auto reports = junction_continuity_probe(profile);

    std::ostringstream csv;
    csv << "junction_r,value_gap,deriv_gap,second_gap\n";
    std::printf("junction continuity for s=%g rho=%g\n", ctx.cfg.s, ctx.cfg.rho);
    std::printf("%14s %12s %12s %12s\n", "r", "|d phi|", "|d phi'|", "|d phi''|");
    bool ok = true;
    for (const auto& rep : reports) {
        std::printf("%14.8f %12.3e %12.3e %12.3e\n", rep.r, rep.value_gap, rep.deriv_gap,
                    rep.second_gap);
        csv << format_double(rep.r) << "," << format_double(rep.value_gap) << ","
            << format_double(rep.deriv_gap) << "," << format_double(rep.second_gap) << "\n";
        ok = ok && rep.value_gap < 1e-6 && rep.deriv_gap < 1e-6 && rep.second_gap < 1e-6;
    }
    std::printf("slope budget: sup|phi'| = %.6f vs (1/rho)(1+%.2f) = %.6f\n",
                profile.bounds().sup_phi_prime, profile.validation_slack(),
                (1.0 / profile.rho()) * (1.0 + profile.validation_slack()));
    if (!ok) throw PipelineError("verify_phi", "junction continuity above 1e-6");

    ctx.write_table("phi_junctions.csv", csv.str());
    Json dump = profile_dump(profile);
    dump["config_hash"] = ctx.hash;
    write_text_file((ctx.out_dir / "phi.json").string(), dump.dump(2) + "\n");
    ctx.results["results"]["phi"] = profile_dump(profile);
}

}  // namespace

int run_command(const std::string& command, const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunContext ctx(cfg);
    try {
        if (command == "generate") cmd_generate(ctx);
        else if (command == "density") cmd_density(ctx);
        else if (command == "transform") cmd_transform(ctx);
        else if (command == "select-points") cmd_select_points(ctx);
        else if (command == "select-scale") cmd_select_scale(ctx);
        else if (command == "lemmas") cmd_lemmas(ctx);
        else if (command == "pv-scan") cmd_pv_scan(ctx);
        else if (command == "contradiction") cmd_contradiction(ctx);
        else if (command == "verify-phi") cmd_verify_phi(ctx);
        else throw PreconditionError("unknown command: " + command);
    } catch (const PipelineError& e) {
        std::cerr << "pipeline stage failed: " << e.stage() << ": " << e.what() << "\n";
        return 2;
    } catch (const GrowthAnomalyError& e) {
        std::cerr << "pipeline stage failed: select_scale: " << e.what() << "\n";
        return 2;
    } catch (const SpreadDegeneracyError& e) {
        std::cerr << "pipeline stage failed: select_spread_points: " << e.what() << "\n";
        return 2;
    }
    ctx.write_results();
    const auto t1 = std::chrono::steady_clock::now();
    ctx.write_manifest(command,
                       std::chrono::duration<double, std::milli>(t1 - t0).count());
    return 0;
}

}  // namespace rieszlab::cli
