#include "rieszlab/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rieszlab/errors.hpp"

namespace rieszlab {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw BuildError("cannot open for writing: " + path);
    f << content;
    if (!f) throw BuildError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw BuildError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void save_measure_csv(const DiscreteMeasure& mu, const std::string& path) {
    std::ostringstream out;
    for (int a = 0; a < mu.dim(); ++a) out << "x" << (a + 1) << ",";
    out << "weight\n";
    for (std::uint32_t i = 0; i < mu.size(); ++i) {
        const Vec p = mu.atom(i);
        for (int a = 0; a < mu.dim(); ++a) out << format_double(p[a]) << ",";
        out << format_double(mu.weight(i)) << "\n";
    }
    write_text_file(path, out.str());
}

DiscreteMeasure load_measure_csv(const std::string& path, double radius_floor_factor) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line)) throw BuildError("empty measure file: " + path);

    int dim = 0;
    {
        std::stringstream header(line);
        std::string col;
        while (std::getline(header, col, ',')) {
            if (col == "weight") break;
            ++dim;
        }
    }
    if (dim < 1 || dim > kMaxDim) throw BuildError("bad measure header in " + path);

    std::vector<double> positions, weights;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream row(line);
        std::string cell;
        for (int a = 0; a < dim; ++a) {
            if (!std::getline(row, cell, ',')) throw BuildError("short row in " + path);
            positions.push_back(std::stod(cell));
        }
        if (!std::getline(row, cell, ',')) throw BuildError("missing weight in " + path);
        weights.push_back(std::stod(cell));
    }
    if (weights.empty()) throw BuildError("no atoms in " + path);

    double resolution = 1.0;
    if (weights.size() >= 2) {
        SpatialIndex probe(positions, dim);
        resolution = probe.min_pairwise_gap();
        if (!(resolution > 0.0)) resolution = 1e-12;
    }
    return DiscreteMeasure(std::move(positions), std::move(weights), dim, resolution, false,
                           radius_floor_factor);
}

Json measure_metadata(const DiscreteMeasure& mu, const AmbientParams& ambient,
                      const Json& generator) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["ambient"] = {{"m", ambient.m}, {"s", ambient.s}, {"n", ambient.n}};
    j["generator"] = generator;
    j["atom_count"] = mu.size();
    j["total_mass"] = mu.total_mass();
    j["resolution"] = mu.resolution();
    j["radius_floor"] = mu.radius_floor();
    j["degenerate_overlap"] = mu.degenerate_overlap();
    return j;
}

Json profile_dump(const SmoothingProfile& p) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["s"] = p.s();
    j["rho"] = p.rho();
    j["junctions"] = {p.j_power_end(), p.j_plateau_end(), p.j_linear_end(), p.support_end()};
    j["connector_a"] = {{"interval", {p.connector_a().a, p.connector_a().b}},
                        {"coefficients", p.connector_a().c}};
    j["connector_b"] = {{"interval", {p.connector_b().a, p.connector_b().b}},
                        {"coefficients", p.connector_b().c}};
    j["bounds"] = {{"sup_phi", p.bounds().sup_phi},
                   {"sup_phi_prime", p.bounds().sup_phi_prime},
                   {"sup_phi_second", p.bounds().sup_phi_second},
                   {"phi_prime_budget", (1.0 / p.rho()) * (1.0 + p.validation_slack())},
                   {"grid_points", p.bounds().grid_points}};
    return j;
}

namespace {
Json vec_json(const Vec& v) {
    Json a = Json::array();
    for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
    return a;
}
}  // namespace

Json to_json(const SpreadSelection& sel) {
    Json j;
    j["x0"] = vec_json(sel.x0);
    j["r"] = sel.r;
    j["ids"] = sel.ids;
    Json pts = Json::array();
    for (const Vec& p : sel.points) pts.push_back(vec_json(p));
    j["points"] = pts;
    j["hull_distances"] = sel.hull_distances;
    j["spread_ratio"] = sel.spread_ratio;
    return j;
}

Json to_json(const ScaleSelection& sel) {
    Json j;
    j["eps1"] = sel.eps1;
    j["omega0"] = sel.omega0;
    j["chosen_eps"] = sel.chosen_eps;
    j["k"] = sel.k;
    j["delta_k"] = sel.delta_k;
    j["theta_at_eps"] = sel.theta_at_eps;
    j["check_grid_points"] = sel.check_grid.size();
    return j;
}

Json to_json(const UAnnuli& a) {
    return Json{{"i1", a.i1}, {"i2", a.i2}, {"i3", a.i3}, {"i4", a.i4}, {"total", a.total()}};
}

Json to_json(const Lemma3Result& r) {
    return Json{{"lhs", r.lhs},
                {"rhs", r.rhs},
                {"sum_increments", r.sum_increments},
                {"tail_term", r.tail_term},
                {"empirical_c4", r.empirical_c4},
                {"anomaly", r.anomaly}};
}

Json to_json(const Lemma4Result& r) {
    return Json{{"u", r.u},         {"theta", r.theta}, {"eps", r.eps},
                {"bound", r.bound}, {"ratio", r.ratio}, {"pass", r.pass}};
}

Json to_json(const Lemma5Result& r) {
    return Json{{"max_pair_osc", r.max_pair_osc},
                {"delta", r.delta},
                {"ratio", r.ratio},
                {"points_used", r.points_used}};
}

Json to_json(const ContradictionReport& r) {
    Json j;
    j["tau"] = r.tau;
    j["rho"] = r.rho;
    j["s"] = r.s;
    j["normalization"] = r.normalization;
    j["delta_report"] = r.delta_report;
    j["delta_filter_used"] = r.delta_filter_used;
    j["filter_relaxed"] = r.filter_relaxed;
    j["x0_index"] = r.x0_index;
    j["r"] = r.r;
    j["r_constraint_ok"] = r.r_constraint_ok;
    j["mass_ratio"] = r.mass_ratio;
    j["eps1"] = r.eps1;
    j["eps"] = r.eps;
    j["k"] = r.k;
    j["omega0"] = r.omega0;
    j["theta_eps"] = r.theta_eps;
    j["theta_3eps"] = r.theta_3eps;
    j["u_value"] = r.u_value;
    j["hull_dist"] = r.hull_dist;
    j["mid_term"] = r.mid_term;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["ratio"] = r.ratio;
    return j;
}

Json to_json(const PvClassification& c) {
    return Json{{"verdict", to_string(c.verdict)},
                {"tail_osc", c.tail_osc},
                {"last_window_osc", c.last_window_osc},
                {"global_max_step", c.global_max_step},
                {"tail_max_step", c.tail_max_step}};
}

void save_pv_scan_csv(const PvScan& scan, int dim, const std::string& path,
                      const std::string& config_hash) {
    std::ostringstream out;
    if (!config_hash.empty()) out << "# config_hash=" << config_hash << "\n";
    out << "eps";
    for (int a = 0; a < dim; ++a) out << ",comp_" << (a + 1);
    out << ",osc_tail\n";
    for (std::size_t i = 0; i < scan.eps.size(); ++i) {
        out << format_double(scan.eps[i]);
        for (int a = 0; a < dim; ++a) out << "," << format_double(scan.values[i].value[a]);
        out << "," << format_double(scan.osc_tail[i]) << "\n";
    }
    write_text_file(path, out.str());
}

}  // namespace rieszlab
