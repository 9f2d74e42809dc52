#include "experiment_config.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "rieszlab/errors.hpp"
#include "rieszlab/prng.hpp"

namespace rieszlab::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw PreconditionError("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw PreconditionError("config: bad integer value for " + key + ": '" + v + "'");
    }
}

}  // namespace

void ExperimentConfig::set(const std::string& dotted_key, const std::string& value) {
    const std::string v = trim(value);
    if (dotted_key == "ambient.m") m = static_cast<int>(parse_int(dotted_key, v));
    else if (dotted_key == "ambient.s") s = parse_double(dotted_key, v);
    else if (dotted_key == "measure.family") family = v;
    else if (dotted_key == "measure.ratio") ratio = parse_double(dotted_key, v);
    else if (dotted_key == "measure.depth") depth = static_cast<int>(parse_int(dotted_key, v));
    else if (dotted_key == "measure.resolution") resolution = parse_double(dotted_key, v);
    else if (dotted_key == "measure.radius") radius = parse_double(dotted_key, v);
    else if (dotted_key == "measure.side") side = parse_double(dotted_key, v);
    else if (dotted_key == "measure.count") count = static_cast<int>(parse_int(dotted_key, v));
    else if (dotted_key == "measure.path") path = v;
    else if (dotted_key == "smoothing.rho") rho = parse_double(dotted_key, v);
    else if (dotted_key == "grids.r0") r0 = parse_double(dotted_key, v);
    else if (dotted_key == "grids.eps0") eps0 = parse_double(dotted_key, v);
    else if (dotted_key == "grids.pv_eps_max") pv_eps_max = parse_double(dotted_key, v);
    else if (dotted_key == "grids.pv_generations")
        pv_generations = static_cast<int>(parse_int(dotted_key, v));
    else if (dotted_key == "grids.per_octave")
        per_octave = static_cast<int>(parse_int(dotted_key, v));
    else if (dotted_key == "fdelta.delta") delta = parse_double(dotted_key, v);
    else if (dotted_key == "fdelta.c0") c0 = parse_double(dotted_key, v);
    else if (dotted_key == "fdelta.osc_generations")
        osc_generations = static_cast<int>(parse_int(dotted_key, v));
    else if (dotted_key == "pipeline.checks") checks = v;
    else if (dotted_key == "pipeline.tau") tau = parse_double(dotted_key, v);
    else if (dotted_key == "pipeline.max_k") max_k = static_cast<int>(parse_int(dotted_key, v));
    else if (dotted_key == "pipeline.sample_points")
        sample_points = static_cast<int>(parse_int(dotted_key, v));
    else if (dotted_key == "pipeline.tol_conv") tol_conv = parse_double(dotted_key, v);
    else if (dotted_key == "pipeline.tol_osc_factor")
        tol_osc_factor = parse_double(dotted_key, v);
    else if (dotted_key == "run.out") out = v;
    else if (dotted_key == "run.seed")
        seed = static_cast<std::uint64_t>(parse_int(dotted_key, v));
    else if (dotted_key == "run.threads") threads = static_cast<int>(parse_int(dotted_key, v));
    else
        throw PreconditionError("config: unknown key '" + dotted_key + "'");
}

ExperimentConfig ExperimentConfig::load(const std::string& config_path) {
    ExperimentConfig cfg;
    const std::string text = read_text_file(config_path);

    if (config_path.size() >= 5 && config_path.substr(config_path.size() - 5) == ".json") {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const std::exception& e) {
            throw PreconditionError("config: JSON parse error in " + config_path + ": " + e.what());
        }
        for (const auto& [section, body] : j.items()) {
            if (!body.is_object())
                throw PreconditionError("config: section '" + section + "' must be an object");
            for (const auto& [key, value] : body.items()) {
                std::string sv;
                if (value.is_string())
                    sv = value.get<std::string>();
                else
                    sv = value.dump();
                cfg.set(section + "." + key, sv);
            }
        }
        cfg.validate();
        return cfg;
    }

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw PreconditionError("config: " + config_path + ":" + std::to_string(lineno) +
                                        ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw PreconditionError("config: " + config_path + ":" + std::to_string(lineno) +
                                    ": expected key = value");
        if (section.empty())
            throw PreconditionError("config: " + config_path + ":" + std::to_string(lineno) +
                                    ": key outside any [section]");
        const std::string key = trim(t.substr(0, eq));
        try {
            cfg.set(section + "." + key, t.substr(eq + 1));
        } catch (const PreconditionError& e) {
            throw PreconditionError(std::string(e.what()) + " (" + config_path + ":" +
                                    std::to_string(lineno) + ")");
        }
    }
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (m < 1 || m > kMaxDim) throw PreconditionError("config: ambient.m out of range");
    if (!(s > 0.0) || s > static_cast<double>(m))
        throw PreconditionError("config: ambient.s must satisfy 0 < s <= m");
    if (!(rho > 0.0 && rho < 0.5)) throw PreconditionError("config: smoothing.rho must be in (0, 1/2)");
    if (!(tau > 0.0 && tau < 0.5)) throw PreconditionError("config: pipeline.tau must be in (0, 1/2)");
    if (depth < 1) throw PreconditionError("config: measure.depth must be >= 1");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw PreconditionError("config: measure.ratio must be in (0, 1)");
    if (!(resolution > 0.0)) throw PreconditionError("config: measure.resolution must be > 0");
    if (pv_generations < 4)
        throw PreconditionError("config: grids.pv_generations must be >= 4");
    if (sample_points < 1)
        throw PreconditionError("config: pipeline.sample_points must be >= 1");
    if (max_k < 1) throw PreconditionError("config: pipeline.max_k must be >= 1");
    const bool known = family == "cantor" || family == "segment" || family == "circle" ||
                       family == "patch" || family == "cloud" || family == "csv";
    if (!known) throw PreconditionError("config: unknown measure.family '" + family + "'");
    if (family == "csv" && path.empty())
        throw PreconditionError("config: measure.path required for family csv");
}

Json ExperimentConfig::to_json() const {
    Json j;
    j["ambient"] = {{"m", m}, {"s", s}};
    j["measure"] = {{"family", family},         {"ratio", ratio},   {"depth", depth},
                    {"resolution", resolution}, {"radius", radius}, {"side", side},
                    {"count", count},           {"path", path}};
    j["smoothing"] = {{"rho", rho}};
    j["grids"] = {{"r0", r0},
                  {"eps0", eps0},
                  {"pv_eps_max", pv_eps_max},
                  {"pv_generations", pv_generations},
                  {"per_octave", per_octave}};
    j["fdelta"] = {{"delta", delta}, {"c0", c0}, {"osc_generations", osc_generations}};
    j["pipeline"] = {{"checks", checks},
                     {"tau", tau},
                     {"max_k", max_k},
                     {"sample_points", sample_points},
                     {"tol_conv", tol_conv},
                     {"tol_osc_factor", tol_osc_factor}};
    // run.out and run.threads are execution details, not experiment identity;
    // they live in the manifest so runs compare byte-for-byte across workers.
    j["run"] = {{"seed", seed}};
    return j;
}

std::string ExperimentConfig::canonical() const {
    std::map<std::string, std::string> kv;
    const Json j = to_json();
    for (const auto& [section, body] : j.items())
        for (const auto& [key, value] : body.items())
            kv[section + "." + key] = value.is_string() ? value.get<std::string>() : value.dump();
    std::ostringstream out_ss;
    for (const auto& [k, v] : kv) out_ss << k << "=" << v << "\n";
    return out_ss.str();
}

std::string ExperimentConfig::hash() const {
    const std::string c = canonical();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : c) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

DiscreteMeasure build_measure(const ExperimentConfig& cfg, Json& generator) {
    if (cfg.family == "cantor") {
        if (cfg.m != 1)
            throw PreconditionError("config: cantor family requires ambient.m = 1");
        generator = {{"family", "cantor"}, {"ratio", cfg.ratio}, {"depth", cfg.depth}};
        const auto spec = IfsSpec::cantor(cfg.ratio, cfg.depth);
        generator["similarity_dimension"] = spec.similarity_dimension();
        return build_ifs_measure(spec, AmbientParams::make(cfg.m, cfg.s));
    }
    if (cfg.family == "segment") {
        generator = {{"family", "segment"}, {"resolution", cfg.resolution}};
        Vec a(cfg.m), b(cfg.m);
        b[0] = 1.0;
        return build_rectifiable_measure(RectifiableSpec::segment(a, b), cfg.resolution);
    }
    if (cfg.family == "circle") {
        if (cfg.m < 2) throw PreconditionError("config: circle family requires ambient.m >= 2");
        generator = {{"family", "circle"}, {"radius", cfg.radius}, {"resolution", cfg.resolution}};
        return build_rectifiable_measure(RectifiableSpec::circle(Vec(cfg.m), cfg.radius),
                                         cfg.resolution);
    }
    if (cfg.family == "patch") {
        if (cfg.m < 3) throw PreconditionError("config: patch family requires ambient.m >= 3");
        generator = {{"family", "patch"}, {"side", cfg.side}, {"resolution", cfg.resolution}};
        Vec e1(cfg.m), e2(cfg.m);
        e1[0] = 1.0;
        e2[1] = 1.0;
        return build_rectifiable_measure(
            RectifiableSpec::plane_patch(Vec(cfg.m), {e1, e2}, {cfg.side, cfg.side}),
            cfg.resolution);
    }
    if (cfg.family == "cloud") {
        generator = {{"family", "cloud"}, {"count", cfg.count}, {"seed", cfg.seed}};
        SplitMix64 rng(cfg.seed);
        std::vector<double> pos, w;
        for (int i = 0; i < cfg.count; ++i) {
            for (int a = 0; a < cfg.m; ++a) pos.push_back(rng.uniform(-1.0, 1.0));
            w.push_back(rng.uniform(0.1, 1.0));
        }
        SpatialIndex probe(pos, cfg.m);
        return DiscreteMeasure(std::move(pos), std::move(w), cfg.m, probe.min_pairwise_gap());
    }
    if (cfg.family == "csv") {
        generator = {{"family", "csv"}, {"path", cfg.path}};
        return load_measure_csv(cfg.path);
    }
    throw PreconditionError("config: unknown measure.family '" + cfg.family + "'");
}

}  // namespace rieszlab::cli
