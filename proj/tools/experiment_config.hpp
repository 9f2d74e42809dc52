#pragma once

#include <cstdint>
#include <string>

#include "rieszlab/measure.hpp"
#include "rieszlab/serialize.hpp"

namespace rieszlab::cli {

/// Fully serializable experiment description. Every run embeds the canonical
/// hash of the effective config (file plus flag overrides) in its outputs.
struct ExperimentConfig {
    // [ambient]
    int m = 1;
    double s = 0.5;

    // [measure]  family: cantor | segment | circle | patch | cloud | csv
    std::string family = "cantor";
    double ratio = 0.25;
    int depth = 10;
    double resolution = 1.0 / 4096.0;
    double radius = 1.0;
    double side = 1.0;
    int count = 512;
    std::string path;

    // [smoothing]
    double rho = 0.05;

    // [grids]
    double r0 = 0.02;
    double eps0 = 0.01;
    double pv_eps_max = 0.25;
    int pv_generations = 12;
    int per_octave = 16;

    // [fdelta]
    double delta = 0.05;
    double c0 = 10.0;
    int osc_generations = 4;

    // [pipeline]
    std::string checks = "lemma1,lemma3,lemma4,lemma5";
    double tau = 0.125;
    int max_k = 8;
    int sample_points = 10;
    double tol_conv = 0.01;
    double tol_osc_factor = 0.05;

    // [run]
    std::string out = "out";
    std::uint64_t seed = 1;
    int threads = 0;

    /// Parses .json via the JSON mirror, anything else as INI sections.
    /// Throws PreconditionError with a line-level message on bad input.
    static ExperimentConfig load(const std::string& config_path);

    /// Applies one "section.key=value" override (CLI flags route through
    /// this so file and flags share validation).
    void set(const std::string& dotted_key, const std::string& value);

    void validate() const;

    Json to_json() const;

    /// Canonical "section.key=value" listing, sorted; basis of the hash.
    std::string canonical() const;

    /// FNV-1a 64 over the canonical form, as 16 hex digits.
    std::string hash() const;
};

/// Builds the configured measure; fills `generator` with its description.
DiscreteMeasure build_measure(const ExperimentConfig& cfg, Json& generator);

}  // namespace rieszlab::cli
