#pragma once

#include <string>

#include <json.hpp>

#include "rieszlab/diagnostics.hpp"
#include "rieszlab/geometry.hpp"
#include "rieszlab/measure.hpp"
#include "rieszlab/riesz.hpp"
#include "rieszlab/smoothing.hpp"

namespace rieszlab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Fixed shortest-round-trip formatting used for all CSV numbers.
std::string format_double(double x);

// Measure serialization: columnar CSV with header x1,...,xm,weight plus a
// JSON metadata sidecar.
void save_measure_csv(const DiscreteMeasure& mu, const std::string& path);
DiscreteMeasure load_measure_csv(const std::string& path, double radius_floor_factor = 4.0);

Json measure_metadata(const DiscreteMeasure& mu, const AmbientParams& ambient,
                      const Json& generator);

// Cutoff profile dump: rho, s, connector coefficients, validated bounds.
Json profile_dump(const SmoothingProfile& profile);

Json to_json(const SpreadSelection& sel);
Json to_json(const ScaleSelection& sel);
Json to_json(const UAnnuli& annuli);
Json to_json(const Lemma3Result& r);
Json to_json(const Lemma4Result& r);
Json to_json(const Lemma5Result& r);
Json to_json(const ContradictionReport& r);
Json to_json(const PvClassification& c);

/// pv_scan CSV: eps, comp_1..comp_m, osc_tail.
void save_pv_scan_csv(const PvScan& scan, int dim, const std::string& path,
                      const std::string& config_hash = "");

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace rieszlab
