#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "tubemeasure/boundary_estimator.hpp"
#include "tubemeasure/curvature.hpp"
#include "tubemeasure/experiments.hpp"
#include "tubemeasure/geometry.hpp"
#include "tubemeasure/measures.hpp"

namespace tubemeasure {

/// Point file format: one point per line, coordinates separated by commas
/// or whitespace, '#' starts a comment, blank lines ignored. Dimension is
/// inferred from the first data line and enforced afterwards; violations
/// raise ParseError with the offending line number.
PointCloud read_point_cloud(std::istream& in);
PointCloud read_point_cloud_file(const std::string& path);
void write_point_cloud_file(const std::string& path, const PointCloud& cloud);

// DiscreteMeasure JSON schema: { "dim": n, "atoms": [ { "x": [...], "w": real } ] }

nlohmann::json measure_to_json(const DiscreteMeasure& measure);
DiscreteMeasure measure_from_json(const nlohmann::json& j);

/// Measure JSON plus a metadata block { r, N, seed, threads, offset_volume,
/// offset_volume_stderr }; with_meta=false leaves the metadata out.
nlohmann::json estimate_to_json(const BoundaryMeasureEstimate& estimate, std::uint64_t seed,
                                int threads, bool with_meta = true);

/// { radii, condition_number, profiles: [measure, ...] } plus optional meta.
nlohmann::json curvature_to_json(const CurvatureProfile& profile, std::uint64_t seed, int threads,
                                 bool with_meta = true);

/// CSV with header eps,dist,ratio,stderr,bound, one row per ladder entry.
std::string stability_to_csv(const StabilityReport& report);
nlohmann::json stability_to_json(const StabilityReport& report, bool with_meta = true);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& j);

} // namespace tubemeasure
