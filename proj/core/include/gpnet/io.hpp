#ifndef GPNET_IO_HPP
#define GPNET_IO_HPP

#include <string>
#include <vector>

#include "gpnet/experiments.hpp"
#include "gpnet/models.hpp"
#include "gpnet/netcalc.hpp"

namespace gpnet {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kModelSchemaVersion = 1;

// Model (de)serialization. The document carries a schema_version field and a
// family tag; matrices are row-major arrays of arrays. Round-trips exactly
// (floats written with 17 significant digits).
std::string model_to_json(const CrossCovModel& model);
CrossCovModel model_from_json(const std::string& text);
void write_model_json(const CrossCovModel& model, const std::string& path);
CrossCovModel read_model_json(const std::string& path);

// Field-sample CSV: header x,y[,z],<component names...>; one row per
// location; empty cells are missing observations.
struct FieldCsv {
  FieldSample sample;
  std::vector<std::string> names;
  std::vector<int> duplicate_rows;  // rows duplicating an earlier coordinate
};
FieldCsv read_field_csv(const std::string& path);
void write_field_csv(const FieldSample& sample, const std::vector<std::string>& names,
                     const std::string& path);

// Atomic write (temp file + rename), LF newlines.
void write_text_atomic(const std::string& path, const std::string& content);

// 17 significant digits, enough to round-trip a double.
std::string format_full(double v);

struct RunManifest {
  std::string tool = "gpnet";
  std::string version = kToolVersion;
  std::string command;
  std::string config_echo;  // JSON text of the effective configuration
  std::uint64_t master_seed = 0;
  std::string started_at, finished_at;  // ISO-8601 UTC; the only
                                        // run-dependent fields in a report
  std::vector<std::string> divergence_notes;
};

std::string iso8601_utc_now();
void write_manifest(const RunManifest& manifest, const std::string& out_dir);

std::string graph_summary_to_json(const GraphSummary& g);

// Report emission: one CSV per table plus manifest.json in out_dir.
void write_roc_report(const RocStudyReport& report, const std::string& out_dir,
                      RunManifest manifest);
void write_recovery_report(const RecoveryStudyReport& report, const std::string& out_dir,
                           RunManifest manifest);
void write_geo_report(const GeoPipelineReport& report, const std::string& out_dir,
                      RunManifest manifest);

}  // namespace gpnet

#endif
