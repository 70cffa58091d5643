#pragma once

// File formats: dataset CSV (source_id, obs_index, y_1..y_d, c_1..c_k),
// per-source draw CSV (source_id, draw_index, v_1..v_q [, nu]), trace CSV
// (one row per retained iteration), summaries JSON and report CSV/JSON.
// All numeric fields are written with 17 significant digits so files
// round-trip exactly.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hiermc/diagnostics.hpp"
#include "hiermc/model.hpp"

namespace hiermc {

void write_dataset_csv(const std::filesystem::path& path,
                       const HierarchicalDataset& dataset);
HierarchicalDataset read_dataset_csv(const std::filesystem::path& path);

void write_meta_json(const std::filesystem::path& path,
                     const HierarchicalDataset& dataset, std::uint64_t seed);

void write_draws_csv(const std::filesystem::path& path, const SourceDraws& draws);
/// Reads one or more sources from a draws CSV (rows grouped by source_id).
std::vector<SourceDraws> read_draws_csv(const std::filesystem::path& path);

/// Ingests every *.csv in a directory. Raises IngestionError on an empty
/// directory or when files disagree on draw dimensionality (the message
/// lists the offending files).
std::vector<SourceDraws> read_draws_dir(const std::filesystem::path& dir);

void write_summaries_json(const std::filesystem::path& path,
                          const std::vector<SourceDraws>& sources);
std::vector<SourceDraws> read_summaries_json(const std::filesystem::path& path);

void write_trace_csv(const std::filesystem::path& path, const ChainTrace& trace);

void write_report_csv(const std::filesystem::path& path,
                      const std::vector<ExperimentReport>& reports);
void write_report_json(const std::filesystem::path& path,
                       const std::vector<ExperimentReport>& reports);

/// FNV-1a hash of a file's bytes, for run manifests.
std::uint64_t file_hash(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace hiermc
