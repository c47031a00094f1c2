#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flash/arch_space.hpp"
#include "flash/hw_model.hpp"
#include "flash/optimizer.hpp"
#include "flash/predictor.hpp"

namespace flash {

inline constexpr int kSchemaVersion = 1;

// --- architecture records ---------------------------------------------------

// "t1;t2;...": the skip budgets of a config as one CSV-safe field.
std::string join_t(const std::vector<int>& t);
std::vector<int> split_t(const std::string& joined);

// JSON object {"w_m":..., "n_c":..., "d_c":..., "t":"t1;t2;t3"}.
std::string arch_to_json(const ArchConfig& config);
ArchConfig arch_from_json(const std::string& text);

// --- spec / hardware configs ------------------------------------------------

std::string spec_to_json(const SpaceSpec& spec);
SpaceSpec spec_from_json(const std::string& text);

std::string hw_to_json(const HwConfig& hw);
HwConfig hw_from_json(const std::string& text);

// --- sample tables ------------------------------------------------------

// One parsed CSV row: the architecture plus whatever measurement column the
// file carries. Accuracies arrive normalized to fractions in (0,1); columns
// greater than 1 are read as percentages.
struct SampleRow {
  ArchConfig arch;
  std::optional<double> accuracy;
  std::optional<double> latency_ms;
  std::optional<double> energy_mj;
  std::optional<double> area_mm2;
  std::size_t line = 0;  // 1-based line number in the source file
};

struct SampleTable {
  std::filesystem::path path;
  std::vector<SampleRow> rows;
};

// Reads a CSV with header `w_m,n_c,d_c,t,<measurement>`. Every row must
// validate against the spec; violations, malformed fields, and non-finite or
// non-positive measurements raise DataError naming the line.
SampleTable load_samples(const std::filesystem::path& path, const SpaceSpec& spec);

// --- model persistence --------------------------------------------------

std::string accuracy_model_to_json(const AccuracyModel& model);
AccuracyModel accuracy_model_from_json(const std::string& text);

std::string linear_model_to_json(const LinearModel& model, const std::string& kind);
LinearModel linear_model_from_json(const std::string& text, const std::string& kind);

// A directory of model files: accuracy.json, latency.json, energy.json,
// area.json, hw.json. Missing files leave the matching member unfitted;
// schema_version mismatches are rejected.
struct ModelStore {
  std::optional<AccuracyModel> accuracy;
  CostModels cost;
  std::optional<HwConfig> hw;

  static ModelStore load(const std::filesystem::path& dir);
  void save(const std::filesystem::path& dir) const;
};

// --- search results -------------------------------------------------------

std::string search_result_to_json(const SearchResult& result);

// --- small helpers ----------------------------------------------------------

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

// Accepts inline JSON (first non-space byte '{' or '[') or a path to a file.
std::string read_json_arg(const std::string& arg);

}  // namespace flash
