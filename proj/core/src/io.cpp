#include "flash/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "flash/errors.hpp"

namespace flash {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw DataError(std::string("malformed JSON for ") + what);
  }
  return j;
}

template <typename T>
T get_field(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) {
    throw DataError(std::string(what) + " is missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string(what) + " field '" + key + "' has the wrong type");
  }
}

template <typename T>
T get_field_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

void check_schema(const json& j, const char* what) {
  const int version = get_field_or(j, "schema_version", kSchemaVersion);
  if (version != kSchemaVersion) {
    throw DataError(std::string(what) + " has schema_version " +
                    std::to_string(version) + ", expected " +
                    std::to_string(kSchemaVersion));
  }
}

// JSON value for a metric that may be unavailable.
json metric_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

int parse_int(const std::string& field, const std::string& context) {
  int value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DataError(context + ": '" + field + "' is not an integer");
  }
  return value;
}

double parse_double(const std::string& field, const std::string& context) {
  try {
    std::size_t consumed = 0;
    const double value = std::stod(field, &consumed);
    if (consumed != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw DataError(context + ": '" + field + "' is not a number");
  }
}

}  // namespace

std::string join_t(const std::vector<int>& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(t[i]);
  }
  return out;
}

std::vector<int> split_t(const std::string& joined) {
  std::vector<int> t;
  std::string field;
  std::istringstream in(joined);
  while (std::getline(in, field, ';')) {
    t.push_back(parse_int(field, "t field"));
  }
  if (t.empty()) throw DataError("t field is empty");
  return t;
}

std::string arch_to_json(const ArchConfig& config) {
  json j;
  j["w_m"] = config.w_m;
  j["n_c"] = config.n_c;
  j["d_c"] = config.d_c;
  j["t"] = join_t(config.t);
  return j.dump();
}

ArchConfig arch_from_json(const std::string& text) {
  const json j = parse_json(text, "architecture");
  ArchConfig config;
  config.w_m = get_field<int>(j, "w_m", "architecture");
  config.n_c = get_field<int>(j, "n_c", "architecture");
  config.d_c = get_field<int>(j, "d_c", "architecture");
  config.t = split_t(get_field<std::string>(j, "t", "architecture"));
  return config;
}

std::string spec_to_json(const SpaceSpec& spec) {
  json j;
  j["w_m_min"] = spec.w_m_min;
  j["w_m_max"] = spec.w_m_max;
  j["d_c_min"] = spec.d_c_min;
  j["d_c_max"] = spec.d_c_max;
  j["n_c"] = spec.n_c_min;
  if (!spec.n_c_fixed()) {
    j["n_c_min"] = spec.n_c_min;
    j["n_c_max"] = spec.n_c_max;
  }
  j["base_widths"] = spec.base_widths;
  j["t1_min"] = spec.t1_min;
  return j.dump();
}

SpaceSpec spec_from_json(const std::string& text) {
  const json j = parse_json(text, "space spec");
  SpaceSpec spec;
  spec.w_m_min = get_field_or(j, "w_m_min", spec.w_m_min);
  spec.w_m_max = get_field_or(j, "w_m_max", spec.w_m_max);
  spec.d_c_min = get_field_or(j, "d_c_min", spec.d_c_min);
  spec.d_c_max = get_field_or(j, "d_c_max", spec.d_c_max);
  const int n_c = get_field_or(j, "n_c", spec.n_c_min);
  spec.n_c_min = get_field_or(j, "n_c_min", n_c);
  spec.n_c_max = get_field_or(j, "n_c_max", n_c);
  spec.base_widths = get_field_or(j, "base_widths", spec.base_widths);
  spec.t1_min = get_field_or(j, "t1_min", spec.t1_min);
  if (spec.w_m_min > spec.w_m_max || spec.n_c_min > spec.n_c_max ||
      spec.n_c_min < 1) {
    throw DataError("space spec has inverted or empty ranges");
  }
  if (spec.n_c_max > 16) {
    throw DataError("space spec supports at most 16 cells");
  }
  return spec;
}

std::string hw_to_json(const HwConfig& hw) {
  json j;
  j["pe_x"] = hw.pe_x;
  j["pe_y"] = hw.pe_y;
  j["n_bits"] = hw.n_bits;
  j["ce_per_tile"] = hw.ce_per_tile;
  j["impe_per_ce"] = hw.impe_per_ce;
  j["kx"] = hw.kx;
  j["ky"] = hw.ky;
  j["h0"] = hw.h0;
  j["w0"] = hw.w0;
  j["c0"] = hw.c0;
  j["a_tile"] = hw.a_tile;
  j["a_router"] = hw.a_router;
  j["a_rest"] = hw.a_rest;
  j["schema_version"] = kSchemaVersion;
  return j.dump();
}

HwConfig hw_from_json(const std::string& text) {
  const json j = parse_json(text, "hardware config");
  check_schema(j, "hardware config");
  HwConfig hw;
  hw.pe_x = get_field_or(j, "pe_x", hw.pe_x);
  hw.pe_y = get_field_or(j, "pe_y", hw.pe_y);
  hw.n_bits = get_field_or(j, "n_bits", hw.n_bits);
  hw.ce_per_tile = get_field_or(j, "ce_per_tile", hw.ce_per_tile);
  hw.impe_per_ce = get_field_or(j, "impe_per_ce", hw.impe_per_ce);
  hw.kx = get_field_or(j, "kx", hw.kx);
  hw.ky = get_field_or(j, "ky", hw.ky);
  hw.h0 = get_field_or(j, "h0", hw.h0);
  hw.w0 = get_field_or(j, "w0", hw.w0);
  hw.c0 = get_field_or(j, "c0", hw.c0);
  hw.a_tile = get_field_or(j, "a_tile", hw.a_tile);
  hw.a_router = get_field_or(j, "a_router", hw.a_router);
  hw.a_rest = get_field_or(j, "a_rest", hw.a_rest);
  for (int v : {hw.pe_x, hw.pe_y, hw.n_bits, hw.ce_per_tile, hw.impe_per_ce,
                hw.kx, hw.ky, hw.h0, hw.w0, hw.c0}) {
    if (v <= 0) throw DataError("hardware config fields must be positive");
  }
  return hw;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

SampleTable load_samples(const std::filesystem::path& path, const SpaceSpec& spec) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() != 5 || header[0] != "w_m" || header[1] != "n_c" ||
      header[2] != "d_c" || header[3] != "t") {
    throw DataError(path.string() +
                    ": header must be w_m,n_c,d_c,t,<measurement>");
  }
  const std::string& measurement = header[4];
  const bool is_accuracy = measurement == "accuracy";
  const bool is_latency = measurement == "latency_ms";
  const bool is_energy = measurement == "energy_mj";
  const bool is_area = measurement == "area_mm2";
  if (!is_accuracy && !is_latency && !is_energy && !is_area) {
    throw DataError(path.string() + ": unknown measurement column '" +
                    measurement + "'");
  }

  SampleTable table;
  table.path = path;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string context = path.string() + ":" + std::to_string(line_no);
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw DataError(context + ": expected 5 fields, got " +
                      std::to_string(fields.size()));
    }
    SampleRow row;
    row.line = line_no;
    row.arch.w_m = parse_int(fields[0], context);
    row.arch.n_c = parse_int(fields[1], context);
    row.arch.d_c = parse_int(fields[2], context);
    try {
      row.arch.t = split_t(fields[3]);
    } catch (const DataError& e) {
      throw DataError(context + ": " + e.what());
    }
    const ValidationReport report = validate(row.arch, spec);
    if (!report.ok()) {
      throw DataError(context + ": invalid architecture (" +
                      report.violations.front() + ")");
    }
    double value = parse_double(fields[4], context);
    if (!std::isfinite(value) || value <= 0.0) {
      throw DataError(context + ": measurement must be finite and positive");
    }
    if (is_accuracy) {
      if (value > 1.0) value /= 100.0;  // percentage column
      if (value <= 0.0 || value >= 1.0) {
        throw DataError(context + ": accuracy " + fields[4] +
                        " is outside (0,1) after normalization");
      }
      row.accuracy = value;
    } else if (is_latency) {
      row.latency_ms = value;
    } else if (is_energy) {
      row.energy_mj = value;
    } else {
      row.area_mm2 = value;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string accuracy_model_to_json(const AccuracyModel& model) {
  json j;
  j["kind"] = "accuracy";
  j["a"] = model.a;
  j["b"] = model.b;
  j["c"] = model.c;
  j["rmse"] = model.rmse;
  j["n_samples"] = model.n_samples;
  j["schema_version"] = kSchemaVersion;
  return j.dump();
}

AccuracyModel accuracy_model_from_json(const std::string& text) {
  const json j = parse_json(text, "accuracy model");
  check_schema(j, "accuracy model");
  if (get_field<std::string>(j, "kind", "accuracy model") != "accuracy") {
    throw DataError("model kind is not 'accuracy'");
  }
  AccuracyModel model;
  model.a = get_field<double>(j, "a", "accuracy model");
  model.b = get_field<double>(j, "b", "accuracy model");
  model.c = get_field<double>(j, "c", "accuracy model");
  model.rmse = get_field_or(j, "rmse", 0.0);
  model.n_samples = get_field_or<std::size_t>(j, "n_samples", 0);
  return model;
}

std::string linear_model_to_json(const LinearModel& model, const std::string& kind) {
  json j;
  j["kind"] = kind;
  j["weights"] = model.weights;
  j["rmse"] = model.rmse;
  j["n_samples"] = model.n_samples;
  j["schema_version"] = kSchemaVersion;
  return j.dump();
}

LinearModel linear_model_from_json(const std::string& text, const std::string& kind) {
  const json j = parse_json(text, "linear model");
  check_schema(j, "linear model");
  if (get_field<std::string>(j, "kind", "linear model") != kind) {
    throw DataError("model kind '" +
                    get_field<std::string>(j, "kind", "linear model") +
                    "' does not match expected '" + kind + "'");
  }
  LinearModel model;
  model.weights = get_field<std::vector<double>>(j, "weights", "linear model");
  model.rmse = get_field_or(j, "rmse", 0.0);
  model.n_samples = get_field_or<std::size_t>(j, "n_samples", 0);
  return model;
}

ModelStore ModelStore::load(const std::filesystem::path& dir) {
  ModelStore store;
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw DataError("model directory " + dir.string() + " does not exist");
  }
  if (fs::exists(dir / "accuracy.json")) {
    store.accuracy = accuracy_model_from_json(read_file(dir / "accuracy.json"));
  }
  if (fs::exists(dir / "latency.json")) {
    const LinearModel joint =
        linear_model_from_json(read_file(dir / "latency.json"), "latency");
    if (joint.weights.size() != 6) {
      throw DataError("latency model needs 6 weights (4 computation + 2 NoC)");
    }
    store.cost.lat_comp.weights.assign(joint.weights.begin(),
                                       joint.weights.begin() + 4);
    store.cost.lat_noc.weights.assign(joint.weights.begin() + 4,
                                      joint.weights.end());
    store.cost.lat_comp.rmse = store.cost.lat_noc.rmse = joint.rmse;
    store.cost.lat_comp.n_samples = store.cost.lat_noc.n_samples = joint.n_samples;
  }
  if (fs::exists(dir / "energy.json")) {
    store.cost.energy = linear_model_from_json(read_file(dir / "energy.json"),
                                               "energy");
    if (store.cost.energy.weights.size() != 7) {
      throw DataError("energy model needs 7 weights");
    }
  }
  if (fs::exists(dir / "area.json")) {
    store.cost.area = linear_model_from_json(read_file(dir / "area.json"), "area");
    if (store.cost.area.weights.size() != 2) {
      throw DataError("area model needs 2 weights");
    }
  }
  if (fs::exists(dir / "hw.json")) {
    store.hw = hw_from_json(read_file(dir / "hw.json"));
  }
  return store;
}

void ModelStore::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  if (accuracy) {
    write_file(dir / "accuracy.json", accuracy_model_to_json(*accuracy) + "\n");
  }
  if (cost.latency_fitted()) {
    LinearModel joint;
    joint.weights = cost.lat_comp.weights;
    joint.weights.insert(joint.weights.end(), cost.lat_noc.weights.begin(),
                         cost.lat_noc.weights.end());
    joint.rmse = cost.lat_comp.rmse;
    joint.n_samples = cost.lat_comp.n_samples;
    write_file(dir / "latency.json", linear_model_to_json(joint, "latency") + "\n");
  }
  if (cost.energy.fitted()) {
    write_file(dir / "energy.json",
               linear_model_to_json(cost.energy, "energy") + "\n");
  }
  if (cost.area.fitted()) {
    write_file(dir / "area.json", linear_model_to_json(cost.area, "area") + "\n");
  }
  if (hw) {
    write_file(dir / "hw.json", hw_to_json(*hw) + "\n");
  }
}

std::string search_result_to_json(const SearchResult& result) {
  json j;
  j["best"] = json::parse(arch_to_json(result.best));
  j["value"] = result.value;
  j["metrics"] = {
      {"theta", metric_or_null(result.metrics.theta)},
      {"area_mm2", metric_or_null(result.metrics.area_mm2)},
      {"latency_ms", metric_or_null(result.metrics.latency_ms)},
      {"energy_mj", metric_or_null(result.metrics.energy_mj)},
      {"g", metric_or_null(result.metrics.g)},
  };
  j["evaluations"] = result.evaluations;
  j["feasible"] = result.feasible;
  json trace = json::array();
  for (const TraceEntry& entry : result.trace) {
    json e;
    e["w_m"] = entry.w_m;
    e["coarse"] = json::parse(arch_to_json(entry.coarse));
    e["coarse_value"] = entry.coarse_value;
    e["fine"] = json::parse(arch_to_json(entry.fine));
    e["fine_value"] = entry.fine_value;
    e["feasible"] = entry.feasible;
    e["evaluations"] = entry.evaluations;
    trace.push_back(e);
  }
  j["trace"] = trace;
  return j.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

std::string read_json_arg(const std::string& arg) {
  for (char ch : arg) {
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
    if (ch == '{' || ch == '[') return arg;
    break;
  }
  return read_file(arg);
}

}  // namespace flash
