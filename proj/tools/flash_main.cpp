// flash: training-free hardware-aware architecture search toolkit.
//
// Subcommands: space size | space sample | degree | fit | predict | search |
// export fixtures. All results are JSON on stdout (or --out files); logs go
// to stderr. Exit codes: 0 ok, 1 usage, 2 infeasible, 3 bad data or model.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "flash/errors.hpp"
#include "flash/fixtures.hpp"
#include "flash/io.hpp"
#include "flash/optimizer.hpp"
#include "flash/topology.hpp"

namespace {

using nlohmann::json;

struct CommonArgs {
  std::string spec_arg;
  std::string hw_arg;
  std::string out_path;
};

flash::SpaceSpec resolve_spec(const std::string& arg) {
  if (arg.empty()) return flash::SpaceSpec{};
  return flash::spec_from_json(flash::read_json_arg(arg));
}

flash::HwConfig resolve_hw(const std::string& arg) {
  if (arg.empty()) return flash::HwConfig{};
  return flash::hw_from_json(flash::read_json_arg(arg));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    flash::write_file(out_path, text.empty() || text.back() == '\n'
                                    ? text
                                    : text + "\n");
  }
}

flash::ObjectiveMode parse_objective(const std::string& name) {
  if (name == "full") return flash::ObjectiveMode::full;
  if (name == "device") return flash::ObjectiveMode::device;
  if (name == "degree") return flash::ObjectiveMode::nn_degree;
  throw flash::DataError("unknown objective '" + name + "'");
}

struct FitArgs {
  std::string samples_path;
  std::string spec_arg;
  std::string hw_arg;
  std::string out_path;
};

// Shared scaffolding for the three hardware fits: collect (features, target)
// rows from the sample table, run OLS, report the model JSON.
template <typename RowFn, typename TargetFn>
flash::LinearModel fit_hw_model(const flash::SampleTable& table, RowFn&& row_of,
                                TargetFn&& target_of) {
  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  rows.reserve(table.rows.size());
  for (const flash::SampleRow& sample : table.rows) {
    rows.push_back(row_of(sample));
    targets.push_back(target_of(sample));
  }
  flash::LinearModel model;
  model.weights = flash::fit_linear(rows, targets);
  double err = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < model.weights.size(); ++j) {
      pred += model.weights[j] * rows[i][j];
    }
    err += (pred - targets[i]) * (pred - targets[i]);
  }
  model.rmse = std::sqrt(err / double(rows.size()));
  model.n_samples = rows.size();
  return model;
}

double require_measurement(const std::optional<double>& value,
                           const flash::SampleTable& table, const char* name) {
  if (!value) {
    throw flash::DataError(table.path.string() + " has no " + name + " column");
  }
  return *value;
}

int run(int argc, char** argv) {
  CLI::App app{"training-free hardware-aware neural architecture search"};
  app.require_subcommand(1);

  // --- space ---------------------------------------------------------------
  auto* space = app.add_subcommand("space", "search-space queries");
  space->require_subcommand(1);

  std::string size_spec;
  auto* size_cmd = space->add_subcommand("size", "exact cardinality of the space");
  size_cmd->add_option("--spec", size_spec, "space spec JSON (inline or path)");

  std::string sample_spec, sample_out;
  std::size_t sample_n = 1;
  std::uint64_t sample_seed = 1;
  auto* sample_cmd = space->add_subcommand("sample", "draw uniform valid configs");
  sample_cmd->add_option("--n", sample_n, "number of configs")->required();
  sample_cmd->add_option("--seed", sample_seed, "RNG seed");
  sample_cmd->add_option("--spec", sample_spec, "space spec JSON (inline or path)");
  sample_cmd->add_option("--out", sample_out, "write result to file");

  // --- degree ----------------------------------------------------------------
  std::string degree_arch, degree_spec;
  auto* degree_cmd = app.add_subcommand("degree", "NN-Degree of an architecture");
  degree_cmd->add_option("--arch", degree_arch, "architecture JSON (inline or path)")
      ->required();
  degree_cmd->add_option("--spec", degree_spec, "space spec JSON (inline or path)");

  // --- fit -------------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "calibrate predictor / cost models");
  fit->require_subcommand(1);
  FitArgs fit_acc, fit_lat, fit_en, fit_area;
  auto add_fit = [&](const char* name, const char* help, FitArgs& args,
                     bool needs_hw) {
    auto* cmd = fit->add_subcommand(name, help);
    cmd->add_option("--samples", args.samples_path, "sample CSV")->required();
    cmd->add_option("--spec", args.spec_arg, "space spec JSON (inline or path)");
    if (needs_hw) {
      cmd->add_option("--hw", args.hw_arg, "hardware config JSON (inline or path)");
    }
    cmd->add_option("--out", args.out_path, "write model JSON to file");
    return cmd;
  };
  auto* fit_acc_cmd = add_fit("accuracy", "three-parameter accuracy model",
                              fit_acc, false);
  auto* fit_lat_cmd = add_fit("latency", "linear latency model", fit_lat, true);
  auto* fit_en_cmd = add_fit("energy", "linear per-tile energy model", fit_en, true);
  auto* fit_area_cmd = add_fit("area", "tile-count area model", fit_area, true);

  // --- predict -----------------------------------------------------------------
  std::string predict_arch, predict_models, predict_spec, predict_objective = "full";
  auto* predict_cmd = app.add_subcommand("predict", "predicted metrics of one arch");
  predict_cmd->add_option("--arch", predict_arch, "architecture JSON (inline or path)")
      ->required();
  predict_cmd->add_option("--models", predict_models, "model directory")->required();
  predict_cmd->add_option("--spec", predict_spec, "space spec JSON (inline or path)");
  predict_cmd->add_option("--objective", predict_objective,
                          "full | device | degree");

  // --- search ------------------------------------------------------------------
  std::string search_mode, search_spec, search_models, search_out;
  std::string search_objective = "full";
  double theta_min = 0, area_max = 0, latency_max = 0, energy_max = 0;
  int lambda = 4;
  std::size_t search_samples = 20000;
  std::uint64_t search_seed = 1;
  auto* search_cmd = app.add_subcommand("search", "constrained architecture search");
  search_cmd
      ->add_option("--mode", search_mode, "shgo | training-free | brute")
      ->required()
      ->check(CLI::IsMember({"shgo", "training-free", "brute"}));
  search_cmd->add_option("--spec", search_spec, "space spec JSON (inline or path)");
  search_cmd->add_option("--models", search_models, "model directory")->required();
  search_cmd->add_option("--objective", search_objective, "full | device | degree");
  auto* theta_opt = search_cmd->add_option("--theta-min", theta_min,
                                           "minimum predicted accuracy");
  auto* area_opt = search_cmd->add_option("--area-max", area_max, "mm^2 bound");
  auto* lat_opt = search_cmd->add_option("--latency-max", latency_max, "ms bound");
  auto* en_opt = search_cmd->add_option("--energy-max", energy_max, "mJ bound");
  search_cmd->add_option("--lambda", lambda, "coarse lattice step (>= 1)");
  search_cmd->add_option("--samples", search_samples,
                         "sample count for training-free mode");
  search_cmd->add_option("--seed", search_seed, "RNG seed");
  search_cmd->add_option("--out", search_out, "write result to file");

  // --- export --------------------------------------------------------------
  auto* export_cmd = app.add_subcommand("export", "write bundled artifacts");
  export_cmd->require_subcommand(1);
  std::string fx_dir, fx_spec, fx_hw;
  flash::FixtureOptions fx_options;
  auto* fixtures_cmd = export_cmd->add_subcommand(
      "fixtures", "synthetic sample CSVs from ground-truth models");
  fixtures_cmd->add_option("--out-dir", fx_dir, "output directory")->required();
  fixtures_cmd->add_option("--seed", fx_options.seed, "RNG seed");
  fixtures_cmd->add_option("--spec", fx_spec, "space spec JSON (inline or path)");
  fixtures_cmd->add_option("--hw", fx_hw, "hardware config JSON (inline or path)");
  fixtures_cmd->add_option("--n-acc", fx_options.n_accuracy, "accuracy samples");
  fixtures_cmd->add_option("--n-hw", fx_options.n_hw, "hardware samples");
  fixtures_cmd->add_option("--noise", fx_options.noise_sigma,
                           "multiplicative gaussian noise sigma");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return int(flash::ExitCode::usage);
  }

  if (size_cmd->parsed()) {
    const flash::SpaceSpec spec = resolve_spec(size_spec);
    std::cout << flash::search_space_size(spec) << "\n";
    return 0;
  }

  if (sample_cmd->parsed()) {
    const flash::SpaceSpec spec = resolve_spec(sample_spec);
    const auto configs = flash::sample_uniform(spec, sample_seed, sample_n);
    json arr = json::array();
    for (const flash::ArchConfig& c : configs) {
      arr.push_back(json::parse(flash::arch_to_json(c)));
    }
    emit(arr.dump(2), sample_out);
    return 0;
  }

  if (degree_cmd->parsed()) {
    const flash::SpaceSpec spec = resolve_spec(degree_spec);
    const flash::ArchConfig arch =
        flash::arch_from_json(flash::read_json_arg(degree_arch));
    const flash::DegreeReport report =
        flash::nn_degree(arch, spec, /*enforce_constraints=*/false);
    json j;
    j["g"] = report.g.to_double();
    j["g_lattice"] = report.g_lattice.to_double();
    j["g_random"] = report.g_random.to_double();
    json cells = json::array();
    for (const flash::CellDegree& cell : report.cells) {
      cells.push_back({{"cell", cell.cell},
                       {"w_c", cell.w_c},
                       {"d_c", cell.d_c},
                       {"sc", cell.sc},
                       {"g_lattice", cell.g_lattice.to_double()},
                       {"g_random", cell.g_random.to_double()}});
    }
    j["per_cell"] = cells;
    emit(j.dump(2), "");
    return 0;
  }

  if (fit_acc_cmd->parsed()) {
    const flash::SpaceSpec spec = resolve_spec(fit_acc.spec_arg);
    const flash::SampleTable table = flash::load_samples(fit_acc.samples_path, spec);
    std::vector<flash::AccuracySample> samples;
    for (const flash::SampleRow& row : table.rows) {
      flash::AccuracySample s;
      s.g = flash::nn_degree(row.arch, spec).g.to_double();
      s.theta = require_measurement(row.accuracy, table, "accuracy");
      samples.push_back(s);
    }
    const flash::AccuracyModel model = flash::fit_accuracy(samples);
    if (model.b <= 0.0) {
      std::cerr << "warning: fitted b <= 0; accuracy does not increase with "
                   "NN-Degree in this sample set\n";
    }
    emit(flash::accuracy_model_to_json(model), fit_acc.out_path);
    return 0;
  }

  const bool lat = fit_lat_cmd->parsed();
  const bool en = fit_en_cmd->parsed();
  const bool ar = fit_area_cmd->parsed();
  if (lat || en || ar) {
    const FitArgs& args = lat ? fit_lat : en ? fit_en : fit_area;
    const flash::SpaceSpec spec = resolve_spec(args.spec_arg);
    const flash::HwConfig hw = resolve_hw(args.hw_arg);
    const flash::SampleTable table = flash::load_samples(args.samples_path, spec);
    flash::LinearModel model;
    std::string kind;
    if (lat) {
      kind = "latency";
      model = fit_hw_model(
          table,
          [&](const flash::SampleRow& row) {
            const flash::FeatureSet f = flash::features(row.arch, spec, hw);
            return std::vector<double>{f.comp[0], f.comp[1], f.comp[2],
                                       f.comp[3], f.noc[0], f.noc[1]};
          },
          [&](const flash::SampleRow& row) {
            return require_measurement(row.latency_ms, table, "latency_ms");
          });
    } else if (en) {
      kind = "energy";
      model = fit_hw_model(
          table,
          [&](const flash::SampleRow& row) {
            const flash::FeatureSet f = flash::features(row.arch, spec, hw);
            std::vector<double> r(f.energy.begin(), f.energy.end());
            for (double& v : r) v *= double(f.n_tiles);
            return r;
          },
          [&](const flash::SampleRow& row) {
            return require_measurement(row.energy_mj, table, "energy_mj");
          });
    } else {
      kind = "area";
      model = fit_hw_model(
          table,
          [&](const flash::SampleRow& row) {
            return std::vector<double>{
                double(flash::total_tiles(row.arch, spec, hw)), 1.0};
          },
          [&](const flash::SampleRow& row) {
            return require_measurement(row.area_mm2, table, "area_mm2");
          });
    }
    emit(flash::linear_model_to_json(model, kind), args.out_path);
    return 0;
  }

  if (predict_cmd->parsed()) {
    const flash::SpaceSpec spec = resolve_spec(predict_spec);
    const flash::ArchConfig arch =
        flash::arch_from_json(flash::read_json_arg(predict_arch));
    const flash::ValidationReport report = flash::validate(arch, spec);
    if (!report.ok()) {
      throw flash::DataError("architecture is outside the space: " +
                             report.violations.front());
    }
    const flash::ModelStore store = flash::ModelStore::load(predict_models);
    const flash::HwConfig hw = store.hw.value_or(flash::HwConfig{});
    flash::Objective objective;
    objective.mode = parse_objective(predict_objective);
    objective.space = &spec;
    objective.hw = &hw;
    objective.accuracy = store.accuracy ? &*store.accuracy : nullptr;
    objective.cost = &store.cost;
    const flash::Evaluation eval = flash::evaluate(arch, objective, {});
    json j;
    j["theta"] = eval.metrics.theta;
    j["area_mm2"] = eval.metrics.area_mm2;
    j["latency_ms"] = eval.metrics.latency_ms;
    j["energy_mj"] = eval.metrics.energy_mj;
    j["g"] = eval.metrics.g;
    emit(j.dump(2), "");
    return 0;
  }

  if (search_cmd->parsed()) {
    const flash::SpaceSpec spec = resolve_spec(search_spec);
    const flash::ModelStore store = flash::ModelStore::load(search_models);
    const flash::HwConfig hw = store.hw.value_or(flash::HwConfig{});
    flash::Objective objective;
    objective.mode = parse_objective(search_objective);
    objective.space = &spec;
    objective.hw = &hw;
    objective.accuracy = store.accuracy ? &*store.accuracy : nullptr;
    objective.cost = &store.cost;

    flash::Constraints constraints;
    if (*theta_opt) constraints.theta_min = theta_min;
    if (*area_opt) constraints.area_max = area_max;
    if (*lat_opt) constraints.latency_max = latency_max;
    if (*en_opt) constraints.energy_max = energy_max;

    flash::SearchResult result;
    if (search_mode == "shgo") {
      result = flash::hierarchical_search(spec, objective, constraints, lambda);
    } else if (search_mode == "training-free") {
      result = flash::training_free_search(spec, objective, constraints,
                                           search_samples, search_seed);
    } else {
      result = flash::brute_force_search(spec, objective, constraints);
    }
    emit(flash::search_result_to_json(result), search_out);
    return 0;
  }

  if (fixtures_cmd->parsed()) {
    const flash::SpaceSpec spec = resolve_spec(fx_spec);
    const flash::HwConfig hw = resolve_hw(fx_hw);
    const flash::FixtureTruth truth;
    flash::write_fixture_files(fx_dir, spec, hw, truth, fx_options);
    json j;
    j["dir"] = fx_dir;
    j["files"] = {"accuracy.csv", "latency.csv", "energy.csv",
                  "area.csv",     "hw.json",     "spec.json",
                  "truth.json"};
    j["seed"] = fx_options.seed;
    emit(j.dump(2), "");
    return 0;
  }

  return int(flash::ExitCode::usage);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const flash::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return int(flash::ExitCode::infeasible);
  } catch (const flash::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(flash::ExitCode::bad_data);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(flash::ExitCode::bad_data);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(flash::ExitCode::bad_data);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(flash::ExitCode::bad_data);
  }
}
