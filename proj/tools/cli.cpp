#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "alcs/config.hpp"
#include "alcs/gradcheck.hpp"
#include "alcs/metrics.hpp"
#include "alcs/plant.hpp"
#include "alcs/report.hpp"

namespace alcs::cli {

namespace {

namespace fs = std::filesystem;

// Flags of `simulate` that map one-to-one onto configuration keys.
const char* const kValueKeys[] = {
    "steps",    "e-desired",     "gamma-controller",   "gamma-inverse", "seed-controller",
    "seed-inverse", "seed-daylight", "lut",            "daylight",      "warmup",
    "error-scaling", "inverse-target-lag", "plant-delay", "out-dir"};

struct SimulateArgs {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  bool no_bias = false;
};

struct GradcheckArgs {
  std::uint64_t seed = 0;
  int trials = 100;
};

struct LutArgs {
  std::string out_path;
  int e_max = LutShape{}.e_max;
  double gamma_shape = LutShape{}.gamma_shape;
  int knots = LutShape{}.knot_count;
  std::string source = "synthetic";
  int query = 100;
};

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string(), 0, LoadError::Kind::Io);
  return out;
}

int report_load_error(const LoadError& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return e.kind() == LoadError::Kind::Io ? kIoError : kValidationError;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  SimConfig config;
  try {
    std::vector<Setting> settings;
    if (!args.config_path.empty()) settings = read_config_file(args.config_path);
    for (const char* key : kValueKeys)
      if (args.options.at(key)->count() > 0) settings.emplace_back(key, args.values.at(key));
    if (args.no_bias) settings.emplace_back("bias", "false");
    config = make_config(settings);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  std::optional<SimulationResult> run;
  try {
    run = run_simulation(config);
  } catch (const LoadError& e) {
    return report_load_error(e, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  const SimulationResult& result = *run;
  const BandReport report = band_report(result.records, config.warmup);
  const double extreme = extreme_rarity(result.records, config.warmup);
  try {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw LoadError("cannot create " + config.out_dir.string() + ": " + ec.message(), 0,
                            LoadError::Kind::Io);
    {
      auto csv = open_for_write(config.out_dir / "trajectory.csv");
      write_trajectory_csv(result.records, csv);
    }
    {
      auto summary = open_for_write(config.out_dir / "summary.txt");
      write_summary(report, extreme, summary);
    }
    write_plot_files(result.records, config.out_dir);
  } catch (const LoadError& e) {
    return report_load_error(e, err);
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }

  out << "steps " << config.steps << ", E_desired " << config.e_desired << ", daylight "
      << describe(config.daylight) << ", lut " << describe(config.lut) << '\n';
  write_summary(report, extreme, out);
  out << "wrote " << (config.out_dir / "trajectory.csv").string() << '\n';
  return kOk;
}

int cmd_gradcheck(const GradcheckArgs& args, std::ostream& out, std::ostream& err) {
  if (args.trials < 1) {
    err << "error: --trials must be >= 1\n";
    return kValidationError;
  }
  const auto result = gradient_check(args.seed, args.trials);
  char line[160];
  std::snprintf(line, sizeof line, "gradcheck: trials=%d max_relative_error=%.6e tolerance=%.0e\n",
                result.trials, result.max_relative_error, kGradCheckTolerance);
  out << line;
  const bool pass = result.max_relative_error < kGradCheckTolerance;
  out << (pass ? "PASS\n" : "FAIL\n");
  return pass ? kOk : kCheckFailed;
}

int cmd_lut_generate(const LutArgs& args, std::ostream& out, std::ostream& err) {
  ProcessLut lut = synth_default_lut();
  try {
    lut = synth_default_lut({args.e_max, args.gamma_shape, args.knots});
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  try {
    auto file = open_for_write(args.out_path);
    write_lut_csv(lut, file);
  } catch (const LoadError& e) {
    return report_load_error(e, err);
  }
  out << "wrote " << lut.knots().size() << " knots to " << args.out_path << '\n';
  return kOk;
}

int cmd_lut_inspect(const LutArgs& args, std::ostream& out, std::ostream& err) {
  if (args.query < D8bv::kMin || args.query > D8bv::kMax) {
    err << "error: --query " << args.query << " outside [0, 255]\n";
    return kValidationError;
  }
  ProcessLut lut = synth_default_lut();
  try {
    const LutSource source = parse_lut_source(args.source);
    if (const auto* shape = std::get_if<LutShape>(&source))
      lut = synth_default_lut(*shape);
    else
      lut = load_lut_csv(std::get<fs::path>(source));
  } catch (const LoadError& e) {
    return report_load_error(e, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  out << "knots: " << lut.knots().size() << '\n' << "       u      e\n";
  char line[64];
  for (const auto& k : lut.knots()) {
    std::snprintf(line, sizeof line, "  %6d %6d\n", k.u.value(), k.e.value());
    out << line;
  }
  bool monotone = true;
  for (int u = 1; u <= 255; ++u) monotone = monotone && lut(D8bv(u - 1)) <= lut(D8bv(u));
  out << "monotone: " << (monotone ? "true" : "false") << '\n';
  const D8bv u_star = brute_force_inverse(lut, D8bv(args.query));
  out << "inverse: e=" << args.query << " u*=" << u_star.value()
      << " lut(u*)=" << lut(u_star).value() << '\n';
  return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neural daylight control simulator", "alcs"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Run the closed loop and write trajectory, summary and plots");
  for (const char* key : kValueKeys)
    sim_args.options[key] = sim->add_option(std::string("--") + key, sim_args.values[key]);
  sim->add_option("--config", sim_args.config_path, "key = value configuration file");
  sim->add_flag("--no-bias", sim_args.no_bias, "Networks without bias terms");

  GradcheckArgs grad_args;
  auto* grad = app.add_subcommand("gradcheck", "Compare backprop with central differences");
  grad->add_option("--seed", grad_args.seed);
  grad->add_option("--trials", grad_args.trials);

  LutArgs lut_args;
  auto* lut = app.add_subcommand("lut", "Generate or inspect process look-up tables");
  lut->require_subcommand(1);
  auto* generate = lut->add_subcommand("generate", "Write a synthetic LUT as CSV");
  generate->add_option("--out", lut_args.out_path)->required();
  generate->add_option("--e-max", lut_args.e_max);
  generate->add_option("--gamma-shape", lut_args.gamma_shape);
  generate->add_option("--knots", lut_args.knots);
  auto* inspect = lut->add_subcommand("inspect", "Print knots, monotonicity and the inverse u*");
  inspect->add_option("--lut", lut_args.source, "CSV path or synthetic[:E_MAX,GAMMA,KNOTS]");
  inspect->add_option("--query", lut_args.query, "Illuminance to invert");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  if (sim->parsed()) return cmd_simulate(sim_args, out, err);
  if (grad->parsed()) return cmd_gradcheck(grad_args, out, err);
  if (generate->parsed()) return cmd_lut_generate(lut_args, out, err);
  return cmd_lut_inspect(lut_args, out, err);
}

} // namespace alcs::cli
