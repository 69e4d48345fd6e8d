#pragma once
//
// Run configuration: command-line flags override a JSON config file, which
// overrides the defaults below.
//
#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kornlab/error.hpp"
#include "kornlab/quadrature.hpp"

namespace kornlab::cli {

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"identities", "symbol", "korn", "counterexample", "kernel"};
  return names;
}

struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  int samples = 1000;
  int kmax = 4;
  bool kmax_explicit = false;  // set by a flag or the config file
  int grid_n = 16;
  double p = 2.0;
  std::array<double, 6> box{-1.0, -1.0, -1.0, 1.0, 1.0, 1.0};
  std::string output_path;  // empty: stdout
  std::string format = "json";

  BoxDomain box_domain(int points_per_axis = 64) const {
    return BoxDomain(Vec3d(box[0], box[1], box[2]), Vec3d(box[3], box[4], box[5]), points_per_axis);
  }
};

/// Thrown for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

namespace detail {

[[noreturn]] inline void usage(const std::string& flag, const std::string& what) {
  throw Error(ErrorCode::UsageError, flag + ": " + what);
}

inline void validate(const RunConfig& c) {
  if (c.samples < 1) usage("--samples", "must be >= 1");
  if (c.kmax < 1) usage("--kmax", "must be >= 1");
  if (c.grid_n < 4 || (c.grid_n & (c.grid_n - 1)) != 0) usage("--grid-n", "must be a power of two >= 4");
  if (!(c.p >= 1.0 && c.p <= 64.0)) usage("--p", "must lie in [1, 64]");
  for (int d = 0; d < 3; ++d)
    if (!(c.box[d] < c.box[d + 3])) usage("--box", "lower corner must be below upper corner in every axis");
  if (c.format != "json" && c.format != "csv") usage("--format", "must be json or csv");
}

inline void apply_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) usage("--config", "cannot read " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    usage("--config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) usage("--config", "top level must be an object");
  static const std::set<std::string> known{"seed", "samples", "kmax", "grid_n", "p", "box", "out", "format"};
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) usage("--config", "unknown key '" + key + "'");
      if (key == "seed") c.seed = value.get<std::uint64_t>();
      if (key == "samples") c.samples = value.get<int>();
      if (key == "kmax") {
        c.kmax = value.get<int>();
        c.kmax_explicit = true;
      }
      if (key == "grid_n") c.grid_n = value.get<int>();
      if (key == "p") c.p = value.get<double>();
      if (key == "box") {
        const auto v = value.get<std::vector<double>>();
        if (v.size() != 6) usage("--config", "box needs 6 numbers");
        std::copy(v.begin(), v.end(), c.box.begin());
      }
      if (key == "out") c.output_path = value.get<std::string>();
      if (key == "format") c.format = value.get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    usage("--config", std::string("wrong value type: ") + e.what());
  }
}

}  // namespace detail

/// Parses arguments (without the program name).
inline RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Korn-type inequality experiments: identities, symbols, constants, counterexamples", "kornlab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int samples = 0, kmax = 0, grid_n = 0;
  double p = 0.0;
  std::vector<double> box;
  std::string out, format, config_path;
  auto* o_seed = app.add_option("--seed", seed, "random seed (default 1)");
  auto* o_samples = app.add_option("--samples", samples, "random samples per check (default 1000)");
  auto* o_kmax = app.add_option("--kmax", kmax, "frequency or k-range bound (default 4)");
  auto* o_grid = app.add_option("--grid-n", grid_n, "torus grid points per axis (default 16)");
  auto* o_p = app.add_option("--p", p, "L^p exponent (default 2)");
  auto* o_box = app.add_option("--box", box, "x0,y0,z0,x1,y1,z1 (default -1,-1,-1,1,1,1)")->delimiter(',')->expected(6);
  auto* o_out = app.add_option("--out", out, "output file (default stdout)");
  auto* o_format = app.add_option("--format", format, "json or csv (default json)");
  app.add_option("--config", config_path, "JSON file with defaults for the flags above");
  for (const auto& name : command_names()) app.add_subcommand(name, "run the " + name + " experiment");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::UsageError, e.what());
  }

  RunConfig cfg;
  cfg.command = app.get_subcommands().front()->get_name();
  if (!config_path.empty()) detail::apply_file(cfg, config_path);
  if (o_seed->count()) cfg.seed = seed;
  if (o_samples->count()) cfg.samples = samples;
  if (o_kmax->count()) {
    cfg.kmax = kmax;
    cfg.kmax_explicit = true;
  }
  if (o_grid->count()) cfg.grid_n = grid_n;
  if (o_p->count()) cfg.p = p;
  if (o_box->count()) std::copy(box.begin(), box.end(), cfg.box.begin());
  if (o_out->count()) cfg.output_path = out;
  if (o_format->count()) cfg.format = format;
  detail::validate(cfg);
  return cfg;
}

}  // namespace kornlab::cli
