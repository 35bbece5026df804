// floquet-hop: command-line front end.
//
//   floquet-hop run --config <file> [--method M] [--seed S] [--out <file>]
//   floquet-hop compare --config <file> --methods M1,M2,... --out-dir <dir>
//   floquet-hop figure --preset fig1|..|fig5 --out-dir <dir> [--n-traj N] [--t-final T]
//
// Exit status: 0 success, 2 configuration/usage error, 3 runtime abort,
// 4 I/O failure. Failures print one line "error: <category>: <message>".

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "floquet_hop/config.hpp"
#include "floquet_hop/presets.hpp"
#include "floquet_hop/series_io.hpp"
#include "floquet_hop/simulation.hpp"

namespace fh = floquet_hop;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfig = 2, kRuntime = 3, kIo = 4 };

int fail(std::string_view category, std::string_view message, int code) {
  std::string flat(message);
  for (char& c : flat) {
    if (c == '\n') c = ' ';
  }
  std::cerr << "error: " << category << ": " << flat << '\n';
  return code;
}

std::vector<fh::Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<fh::Method> out;
  std::vector<std::string> errors;
  for (const auto& n : names) {
    if (const auto m = fh::parse_method(n)) out.push_back(*m);
    else errors.push_back(fmt::format("unknown method '{}'", n));
  }
  if (out.empty() && errors.empty()) errors.emplace_back("no methods given");
  if (!errors.empty()) throw fh::ConfigError(errors);
  return out;
}

void print_summary(const std::vector<fh::SummaryRow>& rows) {
  for (const auto& r : rows) {
    std::cerr << fmt::format("{:<16} {:<13} pop={:.5f}±{:.5f} ekin={:.5f}±{:.5f}{}\n", r.label,
                             fh::method_name(r.method), r.steady.pop, r.steady.pop_err,
                             r.steady.ekin, r.steady.ekin_err, r.steady.flat ? "" : " (not flat)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet surface hopping and master-equation dynamics near a metal surface"};
  app.require_subcommand(1);

  std::string config_path, method_name, out_path, out_dir, preset;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> methods;
  std::optional<int> n_traj;
  std::optional<double> t_final;

  auto* run_cmd = app.add_subcommand("run", "Run one method and write its time series");
  run_cmd->add_option("--config", config_path, "INI config file")->required();
  run_cmd->add_option("--method", method_name, "Override [run] method");
  run_cmd->add_option("--seed", seed, "Override [run] seed");
  run_cmd->add_option("--out", out_path, "Output CSV (default: [run] output, else stdout)");

  auto* compare_cmd = app.add_subcommand("compare", "Run several methods on identical physics");
  compare_cmd->add_option("--config", config_path, "INI config file")->required();
  compare_cmd->add_option("--methods", methods, "Comma-separated methods")->required()->delimiter(',');
  compare_cmd->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* figure_cmd = app.add_subcommand("figure", "Run a canonical figure parameter set");
  figure_cmd->add_option("--preset", preset, "fig1 .. fig5")->required();
  figure_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
  figure_cmd->add_option("--n-traj", n_traj, "Override the trajectory count");
  figure_cmd->add_option("--t-final", t_final, "Override the run length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kConfig);
  }

  try {
    if (*run_cmd) {
      fh::SimConfig config = fh::load_config(config_path);
      if (!method_name.empty()) config.method = parse_methods({method_name}).front();
      if (seed) config.seed = *seed;
      if (!config.method) throw fh::ConfigError({"no method given (set [run] method or --method)"});
      const fh::RunSettings settings = fh::resolve(config, *config.method);
      const fh::RunOutput output = fh::run(settings);
      const std::string target = !out_path.empty() ? out_path : config.output;
      if (target.empty()) fh::write_series(output.series, std::cout);
      else fh::write_series(output.series, target);
      const auto ss = fh::steady_state(output.series, settings.drive.period());
      std::cerr << fmt::format("{}: pop={:.5f}±{:.5f} ekin={:.5f}±{:.5f} (dt={}, N={})\n",
                               fh::method_name(settings.method), ss.pop, ss.pop_err, ss.ekin,
                               ss.ekin_err, settings.dt, settings.basis_N);
    } else if (*compare_cmd) {
      const fh::SimConfig config = fh::load_config(config_path);
      const auto list = parse_methods(methods);
      const auto rows = fh::compare(config, list, out_dir, "");
      fh::write_summary(rows, fs::path(out_dir) / "summary.csv");
      print_summary(rows);
    } else if (*figure_cmd) {
      fh::FigurePreset p = fh::figure_preset(preset);
      fs::create_directories(out_dir);
      std::vector<fh::SummaryRow> all;
      for (auto& c : p.cases) {
        if (n_traj) c.config.n_traj = *n_traj;
        if (t_final) c.config.t_final = *t_final;
        std::ofstream(fs::path(out_dir) / (c.label + ".ini")) << fh::format_config(c.config);
        const auto rows = fh::compare(c.config, c.methods, out_dir, c.label + "_");
        all.insert(all.end(), rows.begin(), rows.end());
        print_summary(rows);
      }
      fh::write_summary(all, fs::path(out_dir) / "summary.csv");
    }
  } catch (const fh::ConfigError& e) {
    return fail("config", e.what(), kConfig);
  } catch (const fh::ModelError& e) {
    return fail("config", e.what(), kConfig);
  } catch (const std::invalid_argument& e) {
    return fail("config", e.what(), kConfig);
  } catch (const fh::RuntimeAbort& e) {
    return fail("runtime", e.what(), kRuntime);
  } catch (const fh::SeriesFormatError& e) {
    return fail("io", e.what(), kIo);
  } catch (const fs::filesystem_error& e) {
    return fail("io", e.what(), kIo);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), kRuntime);
  }
  return kOk;
}
