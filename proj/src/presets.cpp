#include "floquet_hop/presets.hpp"

#include <fmt/format.h>

namespace floquet_hop {

namespace {

const std::vector<Method> kFiveMethods = {Method::FQME, Method::FSH, Method::FaQME, Method::FaSH,
                                          Method::FaSHDensity};

constexpr double kFigureTFinal = 400.0;
constexpr double kEquilibriumTFinal = 500.0;

FigurePreset frequency_sweep(std::string name, double A, std::vector<double> omegas) {
  FigurePreset p{name, {}};
  for (double w : omegas) {
    p.cases.push_back({fmt::format("{}_Omega{}", name, w), figure_config(-2.0, 1.0, A, w, kFigureTFinal),
                       kFiveMethods});
  }
  return p;
}

}  // namespace

SimConfig figure_config(double Ed_bar, double kT, double A, double Omega, double t_final) {
  SimConfig c;
  c.model.Ed_bar = Ed_bar;
  c.model.g = 0.75;
  c.model.omega = 0.3;
  c.model.Gamma = 1.0;
  c.model.kT_el = kT;
  c.model.kT_nuc0 = kT;
  c.drive.A = A;
  c.drive.Omega = Omega;
  c.t_final = t_final;
  return c;
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5"}; }

FigurePreset figure_preset(std::string_view name) {
  if (name == "fig1") {
    FigurePreset p{"fig1", {}};
    for (double kT : {0.25, 0.5, 1.0}) {
      p.cases.push_back({fmt::format("fig1_kT{}", kT), figure_config(0.0, kT, 0.2, 0.2, kFigureTFinal),
                         {Method::FQME, Method::FSH, Method::FaQME, Method::FaSH}});
    }
    return p;
  }
  if (name == "fig2") {
    return {"fig2", {{"fig2", figure_config(-2.0, 1.0, 0.0, 0.0, kEquilibriumTFinal), kFiveMethods}}};
  }
  if (name == "fig3") return frequency_sweep("fig3", 0.2, {0.2, 1.0, 10.0});
  if (name == "fig4") return frequency_sweep("fig4", 1.0, {0.5, 1.0, 10.0});
  if (name == "fig5") return frequency_sweep("fig5", 4.0, {0.5, 1.0, 10.0});
  throw ConfigError({fmt::format("unknown preset '{}' (expected fig1..fig5)", name)});
}

}  // namespace floquet_hop
