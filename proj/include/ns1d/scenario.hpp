/**
 * @file scenario.hpp
 * @brief Run configuration: initial-data family, grid, model parameters and output cadence,
 *        plus the INI-style loader.
 *
 * Config schema (all keys optional unless marked):
 *
 *     [scenario]
 *     name = shallow_water_bump
 *     init = gaussian-bump        ; hoff-step | gaussian-bump | near-vacuum | custom-table
 *     rho_minus = 1
 *     rho_plus = 1
 *     amplitude = 0.5             ; density bump (gaussian/near-vacuum) or velocity bump (hoff-step)
 *     sigma = 1                   ; bump width
 *     velocity_amplitude = 0      ; extra velocity bump for gaussian-bump / near-vacuum
 *     table = data.csv            ; custom-table only: columns x,rho,u
 *     T = 1
 *     output_dt = 0.1
 *     form = U                    ; U | V | both
 *     mollify_n = 50
 *
 *     [grid]
 *     L = 10
 *     N = 1024
 *
 *     [params]
 *     alpha = 1                   ; required
 *     gamma = 2                   ; required
 *     a = 1
 *     mu = 1
 *     eps = 0.125
 *     reg_n = 100
 *     beta = half                 ; half: 1/2 + eps | alpha: alpha/2 + eps
 *
 *     [solver]
 *     safety = 0.4
 *
 *     [diagnostics]
 *     moments = 0, 2, 8, 30
 *     gronwall_slack = 0.10
 */
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ns1d/constitutive.hpp"
#include "ns1d/mesh.hpp"
#include "ns1d/run.hpp"
#include "ns1d/solver.hpp"

namespace ns1d {

enum class InitFamily { HoffStep, GaussianBump, NearVacuum, CustomTable };
enum class SolverForm { U, V, Both };

const char* to_string(InitFamily f);
const char* to_string(SolverForm f);

struct Scenario {
  std::string name = "scenario";
  InitFamily init = InitFamily::GaussianBump;
  double rho_minus = 1.0;
  double rho_plus = 1.0;
  double amplitude = 0.5;
  double sigma = 1.0;
  double velocity_amplitude = 0.0;
  std::filesystem::path table;
  double T = 1.0;
  double output_dt = 0.1;
  SolverForm form = SolverForm::U;
  std::optional<int> mollify_n;
  double L = 10.0;
  std::size_t N = 1024;
  Params params;
  double safety = 0.4;
  std::vector<int> moments{0, 2, 8, 30};
  double gronwall_slack = 0.10;

  ValidationReport validation;
  std::vector<std::string> warnings;

  std::vector<Form> forms() const;
  RunOptions run_options() const;
};

/// Parses a config file; the result is validated. Throws ConfigError naming the line or
/// field at fault, IoError when the file cannot be read.
Scenario load_config(const std::filesystem::path& path);
Scenario parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

/// Checks every scenario invariant, attaches the parameter report and warns (without
/// failing) when the parameters leave the global-existence region.
void validate_scenario(Scenario& s);

/// Compact C-infinity bump exp(1 - 1/(1 - y^2)) with peak 1 at y = 0, zero for |y| >= 1.
double velocity_bump(double y);

struct InitialData {
  Mesh mesh;
  BackgroundProfile profile;
  FlowState state;  ///< U-form, end cells at the far-field state
};

/// Builds the mesh, background profile and (mollified, when requested) initial data.
InitialData build_initial_data(const Scenario& s);

}  // namespace ns1d
