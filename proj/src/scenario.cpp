#include "ns1d/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ns1d/errors.hpp"

namespace ns1d {

namespace pt = boost::property_tree;

const char* to_string(InitFamily f) {
  switch (f) {
    case InitFamily::HoffStep:
      return "hoff-step";
    case InitFamily::GaussianBump:
      return "gaussian-bump";
    case InitFamily::NearVacuum:
      return "near-vacuum";
    case InitFamily::CustomTable:
      return "custom-table";
  }
  return "?";
}

const char* to_string(SolverForm f) {
  switch (f) {
    case SolverForm::U:
      return "U";
    case SolverForm::V:
      return "V";
    case SolverForm::Both:
      return "both";
  }
  return "?";
}

std::vector<Form> Scenario::forms() const {
  switch (form) {
    case SolverForm::U:
      return {Form::U};
    case SolverForm::V:
      return {Form::V};
    case SolverForm::Both:
      return {Form::U, Form::V};
  }
  return {};
}

RunOptions Scenario::run_options() const {
  RunOptions o;
  o.T = T;
  o.output_dt = output_dt;
  o.safety = safety;
  o.moment_orders = moments;
  o.gronwall_slack = gronwall_slack;
  return o;
}

namespace {

const std::set<std::string> kKnownKeys = {
    "scenario.name",     "scenario.init",   "scenario.rho_minus", "scenario.rho_plus", "scenario.amplitude",
    "scenario.sigma",    "scenario.velocity_amplitude",           "scenario.table",    "scenario.T",
    "scenario.output_dt", "scenario.form",  "scenario.mollify_n", "grid.L",            "grid.N",
    "params.alpha",      "params.gamma",    "params.a",           "params.mu",         "params.eps",
    "params.reg_n",      "params.beta",     "solver.safety",      "diagnostics.moments",
    "diagnostics.gronwall_slack"};

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("field '" + key + "': expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw ConfigError("field '" + key + "': expected a finite number, got '" + text + "'");
  }
  return v;
}

long to_integer(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("field '" + key + "': expected an integer, got '" + text + "'");
  }
  if (used != text.size()) {
    throw ConfigError("field '" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

class Fields {
 public:
  explicit Fields(const pt::ptree& tree) {
    for (const auto& [section, body] : tree) {
      if (body.empty()) {
        throw ConfigError("key '" + section + "' must appear inside a [section]");
      }
      for (const auto& [key, value] : body) {
        const std::string full = section + "." + key;
        if (!kKnownKeys.count(full)) {
          throw ConfigError("unknown field '" + full + "'");
        }
        values_[full] = value.data();
      }
    }
  }

  std::optional<std::string> text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return trim(it->second);
  }

  void number(const std::string& key, double& out) const {
    if (auto t = text(key)) out = to_double(key, *t);
  }

  double required_number(const std::string& key) const {
    const auto t = text(key);
    if (!t || t->empty()) {
      throw ConfigError("missing required field '" + key + "'");
    }
    return to_double(key, *t);
  }

 private:
  std::map<std::string, std::string> values_;
};

InitFamily parse_family(const std::string& s) {
  if (s == "hoff-step") return InitFamily::HoffStep;
  if (s == "gaussian-bump") return InitFamily::GaussianBump;
  if (s == "near-vacuum") return InitFamily::NearVacuum;
  if (s == "custom-table") return InitFamily::CustomTable;
  throw ConfigError("field 'scenario.init': unknown family '" + s + "'");
}

SolverForm parse_form(const std::string& s) {
  if (s == "U" || s == "u") return SolverForm::U;
  if (s == "V" || s == "v") return SolverForm::V;
  if (s == "both") return SolverForm::Both;
  throw ConfigError("field 'scenario.form': expected U, V or both, got '" + s + "'");
}

struct Table {
  std::vector<double> x, rho, u;
};

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open initial-data table " + path.string());
  }
  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (std::isalpha(static_cast<unsigned char>(line[0]))) continue;  // header
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',')) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected x,rho,u");
    }
    const std::string where = path.string() + ":" + std::to_string(lineno);
    t.x.push_back(to_double(where, a));
    t.rho.push_back(to_double(where, b));
    t.u.push_back(to_double(where, c));
  }
  if (t.x.size() < 2) {
    throw ConfigError(path.string() + ": initial-data table needs at least two rows");
  }
  for (std::size_t i = 1; i < t.x.size(); ++i) {
    if (!(t.x[i] > t.x[i - 1])) {
      throw ConfigError(path.string() + ": x column must be strictly increasing");
    }
  }
  return t;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return (1.0 - w) * ys[j - 1] + w * ys[j];
}

}  // namespace

double velocity_bump(double y) {
  if (std::abs(y) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - y * y));
}

Scenario parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("parse error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  const Fields f(tree);

  Scenario s;
  if (auto v = f.text("scenario.name")) s.name = *v;
  if (auto v = f.text("scenario.init")) s.init = parse_family(*v);
  f.number("scenario.rho_minus", s.rho_minus);
  f.number("scenario.rho_plus", s.rho_plus);
  f.number("scenario.amplitude", s.amplitude);
  f.number("scenario.sigma", s.sigma);
  f.number("scenario.velocity_amplitude", s.velocity_amplitude);
  if (auto v = f.text("scenario.table")) {
    const std::filesystem::path p(*v);
    s.table = p.is_relative() ? base_dir / p : p;
  }
  f.number("scenario.T", s.T);
  f.number("scenario.output_dt", s.output_dt);
  if (auto v = f.text("scenario.form")) s.form = parse_form(*v);
  if (auto v = f.text("scenario.mollify_n")) s.mollify_n = static_cast<int>(to_integer("scenario.mollify_n", *v));

  f.number("grid.L", s.L);
  if (auto v = f.text("grid.N")) {
    const long n = to_integer("grid.N", *v);
    if (n < 0) throw ConfigError("field 'grid.N' must be positive");
    s.N = static_cast<std::size_t>(n);
  }

  s.params.alpha = f.required_number("params.alpha");
  s.params.gamma = f.required_number("params.gamma");
  f.number("params.a", s.params.a);
  f.number("params.mu", s.params.mu0);
  f.number("params.eps", s.params.eps);
  if (auto v = f.text("params.reg_n")) s.params.reg_n = static_cast<int>(to_integer("params.reg_n", *v));
  if (auto v = f.text("params.beta")) {
    if (*v == "half") {
      s.params.beta_alpha_half = false;
    } else if (*v == "alpha") {
      s.params.beta_alpha_half = true;
    } else {
      throw ConfigError("field 'params.beta': expected 'half' or 'alpha', got '" + *v + "'");
    }
  }

  f.number("solver.safety", s.safety);

  if (auto v = f.text("diagnostics.moments")) {
    s.moments.clear();
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const long order = to_integer("diagnostics.moments", item);
      s.moments.push_back(static_cast<int>(order));
    }
  }
  f.number("diagnostics.gronwall_slack", s.gronwall_slack);

  validate_scenario(s);
  return s;
}

Scenario load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void validate_scenario(Scenario& s) {
  s.validation = validate_params(s.params);
  s.warnings.clear();
  if (!s.validation.inside_theorem) {
    s.warnings.push_back("parameters outside the global-existence region: " + s.validation.failures());
  }
  if (!(s.T >= 0.0)) throw ConfigError("field 'scenario.T' must be non-negative");
  if (!(s.output_dt > 0.0)) throw ConfigError("field 'scenario.output_dt' must be positive");
  if (!(s.L >= 2.0)) throw ConfigError("field 'grid.L' must be at least 2");
  if (s.N < Mesh::min_cells) throw ConfigError("field 'grid.N' must be at least " + std::to_string(Mesh::min_cells));
  if (!(s.rho_minus > 0.0)) throw ConfigError("field 'scenario.rho_minus' must be positive");
  if (!(s.rho_plus > 0.0)) throw ConfigError("field 'scenario.rho_plus' must be positive");
  if (!(s.sigma > 0.0)) throw ConfigError("field 'scenario.sigma' must be positive");
  if (!(s.safety > 0.0 && s.safety <= 1.0)) throw ConfigError("field 'solver.safety' must lie in (0, 1]");
  if (!(s.gronwall_slack >= 0.0)) throw ConfigError("field 'diagnostics.gronwall_slack' must be non-negative");
  for (int m : s.moments) {
    if (m < 0) throw ConfigError("field 'diagnostics.moments' must hold non-negative integers");
  }
  if (s.mollify_n && *s.mollify_n < 1) throw ConfigError("field 'scenario.mollify_n' must be >= 1");
  if (s.mollify_n && 1.0 / *s.mollify_n > s.L) {
    throw ConfigError("field 'scenario.mollify_n': kernel support exceeds the domain");
  }
  if (s.init == InitFamily::NearVacuum && !(s.amplitude < 0.0)) {
    throw ConfigError("field 'scenario.amplitude' must be negative for near-vacuum data");
  }
  if (s.init == InitFamily::HoffStep && s.rho_minus == s.rho_plus) {
    s.warnings.push_back("hoff-step data with equal end states");
  }
  if (s.init == InitFamily::CustomTable && s.table.empty()) {
    throw ConfigError("field 'scenario.table' is required for custom-table data");
  }

  const InitialData init = build_initial_data(s);
  const double lo = *std::min_element(init.state.rho.begin(), init.state.rho.end());
  if (!(lo > 0.0)) {
    throw ConfigError("initial density must stay positive; amplitude gives min rho0 = " + std::to_string(lo));
  }
}

InitialData build_initial_data(const Scenario& s) {
  Mesh mesh(s.L, s.N);
  BackgroundProfile profile = background_profile(mesh, s.rho_minus, s.rho_plus);
  const std::size_t N = mesh.size();

  Field drho(N, 0.0);
  Field u(N, 0.0);
  switch (s.init) {
    case InitFamily::HoffStep:
      u = mesh.sample([&](double x) { return s.amplitude * velocity_bump(x / s.sigma); });
      break;
    case InitFamily::GaussianBump:
    case InitFamily::NearVacuum:
      drho = mesh.sample([&](double x) { return s.amplitude * std::exp(-x * x / (s.sigma * s.sigma)); });
      u = mesh.sample([&](double x) { return s.velocity_amplitude * velocity_bump(x / s.sigma); });
      break;
    case InitFamily::CustomTable: {
      const Table t = read_table(s.table);
      for (std::size_t i = 0; i < N; ++i) {
        drho[i] = interpolate(t.x, t.rho, mesh.x(i)) - profile.values[i];
        u[i] = interpolate(t.x, t.u, mesh.x(i));
      }
      break;
    }
  }

  if (s.mollify_n && !mollifier_is_identity(mesh, *s.mollify_n)) {
    drho = mollify(drho, mesh, *s.mollify_n);
    u = mollify(u, mesh, *s.mollify_n);
  }

  FlowState state{Field(N), std::move(u), Form::U, 0.0};
  for (std::size_t i = 0; i < N; ++i) state.rho[i] = profile.values[i] + drho[i];
  apply_far_field(state, FarField{s.rho_minus, s.rho_plus, 0.0, 0.0});
  return {std::move(mesh), std::move(profile), std::move(state)};
}

}  // namespace ns1d
