#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "idslab/ids.hpp"
#include "idslab/operator.hpp"
#include "registry.hpp"

namespace idslab::app {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ConfigError(field + ": " + what); }

json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_to_json(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(toml_to_json(v));
    return out;
  }
  if (const auto* s = node.as_string()) return s->get();
  if (const auto* i = node.as_integer()) return i->get();
  if (const auto* f = node.as_floating_point()) return f->get();
  if (const auto* b = node.as_boolean()) return b->get();
  std::ostringstream os;
  node.visit([&os](const auto& v) {
    if constexpr (toml::is_date<decltype(v)> || toml::is_time<decltype(v)> || toml::is_date_time<decltype(v)>) os << v;
  });
  return os.str();
}

/// Field access with the dotted path kept for error messages.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "expected a table");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const json& raw(const std::string& key) const { return j_.at(key); }

  Reader table(const std::string& key) const {
    if (!has(key)) return Reader(empty_, at(key));
    return Reader(j_.at(key), at(key));
  }

  double number(const std::string& key, std::optional<double> def = std::nullopt) const {
    if (!has(key)) {
      if (def) return *def;
      fail(at(key), "required");
    }
    const json& v = j_.at(key);
    if (!v.is_number()) fail(at(key), "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at(key), "must be finite");
    return x;
  }

  long long integer(const std::string& key, std::optional<long long> def = std::nullopt) const {
    if (!has(key)) {
      if (def) return *def;
      fail(at(key), "required");
    }
    return as_integer(j_.at(key), at(key));
  }

  std::string string(const std::string& key, std::optional<std::string> def = std::nullopt) const {
    if (!has(key)) {
      if (def) return *def;
      fail(at(key), "required");
    }
    const json& v = j_.at(key);
    if (!v.is_string()) fail(at(key), "must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    const json& v = j_.at(key);
    if (!v.is_array()) fail(at(key), "must be an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(at(key) + "[" + std::to_string(i) + "]", "must be a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<int> integers(const std::string& key) const {
    std::vector<int> out;
    if (!has(key)) return out;
    const json& v = j_.at(key);
    if (v.is_number()) return {static_cast<int>(as_integer(v, at(key)))};
    if (!v.is_array()) fail(at(key), "must be an integer or an array of integers");
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(static_cast<int>(as_integer(v[i], at(key) + "[" + std::to_string(i) + "]")));
    return out;
  }

  void reject_unknown(std::initializer_list<const char*> known) const {
    std::set<std::string> k(known.begin(), known.end());
    for (const auto& [key, _] : j_.items())
      if (!k.count(key)) fail(at(key), "unknown key");
  }

 private:
  static long long as_integer(const json& v, const std::string& where) {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long long>(x);
    }
    fail(where, "must be an integer");
  }

  static inline const json empty_ = json::object();
  const json& j_;
  std::string path_;
};

Profile read_profile(const Reader& r) {
  r.reject_unknown({"shape", "amplitude", "width", "radius"});
  Profile p;
  const std::string shape = r.string("shape", "unit-cube");
  auto s = parse_profile_shape(shape);
  if (!s) fail(r.at("shape"), "unknown profile shape '" + shape + "' (unit-cube, gaussian-bump, exponential)");
  p.shape = *s;
  p.amplitude = r.number("amplitude", 1.0);
  p.width = r.number("width", 1.0);
  p.radius = r.number("radius", p.shape == ProfileShape::UnitCube ? 0.5 : 3.0 * p.width);
  if (p.shape == ProfileShape::UnitCube) {
    p.width = 1.0;
    p.radius = 0.5;
  }
  return p;
}

CouplingDist read_coupling(const Reader& r) {
  r.reject_unknown({"kind", "a", "b", "sigma", "p"});
  CouplingDist c;
  const std::string kind = r.string("kind", "uniform");
  auto k = parse_coupling_kind(kind);
  if (!k) fail(r.at("kind"), "unknown coupling '" + kind + "' (uniform, gaussian, two-point)");
  c.kind = *k;
  c.a = r.number("a", c.kind == CouplingKind::TwoPoint ? 1.0 : 0.0);
  c.b = r.number("b", c.kind == CouplingKind::TwoPoint ? -1.0 : c.kind == CouplingKind::Gaussian ? 0.0 : 1.0);
  c.sigma = r.number("sigma", 1.0);
  c.p = r.number("p", 0.5);
  return c;
}

Covariance read_covariance(const Reader& r) {
  r.reject_unknown({"kind", "c0", "length"});
  Covariance c;
  const std::string kind = r.string("kind", "gaussian-bump");
  auto k = parse_covariance_kind(kind);
  if (!k) fail(r.at("kind"), "unknown covariance '" + kind + "' (gaussian-bump, exponential)");
  c.kind = *k;
  c.c0 = r.number("c0", 1.0);
  c.length = r.number("length", 1.0);
  return c;
}

EnsembleSpec read_ensemble(const Reader& r) {
  r.reject_unknown({"kind", "profile", "coupling", "intensity", "covariance", "truncation"});
  const std::string kind = r.string("kind");
  auto k = parse_ensemble_kind(kind);
  if (!k) fail(r.at("kind"), "unknown ensemble '" + kind + "' (alloy, poisson, gaussian)");
  EnsembleSpec e;
  e.kind = *k;
  e.profile = read_profile(r.table("profile"));
  e.coupling = read_coupling(r.table("coupling"));
  e.intensity = r.number("intensity", 0.0);
  e.covariance = read_covariance(r.table("covariance"));
  if (r.has("truncation")) {
    e.truncation_level = r.number("truncation");
    if (!(*e.truncation_level > 0.0)) fail(r.at("truncation"), "must be positive");
  }
  try {
    e.validate();
  } catch (const InvalidArgument& err) {
    throw ConfigError(err.what());
  }
  return e;
}

EnergyGridSpec read_grid(const Reader& run) {
  EnergyGridSpec g;
  if (!run.has("energies")) return g;
  const json& v = run.raw("energies");
  const std::string where = run.at("energies");
  if (v.is_string()) {
    if (v.get<std::string>() != "pilot") fail(where, "expected \"pilot\", a table or an array");
    return g;
  }
  if (v.is_array()) {
    g.kind = EnergyGridSpec::Kind::List;
    g.values = run.numbers("energies");
    if (g.values.empty()) fail(where, "must not be empty");
    for (std::size_t i = 1; i < g.values.size(); ++i)
      if (!(g.values[i] > g.values[i - 1])) fail(where, "must be strictly ascending");
    return g;
  }
  Reader t(v, where);
  t.reject_unknown({"kind", "min", "max", "points", "values"});
  const std::string kind = t.string("kind", t.has("min") ? "uniform" : "pilot");
  const long long points = t.integer("points", 201);
  if (points < 1) fail(t.at("points"), "must be >= 1");
  g.points = static_cast<std::size_t>(points);
  if (kind == "pilot") return g;
  if (kind == "uniform") {
    g.kind = EnergyGridSpec::Kind::Uniform;
    g.lo = t.number("min");
    g.hi = t.number("max");
    if (g.points > 1 && !(g.hi > g.lo)) fail(t.at("max"), "must exceed min");
    return g;
  }
  if (kind == "list") {
    g.kind = EnergyGridSpec::Kind::List;
    g.values = t.numbers("values");
    if (g.values.empty()) fail(t.at("values"), "must not be empty");
    for (std::size_t i = 1; i < g.values.size(); ++i)
      if (!(g.values[i] > g.values[i - 1])) fail(t.at("values"), "must be strictly ascending");
    return g;
  }
  fail(t.at("kind"), "unknown grid kind '" + kind + "' (pilot, uniform, list)");
}

RealMatrix read_field(const Reader& model, int d) {
  RealMatrix b(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  const bool has_matrix = model.has("field");
  const bool has_b = model.has("b");
  if (has_matrix && has_b) fail(model.at("b"), "give either field or b, not both");
  if (has_b) {
    if (d < 2) fail(model.at("b"), "a magnetic field needs d >= 2");
    const double v = model.number("b");
    b(0, 1) = v;
    b(1, 0) = -v;
    return b;
  }
  if (!has_matrix) return b;
  const json& m = model.raw("field");
  const std::string where = model.at("field");
  if (!m.is_array() || m.size() != static_cast<std::size_t>(d)) fail(where, "must be a d x d array");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i].is_array() || m[i].size() != static_cast<std::size_t>(d)) fail(where, "must be a d x d array");
    for (std::size_t k = 0; k < m[i].size(); ++k) {
      if (!m[i][k].is_number()) fail(where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]", "must be a number");
      b(i, k) = m[i][k].get<double>();
    }
  }
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t k = 0; k < b.cols(); ++k)
      if (b(i, k) != -b(k, i)) fail(where, "must be antisymmetric (B_jk = -B_kj)");
  return b;
}

ModelConfig read_model(const Reader& r) {
  r.reject_unknown({"d", "sides", "spacing", "bc", "field", "b", "theta"});
  ModelConfig m;
  m.d = static_cast<int>(r.integer("d", 2));
  if (m.d < 1 || m.d > kMaxDim) fail(r.at("d"), "must be 1, 2 or 3");
  m.sides = r.integers("sides");
  if (m.sides.size() == 1) m.sides.assign(static_cast<std::size_t>(m.d), m.sides.front());
  if (!m.sides.empty() && m.sides.size() != static_cast<std::size_t>(m.d))
    fail(r.at("sides"), "needs one entry per dimension");
  for (int s : m.sides)
    if (s < 1) fail(r.at("sides"), "entries must be >= 1");
  m.spacing = r.number("spacing", 1.0);
  if (!(m.spacing > 0.0)) fail(r.at("spacing"), "must be positive");
  if (r.has("bc")) {
    m.bcs.clear();
    const json& v = r.raw("bc");
    auto parse_one = [&](const json& x, const std::string& where) {
      if (!x.is_string()) fail(where, "must be a string");
      auto bc = parse_boundary_condition(x.get<std::string>());
      if (!bc) fail(where, "unknown boundary condition '" + x.get<std::string>() + "' (dirichlet, neumann, periodic)");
      m.bcs.push_back(*bc);
    };
    if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) parse_one(v[i], r.at("bc") + "[" + std::to_string(i) + "]");
      if (m.bcs.empty()) fail(r.at("bc"), "must not be empty");
    } else {
      parse_one(v, r.at("bc"));
    }
  }
  m.field = read_field(r, m.d);
  if (r.has("theta")) m.theta = static_cast<int>(r.integer("theta"));
  return m;
}

RunConfig read_run(const Reader& r) {
  r.reject_unknown({"energies", "realizations", "master_seed", "workers"});
  RunConfig run;
  run.energies = read_grid(r);
  const long long reps = r.integer("realizations", 1);
  if (reps < 1) fail(r.at("realizations"), "must be >= 1");
  run.realizations = static_cast<std::size_t>(reps);
  if (!r.has("master_seed")) fail(r.at("master_seed"), "required (runs are seeded explicitly)");
  const json& seed = r.raw("master_seed");
  if (seed.is_number_unsigned()) {
    run.master_seed = seed.get<std::uint64_t>();
  } else {
    const long long s = r.integer("master_seed");
    if (s < 0) fail(r.at("master_seed"), "must be non-negative");
    run.master_seed = static_cast<std::uint64_t>(s);
  }
  const long long workers = r.integer("workers", 0);
  if (workers < 0) fail(r.at("workers"), "must be >= 0");
  run.workers = static_cast<unsigned>(workers);
  return run;
}

Params read_params(const Reader& r) {
  r.reject_unknown({"window_fraction", "sweep_sides", "smoothing_eps", "levels", "physical_sides", "spacings",
                    "tolerance", "q", "r", "samples", "cell_resolution"});
  Params p;
  p.window_fraction = r.number("window_fraction", 1.0);
  if (!(p.window_fraction > 0.0 && p.window_fraction <= 1.0)) fail(r.at("window_fraction"), "must lie in (0, 1]");
  p.sweep_sides = r.integers("sweep_sides");
  for (std::size_t i = 0; i < p.sweep_sides.size(); ++i) {
    if (p.sweep_sides[i] < 1) fail(r.at("sweep_sides"), "entries must be >= 1");
    if (i > 0 && p.sweep_sides[i] <= p.sweep_sides[i - 1]) fail(r.at("sweep_sides"), "must be strictly increasing");
  }
  p.smoothing_eps = r.number("smoothing_eps", 0.5);
  if (!(p.smoothing_eps > 0.0)) fail(r.at("smoothing_eps"), "must be positive");
  p.levels = r.numbers("levels");
  for (std::size_t i = 0; i < p.levels.size(); ++i) {
    if (!(p.levels[i] > 0.0)) fail(r.at("levels"), "entries must be positive");
    if (i > 0 && !(p.levels[i] > p.levels[i - 1])) fail(r.at("levels"), "must be strictly increasing");
  }
  p.physical_sides = r.numbers("physical_sides");
  p.spacings = r.numbers("spacings");
  for (double x : p.physical_sides)
    if (!(x > 0.0)) fail(r.at("physical_sides"), "entries must be positive");
  for (double x : p.spacings)
    if (!(x > 0.0)) fail(r.at("spacings"), "entries must be positive");
  p.tolerance = r.number("tolerance", 0.0);
  if (p.tolerance < 0.0) fail(r.at("tolerance"), "must be non-negative");
  p.q = r.number("q", 2.0);
  p.r = r.number("r", 2.0);
  if (!(p.q >= 1.0)) fail(r.at("q"), "must be >= 1");
  if (!(p.r >= 1.0)) fail(r.at("r"), "must be >= 1");
  const long long samples = r.integer("samples", 200);
  if (samples < 2) fail(r.at("samples"), "must be >= 2");
  p.samples = static_cast<std::size_t>(samples);
  p.cell_resolution = static_cast<int>(r.integer("cell_resolution", 4));
  if (p.cell_resolution < 1) fail(r.at("cell_resolution"), "must be >= 1");
  return p;
}

json grid_to_json(const EnergyGridSpec& g) {
  switch (g.kind) {
    case EnergyGridSpec::Kind::Pilot: return {{"kind", "pilot"}, {"points", g.points}};
    case EnergyGridSpec::Kind::Uniform: return {{"kind", "uniform"}, {"min", g.lo}, {"max", g.hi}, {"points", g.points}};
    case EnergyGridSpec::Kind::List: return {{"kind", "list"}, {"values", g.values}};
  }
  return nullptr;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  Reader root(j, "");
  root.reject_unknown({"experiment", "model", "ensemble", "run", "output", "params"});
  ExperimentConfig c;
  c.experiment = root.string("experiment");
  if (!find_experiment(c.experiment)) fail("experiment", "unknown experiment '" + c.experiment + "'");
  c.model = read_model(root.table("model"));
  const bool needs_ensemble = c.experiment != "weyl" && c.experiment != "landau" && c.experiment != "measure-demo";
  if (root.has("ensemble"))
    c.ensemble = read_ensemble(root.table("ensemble"));
  else if (needs_ensemble)
    fail("ensemble", "required for experiment '" + c.experiment + "'");
  else
    c.ensemble = EnsembleSpec::zero();
  c.run = read_run(root.table("run"));
  const Reader out = root.table("output");
  out.reject_unknown({"dir"});
  c.output_dir = out.string("dir", "results/" + c.experiment);
  c.params = read_params(root.table("params"));
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json model = {{"d", c.model.d}, {"sides", c.model.sides}, {"spacing", c.model.spacing}};
  json bcs = json::array();
  for (auto bc : c.model.bcs) bcs.push_back(std::string(to_string(bc)));
  model["bc"] = bcs;
  json field = json::array();
  for (std::size_t i = 0; i < c.model.field.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < c.model.field.cols(); ++k) row.push_back(c.model.field(i, k));
    field.push_back(row);
  }
  model["field"] = field;
  if (c.model.theta) model["theta"] = *c.model.theta;

  const EnsembleSpec& e = c.ensemble;
  json ensemble = {
      {"kind", std::string(to_string(e.kind))},
      {"profile",
       {{"shape", std::string(to_string(e.profile.shape))},
        {"amplitude", e.profile.amplitude},
        {"width", e.profile.width},
        {"radius", e.profile.radius}}},
      {"coupling",
       {{"kind", std::string(to_string(e.coupling.kind))},
        {"a", e.coupling.a},
        {"b", e.coupling.b},
        {"sigma", e.coupling.sigma},
        {"p", e.coupling.p}}},
      {"intensity", e.intensity},
      {"covariance",
       {{"kind", std::string(to_string(e.covariance.kind))},
        {"c0", e.covariance.c0},
        {"length", e.covariance.length}}},
  };
  if (e.truncation_level) ensemble["truncation"] = *e.truncation_level;

  const Params& p = c.params;
  json params = {{"window_fraction", p.window_fraction}, {"sweep_sides", p.sweep_sides},
                 {"smoothing_eps", p.smoothing_eps},     {"levels", p.levels},
                 {"physical_sides", p.physical_sides},   {"spacings", p.spacings},
                 {"tolerance", p.tolerance},             {"q", p.q},
                 {"r", p.r},                             {"samples", p.samples},
                 {"cell_resolution", p.cell_resolution}};

  return {{"experiment", c.experiment},
          {"model", model},
          {"ensemble", ensemble},
          {"run",
           {{"energies", grid_to_json(c.run.energies)},
            {"realizations", c.run.realizations},
            {"master_seed", c.run.master_seed},
            {"workers", c.run.workers}}},
          {"output", {{"dir", c.output_dir}}},
          {"params", params}};
}

json load_config_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.extension() == ".json") {
    try {
      return json::parse(buf.str());
    } catch (const json::parse_error& e) {
      throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    }
  }
  try {
    return toml_to_json(toml::parse(buf.str(), path.string()));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << path.string() << ":" << e.source().begin.line << ":" << e.source().begin.column
       << ": invalid TOML: " << e.description();
    throw ConfigError(os.str());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) { return config_from_json(load_config_document(path)); }

MagneticField field_of(const ExperimentConfig& c) { return MagneticField(c.model.field); }

BoxSpec box_of(const ExperimentConfig& c, BoundaryCondition bc) {
  if (c.model.sides.empty()) throw ConfigError("model.sides: required for experiment '" + c.experiment + "'");
  return BoxSpec(c.model.sides, c.model.spacing, bc);
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
  std::vector<std::string> warnings;
  const int expected_theta = theta_for_dim(c.model.d);
  if (c.model.theta && *c.model.theta != expected_theta)
    warnings.push_back("model.theta: override " + std::to_string(*c.model.theta) + " differs from " +
                       std::to_string(expected_theta) + ", the smallest integer above d/4 for d = " +
                       std::to_string(c.model.d));
  const ModelDims dims = ModelDims::for_dim(c.model.d);
  if (dims.p_is_open_lower_bound)
    warnings.push_back("model.d: for d = 4 the exponent p(d) is only known to exceed 2");

  auto require_sides = [&] {
    if (c.model.sides.empty()) fail("model.sides", "required for experiment '" + c.experiment + "'");
  };
  auto require_sweep = [&](std::size_t min) {
    if (c.params.sweep_sides.size() < min)
      fail("params.sweep_sides", "needs at least " + std::to_string(min) + " box side(s)");
  };
  auto check_boxes = [&](const std::vector<int>& sides, const std::vector<BoundaryCondition>& bcs) {
    for (auto bc : bcs) {
      try {
        BoxSpec box(sides, c.model.spacing, bc);
        if (c.experiment != "landau" && bc == BoundaryCondition::Periodic)
          if (auto err = flux_commensurability_error(box, field_of(c), false); !err.empty())
            fail("model.field", err);
      } catch (const ConfigError&) {
        throw;
      } catch (const InvalidArgument& e) {
        fail("model.sides", e.what());
      }
    }
  };
  auto cube = [&](int s) { return std::vector<int>(static_cast<std::size_t>(c.model.d), s); };
  const std::vector<BoundaryCondition> both{BoundaryCondition::Dirichlet, BoundaryCondition::Neumann};

  const std::string& x = c.experiment;
  if (x == "ids" || x == "support-spectrum" || x == "truncation") {
    require_sides();
    check_boxes(c.model.sides, c.model.bcs);
  }
  if (x == "support-spectrum" && c.run.realizations < 2) fail("run.realizations", "must be >= 2 for support-spectrum");
  if (x == "truncation" && c.params.levels.empty()) fail("params.levels", "required for truncation");
  if (x == "bc-gap") {
    require_sweep(2);
    for (int s : c.params.sweep_sides) check_boxes(cube(s), both);
  }
  if (x == "tightness" || x == "gaussian-tail") {
    require_sweep(1);
    for (int s : c.params.sweep_sides) check_boxes(cube(s), c.model.bcs);
    if (c.run.energies.kind != EnergyGridSpec::Kind::List)
      fail("run.energies", "must be an explicit list of negative energies for " + x);
    for (double e : c.run.energies.values)
      if (!(e < 0.0)) fail("run.energies", "must be negative for " + x);
  }
  if (x == "gaussian-tail" && c.ensemble.kind != EnsembleKind::Gaussian)
    fail("ensemble.kind", "gaussian-tail needs the gaussian ensemble");
  if (x == "weyl") {
    if (c.params.physical_sides.empty()) fail("params.physical_sides", "required for weyl");
    if (c.params.spacings.empty()) fail("params.spacings", "required for weyl");
    if (c.run.energies.kind != EnergyGridSpec::Kind::List)
      fail("run.energies", "must be an explicit list of positive energies for weyl");
    for (double e : c.run.energies.values)
      if (!(e > 0.0)) fail("run.energies", "must be positive for weyl");
    for (double h : c.params.spacings)
      for (double e : c.run.energies.values)
        if (e > faithful_band_edge(h))
          warnings.push_back("run.energies: E = " + std::to_string(e) + " lies above the band edge 0.2/h^2 = " +
                             std::to_string(faithful_band_edge(h)) + " for h = " + std::to_string(h));
  }
  if (x == "landau") {
    require_sides();
    if (c.model.d != 2) fail("model.d", "landau needs d = 2");
    if (!(c.model.field(0, 1) > 0.0)) fail("model.field", "landau needs B_01 > 0");
    check_boxes(c.model.sides, {BoundaryCondition::Periodic});
  }
  if (x == "moment-check" && c.ensemble.kind == EnsembleKind::Gaussian)
    fail("ensemble.kind", "moment-check covers the alloy and poisson ensembles");
  if (c.ensemble.kind == EnsembleKind::Gaussian && c.model.d > 3) fail("model.d", "gaussian ensemble supports d <= 3");
  return warnings;
}

}  // namespace idslab::app
