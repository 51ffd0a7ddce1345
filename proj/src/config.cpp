#include "taxis/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "taxis/error.hpp"

namespace taxis {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double parse_real(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ValidationError(key + ": expected a number, got '" + text + "'");
  return x;
}

long long parse_integer(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ValidationError(key + ": expected an integer, got '" + text + "'");
  return x;
}

struct Entry {
  std::string section;
  std::string key;
  std::function<std::optional<std::string>(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class Getter>
Entry real(std::string section, std::string key, Getter access) {
  const std::string name = section + "." + key;
  return Entry{section, key, [access](const RunConfig& c) -> std::optional<std::string> {
                 return fmt(access(c));
               },
               [access, name](RunConfig& c, const std::string& v) { access(c) = parse_real(v, name); }};
}

template <class Getter>
Entry integer(std::string section, std::string key, Getter access) {
  const std::string name = section + "." + key;
  return Entry{section, key, [access](const RunConfig& c) -> std::optional<std::string> {
                 return std::to_string(access(c));
               },
               [access, name](RunConfig& c, const std::string& v) {
                 using T = std::remove_reference_t<decltype(access(c))>;
                 access(c) = static_cast<T>(parse_integer(v, name));
               }};
}

template <class Getter>
Entry text(std::string section, std::string key, Getter access) {
  return Entry{section, key,
               [access](const RunConfig& c) -> std::optional<std::string> { return access(c); },
               [access](RunConfig& c, const std::string& v) { access(c) = v; }};
}

Entry field_init(const char* key, FieldInit InitialCondition::*member) {
  return Entry{"initial", key,
               [member](const RunConfig& c) -> std::optional<std::string> { return (c.initial.*member).to_string(); },
               [member](RunConfig& c, const std::string& v) { c.initial.*member = parse_field_init(v); }};
}

Entry declared_bound(const char* key, double AssumptionBounds::*member) {
  return Entry{"assumptions", key,
               [member](const RunConfig& c) -> std::optional<std::string> {
                 if (!c.model.declared_bounds) return std::nullopt;
                 const double x = (*c.model.declared_bounds).*member;
                 if (std::isinf(x)) return std::nullopt;
                 return fmt(x);
               },
               [member, key](RunConfig& c, const std::string& v) {
                 if (!c.model.declared_bounds) {
                   const double inf = std::numeric_limits<double>::infinity();
                   c.model.declared_bounds = AssumptionBounds{inf, inf, inf, inf};
                 }
                 (*c.model.declared_bounds).*member = parse_real(v, std::string("assumptions.") + key);
               }};
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    e.push_back(integer("grid", "nx", [](auto& c) -> auto& { return c.nx; }));
    e.push_back(integer("grid", "ny", [](auto& c) -> auto& { return c.ny; }));
    e.push_back(real("grid", "length_x", [](auto& c) -> auto& { return c.length_x; }));
    e.push_back(real("grid", "length_y", [](auto& c) -> auto& { return c.length_y; }));

    e.push_back(field_init("u", &InitialCondition::u));
    e.push_back(field_init("v", &InitialCondition::v));
    e.push_back(field_init("w", &InitialCondition::w));
    e.push_back(field_init("z", &InitialCondition::z));

    e.push_back(Entry{"model", "variant",
                      [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.model.variant); },
                      [](RunConfig& c, const std::string& v) { c.model.variant = parse_variant(v); }});
    e.push_back(real("model", "D_u", [](auto& c) -> auto& { return c.model.D_u; }));
    e.push_back(real("model", "D_v", [](auto& c) -> auto& { return c.model.D_v; }));
    e.push_back(real("model", "D_z", [](auto& c) -> auto& { return c.model.reaction.D_z; }));
    e.push_back(real("model", "mu_vz", [](auto& c) -> auto& { return c.model.reaction.mu_vz; }));
    e.push_back(real("model", "mu_z", [](auto& c) -> auto& { return c.model.reaction.mu_z; }));
    e.push_back(real("model", "beta", [](auto& c) -> auto& { return c.model.reaction.beta; }));
    e.push_back(real("model", "k1_plus", [](auto& c) -> auto& { return c.model.binding.k1_plus; }));
    e.push_back(real("model", "k2_plus", [](auto& c) -> auto& { return c.model.binding.k2_plus; }));
    e.push_back(real("model", "k_minus", [](auto& c) -> auto& { return c.model.binding.k_minus; }));
    e.push_back(real("model", "v_ref", [](auto& c) -> auto& { return c.model.binding.v_ref; }));
    e.push_back(real("model", "w_ref", [](auto& c) -> auto& { return c.model.binding.w_ref; }));
    e.push_back(real("model", "kappa1", [](auto& c) -> auto& { return c.model.taxis.kappa1; }));
    e.push_back(real("model", "kappa2", [](auto& c) -> auto& { return c.model.taxis.kappa2; }));
    e.push_back(real("model", "mu_u", [](auto& c) -> auto& { return c.model.growth.mu_u; }));
    e.push_back(real("model", "mu_v", [](auto& c) -> auto& { return c.model.growth.mu_v; }));
    e.push_back(real("model", "K_u", [](auto& c) -> auto& { return c.model.growth.K_u; }));
    e.push_back(real("model", "K_v", [](auto& c) -> auto& { return c.model.growth.K_v; }));
    e.push_back(real("model", "K_w", [](auto& c) -> auto& { return c.model.growth.K_w; }));
    e.push_back(real("model", "K_z", [](auto& c) -> auto& { return c.model.growth.K_z; }));
    e.push_back(real("model", "speed_c", [](auto& c) -> auto& { return c.model.kinetic.speed_c; }));
    e.push_back(real("model", "speed_e", [](auto& c) -> auto& { return c.model.kinetic.speed_e; }));
    e.push_back(real("model", "lambda0", [](auto& c) -> auto& { return c.model.kinetic.lambda0; }));
    e.push_back(real("model", "lambda1", [](auto& c) -> auto& { return c.model.kinetic.lambda1; }));
    e.push_back(real("model", "eta0", [](auto& c) -> auto& { return c.model.kinetic.eta0; }));

    e.push_back(text("coefficients", "chi", [](auto& c) -> auto& { return c.model.chi_family; }));
    e.push_back(text("coefficients", "xi", [](auto& c) -> auto& { return c.model.xi_family; }));
    e.push_back(text("coefficients", "psi", [](auto& c) -> auto& { return c.model.psi_family; }));
    e.push_back(text("coefficients", "phi", [](auto& c) -> auto& { return c.model.phi_family; }));

    e.push_back(real("assumptions", "v_max", [](auto& c) -> auto& { return c.model.caps.v_max; }));
    e.push_back(real("assumptions", "w_max", [](auto& c) -> auto& { return c.model.caps.w_max; }));
    e.push_back(real("assumptions", "u_max", [](auto& c) -> auto& { return c.model.caps.u_max; }));
    e.push_back(declared_bound("C_chi", &AssumptionBounds::C_chi));
    e.push_back(declared_bound("C_xi", &AssumptionBounds::C_xi));
    e.push_back(declared_bound("C_psi", &AssumptionBounds::C_psi));
    e.push_back(declared_bound("C_phi", &AssumptionBounds::C_phi));

    e.push_back(real("solver", "dt", [](auto& c) -> auto& { return c.solver.dt; }));
    e.push_back(real("solver", "t_end", [](auto& c) -> auto& { return c.solver.t_end; }));
    e.push_back(real("solver", "cg_tol", [](auto& c) -> auto& { return c.solver.cg_tol; }));
    e.push_back(integer("solver", "cg_max_iter", [](auto& c) -> auto& { return c.solver.cg_max_iter; }));
    e.push_back(real("solver", "cfl_safety", [](auto& c) -> auto& { return c.solver.cfl_safety; }));
    e.push_back(Entry{"solver", "preconditioner",
                      [](const RunConfig& c) -> std::optional<std::string> {
                        return c.solver.preconditioner == Preconditioner::jacobi ? "jacobi" : "none";
                      },
                      [](RunConfig& c, const std::string& v) {
                        if (v == "none") c.solver.preconditioner = Preconditioner::none;
                        else if (v == "jacobi") c.solver.preconditioner = Preconditioner::jacobi;
                        else throw ValidationError("solver.preconditioner: expected none or jacobi, got '" + v + "'");
                      }});
    e.push_back(Entry{"solver", "uptake",
                      [](const RunConfig& c) -> std::optional<std::string> {
                        return c.solver.uptake == UptakeScheme::semi_implicit ? "semi-implicit" : "explicit";
                      },
                      [](RunConfig& c, const std::string& v) {
                        if (v == "explicit") c.solver.uptake = UptakeScheme::explicit_euler;
                        else if (v == "semi-implicit") c.solver.uptake = UptakeScheme::semi_implicit;
                        else throw ValidationError("solver.uptake: expected explicit or semi-implicit, got '" + v + "'");
                      }});
    e.push_back(integer("solver", "seed", [](auto& c) -> auto& { return c.seed; }));

    e.push_back(text("output", "dir", [](auto& c) -> auto& { return c.output.dir; }));
    e.push_back(text("output", "series", [](auto& c) -> auto& { return c.output.series; }));
    e.push_back(real("output", "snapshot_every", [](auto& c) -> auto& { return c.output.snapshot_every; }));
    e.push_back(real("output", "record_every", [](auto& c) -> auto& { return c.output.record_every; }));

    e.push_back(Entry{"compare", "variant_a",
                      [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.compare.variant_a); },
                      [](RunConfig& c, const std::string& v) { c.compare.variant_a = parse_variant(v); }});
    e.push_back(Entry{"compare", "variant_b",
                      [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.compare.variant_b); },
                      [](RunConfig& c, const std::string& v) { c.compare.variant_b = parse_variant(v); }});
    return e;
  }();
  return entries;
}

// Removes '#' comments; boost's INI reader only understands whole-line ';' comments.
std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    out << line << '\n';
  }
  return out.str();
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.initial = default_initial_condition(c.grid());
  return c;
}

RunConfig parse_config(const std::string& content, const std::string& origin) {
  boost::property_tree::ptree tree;
  try {
    std::istringstream in(strip_comments(content));
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  // Grid lengths first: the default initial condition is placed relative to the domain.
  RunConfig cfg;
  std::map<std::string, std::string> values;
  std::vector<std::string> problems;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      problems.push_back("key '" + section + "' outside of any section");
      continue;
    }
    for (const auto& [key, value] : body) {
      values[section + "." + key] = value.data();
    }
  }
  const auto known = [](const std::string& name) {
    for (const auto& e : registry()) {
      if (e.section + "." + e.key == name) return true;
    }
    return false;
  };
  for (const auto& [name, value] : values) {
    if (name.rfind("run.", 0) == 0) continue;
    if (!known(name)) problems.push_back("unknown key '" + name + "'");
  }
  for (const char* name : {"grid.length_x", "grid.length_y", "grid.nx", "grid.ny"}) {
    if (!values.count(name)) continue;
    for (const auto& e : registry()) {
      if (e.section + "." + e.key != name) continue;
      try {
        e.set(cfg, values.at(name));
      } catch (const ValidationError& err) {
        problems.push_back(err.what());
      }
    }
  }
  if (cfg.length_x > 0.0 && cfg.length_y > 0.0) {
    const double cx = 0.75 * cfg.length_x;
    const double cy = 0.75 * cfg.length_y;
    cfg.initial = InitialCondition{FieldInit::gaussian(cx, cy, 1.0, 10.0), FieldInit::uniform(0.5),
                                   FieldInit::uniform(1.0), FieldInit::gaussian(cx, cy, 0.5, 10.0)};
  }
  for (const auto& e : registry()) {
    const std::string name = e.section + "." + e.key;
    if (e.section == "grid" || !values.count(name)) continue;
    try {
      e.set(cfg, values.at(name));
    } catch (const ValidationError& err) {
      problems.push_back(err.what());
    }
  }
  if (!problems.empty()) {
    std::string msg = origin + ": invalid configuration";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg, problems);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void apply_overrides(RunConfig& cfg, const ConfigOverrides& o) {
  if (o.variant) cfg.model.variant = parse_variant(*o.variant);
  if (o.out_dir) cfg.output.dir = *o.out_dir;
  if (o.t_end) cfg.solver.t_end = *o.t_end;
  if (o.dt) cfg.solver.dt = *o.dt;
  if (o.nx) cfg.nx = *o.nx;
  if (o.ny) cfg.ny = *o.ny;
  if (o.snapshot_every) cfg.output.snapshot_every = *o.snapshot_every;
  if (o.seed) cfg.seed = *o.seed;
}

void validate(const RunConfig& cfg) {
  std::vector<std::string> problems;
  const auto collect = [&problems](const auto& fn) {
    try {
      fn();
    } catch (const ValidationError& e) {
      if (e.violations().empty()) {
        problems.push_back(e.what());
      } else {
        problems.insert(problems.end(), e.violations().begin(), e.violations().end());
      }
    }
  };
  collect([&] { (void)cfg.grid(); });
  collect([&] { validate(cfg.solver); });
  collect([&] { (void)validate_model(cfg.model); });
  collect([&] { (void)build_initial_state(cfg.grid(), cfg.initial); });
  if (!(cfg.output.snapshot_every > 0.0)) problems.push_back("output.snapshot_every must be positive");
  if (!(cfg.output.record_every > 0.0)) problems.push_back("output.record_every must be positive");
  if (cfg.output.series.empty()) problems.push_back("output.series must not be empty");
  if (!problems.empty()) {
    std::string msg = "invalid configuration";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg, problems);
  }
}

std::string to_text(const RunConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& e : registry()) {
    const auto value = e.get(cfg);
    if (!value) continue;
    if (e.section != section) {
      if (!section.empty()) os << '\n';
      section = e.section;
      os << '[' << section << "]\n";
    }
    os << e.key << " = " << *value << '\n';
  }
  return os.str();
}

}  // namespace taxis
