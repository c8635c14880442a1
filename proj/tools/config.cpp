#include "config.hpp"

#include <cmath>
#include <set>

namespace ququart::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k) {
    if (k == s.size() || s[k] == sep) {
      out.push_back(s.substr(start, k - start));
      start = k + 1;
    }
  }
  return out;
}

template <typename T>
T get(const YAML::Node& node, const std::string& what) {
  if (!node) throw ConfigError("missing '" + what + "'");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + what + "' has the wrong type");
  }
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  if (!node.IsMap()) throw ConfigError("'" + where + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

Site parse_site(const YAML::Node& n, const std::string& what) {
  if (!n || !n.IsSequence() || n.size() != 2) throw ConfigError("'" + what + "' must be [x, y]");
  return {get<int>(n[0], what), get<int>(n[1], what)};
}

Complex parse_coeff(const YAML::Node& n) {
  if (!n) return 1.0;
  if (n.IsSequence()) {
    if (n.size() != 2) throw ConfigError("complex coefficient must be [re, im]");
    return {get<double>(n[0], "coeff"), get<double>(n[1], "coeff")};
  }
  return get<double>(n, "coeff");
}

StateRecipe parse_recipe(const YAML::Node& n, const LatticeSpec& spec, bool spinful) {
  if (n.IsScalar()) {
    try {
      return preset_recipe(n.as<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  check_keys(n, {"name", "factors"}, "initial_state");
  StateRecipe r;
  r.name = n["name"] ? get<std::string>(n["name"], "initial_state.name") : "custom";
  r.spec = spec;
  r.spinful = spinful;
  const YAML::Node factors = n["factors"];
  if (!factors || !factors.IsSequence()) throw ConfigError("'initial_state.factors' must be a list");
  for (const auto& f : factors) {
    if (!f.IsSequence()) throw ConfigError("each recipe factor must be a list of terms");
    RecipeFactor rf;
    for (const auto& t : f) {
      check_keys(t, {"coeff", "op", "i", "j", "spin"}, "recipe term");
      const Complex c = parse_coeff(t["coeff"]);
      if (!t["op"]) {
        rf.terms.push_back({c, std::nullopt});
        continue;
      }
      FermionOp op;
      const auto kind = get<std::string>(t["op"], "op");
      if (kind == "pair") op.kind = FermionOp::Kind::PairCreation;
      else if (kind == "hop") op.kind = FermionOp::Kind::Hopping;
      else throw ConfigError("recipe op must be 'pair' or 'hop', got '" + kind + "'");
      op.i = parse_site(t["i"], "i");
      op.j = parse_site(t["j"], "j");
      if (t["spin"]) {
        const auto s = get<std::string>(t["spin"], "spin");
        if (s == "up") op.spin = Spin::Up;
        else if (s == "down") op.spin = Spin::Down;
        else throw ConfigError("spin must be 'up' or 'down'");
      }
      if (op.spin.has_value() != spinful) throw ConfigError("recipe spin labels do not match the model");
      rf.terms.push_back({c, op});
    }
    r.factors.push_back(std::move(rf));
  }
  return r;
}

}  // namespace

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value: " + assignment);
  const auto path = split(assignment.substr(0, eq), '.');
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw ConfigError("bad override value in '" + assignment + "': " + e.what());
  }
  // yaml-cpp nodes are handles; walk with fresh handles to avoid rebinding root
  std::vector<YAML::Node> chain{root};
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    YAML::Node next = chain.back()[path[k]];
    if (!next.IsDefined() || next.IsNull()) {
      chain.back()[path[k]] = YAML::Node(YAML::NodeType::Map);
      next = chain.back()[path[k]];
    }
    if (!next.IsMap()) throw ConfigError("override path '" + path[k] + "' is not a table");
    chain.push_back(next);
  }
  chain.back()[path.back()] = value;
}

Json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      Json a = Json::array();
      for (const auto& v : node) a.push_back(yaml_to_json(v));
      return a;
    }
    case YAML::NodeType::Map: {
      Json o = Json::object();
      for (const auto& kv : node) o[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return o;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const std::string s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted
  long long i;
  if (YAML::convert<long long>::decode(node, i)) return i;
  double d;
  if (YAML::convert<double>::decode(node, d)) return d;
  bool b;
  if (YAML::convert<bool>::decode(node, b)) return b;
  return s;
}

ExperimentConfig parse_config(const YAML::Node& root, const std::string& default_name) {
  check_keys(root,
             {"name", "model", "parameters", "lattice", "mapping", "tau", "n_steps", "initial_state",
              "outputs", "memory_budget", "vvc_layout"},
             "config");
  ExperimentConfig c;
  c.echo = yaml_to_json(root);
  c.name = root["name"] ? get<std::string>(root["name"], "name") : default_name;

  const YAML::Node lat = root["lattice"];
  if (!lat) throw ConfigError("missing 'lattice'");
  check_keys(lat, {"lx", "ly", "boundary"}, "lattice");
  c.spec.lx = get<int>(lat["lx"], "lattice.lx");
  c.spec.ly = get<int>(lat["ly"], "lattice.ly");
  const auto boundary = lat["boundary"] ? get<std::string>(lat["boundary"], "lattice.boundary") : "open";
  if (boundary == "open") c.spec.boundary = Boundary::Open;
  else if (boundary == "periodic") c.spec.boundary = Boundary::Periodic;
  else throw ConfigError("lattice.boundary must be 'open' or 'periodic'");
  try {
    c.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const auto mapping = get<std::string>(root["mapping"], "mapping");
  const auto kind = parse_mapping_kind(mapping);
  if (!kind) throw ConfigError("unknown mapping '" + mapping + "'");
  c.mapping = *kind;

  c.model = root["model"] ? get<std::string>(root["model"], "model")
                          : (is_spinful(c.mapping) ? "fermi_hubbard" : "tV");
  const YAML::Node par = root["parameters"] ? root["parameters"] : YAML::Node(YAML::NodeType::Map);
  if (c.model == "tV") {
    check_keys(par, {"T", "V"}, "parameters");
    c.params = TVModel{par["T"] ? get<double>(par["T"], "parameters.T") : 1.0,
                       par["V"] ? get<double>(par["V"], "parameters.V") : 0.0};
  } else if (c.model == "fermi_hubbard") {
    check_keys(par, {"J", "U"}, "parameters");
    c.params = HubbardModel{par["J"] ? get<double>(par["J"], "parameters.J") : 1.0,
                            par["U"] ? get<double>(par["U"], "parameters.U") : 0.0};
  } else {
    throw ConfigError("model must be 'tV' or 'fermi_hubbard', got '" + c.model + "'");
  }
  if ((c.model == "tV") == is_spinful(c.mapping))
    throw ConfigError("model '" + c.model + "' does not fit mapping '" + mapping + "'");

  c.tau = root["tau"] ? get<double>(root["tau"], "tau") : 0.05;
  if (!(c.tau > 0.0) || !std::isfinite(c.tau)) throw ConfigError("tau must be positive");
  c.n_steps = root["n_steps"] ? get<int>(root["n_steps"], "n_steps") : 0;
  if (c.n_steps < 0) throw ConfigError("n_steps must be non-negative");

  if (root["initial_state"] && !root["initial_state"].IsNull()) {
    c.initial_state = parse_recipe(root["initial_state"], c.spec, is_spinful(c.mapping));
    if (!(c.initial_state.spec == c.spec))
      throw ConfigError("initial state '" + c.initial_state.name + "' is defined on a different lattice");
    if (c.initial_state.spinful != is_spinful(c.mapping))
      throw ConfigError("initial state '" + c.initial_state.name + "' does not fit the model");
  } else {
    c.initial_state = StateRecipe{"vacuum", c.spec, is_spinful(c.mapping), {}};
  }

  c.csv = c.name + ".csv";
  c.json = c.name + ".json";
  c.oracle_csv = c.name + "_oracle.csv";
  if (const YAML::Node out = root["outputs"]) {
    check_keys(out, {"csv", "json", "oracle_csv", "snapshot"}, "outputs");
    if (out["csv"]) c.csv = get<std::string>(out["csv"], "outputs.csv");
    if (out["json"]) c.json = get<std::string>(out["json"], "outputs.json");
    if (out["oracle_csv"]) c.oracle_csv = get<std::string>(out["oracle_csv"], "outputs.oracle_csv");
    if (out["snapshot"]) c.snapshot = get<std::string>(out["snapshot"], "outputs.snapshot");
  }
  if (root["memory_budget"]) {
    const auto b = get<long long>(root["memory_budget"], "memory_budget");
    if (b <= 0) throw ConfigError("memory_budget must be positive");
    c.memory_budget = static_cast<std::size_t>(b);
  }
  if (root["vvc_layout"]) c.vvc_layout = get<std::string>(root["vvc_layout"], "vvc_layout");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot read config " + path.string());
  } catch (const YAML::Exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config " + path.string() + " is not a mapping");
  for (const auto& o : overrides) apply_override(root, o);
  ExperimentConfig c = parse_config(root, path.stem().string());
  if (!c.vvc_layout.empty() && std::filesystem::path(c.vvc_layout).is_relative())
    c.vvc_layout = (path.parent_path() / c.vvc_layout).string();
  return c;
}

}  // namespace ququart::cli
