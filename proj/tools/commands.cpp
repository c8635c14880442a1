#include "commands.hpp"

#include "config.hpp"

#include "ququart/decomposition.hpp"
#include "ququart/io.hpp"
#include "ququart/toric.hpp"
#include "ququart/trotter.hpp"
#include "ququart/validation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <sstream>

namespace ququart::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  std::vector<std::string> overrides;
  std::size_t budget = 0;  // 0: keep the config value
  long long seed = 0;      // accepted for interface stability; nothing is random
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config, "experiment config (YAML)");
  if (config_required) opt->required();
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_option("--override", c.overrides, "key=value, dotted keys, repeatable");
  sub->add_option("--budget", c.budget, "statevector memory budget in bytes");
  sub->add_option("--seed", c.seed, "reserved; the dynamics is deterministic");
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = load_config(c.config, c.overrides);
  if (c.budget) cfg.memory_budget = c.budget;
  return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_validate(const Common& c, std::optional<int> fault, std::ostream& out) {
  const ExperimentConfig cfg = load(c);
  ValidationOptions opt;
  opt.fault_edge = fault;
  const auto t0 = std::chrono::steady_clock::now();
  const ValidationReport rep = validate_mapping(Mapping(cfg.mapping, cfg.spec), opt);
  out << "mapping " << to_string(cfg.mapping) << " on " << cfg.spec.lx << "x" << cfg.spec.ly << "\n"
      << "  rule pairs        " << rep.rule_pairs << " (cross-spin " << rep.cross_spin << ")\n"
      << "  antisymmetry      " << rep.antisymmetry << "\n"
      << "  involution        " << rep.involution << "\n"
      << "  constraint pairs  " << rep.constraint_pairs << "\n"
      << "  [G, H] terms      " << rep.constraint_hamiltonian << "\n"
      << "  relations checked " << rep.total() << ", failed " << rep.failures.size() << "\n"
      << "  max error         " << format_double(rep.max_error) << "\n"
      << "  time              " << format_double(seconds_since(t0)) << " s\n";
  Json j{{"config", cfg.echo},
         {"mapping", std::string(to_string(cfg.mapping))},
         {"rule_pairs", rep.rule_pairs},
         {"cross_spin", rep.cross_spin},
         {"antisymmetry", rep.antisymmetry},
         {"involution", rep.involution},
         {"constraint_pairs", rep.constraint_pairs},
         {"constraint_hamiltonian", rep.constraint_hamiltonian},
         {"relations_checked", rep.total()},
         {"max_error", rep.max_error},
         {"failures", rep.failures},
         {"passed", rep.passed()}};
  write_text(fs::path(c.out) / (cfg.name + "_validation.json"), j.dump(2) + "\n");
  if (!rep.passed()) {
    out << "FAIL: " << rep.failures.front() << "\n";
    return kValidationFailure;
  }
  out << "PASS\n";
  return kOk;
}

int run_evolve(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const MappedModel model = build_hamiltonian(cfg.mapping, cfg.spec, cfg.params);
  Schedule sched;
  sched.tau = cfg.tau;
  sched.n_steps = cfg.n_steps;
  sched.memory_budget = cfg.memory_budget;
  std::optional<QuditState> last;
  if (!cfg.snapshot.empty())
    sched.observer = [&](int step, const QuditState& s) {
      if (step == cfg.n_steps) last = s;
    };
  const RunRecord rec = evolve_and_record(model, cfg.initial_state, sched);
  write_text(dir / cfg.csv, run_record_csv(rec));
  write_text(dir / cfg.oracle_csv, oracle_csv(rec));
  write_text(dir / cfg.json, run_record_json(rec, cfg.echo).dump(2) + "\n");
  if (last) write_snapshot(*last, dir / cfg.snapshot);
  const double max_dn = *std::max_element(rec.delta_n.begin(), rec.delta_n.end());
  out << cfg.name << ": " << to_string(cfg.mapping) << ", " << model.n_qudits() << " ququarts, "
      << cfg.n_steps << " steps of " << format_double(cfg.tau) << "\n"
      << "  survival " << format_double(rec.survival_probability) << ", max delta_n "
      << format_double(max_dn) << ", " << format_double(seconds_since(t0)) << " s\n"
      << "  wrote " << (dir / cfg.csv).string() << "\n";
  return kOk;
}

int cmd_evolve(const Common& c, std::ostream& out) { return run_evolve(load(c), c.out, out); }

std::vector<MappingKind> local_kinds() {
  return {MappingKind::SpinlessLocal, MappingKind::SpinSplit, MappingKind::AuxiliaryParity};
}

int cmd_gate_count(const Common& c, std::ostream& out) {
  std::vector<MappingKind> kinds = local_kinds();
  Json echo = nullptr;
  if (!c.config.empty()) {
    const ExperimentConfig cfg = load(c);
    if (cfg.mapping == MappingKind::GeneralizedJW)
      throw ConfigError("gate counting needs a local mapping");
    kinds = {cfg.mapping};
    echo = cfg.echo;
  }
  std::vector<GateCountReport> reports;
  Json templates = Json::array();
  for (const auto kind : kinds) {
    reports.push_back(gate_count(kind));
    const auto spins = Mapping(kind, {2, 2, Boundary::Open}).spins();
    for (const auto spin : spins) {
      for (const auto t : {TemplateTerm::HopX, TemplateTerm::HopY}) {
        Json j = to_json(circuit_template(kind, t, spin));
        j["mapping"] = std::string(to_string(kind));
        templates.push_back(std::move(j));
      }
    }
    Json j = to_json(circuit_template(kind, TemplateTerm::Interaction, spins.front()));
    j["mapping"] = std::string(to_string(kind));
    templates.push_back(std::move(j));
  }
  const fs::path dir = c.out;
  write_text(dir / "gate_counts.md", gate_count_markdown(reports));
  write_text(dir / "gate_counts.csv", gate_count_csv(reports));
  Json j{{"config", echo}, {"reports", Json::array()}, {"templates", templates}};
  for (const auto& r : reports) j["reports"].push_back(to_json(r));
  write_text(dir / "gate_counts.json", j.dump(2) + "\n");
  out << gate_count_markdown(reports);
  return kOk;
}

int cmd_weights(const Common& c, std::ostream& out) {
  int lx = 3, ly = 3;
  if (!c.config.empty()) {
    const ExperimentConfig cfg = load(c);
    lx = cfg.spec.lx;
    ly = cfg.spec.ly;
  }
  const auto rows = weight_table(lx, ly);
  write_text(fs::path(c.out) / "weights.md", weight_table_markdown(rows));
  write_text(fs::path(c.out) / "weights.csv", weight_table_csv(rows));
  out << weight_table_markdown(rows);
  return kOk;
}

int cmd_constraint_check(const Common& c, std::ostream& out) {
  const ExperimentConfig cfg = load(c);
  const MappedModel model = build_hamiltonian(cfg.mapping, cfg.spec, cfg.params);
  const VacuumCertificate cert = vacuum_prepare(model, cfg.memory_budget);
  Json j = to_json(cert, cfg.echo);

  bool ok = cert.max_constraint_error < 1e-10;
  if (cfg.mapping == MappingKind::SpinlessLocal && model.n_qudits() <= kToricDenseCap &&
      cfg.spec.boundary == Boundary::Open) {
    const Mapping m = model.mapping();
    VvcLayout layout = default_vvc_layout(cfg.spec);
    if (!cfg.vvc_layout.empty()) {
      std::ifstream is(cfg.vvc_layout);
      if (!is) throw ConfigError("cannot read gate layout " + cfg.vvc_layout);
      try {
        layout = vvc_layout_from_json(Json::parse(is));
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("gate layout " + cfg.vvc_layout + ": " + e.what());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    QubitCircuit vvc;
    try {
      vvc = build_vvc(m, layout);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const QubitCircuit cnots = cnot_layer(model.n_qudits());
    std::vector<StabilizerOperator> eb;
    Json plaq = Json::array();
    for (const auto& p : plaquettes(cfg.spec)) {
      const auto gv = cnot_conjugate(m, p);
      eb.push_back(vvc.conjugate(gv));
      plaq.push_back({{"corner", Json::array({p.corner.x, p.corner.y})},
                      {"qubit_form", gv.to_string(cfg.spec)},
                      {"conjugated", eb.back().to_string(cfg.spec)}});
    }
    // the Hamiltonian under the same qubit-level circuit
    bool commute = true, hermitian = true;
    for (const auto& e : eb) hermitian = hermitian && e.is_hermitian();
    for (std::size_t a = 0; a < eb.size(); ++a)
      for (std::size_t b = a + 1; b < eb.size(); ++b) commute = commute && eb[a].commutes_with(eb[b]);
    for (const auto& t : model.hamiltonian.terms()) {
      const auto h = vvc.conjugate(cnots.conjugate(StabilizerOperator::from_monomial(t)));
      for (const auto& e : eb) commute = commute && e.commutes_with(h);
    }
    j["toric"] = {{"plaquettes", plaq},
                  {"layout", to_json(layout)},
                  {"two_qubit_gates", vvc.two_qubit_count()},
                  {"hermitian", hermitian},
                  {"commuting", commute}};
    ok = ok && hermitian && commute;
  }
  write_text(fs::path(c.out) / (cfg.name + "_certificate.json"), j.dump(2) + "\n");
  out << cfg.name << ": " << cert.labels.size() << " constraints, survival "
      << format_double(cert.survival_probability) << ", max |<G_p> - s_p| "
      << format_double(cert.max_constraint_error) << "\n";
  out << (ok ? "PASS\n" : "FAIL\n");
  return ok ? kOk : kValidationFailure;
}

int cmd_sweep(const Common& c, const std::vector<std::string>& configs, int jobs, std::ostream& out) {
  std::vector<ExperimentConfig> cfgs;
  for (const auto& path : configs) {
    ExperimentConfig cfg = load_config(path, c.overrides);
    if (c.budget) cfg.memory_budget = c.budget;
    cfgs.push_back(std::move(cfg));
  }
  std::vector<std::string> names;
  for (const auto& cfg : cfgs) {
    if (std::find(names.begin(), names.end(), cfg.name) != names.end())
      throw ConfigError("two sweep configs share the name '" + cfg.name + "'");
    names.push_back(cfg.name);
  }
  struct Outcome {
    int code = kOk;
    std::string log;
  };
  auto one = [&](const ExperimentConfig& cfg) {
    std::ostringstream log;
    Outcome o;
    try {
      o.code = run_evolve(cfg, fs::path(c.out) / cfg.name, log);
    } catch (const BudgetExceeded& e) {
      log << cfg.name << ": " << e.what() << "\n";
      o.code = kResourceLimit;
    } catch (const std::exception& e) {
      log << cfg.name << ": " << e.what() << "\n";
      o.code = kValidationFailure;
    }
    o.log = log.str();
    return o;
  };
  std::vector<Outcome> results(cfgs.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t start = 0; start < cfgs.size(); start += width) {
    std::vector<std::future<Outcome>> running;
    for (std::size_t k = start; k < std::min(cfgs.size(), start + width); ++k)
      running.push_back(std::async(std::launch::async, one, std::cref(cfgs[k])));
    for (std::size_t k = 0; k < running.size(); ++k) results[start + k] = running[k].get();
  }
  int code = kOk;
  for (const auto& r : results) {
    out << r.log;
    code = std::max(code, r.code);
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fermion-to-ququart mappings: validation, Trotter dynamics, circuit counts", "ququart"};
  app.require_subcommand(1);
  Common common;

  auto* validate = app.add_subcommand("validate-mapping", "run the mapping property suite");
  add_common(validate, common, true);
  std::optional<int> fault;
  validate->add_option("--inject-fault", fault, "corrupt the k-th edge operator (test hook)")
      ->group("");

  auto* evolve = app.add_subcommand("evolve", "Trotter evolution with oracle comparison");
  add_common(evolve, common, true);

  auto* gates = app.add_subcommand("gate-count", "two-qudit gate counts of the circuit templates");
  add_common(gates, common, false);

  auto* weights = app.add_subcommand("weights", "operator weight table");
  add_common(weights, common, false);

  auto* check = app.add_subcommand("constraint-check", "vacuum certificate and qubit-pair form");
  add_common(check, common, true);

  auto* sweep = app.add_subcommand("sweep", "run several evolve configs concurrently");
  add_common(sweep, common, false);
  std::vector<std::string> sweep_configs;
  int jobs = 2;
  sweep->add_option("configs", sweep_configs, "config files")->required();
  sweep->add_option("--jobs", jobs, "concurrent runs")->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (*validate) return cmd_validate(common, fault, out);
    if (*evolve) return cmd_evolve(common, out);
    if (*gates) return cmd_gate_count(common, out);
    if (*weights) return cmd_weights(common, out);
    if (*check) return cmd_constraint_check(common, out);
    if (*sweep) return cmd_sweep(common, sweep_configs, jobs, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const BudgetExceeded& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return kValidationFailure;
  }
  return kOk;
}

}  // namespace ququart::cli
