#include "ququart/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ququart {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json matrix_json(const MatrixXc& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json site_json(Site s) { return Json::array({s.x, s.y}); }

Site site_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("site must be [x, y]");
  return {j[0].get<int>(), j[1].get<int>()};
}

std::string table_csv(const std::vector<std::string>& head, const std::vector<double>& times,
                      const std::vector<std::vector<double>>& rows, const std::vector<double>* tail) {
  std::string out = "t";
  for (const auto& h : head) out += "," + h;
  if (tail) out += ",delta_n";
  out += '\n';
  for (std::size_t k = 0; k < times.size(); ++k) {
    out += format_double(times[k]);
    for (double v : rows[k]) out += "," + format_double(v);
    if (tail) out += "," + format_double((*tail)[k]);
    out += '\n';
  }
  return out;
}

void put_le(std::ostream& os, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= std::uint64_t{b[k]} << (8 * k);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string run_record_csv(const RunRecord& rec) {
  return table_csv(rec.columns, rec.times, rec.occupations, &rec.delta_n);
}

std::string oracle_csv(const RunRecord& rec) {
  return table_csv(rec.columns, rec.times, rec.exact_occupations, nullptr);
}

Json run_record_json(const RunRecord& rec, const Json& config_echo) {
  Json j;
  j["config"] = config_echo;
  j["columns"] = rec.columns;
  j["survival_probability"] = rec.survival_probability;
  Json rows = Json::array();
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    rows.push_back({{"t", rec.times[k]},
                    {"occupations", rec.occupations[k]},
                    {"exact_occupations", rec.exact_occupations[k]},
                    {"delta_n", rec.delta_n[k]}});
  }
  j["records"] = std::move(rows);
  return j;
}

Json to_json(const MappedModel& model) {
  Json j;
  j["mapping"] = std::string(to_string(model.kind));
  j["lattice"] = {{"lx", model.spec.lx},
                  {"ly", model.spec.ly},
                  {"boundary", model.spec.boundary == Boundary::Open ? "open" : "periodic"}};
  j["n_qudits"] = model.n_qudits();
  auto sum_json = [](const OperatorSum& op) {
    Json terms = Json::array();
    for (const auto& t : op.terms()) {
      Json fs = Json::array();
      for (const auto& [q, f] : t.factors()) fs.push_back(Json::array({q, f.label()}));
      terms.push_back({{"coefficient", complex_json(t.coefficient())}, {"factors", std::move(fs)}});
    }
    return terms;
  };
  Json terms = Json::array();
  for (const auto& t : model.terms) {
    Json e;
    e["type"] = t.type == TermType::HopX ? "hop_x" : t.type == TermType::HopY ? "hop_y" : "interaction";
    if (t.type != TermType::Interaction) e["parity_class"] = t.parity_class;
    if (t.spin) e["spin"] = std::string(to_string(*t.spin));
    e["operator"] = sum_json(t.op);
    terms.push_back(std::move(e));
  }
  j["terms"] = std::move(terms);
  Json cons = Json::array();
  for (std::size_t p = 0; p < model.constraints.size(); ++p)
    cons.push_back({{"label", model.constraint_labels[p]},
                    {"sector_sign", model.sector_signs[p]},
                    {"operator", sum_json(model.constraints[p])}});
  j["constraints"] = std::move(cons);
  return j;
}

Json to_json(const Circuit& circuit) {
  Json j;
  j["label"] = circuit.label;
  j["phase_rate"] = circuit.phase_rate;
  j["two_qudit_count"] = circuit.two_qudit_count();
  j["two_qudit_depth"] = circuit.two_qudit_depth();
  Json gates = Json::array();
  for (const auto& g : circuit.gates) {
    Json e{{"name", g.name}, {"qudits", g.qudits}, {"rotation", g.rotation}};
    if (g.rotation) {
      e["scale"] = g.scale;
      e["generator"] = matrix_json(g.matrix);
    } else {
      e["matrix"] = matrix_json(g.matrix);
    }
    gates.push_back(std::move(e));
  }
  j["gates"] = std::move(gates);
  return j;
}

Json to_json(const GateCountReport& r) {
  Json j{{"mapping", std::string(to_string(r.kind))},
         {"hop_x", r.hop_x},
         {"hop_y", r.hop_y},
         {"interaction", r.interaction},
         {"total", r.total},
         {"depth", r.depth}};
  Json ts = Json::array();
  for (const auto& t : r.templates)
    ts.push_back({{"label", t.label}, {"two_qudit", t.two_qudit}, {"depth", t.depth}});
  j["templates"] = std::move(ts);
  return j;
}

Json to_json(const VacuumCertificate& cert, const Json& config_echo) {
  Json j;
  j["config"] = config_echo;
  j["survival_probability"] = cert.survival_probability;
  j["max_constraint_error"] = cert.max_constraint_error;
  j["energy"] = cert.energy;
  j["occupations"] = cert.occupations;
  Json cs = Json::array();
  for (std::size_t p = 0; p < cert.labels.size(); ++p)
    cs.push_back({{"label", cert.labels[p]},
                  {"sector_sign", cert.sector_signs[p]},
                  {"expectation", cert.expectations[p]}});
  j["constraints"] = std::move(cs);
  return j;
}

Json to_json(const VvcLayout& layout) {
  Json layers = Json::array();
  for (const auto& l : layout.layers) {
    Json gates = Json::array();
    for (const auto& g : l.gates) {
      Json e{{"gate", g.gate}, {"site", site_json(g.site)}, {"slot", g.slot}};
      if (g.target_site) {
        e["target_site"] = site_json(*g.target_site);
        e["target_slot"] = g.target_slot;
      }
      gates.push_back(std::move(e));
    }
    layers.push_back({{"name", l.name}, {"gates", std::move(gates)}});
  }
  return {{"layers", std::move(layers)}};
}

VvcLayout vvc_layout_from_json(const Json& j) {
  try {
    VvcLayout out;
    for (const auto& l : j.at("layers")) {
      VvcLayer layer{l.at("name").get<std::string>(), {}};
      for (const auto& g : l.at("gates")) {
        GatePlacement p;
        p.gate = g.at("gate").get<std::string>();
        p.site = site_from_json(g.at("site"));
        p.slot = g.value("slot", 1);
        if (g.contains("target_site")) {
          p.target_site = site_from_json(g.at("target_site"));
          p.target_slot = g.value("target_slot", 1);
        }
        layer.gates.push_back(std::move(p));
      }
      out.layers.push_back(std::move(layer));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed gate layout: ") + e.what());
  }
}

void write_snapshot(const QuditState& state, const std::filesystem::path& base) {
  auto bin = base;
  bin += ".bin";
  std::ofstream os(bin, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + bin.string());
  const auto& a = state.amplitudes();
  for (Eigen::Index x = 0; x < a.size(); ++x) {
    put_le(os, a[x].real());
    put_le(os, a[x].imag());
  }
  if (!os) throw std::runtime_error("write failed for " + bin.string());
  auto side = base;
  side += ".json";
  const Json j{{"n_qudits", state.n_qudits()}, {"ordering", "qudit0-most-significant"}};
  write_text(side, j.dump(2) + "\n");
}

QuditState read_snapshot(const std::filesystem::path& base) {
  auto side = base;
  side += ".json";
  std::ifstream js(side);
  if (!js) throw std::runtime_error("missing snapshot sidecar " + side.string());
  Json meta;
  try {
    meta = Json::parse(js);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad snapshot sidecar: " + std::string(e.what()));
  }
  if (meta.value("ordering", "") != "qudit0-most-significant")
    throw std::runtime_error("unsupported snapshot ordering");
  const int n = meta.at("n_qudits").get<int>();
  auto bin = base;
  bin += ".bin";
  std::ifstream is(bin, std::ios::binary);
  if (!is) throw std::runtime_error("missing snapshot data " + bin.string());
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (static_cast<Eigen::Index>(raw.size()) != dim * 16)
    throw std::runtime_error("snapshot size does not match n_qudits");
  QuditState::Vector v(dim);
  for (Eigen::Index x = 0; x < dim; ++x)
    v[x] = Complex(get_le(&raw[16 * x]), get_le(&raw[16 * x + 8]));
  return QuditState::from_amplitudes(n, std::move(v));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ququart
