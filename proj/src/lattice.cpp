#include "ququart/lattice.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ququart {

void LatticeSpec::validate() const {
  if (lx < 1 || ly < 1) throw std::invalid_argument("lattice extents must be positive");
  if (boundary == Boundary::Periodic && (lx < 2 || ly < 2))
    throw std::invalid_argument("periodic lattices need lx >= 2 and ly >= 2");
}

std::vector<Site> enumerate_sites(const LatticeSpec& spec) {
  spec.validate();
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(spec.n_sites()));
  for (int y = 0; y < spec.ly; ++y)
    for (int x = 0; x < spec.lx; ++x) out.push_back({x, y});
  return out;
}

namespace {

int extent(const LatticeSpec& spec, Orientation o) {
  return o == Orientation::Horizontal ? spec.lx : spec.ly;
}

int coordinate(Site s, Orientation o) { return o == Orientation::Horizontal ? s.x : s.y; }

std::vector<Edge> raw_edges(const LatticeSpec& spec, Orientation o) {
  spec.validate();
  const bool periodic = spec.boundary == Boundary::Periodic;
  const int len = extent(spec, o);
  std::vector<Edge> out;
  for (const Site s : enumerate_sites(spec)) {
    const int c = coordinate(s, o);
    const bool wraps = c == len - 1;
    if (wraps && !periodic) continue;
    Site t = s;
    if (o == Orientation::Horizontal)
      t.x = (s.x + 1) % spec.lx;
    else
      t.y = (s.y + 1) % spec.ly;
    Edge e{s, t, o, c % 2, wraps, false};
    out.push_back(e);
  }
  return out;
}

bool site_disjoint(const std::vector<Edge>& cls) {
  std::set<Site> seen;
  for (const auto& e : cls) {
    if (!seen.insert(e.from).second) return false;
    if (!seen.insert(e.to).second) return false;
  }
  return true;
}

}  // namespace

std::vector<std::vector<Edge>> edge_classes(const LatticeSpec& spec, Orientation o) {
  auto es = raw_edges(spec, o);
  // wrap edges go to the odd class; a third class takes them if that clashes
  for (auto& e : es)
    if (e.wraps) e.parity_class = 1;
  auto split = [&]() {
    std::vector<std::vector<Edge>> cls(3);
    for (const auto& e : es) cls[static_cast<std::size_t>(e.parity_class)].push_back(e);
    return cls;
  };
  auto cls = split();
  if (!site_disjoint(cls[1])) {
    for (auto& e : es)
      if (e.wraps) e.parity_class = 2;
    cls = split();
  }
  if (cls[2].empty()) cls.pop_back();
  return cls;
}

std::vector<Edge> edges(const LatticeSpec& spec, Orientation o) {
  std::vector<Edge> out;
  for (const auto& cls : edge_classes(spec, o)) out.insert(out.end(), cls.begin(), cls.end());
  std::sort(out.begin(), out.end(), [&](const Edge& a, const Edge& b) {
    return spec.index(a.from) < spec.index(b.from);
  });
  return out;
}

std::vector<Edge> all_edges(const LatticeSpec& spec) {
  auto h = edges(spec, Orientation::Horizontal);
  auto v = edges(spec, Orientation::Vertical);
  h.insert(h.end(), v.begin(), v.end());
  return h;
}

Edge edge_at(const LatticeSpec& spec, Site from, Orientation o) {
  for (const auto& e : edges(spec, o))
    if (e.from == from) return e;
  throw std::out_of_range("no edge leaving " + to_string(from));
}

std::vector<Plaquette> plaquettes(const LatticeSpec& spec) {
  spec.validate();
  const bool periodic = spec.boundary == Boundary::Periodic;
  std::vector<Plaquette> out;
  for (const Site r : enumerate_sites(spec)) {
    if (!periodic && (r.x == spec.lx - 1 || r.y == spec.ly - 1)) continue;
    const Site rx{(r.x + 1) % spec.lx, r.y};
    const Site ry{r.x, (r.y + 1) % spec.ly};
    const Site rxy{rx.x, ry.y};
    Plaquette p;
    p.corner = r;
    p.sites = {r, rx, rxy, ry};
    p.cycle = {edge_at(spec, r, Orientation::Horizontal), edge_at(spec, rx, Orientation::Vertical),
               edge_at(spec, ry, Orientation::Horizontal).reverse(),
               edge_at(spec, r, Orientation::Vertical).reverse()};
    out.push_back(p);
  }
  return out;
}

std::vector<PolyakovLoop> polyakov_loops(const LatticeSpec& spec) {
  spec.validate();
  std::vector<PolyakovLoop> out;
  if (spec.boundary != Boundary::Periodic) return out;
  for (int y = 0; y < spec.ly; ++y) {
    PolyakovLoop loop{Orientation::Horizontal, y, {}};
    for (int x = 0; x < spec.lx; ++x)
      loop.edges.push_back(edge_at(spec, {x, y}, Orientation::Horizontal));
    out.push_back(loop);
  }
  for (int x = 0; x < spec.lx; ++x) {
    PolyakovLoop loop{Orientation::Vertical, x, {}};
    for (int y = 0; y < spec.ly; ++y)
      loop.edges.push_back(edge_at(spec, {x, y}, Orientation::Vertical));
    out.push_back(loop);
  }
  return out;
}

Edge edge_between(const LatticeSpec& spec, Site a, Site b) {
  for (const auto& e : all_edges(spec)) {
    if (e.from == a && e.to == b) return e;
    if (e.from == b && e.to == a) return e.reverse();
  }
  throw std::invalid_argument(to_string(a) + " and " + to_string(b) + " are not neighbours");
}

std::string to_string(Site s) {
  return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + ")";
}

std::string to_string(const Edge& e) { return to_string(e.from) + "->" + to_string(e.to); }

}  // namespace ququart
