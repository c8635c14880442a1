#pragma once

#include <array>
#include <compare>
#include <string>
#include <utility>
#include <vector>

namespace ququart {

enum class Boundary { Open, Periodic };
enum class Orientation { Horizontal, Vertical };

/// Column x, row y. Row 0 is the top row; +ŷ steps to the next row.
struct Site {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const Site&, const Site&) = default;
};

struct LatticeSpec {
  int lx = 1;
  int ly = 1;
  Boundary boundary = Boundary::Open;

  /// Throws std::invalid_argument when the extents are not admissible.
  void validate() const;

  int n_sites() const { return lx * ly; }
  bool contains(Site s) const { return s.x >= 0 && s.x < lx && s.y >= 0 && s.y < ly; }
  /// Row-major, top row first: y·lx + x.
  int index(Site s) const { return s.y * lx + s.x; }
  Site site(int index) const { return {index % lx, index / lx}; }

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

/// An oriented nearest-neighbour link. A forward edge points along +x̂ or +ŷ
/// (wrapping on periodic lattices); reversed() flips the direction. Edge
/// identity is (tail of the forward edge, orientation).
struct Edge {
  Site from;
  Site to;
  Orientation orientation = Orientation::Horizontal;
  int parity_class = 0;  // 0 = even (A), 1 = odd (B), 2 = extra class for odd periodic wraps
  bool wraps = false;
  bool reversed = false;

  Edge reverse() const {
    Edge e = *this;
    std::swap(e.from, e.to);
    e.reversed = !reversed;
    return e;
  }
  Edge forward() const { return reversed ? reverse() : *this; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Elementary plaquette with corner r: sites (r, r+x, r+x+y, r+y). The cycle
/// runs r→r+x, r+x→r+x+y, r+x+y→r+y, r+y→r; the last two edges are reversed.
struct Plaquette {
  Site corner;
  std::array<Site, 4> sites;
  std::array<Edge, 4> cycle;
};

/// Non-contractible loop of forward edges along one row or one column.
struct PolyakovLoop {
  Orientation orientation;
  int line;  // row index for horizontal loops, column index for vertical ones
  std::vector<Edge> edges;
};

std::vector<Site> enumerate_sites(const LatticeSpec& spec);

/// Forward edges of one orientation, ordered by tail site index.
std::vector<Edge> edges(const LatticeSpec& spec, Orientation orientation);
std::vector<Edge> all_edges(const LatticeSpec& spec);

/// Edges partitioned into parity classes; empty classes are kept so the
/// class index is stable.
std::vector<std::vector<Edge>> edge_classes(const LatticeSpec& spec, Orientation orientation);

std::vector<Plaquette> plaquettes(const LatticeSpec& spec);
std::vector<PolyakovLoop> polyakov_loops(const LatticeSpec& spec);

/// The forward edge leaving `from` along `orientation`. Throws std::out_of_range
/// when that edge does not exist (open boundary).
Edge edge_at(const LatticeSpec& spec, Site from, Orientation orientation);

/// The edge oriented from a to b (reversed if b→a is the forward direction).
/// Throws std::invalid_argument when a and b are not neighbours.
Edge edge_between(const LatticeSpec& spec, Site a, Site b);

std::string to_string(Site s);
std::string to_string(const Edge& e);

}  // namespace ququart
