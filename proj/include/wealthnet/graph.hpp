#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wealthnet/errors.hpp"
#include "wealthnet/rng.hpp"

namespace wealthnet {

enum class GraphKind { Ring1D, Grid2D, Complete, Augmented };

// Builder-dependent extras. Zeroed fields mean "not applicable".
struct GraphMeta {
  std::size_t width = 0;
  std::size_t height = 0;
  bool periodic = false;
  double p = 0.0;
  std::size_t cycles = 0;
  std::uint64_t seed = 0;

  bool operator==(const GraphMeta&) const = default;
};

// Undirected simple graph in compressed adjacency form. Immutable after
// construction; neighbor lists are sorted ascending, which fixes the
// floating-point summation order in the dynamics kernels.
class Graph {
 public:
  Graph() = default;

  // edges: each pair (i, j) with i != j inserted once in either order.
  Graph(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
        GraphKind kind, GraphMeta meta = {})
      : kind_(kind), meta_(meta) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& [a, b] : edges) {
      if (a == b)
        throw std::invalid_argument("Graph: self-loop at site " +
                                    std::to_string(a));
      if (a >= n || b >= n)
        throw std::invalid_argument("Graph: edge endpoint out of range");
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    offsets_.reserve(n + 1);
    offsets_.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& row = adj[i];
      std::sort(row.begin(), row.end());
      if (std::adjacent_find(row.begin(), row.end()) != row.end())
        throw std::invalid_argument("Graph: duplicate edge at site " +
                                    std::to_string(i));
      flat_.insert(flat_.end(), row.begin(), row.end());
      offsets_.push_back(static_cast<std::uint64_t>(flat_.size()));
    }
  }

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return flat_.size() / 2; }

  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {flat_.data() + offsets_[i],
            flat_.data() + offsets_[i + 1]};
  }

  std::size_t degree(std::size_t i) const {
    return static_cast<std::size_t>(offsets_[i + 1] - offsets_[i]);
  }

  bool adjacent(std::size_t i, std::size_t j) const {
    const auto row = neighbors(i);
    return std::binary_search(row.begin(), row.end(),
                              static_cast<std::uint32_t>(j));
  }

  GraphKind kind() const { return kind_; }
  const GraphMeta& meta() const { return meta_; }

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> flat_;
  GraphKind kind_ = GraphKind::Augmented;
  GraphMeta meta_;
};

// Periodic 1-D lattice: site i linked to (i +/- 1) mod n.
inline Graph ring(std::size_t n) {
  if (n < 3) throw std::invalid_argument("ring: n must be >= 3");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    edges.emplace_back(static_cast<std::uint32_t>(i),
                       static_cast<std::uint32_t>((i + 1) % n));
  return Graph(n, edges, GraphKind::Ring1D);
}

// Square lattice with 4-neighborhoods, row-major indexing
// (site = y*width + x). Periodic wraps both axes.
inline Graph grid2d(std::size_t width, std::size_t height, bool periodic) {
  if (width < 3 || height < 3)
    throw std::invalid_argument("grid2d: dimensions must be >= 3");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(2 * width * height);
  auto id = [width](std::size_t x, std::size_t y) {
    return static_cast<std::uint32_t>(y * width + x);
  };
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      if (x + 1 < width) edges.emplace_back(id(x, y), id(x + 1, y));
      if (y + 1 < height) edges.emplace_back(id(x, y), id(x, y + 1));
    }
  }
  if (periodic) {
    for (std::size_t y = 0; y < height; ++y)
      edges.emplace_back(id(width - 1, y), id(0, y));
    for (std::size_t x = 0; x < width; ++x)
      edges.emplace_back(id(x, height - 1), id(x, 0));
  }
  GraphMeta meta;
  meta.width = width;
  meta.height = height;
  meta.periodic = periodic;
  return Graph(width * height, edges, GraphKind::Grid2D, meta);
}

// All n*(n-1)/2 edges; the mean-field topology.
inline Graph complete(std::size_t n) {
  if (n < 2) throw std::invalid_argument("complete: n must be >= 2");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.emplace_back(static_cast<std::uint32_t>(i),
                         static_cast<std::uint32_t>(j));
  return Graph(n, edges, GraphKind::Complete);
}

namespace detail {

// Mutable adjacency working copy used by the augmenting builders.
struct AdjacencyDraft {
  explicit AdjacencyDraft(const Graph& g) : rows(g.size()) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto nb = g.neighbors(i);
      rows[i].assign(nb.begin(), nb.end());
    }
  }

  bool adjacent(std::size_t i, std::uint32_t j) const {
    return std::binary_search(rows[i].begin(), rows[i].end(), j);
  }

  void add_edge(std::uint32_t a, std::uint32_t b) {
    auto& ra = rows[a];
    auto& rb = rows[b];
    ra.insert(std::upper_bound(ra.begin(), ra.end(), b), b);
    rb.insert(std::upper_bound(rb.begin(), rb.end(), a), a);
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < rows.size(); ++i)
      for (std::uint32_t j : rows[i])
        if (i < j) edges.emplace_back(i, j);
    return edges;
  }

  std::vector<std::vector<std::uint32_t>> rows;
};

}  // namespace detail

// Probabilistic link addition. Each cycle visits sites 0..n-1 in order;
// with probability p the site gains one new edge to a uniformly chosen
// non-adjacent site. Lattice edges are never removed. A site whose draw
// is rejected 64 times in a row (graph near saturation) is skipped.
inline Graph rewire_cycles(const Graph& base, double p, std::size_t cycles,
                           RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("rewire_cycles: p must be in [0, 1]");
  if (cycles < 1)
    throw std::invalid_argument("rewire_cycles: cycles must be >= 1");
  const std::size_t n = base.size();
  detail::AdjacencyDraft draft(base);
  for (std::size_t c = 0; c < cycles; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.next_unit() >= p) continue;
      for (int attempt = 0; attempt < 64; ++attempt) {
        const auto j = static_cast<std::uint32_t>(rng.next_below(n));
        if (j == i || draft.adjacent(i, j)) continue;
        draft.add_edge(static_cast<std::uint32_t>(i), j);
        break;
      }
    }
  }
  GraphMeta meta = base.meta();
  meta.p = p;
  meta.cycles = cycles;
  return Graph(n, draft.edge_list(), GraphKind::Augmented, meta);
}

// Non-local links from one chosen site to an explicit target list.
inline Graph add_links(const Graph& base, std::size_t center,
                       const std::vector<std::uint32_t>& targets) {
  const std::size_t n = base.size();
  if (center >= n) throw std::invalid_argument("add_links: center out of range");
  std::vector<bool> seen(n, false);
  for (std::uint32_t t : targets) {
    if (t >= n)
      throw std::invalid_argument("add_links: target out of range: " +
                                  std::to_string(t));
    if (t == center)
      throw std::invalid_argument("add_links: target equals center: " +
                                  std::to_string(t));
    if (seen[t])
      throw std::invalid_argument("add_links: duplicate target: " +
                                  std::to_string(t));
    if (base.adjacent(center, t))
      throw std::invalid_argument("add_links: target already adjacent: " +
                                  std::to_string(t));
    seen[t] = true;
  }
  detail::AdjacencyDraft draft(base);
  for (std::uint32_t t : targets)
    draft.add_edge(static_cast<std::uint32_t>(center), t);
  return Graph(n, draft.edge_list(), GraphKind::Augmented, base.meta());
}

// Consistency sweep used by tests: symmetric, sorted, no loops or
// duplicates.
inline void validate_graph(const Graph& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto row = g.neighbors(i);
    if (!std::is_sorted(row.begin(), row.end()))
      throw std::logic_error("validate_graph: unsorted neighbor row");
    for (std::uint32_t j : row) {
      if (j == i) throw std::logic_error("validate_graph: self-loop");
      if (!g.adjacent(j, i))
        throw std::logic_error("validate_graph: asymmetric edge");
    }
    if (std::adjacent_find(row.begin(), row.end()) != row.end())
      throw std::logic_error("validate_graph: duplicate neighbor");
  }
}

enum class GridDirection { Right, Left, Bottom, Top };

// Lattice neighbor of `site` in a fixed direction; requires grid metadata.
// nullopt at a non-periodic boundary.
inline std::optional<std::uint32_t> grid_neighbor(const Graph& g,
                                                  std::size_t site,
                                                  GridDirection dir) {
  const auto& m = g.meta();
  if (m.width < 3 || m.height < 3)
    throw std::invalid_argument("grid_neighbor: graph lacks grid metadata");
  const std::size_t x = site % m.width;
  const std::size_t y = site / m.width;
  std::size_t nx = x, ny = y;
  switch (dir) {
    case GridDirection::Right:
      if (x + 1 == m.width && !m.periodic) return std::nullopt;
      nx = (x + 1) % m.width;
      break;
    case GridDirection::Left:
      if (x == 0 && !m.periodic) return std::nullopt;
      nx = (x + m.width - 1) % m.width;
      break;
    case GridDirection::Bottom:
      if (y + 1 == m.height && !m.periodic) return std::nullopt;
      ny = (y + 1) % m.height;
      break;
    case GridDirection::Top:
      if (y == 0 && !m.periodic) return std::nullopt;
      ny = (y + m.height - 1) % m.height;
      break;
  }
  return static_cast<std::uint32_t>(ny * m.width + nx);
}

// Edge-list text format used for reproducibility audits:
//   first line "n <count>", then one "i j" line per edge, i < j,
//   ascending lexicographic order.
inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << "n " << g.size() << "\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::uint32_t j : g.neighbors(i))
      if (i < j) out << i << " " << j << "\n";
}

// Imported graphs carry kind Augmented; the file format records structure
// only.
inline Graph read_edge_list(std::istream& in) {
  std::string tag;
  std::size_t n = 0;
  if (!(in >> tag >> n) || tag != "n")
    throw io_error("read_edge_list: malformed header (expected 'n <count>')");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uint32_t a, b;
  while (in >> a >> b) {
    if (a >= b) throw io_error("read_edge_list: edges must satisfy i < j");
    edges.emplace_back(a, b);
  }
  if (!in.eof() && in.fail())
    throw io_error("read_edge_list: malformed edge line");
  return Graph(n, edges, GraphKind::Augmented);
}

}  // namespace wealthnet
