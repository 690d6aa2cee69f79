#include <cmath>
#include <set>
#include <sstream>

#include <doctest.h>

#include "wealthnet/graph.hpp"
#include "wealthnet/rng.hpp"

using namespace wealthnet;

namespace {

std::string edges_text(const Graph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

}  // namespace

TEST_CASE("ring lattice") {
  const Graph tri = ring(3);
  CHECK(tri.size() == 3);
  CHECK(tri.edge_count() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(tri.degree(i) == 2);

  const Graph r5 = ring(5);
  const auto nb0 = r5.neighbors(0);
  REQUIRE(nb0.size() == 2);
  CHECK(nb0[0] == 1);
  CHECK(nb0[1] == 4);

  const Graph r2000 = ring(2000);
  CHECK(r2000.size() == 2000);
  CHECK(r2000.edge_count() == 2000);
  CHECK(r2000.kind() == GraphKind::Ring1D);
  validate_graph(r2000);

  CHECK_THROWS_AS(ring(2), std::invalid_argument);
}

TEST_CASE("square lattice") {
  const Graph g = grid2d(50, 50, true);
  CHECK(g.size() == 2500);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.degree(i) == 4);
  CHECK(g.edge_count() == 5000);
  validate_graph(g);

  const Graph open = grid2d(3, 3, false);
  CHECK(open.degree(0) == 2);  // corner
  CHECK(open.degree(4) == 4);  // center
  CHECK(open.degree(1) == 3);  // edge midpoint
  validate_graph(open);

  const Graph big = grid2d(400, 400, true);
  CHECK(big.size() == 160000);
  CHECK(big.edge_count() == 320000);

  CHECK_THROWS_AS(grid2d(2, 10, true), std::invalid_argument);
  CHECK_THROWS_AS(grid2d(10, 2, true), std::invalid_argument);
}

TEST_CASE("grid direction helper") {
  const Graph g = grid2d(4, 3, true);
  // Site 0 is (x=0, y=0); rows are width-major.
  CHECK(*grid_neighbor(g, 0, GridDirection::Right) == 1);
  CHECK(*grid_neighbor(g, 0, GridDirection::Left) == 3);
  CHECK(*grid_neighbor(g, 0, GridDirection::Bottom) == 4);
  CHECK(*grid_neighbor(g, 0, GridDirection::Top) == 8);
  const Graph open = grid2d(4, 3, false);
  CHECK_FALSE(grid_neighbor(open, 0, GridDirection::Left).has_value());
  CHECK_FALSE(grid_neighbor(open, 0, GridDirection::Top).has_value());
  CHECK(*grid_neighbor(open, 0, GridDirection::Right) == 1);
}

TEST_CASE("complete graph") {
  CHECK(complete(2).edge_count() == 1);
  const Graph k5 = complete(5);
  CHECK(k5.edge_count() == 10);
  for (std::size_t i = 0; i < 5; ++i) CHECK(k5.degree(i) == 4);
  CHECK(complete(50).edge_count() == 1225);
  CHECK_THROWS_AS(complete(1), std::invalid_argument);
  validate_graph(k5);
}

TEST_CASE("link addition cycles") {
  const Graph base = ring(2000);

  SUBCASE("p = 0 leaves the lattice ordered") {
    RngStream rng(1, "topology");
    const Graph same = rewire_cycles(base, 0.0, 1, rng);
    CHECK(edges_text(same) == edges_text(base));
    CHECK(same.kind() == GraphKind::Augmented);
  }

  SUBCASE("p = 1 single cycle adds about one link per site") {
    RngStream rng(1, "topology");
    const Graph g = rewire_cycles(base, 1.0, 1, rng);
    const std::size_t added = g.edge_count() - base.edge_count();
    CHECK(added <= 2000);
    CHECK(added >= 1990);  // rejection skips are rare on a sparse ring
    double mean_degree = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      mean_degree += static_cast<double>(g.degree(i));
    mean_degree /= static_cast<double>(g.size());
    CHECK(mean_degree == doctest::Approx(4.0).epsilon(0.01));
    validate_graph(g);
  }

  SUBCASE("fixed seed reproduces the edge set") {
    RngStream r1(7, "topology", 3);
    RngStream r2(7, "topology", 3);
    const Graph a = rewire_cycles(base, 0.3, 2, r1);
    const Graph b = rewire_cycles(base, 0.3, 2, r2);
    CHECK(a == b);
  }

  SUBCASE("never removes an edge") {
    RngStream rng(11, "topology");
    const Graph g = rewire_cycles(base, 0.7, 5, rng);
    for (std::size_t i = 0; i < base.size(); ++i)
      for (std::uint32_t j : base.neighbors(i)) CHECK(g.adjacent(i, j));
    validate_graph(g);
  }

  SUBCASE("added edges match n*p within 3 sigma over 100 seeds") {
    const Graph small = ring(500);
    const double p = 0.3;
    const int seeds = 100;
    std::size_t total_added = 0;
    for (int s = 0; s < seeds; ++s) {
      RngStream rng(static_cast<std::uint64_t>(s), "topology");
      total_added +=
          rewire_cycles(small, p, 1, rng).edge_count() - small.edge_count();
    }
    const double trials = 500.0 * seeds;
    const double expected = trials * p;
    const double sigma = std::sqrt(trials * p * (1.0 - p));
    CHECK(std::abs(static_cast<double>(total_added) - expected) <=
          3.0 * sigma);
  }

  SUBCASE("five cycles dominate one cycle in added links") {
    const Graph small = ring(300);
    double one = 0.0, five = 0.0;
    for (int s = 0; s < 100; ++s) {
      RngStream r1(static_cast<std::uint64_t>(s), "topology");
      RngStream r5(static_cast<std::uint64_t>(s), "topology");
      one += static_cast<double>(
          rewire_cycles(small, 0.4, 1, r1).edge_count());
      five += static_cast<double>(
          rewire_cycles(small, 0.4, 5, r5).edge_count());
    }
    CHECK(five / 100.0 >= one / 100.0);
  }

  RngStream rng(1, "topology");
  CHECK_THROWS_AS(rewire_cycles(base, 1.5, 1, rng), std::invalid_argument);
  CHECK_THROWS_AS(rewire_cycles(base, 0.5, 0, rng), std::invalid_argument);
}

TEST_CASE("explicit link addition") {
  const Graph base = ring(300);

  SUBCASE("no targets, no change") {
    const Graph g = add_links(base, 5, {});
    CHECK(edges_text(g) == edges_text(base));
  }

  SUBCASE("100 targets raise the center degree by exactly 100") {
    std::vector<std::uint32_t> targets;
    for (std::uint32_t t = 10; targets.size() < 100; t += 2)
      targets.push_back(t);
    const Graph g = add_links(base, 5, targets);
    CHECK(g.degree(5) == base.degree(5) + 100);
    CHECK(g.edge_count() == base.edge_count() + 100);
    validate_graph(g);
  }

  CHECK_THROWS_AS(add_links(base, 5, {9, 9}), std::invalid_argument);
  CHECK_THROWS_AS(add_links(base, 5, {5}), std::invalid_argument);
  CHECK_THROWS_AS(add_links(base, 5, {6}), std::invalid_argument);  // adjacent
  CHECK_THROWS_AS(add_links(base, 5, {400}), std::invalid_argument);
}

TEST_CASE("edge list round trip and golden format") {
  const Graph r4 = ring(4);
  CHECK(edges_text(r4) == "n 4\n0 1\n0 3\n1 2\n2 3\n");

  RngStream rng(3, "topology");
  const Graph g = rewire_cycles(ring(40), 0.5, 2, rng);
  std::stringstream buf;
  write_edge_list(g, buf);
  const Graph back = read_edge_list(buf);
  CHECK(back.size() == g.size());
  CHECK(edges_text(back) == edges_text(g));

  std::istringstream bad("x 4\n0 1\n");
  CHECK_THROWS_AS(read_edge_list(bad), io_error);
  std::istringstream swapped("n 4\n1 0\n");
  CHECK_THROWS_AS(read_edge_list(swapped), io_error);
}
