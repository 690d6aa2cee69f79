#include <cmath>
#include <vector>

#include <doctest.h>

#include "wealthnet/linalg.hpp"
#include "wealthnet/rng.hpp"

using namespace wealthnet;

TEST_CASE("lu solves a known system") {
  // [ 2 1 ] [x]   [ 5 ]        x = 2, y = 1
  // [ 1 3 ] [y] = [ 5 ]
  LuFactors lu({2.0, 1.0, 1.0, 3.0}, 2);
  std::vector<double> b = {5.0, 5.0};
  lu.solve(b);
  CHECK(b[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(b[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("lu round-trips random systems, plain and transposed") {
  RngStream rng(21, "test");
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.next_below(8));
    std::vector<double> a(n * n);
    for (auto& v : a) v = 2.0 * rng.next_unit() - 1.0;
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] += 4.0;  // diag dominant
    std::vector<double> x_true(n);
    for (auto& v : x_true) v = 2.0 * rng.next_unit() - 1.0;

    std::vector<double> b(n, 0.0), bt(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        b[i] += a[i * n + j] * x_true[j];
        bt[i] += a[j * n + i] * x_true[j];
      }
    const LuFactors lu(a, n);
    lu.solve(b);
    lu.solve_transposed(bt);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(b[i] == doctest::Approx(x_true[i]).epsilon(1e-10));
      CHECK(bt[i] == doctest::Approx(x_true[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("condition estimate tracks diagonal matrices") {
  // cond_1(diag(d)) = max|d| / min|d| exactly.
  LuFactors well({2.0, 0.0, 0.0, 0.5}, 2);
  CHECK(well.condition_1() == doctest::Approx(4.0).epsilon(1e-12));

  LuFactors harsh({1e8, 0.0, 0.0, 1e-6}, 2);
  CHECK(harsh.condition_1() == doctest::Approx(1e14).epsilon(1e-6));
}

TEST_CASE("singular matrices are rejected") {
  CHECK_THROWS_AS(LuFactors({1.0, 2.0, 2.0, 4.0}, 2), std::domain_error);
}
