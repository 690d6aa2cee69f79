#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace wealthnet {

// Fixed-edge histogram with explicit under/overflow counters, so the
// total count is preserved whatever the data range. Bins are half-open
// [edge_k, edge_k+1); a value equal to the last edge overflows.
class Histogram {
 public:
  explicit Histogram(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 2)
      throw std::invalid_argument("Histogram: need at least two edges");
    if (!std::is_sorted(edges_.begin(), edges_.end()) ||
        std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw std::invalid_argument("Histogram: edges must be strictly ascending");
    counts_.assign(edges_.size() - 1, 0);
  }

  static Histogram uniform(double lo, double hi, std::size_t nbins) {
    if (!(lo < hi) || nbins < 1)
      throw std::invalid_argument("Histogram::uniform: bad range");
    std::vector<double> edges(nbins + 1);
    for (std::size_t k = 0; k <= nbins; ++k)
      edges[k] = lo + (hi - lo) * static_cast<double>(k) /
                          static_cast<double>(nbins);
    return Histogram(std::move(edges));
  }

  void add(double v) {
    if (v < edges_.front()) {
      ++underflow_;
    } else if (v >= edges_.back()) {
      ++overflow_;
    } else {
      const auto it = std::upper_bound(edges_.begin(), edges_.end(), v);
      ++counts_[static_cast<std::size_t>(it - edges_.begin()) - 1];
    }
  }

  const std::vector<double>& edges() const { return edges_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t underflow() const { return underflow_; }
  std::uint64_t overflow() const { return overflow_; }

  std::uint64_t total() const {
    std::uint64_t t = underflow_ + overflow_;
    for (auto c : counts_) t += c;
    return t;
  }

  bool operator==(const Histogram&) const = default;

 private:
  std::vector<double> edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t underflow_ = 0;
  std::uint64_t overflow_ = 0;
};

// Kolmogorov-Smirnov distance between two histograms over identical
// edges: the maximum gap between normalized cumulative counts, evaluated
// at every bin edge (underflow mass sits below the first edge). An empty
// histogram contributes a flat zero CDF.
inline double ks_distance(const Histogram& a, const Histogram& b) {
  if (a.edges() != b.edges())
    throw std::invalid_argument("ks_distance: histograms have mismatched bins");
  const double ta = static_cast<double>(a.total());
  const double tb = static_cast<double>(b.total());
  double ca = static_cast<double>(a.underflow());
  double cb = static_cast<double>(b.underflow());
  double worst = 0.0;
  auto gap = [&](double xa, double xb) {
    const double fa = ta > 0.0 ? xa / ta : 0.0;
    const double fb = tb > 0.0 ? xb / tb : 0.0;
    const double d = fa > fb ? fa - fb : fb - fa;
    if (d > worst) worst = d;
  };
  gap(ca, cb);
  for (std::size_t k = 0; k < a.counts().size(); ++k) {
    ca += static_cast<double>(a.counts()[k]);
    cb += static_cast<double>(b.counts()[k]);
    gap(ca, cb);
  }
  return worst;
}

}  // namespace wealthnet
