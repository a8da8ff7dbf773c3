#include "commsat/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "commsat/error.hpp"

namespace commsat {

std::size_t CommunityPartition::intra_variable_count() const {
  std::size_t count = 0;
  for (Var v = 1; v <= n(); ++v) count += is_intra(v) ? 1 : 0;
  return count;
}

CommunityPartition CommunityPartition::empty(Var n, Community c) {
  CommunityPartition part;
  part.c_to_vs.resize(std::size_t(c) + 1);
  part.v_to_cs.resize(std::size_t(n) + 1);
  part.home.assign(std::size_t(n) + 1, 0);
  return part;
}

void CommunityPartition::add(Var v, Community k) {
  c_to_vs[k].insert(v);
  v_to_cs[v].insert(k);
}

std::size_t promoted_count(std::size_t home_size, double alpha) {
  double x = double(home_size) * (1.0 - alpha);
  // h * (1 - alpha) lands a few ulps off an exact half for inputs such as
  // 25 * (1 - 0.9); snap those so half-to-even sees the intended value.
  const double half = std::floor(x) + 0.5;
  if (std::abs(x - half) < 1e-9) x = half;
  const double rounded = std::nearbyint(x);
  return static_cast<std::size_t>(std::clamp(rounded, 0.0, double(home_size)));
}

CommunityPartition partition_communities(Var n, Community c, double alpha, Rng& rng) {
  if (c < 1) fail(ErrorKind::InvalidParameters, "community count c must be at least 1");
  if (n < c) fail(ErrorKind::InvalidParameters, fmt::format("n = {} is smaller than c = {}", n, c));
  if (!(alpha >= 0.0 && alpha <= 1.0))
    fail(ErrorKind::InvalidParameters, fmt::format("alpha = {} outside [0, 1]", alpha));
  if (c == 1 && alpha < 1.0)
    fail(ErrorKind::InvalidParameters, "alpha < 1 needs at least two communities for inter-community variables");

  std::vector<Var> order(n);
  std::iota(order.begin(), order.end(), Var{1});
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  auto part = CommunityPartition::empty(n, c);
  std::vector<std::vector<Var>> homes(std::size_t(c) + 1);
  const Var base = n / c, extra = n % c;
  std::size_t next = 0;
  for (Community k = 1; k <= c; ++k) {
    const Var size = base + (k <= extra ? 1 : 0);
    for (Var j = 0; j < size; ++j) {
      const Var v = order[next++];
      homes[k].push_back(v);
      part.home[v] = k;
      part.add(v, k);
    }
    std::sort(homes[k].begin(), homes[k].end());
  }

  // Only home variables are eligible for promotion, so a variable never
  // gains more than one extra community.
  for (Community k = 1; k <= c; ++k) {
    auto& pool = homes[k];
    const std::size_t promote = promoted_count(pool.size(), alpha);
    for (std::size_t i = 0; i < promote; ++i) {
      std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
      Community other = static_cast<Community>(1 + rng.below(c - 1));
      if (other >= k) ++other;
      part.add(pool[i], other);
    }
  }
  return part;
}

bool PartitionReport::has(const std::string& violation) const {
  return std::find(violations.begin(), violations.end(), violation) != violations.end();
}

PartitionReport validate_partition(const CommunityPartition& part, Var n, Community c, double alpha) {
  PartitionReport report;
  report.expected_intra = double(n) * alpha;
  report.expected_inter = double(n) * (1.0 - alpha);
  auto flag = [&](const std::string& v) {
    report.valid = false;
    if (!report.has(v)) report.violations.push_back(v);
  };

  if (part.c_to_vs.size() != std::size_t(c) + 1 || part.v_to_cs.size() != std::size_t(n) + 1 ||
      part.home.size() != std::size_t(n) + 1) {
    flag("size-mismatch");
    return report;
  }

  std::vector<std::size_t> home_sizes(std::size_t(c) + 1, 0);
  for (Var v = 1; v <= n; ++v) {
    const auto& cs = part.v_to_cs[v];
    if (cs.size() == 1)
      ++report.intra;
    else if (cs.size() == 2)
      ++report.inter;
    else
      flag("membership-count");
    for (Community k : cs) {
      if (k < 1 || k > c)
        flag("community-out-of-range");
      else if (!part.c_to_vs[k].contains(v))
        flag("inconsistent-mappings");
    }
    const Community h = part.home[v];
    if (h < 1 || h > c) {
      flag("home-out-of-range");
      continue;
    }
    ++home_sizes[h];
    if (!cs.contains(h)) flag("home-not-member");
  }
  for (Community k = 1; k <= c; ++k)
    for (Var v : part.c_to_vs[k])
      if (v < 1 || v > n || !part.v_to_cs[v].contains(k)) flag("inconsistent-mappings");

  if (c >= 1) {
    const auto [lo, hi] = std::minmax_element(home_sizes.begin() + 1, home_sizes.end());
    if (*hi - *lo > 1) flag("unbalanced-homes");
  }
  return report;
}

}  // namespace commsat
