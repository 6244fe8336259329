#pragma once

#include <boost/math/distributions/chi_squared.hpp>
#include <cstdint>
#include <vector>

namespace bnsl::testing {

// Pearson goodness of fit against uniform; true when the statistic stays
// below the (1 - alpha) quantile.
inline bool uniform_fit(const std::vector<std::uint64_t>& counts, double alpha = 1e-3) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return stat < boost::math::quantile(boost::math::complement(dist, alpha));
}

}  // namespace bnsl::testing
