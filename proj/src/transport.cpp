#include "transport.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace fresh {

DiscreteDistribution::DiscreteDistribution(std::vector<double> mass) : mass_(std::move(mass)) {
  if (mass_.empty()) throw InvalidArgument("distribution must have at least one support point");
  double total = 0.0;
  for (double m : mass_) {
    if (!std::isfinite(m) || m < 0.0)
      throw InvalidArgument("distribution mass must be finite and nonnegative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidArgument("distribution mass sums to " + std::to_string(total) + ", expected 1");
}

std::vector<double> cdf(const DiscreteDistribution& dist) {
  std::vector<double> out(dist.size());
  double running = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    running += dist[i];
    out[i] = running;
  }
  return out;
}

double wasserstein_1d(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  if (p.size() != q.size())
    throw InvalidArgument("wasserstein_1d: length mismatch (" + std::to_string(p.size()) + " vs " +
                          std::to_string(q.size()) + ")");
  double distance = 0.0;
  double cp = 0.0;
  double cq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cp += p[i];
    cq += q[i];
    distance += std::abs(cp - cq);
  }
  return distance;
}

}  // namespace fresh
