#pragma once

#include <span>
#include <vector>

namespace fresh {

// Probability mass on the support points 1..n (unit spacing).
class DiscreteDistribution {
 public:
  // Validates nonnegativity and unit total mass (1e-9).
  explicit DiscreteDistribution(std::vector<double> mass);

  std::span<const double> mass() const { return mass_; }
  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }

  friend bool operator==(const DiscreteDistribution&, const DiscreteDistribution&) = default;

 private:
  std::vector<double> mass_;
};

std::vector<double> cdf(const DiscreteDistribution& dist);

// W1 with cost |x - y|: the L1 distance between the two CDFs.
double wasserstein_1d(const DiscreteDistribution& p, const DiscreteDistribution& q);

}  // namespace fresh
