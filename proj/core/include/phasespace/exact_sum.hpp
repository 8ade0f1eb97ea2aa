#pragma once

#include <span>
#include <vector>

namespace phasespace {

/// Correctly rounded floating-point summation (Shewchuk partials, as in Python's math.fsum).
/// The result does not depend on the order in which terms are added, so sums over permuted
/// samples agree bit for bit.
class ExactAccumulator {
 public:
  void add(double x);
  double value() const;

 private:
  std::vector<double> partials_;
};

double exact_sum(std::span<const double> xs);

}  // namespace phasespace
