#pragma once

#include <stdexcept>
#include <string>

namespace ring {

/// Evaluation outside the domain of a potential or integral (on the z-axis,
/// at the origin, below a turning-point minimum, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Coulomb state with E >= 0: the motion is infinite.
class UnboundedOrbitError : public DomainError {
 public:
  explicit UnboundedOrbitError(double energy);
  double energy() const { return energy_; }

 private:
  double energy_;
};

/// The requested span needs more steps than IntegratorConfig::max_steps.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string describe_position(double x, double y, double z);

}  // namespace ring
