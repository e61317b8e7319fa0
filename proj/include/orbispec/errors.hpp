#ifndef ORBISPEC_ERRORS_HPP
#define ORBISPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace orbispec {

/// An argument lies outside the domain where the operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative solver ran out of iterations or lost its bracket.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bound could not be certified from the data at hand (e.g. the spectrum is
/// truncated below the threshold a pipeline stage needs).
class CertificationError : public std::runtime_error {
 public:
  CertificationError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace orbispec

#endif  // ORBISPEC_ERRORS_HPP
