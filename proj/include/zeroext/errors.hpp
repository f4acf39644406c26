#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zeroext {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A broken internal invariant; seeing one means a bug, not bad input.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(const std::string& label) : Error("unknown label '" + label + "'"), label_(label) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class AxiomViolation : public Error {
 public:
  enum class Kind { identity, symmetry, triangle };

  AxiomViolation(Kind kind, std::vector<std::string> witness)
      : Error(describe(kind, witness)), kind_(kind), witness_(std::move(witness)) {}

  Kind kind() const { return kind_; }
  const std::vector<std::string>& witness() const { return witness_; }

 private:
  static std::string describe(Kind kind, const std::vector<std::string>& w) {
    static const char* names[] = {"identity", "symmetry", "triangle"};
    std::string s = std::string("metric axiom violated (") + names[static_cast<int>(kind)] + ") at (";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + w[i];
    return s + ")";
  }

  Kind kind_;
  std::vector<std::string> witness_;
};

class PathMetricMismatch : public Error {
 public:
  using Error::Error;
};

class CyclicOrientation : public Error {
 public:
  using Error::Error;
};

class InadmissibleOrientation : public Error {
 public:
  using Error::Error;
};

class InadmissibleRelation : public Error {
 public:
  using Error::Error;
};

class NotGated : public Error {
 public:
  using Error::Error;
};

class NotMeetSemilattice : public Error {
 public:
  using Error::Error;
};

class NotModular : public Error {
 public:
  using Error::Error;
};

class BadValuation : public Error {
 public:
  using Error::Error;
};

class NotInInterval : public Error {
 public:
  using Error::Error;
};

class EmptyDomain : public Error {
 public:
  explicit EmptyDomain(std::size_t variable)
      : Error("variable " + std::to_string(variable) + " has an empty domain"), variable_(variable) {}
  std::size_t variable() const { return variable_; }

 private:
  std::size_t variable_;
};

class Unbounded : public Error {
 public:
  using Error::Error;
};

class TightnessViolated : public Error {
 public:
  using Error::Error;
};

class DomainTooLarge : public Error {
 public:
  using Error::Error;
};

class InfeasibleStart : public Error {
 public:
  using Error::Error;
};

}  // namespace zeroext
