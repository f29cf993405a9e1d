#pragma once

#include <stdexcept>
#include <string>

namespace shiftmean {

/// Invalid argument, size mismatch or malformed configuration.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation that cannot produce a meaningful number.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Quantity undefined for the given inputs (zero eigenvalue under a filter
/// weight, density without Fisher information, ...).
class DomainError : public NumericalError {
 public:
  explicit DomainError(const std::string& what) : NumericalError(what) {}
};

/// Synthesis of a spectrum that is not conjugate symmetric.
class ConjugateSymmetryError : public NumericalError {
 public:
  explicit ConjugateSymmetryError(const std::string& what) : NumericalError(what) {}
};

}  // namespace shiftmean
