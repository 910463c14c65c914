#pragma once

#include <stdexcept>
#include <string>

namespace mwb {

/// Malformed or out-of-contract input. CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ledger was asked for a constant it cannot derive. Reported like an
/// input error.
class LedgerError : public InputError {
 public:
  using InputError::InputError;
};

/// A computed certificate violated its own bound. CLI exit code 3.
/// `details` optionally carries a serialised report of the failing run.
class CertificateError : public std::runtime_error {
 public:
  explicit CertificateError(const std::string& what, std::string details_json = "")
      : std::runtime_error(what), details(std::move(details_json)) {}
  std::string details;
};

/// A configured size or precision budget was exceeded. CLI exit code 4.
/// Carries whatever partial estimate was available at the time.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what, double partial = 0.0)
      : std::runtime_error(what), partial_estimate(partial) {}
  double partial_estimate;
};

/// Two independent criteria disagreed (e.g. torsion by multiples versus
/// torsion by canonical height); usually means a tolerance is too loose.
class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mwb
