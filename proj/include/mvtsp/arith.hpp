#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mvtsp {

using Integer = mpz_class;
using Rational = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Malformed input: wrong shapes, negative costs, asymmetric matrices, bad arcs.
class StructuralError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "structural"; }
};

// Infeasible problem. `certificate` holds Farkas multipliers when an LP
// produced the verdict (empty otherwise).
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what,
                           std::vector<Rational> certificate = {})
      : Error(what), certificate(std::move(certificate)) {}
  const char* kind() const noexcept override { return "infeasible"; }
  std::vector<Rational> certificate;
};

// Unreadable input file (malformed JSON, missing file).
class ParseError : public StructuralError {
 public:
  using StructuralError::StructuralError;
  const char* kind() const noexcept override { return "parse"; }
};

// A configured size cap was exceeded.
class CapabilityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "capability"; }
};

// A runtime assertion of a proven invariant failed.
class InternalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "internal"; }
};

class UnboundedError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unbounded"; }
};

#define MVTSP_CHECK(cond, msg)                                              \
  do {                                                                      \
    if (!(cond)) throw ::mvtsp::InternalError(std::string("check failed: ") + \
                                              (msg));                       \
  } while (0)

// Accepts "p/q", "p" or a decimal integer with optional sign.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

// Always "p/q" with q > 0, e.g. "3/1".
std::string format_rational(const Rational& value);
std::string format_integer(const Integer& value);

Integer floor_of(const Rational& value);
bool is_integral(const Rational& value);

}  // namespace mvtsp
