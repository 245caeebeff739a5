// Exception types shared across modules.
#pragma once

#include <stdexcept>
#include <string>

namespace ambikit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

struct VarTableMismatch : Error {
  VarTableMismatch() : Error("polynomials live over different variable tables") {}
};

struct DimensionError : Error {
  using Error::Error;
};

struct DivisionByZero : Error {
  using Error::Error;
};

/// The localizing monoid does not account for a denominator.
struct DenominatorOutsideMonoid : Error {
  explicit DenominatorOutsideMonoid(std::string cofactor)
      : Error("denominator has a factor outside the localizing monoid: " + cofactor),
        cofactor(std::move(cofactor)) {}
  std::string cofactor;
};

struct NonTerminating : Error {
  using Error::Error;
};

/// A long computation hit its deadline or was cancelled by the caller.
struct Cancelled : Error {
  Cancelled() : Error("computation cancelled (deadline exceeded)") {}
};

struct EmptyParameterSpaceSuspected : Error {
  using Error::Error;
};

struct RegionSamplingExhausted : Error {
  using Error::Error;
};

struct SchemaError : Error {
  using Error::Error;
};

}  // namespace ambikit
