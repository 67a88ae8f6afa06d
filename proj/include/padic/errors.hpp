#pragma once

#include <stdexcept>
#include <string>

namespace padic {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched or invalid parameters (p, d, alpha, precision windows, lattices).
struct ParameterError : Error {
  using Error::Error;
};

// Argument outside the domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// Two points closer than the shared resolution p^{-M}.
struct PrecisionError : Error {
  using Error::Error;
};

// Coincident atoms or an evaluation point sitting on an atom.
struct InfiniteEnergyError : Error {
  using Error::Error;
};

// Exact and floating scalars combined in one expression.
struct ModeError : Error {
  using Error::Error;
};

// A configured size cap was exceeded.
struct CapacityError : Error {
  using Error::Error;
};

}  // namespace padic
