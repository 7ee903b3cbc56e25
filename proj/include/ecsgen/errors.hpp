#pragma once

#include <stdexcept>
#include <string>

namespace ecsgen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A superposition (or branch pair) has zero norm.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// The Fock cutoff cannot hold the requested coherent amplitude within tail_tol.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on a measurement outcome whose probability is (numerically) zero.
class ImpossibleOutcomeError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ecsgen
