#pragma once

#include <stdexcept>

namespace exprbm {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation: support
// violations, inverses at invalid points, malformed parameters.
struct DomainError : Error {
  using Error::Error;
};

// A computation on finite inputs produced a non-finite value. Raised instead
// of silently returning inf/nan.
struct OverflowError : Error {
  using Error::Error;
};

// The integration window never reached the required tail decay.
struct QuadratureFailure : Error {
  using Error::Error;
};

// Requested an exact conditional sampler for a unit that has none.
struct UnsupportedExactSampler : Error {
  using Error::Error;
};

// A truncated ensemble cannot reach the bulk of the target distribution.
struct TruncationBias : Error {
  using Error::Error;
};

// Weights blew past the divergence threshold (or went non-finite) during
// training.
struct DivergenceDetected : Error {
  using Error::Error;
};

// File-format problems: bad magic, version mismatch, CRC mismatch, truncated
// payloads, dimension mismatches against the header.
struct IoError : Error {
  using Error::Error;
};

}  // namespace exprbm
