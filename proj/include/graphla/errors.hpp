#pragma once

#include <stdexcept>
#include <string>

namespace graphla {

// Base for every library error so callers can catch one type at the CLI
// boundary while tests distinguish the concrete kinds.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroVariance : Error {
  using Error::Error;
};
struct MalformedHeader : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct IoFailure : Error {
  using Error::Error;
};
struct OutOfBounds : Error {
  using Error::Error;
};
struct WaveletTooLong : Error {
  using Error::Error;
};
struct DegenerateSpectrum : Error {
  using Error::Error;
};
struct NonFinite : Error {
  using Error::Error;
};
struct SolverStalled : Error {
  using Error::Error;
};
struct AllFlatTruth : Error {
  using Error::Error;
};
struct IdenticalInputs : Error {
  using Error::Error;
};
struct GridTooSmall : Error {
  using Error::Error;
};

}  // namespace graphla
