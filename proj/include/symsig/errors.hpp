#pragma once

#include <stdexcept>
#include <string>

namespace symsig {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RingMismatch : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct UnsupportedRing : Error { using Error::Error; };
struct NeedsHalf : Error { using Error::Error; };
struct NotAutomorphism : Error { using Error::Error; };
struct NotIsometry : Error { using Error::Error; };
struct NotLagrangian : Error { using Error::Error; };
struct NotSplittable : Error { using Error::Error; };
struct StructureMismatch : Error { using Error::Error; };
struct BoundaryMismatch : Error { using Error::Error; };
struct UnknownFixture : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct DegenerateEvaluation : Error { using Error::Error; };
struct SkewNotSigned : Error { using Error::Error; };
struct NotFree : Error { using Error::Error; };
struct StepFailure : Error { using Error::Error; };

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

}  // namespace symsig
