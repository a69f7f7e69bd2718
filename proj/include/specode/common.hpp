#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace specode {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

/// Conversion used only at I/O: Gamma / 2pi in MHz (Rb D1 line).
inline constexpr double kGammaOver2PiMHz = 6.0;

/// Converts an angular frequency in units of Gamma to a cyclic frequency in MHz.
inline double gamma_units_to_mhz(double omega) { return omega * kGammaOver2PiMHz; }

// Error hierarchy. Every failure surfaced by the library derives from Error so
// callers (CLI, bindings) can map the whole family onto one exit path.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPECODE_DEFINE_ERROR(Name)      \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

SPECODE_DEFINE_ERROR(InvalidArgument)
SPECODE_DEFINE_ERROR(UnderResolvedGrid)
SPECODE_DEFINE_ERROR(BinOverlap)
SPECODE_DEFINE_ERROR(BadLength)
SPECODE_DEFINE_ERROR(NotPowerOfTwo)
SPECODE_DEFINE_ERROR(ChannelShapeMismatch)
SPECODE_DEFINE_ERROR(DegenerateMatrix)
SPECODE_DEFINE_ERROR(OddM)
SPECODE_DEFINE_ERROR(Infeasible)
SPECODE_DEFINE_ERROR(Overflow)
SPECODE_DEFINE_ERROR(StepFailure)
SPECODE_DEFINE_ERROR(NotConverged)
SPECODE_DEFINE_ERROR(ConfigError)

#undef SPECODE_DEFINE_ERROR

/// Raised when a channel layout's placement graph contains a cycle. The
/// offending cycle is listed as node labels ("s3", "i1", ...).
class CycleDetected : public Error {
 public:
  CycleDetected(const std::string& what, std::vector<std::string> cycle)
      : Error(what), cycle_(std::move(cycle)) {}
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

}  // namespace specode
