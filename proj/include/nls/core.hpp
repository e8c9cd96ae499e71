#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nls {

using Real = double;
using Complex = std::complex<double>;
using CArray = Eigen::ArrayXcd;
using RArray = Eigen::ArrayXd;
using Index = Eigen::Index;
using Point = Eigen::VectorXd;

inline constexpr Real kPi = 3.14159265358979323846264338327950288;

enum class ErrorCode {
  InvalidArgument,
  NegativePowerZeroMode,
  DivergentIntegral,
  DegenerateDenominator,
  InadmissibleExponents,
  IndexOutOfRange,
  HypothesisViolation,
  NegativeEnergy,
  InsufficientData,
  SupportOverflow,
  CoincidentPoints,
  CorruptState,
  Io,
  Config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nls
