#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace effaction {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax error from the expression parser; `position` is a 0-based
/// character offset into the input (equal to the input length when the
/// input ended too early).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation outside the mathematical domain of a subexpression
/// (log/sqrt of a non-positive value, division by zero, ...).
class DomainEvalError : public Error {
 public:
  DomainEvalError(const std::string& what, double x) : Error(what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// Problem validation failed; carries the full list of findings.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> messages)
      : Error(join(messages)), messages_(std::move(messages)) {}
  const std::vector<std::string>& messages() const noexcept { return messages_; }

 private:
  static std::string join(const std::vector<std::string>& msgs) {
    std::string out = "problem validation failed:";
    for (const auto& m : msgs) out += "\n  " + m;
    return out;
  }
  std::vector<std::string> messages_;
};

/// V''(x) <= 0: no real local frequency at this point.
class InstabilityError : public Error {
 public:
  InstabilityError(double x, double vpp)
      : Error("locally unstable: no real frequency at x=" + std::to_string(x) +
              " (V''=" + std::to_string(vpp) + ")"),
        x_(x),
        vpp_(vpp) {}
  double x() const noexcept { return x_; }
  double second_derivative() const noexcept { return vpp_; }

 private:
  double x_, vpp_;
};

/// Quadrature failed its order-doubling convergence check; both estimates
/// are attached so the caller can judge the scale of the disagreement.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double coarse, double fine)
      : Error(what + " (estimates " + std::to_string(coarse) + " vs " +
              std::to_string(fine) + ")"),
        coarse_(coarse),
        fine_(fine) {}
  double coarse_estimate() const noexcept { return coarse_; }
  double fine_estimate() const noexcept { return fine_; }

 private:
  double coarse_, fine_;
};

/// The trial-frequency equation has no root with Omega^2 > 0 in the
/// searched bracket.
class NoFixedPointError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace effaction
