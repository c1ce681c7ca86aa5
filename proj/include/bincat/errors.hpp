#pragma once

#include <stdexcept>
#include <string>

namespace bincat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model parameters outside lambda > 0, 0 < p < 1, or an unsupported topology.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// The requested quantity is only defined in another phase region.
class OutOfRegime : public Error {
 public:
  using Error::Error;
};

/// A bound or series was requested outside the parameter range where it holds.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// Offspring law with mean strictly above one (no finite extinction time).
class MeanAboveOne : public Error {
 public:
  using Error::Error;
};

/// No sign change of the comparison was found along the scanned line.
class NoCrossing : public Error {
 public:
  using Error::Error;
};

/// Bisection stalled inside a band where certified comparison cannot decide.
class IndeterminateBand : public Error {
 public:
  IndeterminateBand(const std::string& what, double center, double width)
      : Error(what), center_(center), width_(width) {}
  double center() const noexcept { return center_; }
  double width() const noexcept { return width_; }

 private:
  double center_;
  double width_;
};

/// Certified numerics contradicted a proven inequality. Always a bug.
class ImpossibleVerdict : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bincat
