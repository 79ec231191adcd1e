#pragma once

#include <stdexcept>
#include <string>

namespace curveflow {

// Base of every error raised by the library. The C API maps each subclass to
// a distinct status code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid construction parameters (nonpositive radius, odd N, bad alpha, ...).
class SpecError : public Error {
public:
  using Error::Error;
};

// min(h + h_thth) <= 0, or a curvature sample that is not strictly positive.
class ConvexityError : public Error {
public:
  using Error::Error;
};

// Frequency-one content of 1/kappa above tolerance: the curvature field does
// not close up into a curve.
class ResonanceError : public Error {
public:
  using Error::Error;
};

// The stable time step fell below the configured floor.
class StepFloorError : public Error {
public:
  StepFloorError(const std::string& what, double required_dt)
      : Error(what), required_dt_(required_dt) {}
  double required_dt() const noexcept { return required_dt_; }

private:
  double required_dt_;
};

// NaN or infinity where a sampled field must be finite.
class NonFiniteError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace curveflow
