#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rii {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong lengths, non-finite entries, out-of-range indices.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An error tied to a position in a sequence (a matrix row, a chain index).
class IndexedError : public Error {
 public:
  IndexedError(const std::string& what, std::size_t index)
      : Error(what + " at index " + std::to_string(index)), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A super- or subdiagonal entry of B is zero.
class ZeroOffdiagonal : public IndexedError {
 public:
  explicit ZeroOffdiagonal(std::size_t index)
      : IndexedError("ZeroOffdiagonal: B has a zero off-diagonal entry", index) {}
};

/// A leading principal minor of B vanishes (|g_n| below the singular threshold).
class SingularLeadingMinor : public IndexedError {
 public:
  explicit SingularLeadingMinor(std::size_t index)
      : IndexedError("SingularLeadingMinor: leading principal minor ratio of B is zero", index) {}
};

/// The origin shift coincides with one of the kappa parameters.
class InvalidShift : public IndexedError {
 public:
  InvalidShift(double shift, std::size_t index)
      : IndexedError("InvalidShift: shift " + std::to_string(shift) + " equals kappa", index),
        shift_(shift) {}

  double shift() const noexcept { return shift_; }

 private:
  double shift_;
};

/// A divisor in the chain recurrences vanished.
class Breakdown : public IndexedError {
 public:
  Breakdown(const std::string& quantity, std::size_t index)
      : IndexedError("Breakdown: " + quantity + " vanished", index), quantity_(quantity) {}

  const std::string& quantity() const noexcept { return quantity_; }

 private:
  std::string quantity_;
};

/// Text input could not be parsed; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The root search window does not contain all zeros of the characteristic polynomial.
class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

/// phi'_N vanishes at a supposed simple root.
class DegenerateRoot : public IndexedError {
 public:
  explicit DegenerateRoot(std::size_t index)
      : IndexedError("DegenerateRoot: derivative of the characteristic polynomial vanishes", index) {}
};

/// A support point coincides with a kappa or lambda pole of the moment functional.
class PoleHit : public IndexedError {
 public:
  explicit PoleHit(std::size_t index)
      : IndexedError("PoleHit: support point coincides with a pole", index) {}
};

/// A Hankel determinant in a closed-form denominator vanished.
class DegenerateTau : public Error {
 public:
  using Error::Error;
};

}  // namespace rii
