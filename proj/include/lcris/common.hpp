#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcris {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class DegenerateChannel : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation is used outside the regime where its result is valid.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// SNR targets that even the co-phasing configuration cannot reach.
class InfeasibleTargets : public Error {
 public:
  InfeasibleTargets(const std::string& what, std::vector<double> max_snr)
      : Error(what), max_achievable_snr(std::move(max_snr)) {}
  std::vector<double> max_achievable_snr;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field_path, const std::string& message)
      : Error(field_path.empty() ? message : field_path + ": " + message),
        field(std::move(field_path)) {}
  std::string field;
};

// ---------------------------------------------------------------------------
// Value types
// ---------------------------------------------------------------------------

/// Dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Per-unit-cell phase shifts in radians, one entry per RIS element.
struct PhaseVector {
  std::vector<double> values;

  PhaseVector() = default;
  explicit PhaseVector(std::vector<double> v) : values(std::move(v)) {}
  PhaseVector(std::size_t n, double fill) : values(n, fill) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> view() const { return values; }

  bool operator==(const PhaseVector&) const = default;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace lcris
