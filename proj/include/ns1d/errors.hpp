/**
 * @file errors.hpp
 * @brief Exception types shared by every ns1d module.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ns1d {

/// Invalid run configuration (bad grid, missing field, inconsistent options).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function was evaluated outside its mathematical domain (negative density, NaN field, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Reading or writing an artifact failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The discrete density reached zero or below during a step.
class VacuumBreach : public std::runtime_error {
 public:
  VacuumBreach(std::size_t cell, double x, double time, double rho)
      : std::runtime_error("vacuum breach at cell " + std::to_string(cell) + " (x=" + std::to_string(x) +
                           ", t=" + std::to_string(time) + ", rho=" + std::to_string(rho) + ")"),
        cell_(cell),
        x_(x),
        time_(time),
        rho_(rho) {}

  std::size_t cell() const noexcept { return cell_; }
  double x() const noexcept { return x_; }
  double time() const noexcept { return time_; }
  double rho() const noexcept { return rho_; }

 private:
  std::size_t cell_;
  double x_;
  double time_;
  double rho_;
};

}  // namespace ns1d
