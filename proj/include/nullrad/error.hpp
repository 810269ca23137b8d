#pragma once

#include <stdexcept>
#include <string>

namespace nullrad {

/// Failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
  invalid_grid,
  grid_mismatch,
  configuration,
  domain_too_small,
  blowup_detected,
  resolution,
  stiffness,
  out_of_range,
  out_of_chart,
  non_invertible,
  divergence,
  io,
};

const char *to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace nullrad
