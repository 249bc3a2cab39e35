#pragma once

#include <stdexcept>
#include <string>

namespace pmin {

// Numeric values are mirrored by pmin_status in pmin.h; keep them in sync.
enum class ErrorCode : int {
  invalid_argument = 1,
  invalid_dimension = 2,
  invalid_plane = 3,
  singular_point = 4,
  axis_singularity = 5,
  outside_chart = 6,
  wrong_slice = 7,
  divergent_energy = 8,
  degenerate_perturbation = 9,
  non_integrable = 10,
  domain_error = 11,
  unknown_label = 12,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pmin
