#pragma once

#include <stdexcept>
#include <string>

namespace kmace {

/// Error categories raised by the toolkit. The CLI maps these onto exit
/// codes: usage errors -> 1, data errors -> 2, internal violations -> 3.
enum class errc {
  empty_data,
  non_finite_value,
  label_length_mismatch,
  not_symmetric,
  not_positive_semidefinite,
  too_many_clusters,
  range_invalid,
  non_positive_alpha,
  partition_dataset_mismatch,
  non_positive_sigma,
  gram_too_large,
  grid_too_small,
  unknown_scenario,
  covariance_not_psd,
  length_mismatch,
  empty_runs,
  degenerate_cluster_number,
  config_invalid,
  io_error,
  internal,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace kmace
