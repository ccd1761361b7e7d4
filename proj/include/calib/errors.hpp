#pragma once

#include <stdexcept>
#include <string>

namespace calib {

enum class Errc {
  mixed_label_convention,
  invalid_label,
  invalid_score,
  empty_dataset,
  invalid_distribution,
  length_mismatch,
  empty_input,
  fit_dataset_mismatch,
  score_out_of_range,
  empty_grid,
  invalid_delta,
  invalid_arguments,
  rank_deficient,
  dimension_mismatch,
  invalid_config,
  empty_corpus,
  io_failure,
  empty_training_set,
  constant_scores,
  pre_loss_zero,
  invalid_cost,
};

const char* errc_name(Errc code);

/// Single exception type for the whole library; `code` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace calib
