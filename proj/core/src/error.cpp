#include "kmace/error.hpp"

namespace kmace {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::empty_data: return "EmptyData";
    case errc::non_finite_value: return "NonFiniteValue";
    case errc::label_length_mismatch: return "LabelLengthMismatch";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::not_positive_semidefinite: return "NotPositiveSemidefinite";
    case errc::too_many_clusters: return "TooManyClusters";
    case errc::range_invalid: return "RangeInvalid";
    case errc::non_positive_alpha: return "NonPositiveAlpha";
    case errc::partition_dataset_mismatch: return "PartitionDatasetMismatch";
    case errc::non_positive_sigma: return "NonPositiveSigma";
    case errc::gram_too_large: return "GramTooLarge";
    case errc::grid_too_small: return "GridTooSmall";
    case errc::unknown_scenario: return "UnknownScenario";
    case errc::covariance_not_psd: return "CovarianceNotPSD";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::empty_runs: return "EmptyRuns";
    case errc::degenerate_cluster_number: return "DegenerateClusterNumber";
    case errc::config_invalid: return "ConfigInvalid";
    case errc::io_error: return "IoError";
    case errc::internal: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace kmace
