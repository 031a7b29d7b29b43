#pragma once

#include <string>

#include "kmace/dataset.hpp"

namespace kmace {

/// Load a dataset from CSV: header row required, comma delimiter, one row
/// per sample. A final column named "label" is read as ground truth.
/// Malformed cells raise errc::io_error with the offending line number.
Dataset load_dataset_csv(const std::string& path);

/// Write a dataset as CSV (features f0..f{d-1}, plus a label column when
/// ground truth is present). Values round-trip exactly.
void save_dataset_csv(const Dataset& data, const std::string& path);

/// Shortest exact decimal representation of a double (used by every CSV
/// writer so numeric output round-trips bit for bit).
std::string format_double(double value);

}  // namespace kmace
