#pragma once

#include <span>
#include <string>

#include "kmace/ace.hpp"
#include "kmace/datagen.hpp"
#include "kmace/kernel.hpp"

namespace kmace {

/// SelectionReport as JSON (matrices row-major, parameters echoed for
/// replay). Output is byte-stable for identical inputs.
std::string selection_report_json(const SelectionReport& report,
                                  const std::string& method);

/// Kernel variant: the report at sigma_hat plus the sigma sweep.
std::string kernel_selection_json(const KernelSelection& selection,
                                  const std::string& method);

/// Two-column CSV (sigma, min_upper_z) for plotting the width sweep.
std::string sigma_sweep_csv(const SigmaSweep& sweep);

/// MixtureSpec sidecar written next to generated datasets.
std::string mixture_spec_json(const MixtureSpec& spec);

/// One aggregated benchmark row per method.
struct BenchRow {
  std::string method;
  double m_hat_mean = 0.0;
  double m_hat_std = 0.0;
  double accuracy = 0.0;
  double ari = 0.0;
  double nvi = 0.0;
};

std::string metrics_table_csv(std::span<const BenchRow> rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace kmace
