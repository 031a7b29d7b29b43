#include "kmace/report_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kmace/csv.hpp"
#include "kmace/error.hpp"

namespace kmace {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json partition_to_json(const Partition& p) {
  return json{{"m", p.m},
              {"assign", p.assign},
              {"centers", matrix_to_json(p.centers)},
              {"sizes", p.sizes},
              {"compactness_per_cluster", p.compactness_per_cluster},
              {"compactness_total", p.compactness_total}};
}

json report_to_json(const SelectionReport& r, const std::string& method) {
  json out{{"method", method},
           {"m_range", {r.m_min, r.m_max}},
           {"z_upper_surface", matrix_to_json(r.z_upper_surface)},
           {"m_hat_of_k", r.m_hat_of_k},
           {"discrepancy", r.discrepancy},
           {"k_star", r.k_star},
           {"m_hat", r.m_hat},
           {"chosen_partition", partition_to_json(r.chosen_partition)},
           {"params", json{{"seed", r.rng.seed},
                           {"stream", r.rng.stream},
                           {"alpha", r.alpha},
                           {"beta", r.beta},
                           {"delta_max", r.delta_max}}}};
  if (r.sigma > 0.0) out["sigma"] = r.sigma;
  return out;
}

json sweep_to_json(const SigmaSweep& s) {
  return json{{"grid", s.grid},
              {"min_upper_z", s.min_upper_z},
              {"m_hat_per_sigma", s.m_hat_per_sigma},
              {"score", s.score},
              {"sigma_hat", s.sigma_hat},
              {"sigma_hat_index", s.sigma_hat_index},
              {"peak_index", s.peak_index},
              {"fallback", s.fallback}};
}

}  // namespace

std::string selection_report_json(const SelectionReport& report,
                                  const std::string& method) {
  return report_to_json(report, method).dump(2) + "\n";
}

std::string kernel_selection_json(const KernelSelection& selection,
                                  const std::string& method) {
  json out = report_to_json(selection.report, method);
  out["sigma_sweep"] = sweep_to_json(selection.sweep);
  return out.dump(2) + "\n";
}

std::string sigma_sweep_csv(const SigmaSweep& sweep) {
  std::ostringstream out;
  out << "sigma,min_upper_z\n";
  for (std::size_t i = 0; i < sweep.grid.size(); ++i)
    out << format_double(sweep.grid[i]) << ','
        << format_double(sweep.min_upper_z[i]) << '\n';
  return out.str();
}

std::string mixture_spec_json(const MixtureSpec& spec) {
  json covs = json::array();
  for (const Matrix& cov : spec.covariances) covs.push_back(matrix_to_json(cov));
  const json out{{"name", spec.name},
                 {"centers", matrix_to_json(spec.centers)},
                 {"covariances", covs},
                 {"counts", spec.counts},
                 {"seed", spec.rng.seed},
                 {"stream", spec.rng.stream}};
  return out.dump(2) + "\n";
}

std::string metrics_table_csv(std::span<const BenchRow> rows) {
  std::ostringstream out;
  out << "method,m_hat_mean,m_hat_std,accuracy,ari,nvi\n";
  for (const auto& r : rows)
    out << r.method << ',' << format_double(r.m_hat_mean) << ','
        << format_double(r.m_hat_std) << ',' << format_double(r.accuracy) << ','
        << format_double(r.ari) << ',' << format_double(r.nvi) << '\n';
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(errc::io_error, "failed writing '" + path + "'");
}

}  // namespace kmace
