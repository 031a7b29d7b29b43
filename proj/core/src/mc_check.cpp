#include "kmace/mc_check.hpp"

#include <cmath>
#include <sstream>

#include "kmace/csv.hpp"
#include "kmace/error.hpp"

namespace kmace {

namespace {

void validate(const MomentCheckConfig& c) {
  if (c.n < 1 || c.d < 1) fail(errc::config_invalid, "need n >= 1 and d >= 1");
  if (c.draws < 2) fail(errc::config_invalid, "need at least 2 draws");
  if (c.centers.rows() != static_cast<std::size_t>(c.n) ||
      c.centers.cols() != static_cast<std::size_t>(c.d))
    fail(errc::config_invalid, "centers must be n x d");
  if (c.spectra.size() != static_cast<std::size_t>(c.n))
    fail(errc::config_invalid, "need one spectrum per sample");
  for (const auto& s : c.spectra) {
    if (s.size() != static_cast<std::size_t>(c.d))
      fail(errc::config_invalid, "each spectrum must have d eigenvalues");
    for (double v : s)
      if (!(v >= 0.0)) fail(errc::config_invalid, "eigenvalues must be >= 0");
  }
}

struct Accumulator {
  double sum = 0.0;
  std::vector<double> values;

  void reserve(long n) { values.reserve(static_cast<std::size_t>(n)); }
  void add(double v) {
    sum += v;
    values.push_back(v);
  }

  // Sample mean/variance plus the standard errors of both estimators.
  void summarize(double& mean, double& var, double& se_mean, double& se_var) const {
    const double m = static_cast<double>(values.size());
    mean = sum / m;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
      const double d = v - mean;
      const double d2 = d * d;
      m2 += d2;
      m4 += d2 * d2;
    }
    var = m2 / (m - 1.0);
    m4 /= m;
    se_mean = std::sqrt(var / m);
    const double var_of_var = (m4 - var * var * (m - 3.0) / (m - 1.0)) / m;
    se_var = std::sqrt(std::max(0.0, var_of_var));
  }
};

}  // namespace

MomentCheckResult run_moment_check(const MomentCheckConfig& config) {
  validate(config);
  const int n = config.n;
  const int d = config.d;

  // Per-sample scatter deviations and the exact squared bias term
  // ||Delta||^2 = sum_i ||c_i - c_mean||^2.
  std::vector<double> devs(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i)
    for (int f = 0; f < d; ++f)
      devs[static_cast<std::size_t>(i) * d + f] =
          std::sqrt(config.spectra[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)]);

  std::vector<double> center_mean(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < n; ++i)
    for (int f = 0; f < d; ++f)
      center_mean[static_cast<std::size_t>(f)] +=
          config.centers(static_cast<std::size_t>(i), static_cast<std::size_t>(f));
  for (double& v : center_mean) v /= n;

  MomentCheckResult out;
  for (int i = 0; i < n; ++i)
    for (int f = 0; f < d; ++f) {
      const double diff = config.centers(static_cast<std::size_t>(i),
                                         static_cast<std::size_t>(f)) -
                          center_mean[static_cast<std::size_t>(f)];
      out.true_delta_sq += diff * diff;
    }

  // Closed forms under test. The config's spectra are diagonal covariances
  // in one shared coordinate basis, so the cross-trace sum dots them
  // coordinate-aligned (sorting would overstate tr(S_i S_k) whenever the
  // per-sample spectra differ).
  ClusterMoments moments;
  moments.n = n;
  moments.d = d;
  {
    std::vector<double> summed(static_cast<std::size_t>(d), 0.0);
    double tr_sq_total = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto& ev = config.spectra[static_cast<std::size_t>(i)];
      double tr = 0.0;
      double tr_sq = 0.0;
      for (int f = 0; f < d; ++f) {
        tr += ev[static_cast<std::size_t>(f)];
        tr_sq += ev[static_cast<std::size_t>(f)] * ev[static_cast<std::size_t>(f)];
        summed[static_cast<std::size_t>(f)] += ev[static_cast<std::size_t>(f)];
      }
      moments.per_sample_trace.push_back(tr);
      moments.per_sample_trace_sq.push_back(tr_sq);
      tr_sq_total += tr_sq;
    }
    double norm_sq = 0.0;
    for (double v : summed) norm_sq += v * v;
    moments.cross_trace_sum = std::max(0.0, norm_sq - tr_sq_total);
  }
  out.closed_z = z_moments(moments, out.true_delta_sq);
  out.closed_y = y_moments(moments, out.true_delta_sq);
  out.closed_z.mean *= config.perturb_factor;
  out.closed_z.variance *= config.perturb_factor;
  out.closed_y.mean *= config.perturb_factor;
  out.closed_y.variance *= config.perturb_factor;

  // Brute force from the raw definitions.
  Rng rng(config.rng.derive("draws"));
  Accumulator acc_z;
  Accumulator acc_y;
  acc_z.reserve(config.draws);
  acc_y.reserve(config.draws);
  std::vector<double> x(static_cast<std::size_t>(n) * d);
  std::vector<double> x_mean(static_cast<std::size_t>(d));
  for (long rep = 0; rep < config.draws; ++rep) {
    for (int f = 0; f < d; ++f) x_mean[static_cast<std::size_t>(f)] = 0.0;
    for (int i = 0; i < n; ++i)
      for (int f = 0; f < d; ++f) {
        const std::size_t idx = static_cast<std::size_t>(i) * d + f;
        x[idx] = config.centers(static_cast<std::size_t>(i),
                                static_cast<std::size_t>(f)) +
                 devs[idx] * rng.normal();
        x_mean[static_cast<std::size_t>(f)] += x[idx];
      }
    for (int f = 0; f < d; ++f) x_mean[static_cast<std::size_t>(f)] /= n;

    double z = 0.0;
    double y = 0.0;
    for (int i = 0; i < n; ++i)
      for (int f = 0; f < d; ++f) {
        const std::size_t idx = static_cast<std::size_t>(i) * d + f;
        const double zc = config.centers(static_cast<std::size_t>(i),
                                         static_cast<std::size_t>(f)) -
                          x_mean[static_cast<std::size_t>(f)];
        const double yc = x[idx] - x_mean[static_cast<std::size_t>(f)];
        z += zc * zc;
        y += yc * yc;
      }
    acc_z.add(z);
    acc_y.add(y);
  }

  acc_z.summarize(out.mc_mean_z, out.mc_var_z, out.se_mean_z, out.se_var_z);
  acc_y.summarize(out.mc_mean_y, out.mc_var_y, out.se_mean_y, out.se_var_y);

  auto within = [](double closed, double est, double se) {
    return std::abs(closed - est) <= 3.0 * se;
  };
  out.pass_mean_z = within(out.closed_z.mean, out.mc_mean_z, out.se_mean_z);
  out.pass_var_z = within(out.closed_z.variance, out.mc_var_z, out.se_var_z);
  out.pass_mean_y = within(out.closed_y.mean, out.mc_mean_y, out.se_mean_y);
  out.pass_var_y = within(out.closed_y.variance, out.mc_var_y, out.se_var_y);
  return out;
}

MomentCheckConfig random_moment_config(int index, long draws, const RngSpec& rng) {
  Rng gen(rng.derive("config" + std::to_string(index)));
  MomentCheckConfig config;
  config.draws = draws;
  config.rng = rng.derive("mc" + std::to_string(index));
  config.n = 3 + static_cast<int>(gen.uniform_index(38));
  config.d = 1 + static_cast<int>(gen.uniform_index(6));
  config.centers = Matrix(static_cast<std::size_t>(config.n),
                          static_cast<std::size_t>(config.d), 0.0);
  config.spectra.assign(static_cast<std::size_t>(config.n),
                        std::vector<double>(static_cast<std::size_t>(config.d)));
  if (index % 2 == 0) {
    // Common center, per-sample diagonal spectra (zero bias term).
    for (auto& s : config.spectra)
      for (double& v : s) v = 0.1 + 2.9 * gen.uniform();
  } else {
    // Distinct centers, one shared isotropic spectrum.
    const double var = 0.2 + 1.8 * gen.uniform();
    for (auto& s : config.spectra)
      for (double& v : s) v = var;
    for (int i = 0; i < config.n; ++i)
      for (int f = 0; f < config.d; ++f)
        config.centers(static_cast<std::size_t>(i), static_cast<std::size_t>(f)) =
            2.0 * gen.normal();
  }
  return config;
}

std::string moment_check_report_json(std::span<const MomentCheckResult> results) {
  std::ostringstream out;
  out << "{\n  \"configs\": [\n";
  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    all = all && r.pass();
    out << "    {\"index\": " << i << ", \"pass\": " << (r.pass() ? "true" : "false")
        << ", \"delta_sq\": " << format_double(r.true_delta_sq)
        << ",\n     \"z\": {\"closed_mean\": " << format_double(r.closed_z.mean)
        << ", \"mc_mean\": " << format_double(r.mc_mean_z)
        << ", \"closed_var\": " << format_double(r.closed_z.variance)
        << ", \"mc_var\": " << format_double(r.mc_var_z) << "},\n     \"y\": {\"closed_mean\": "
        << format_double(r.closed_y.mean) << ", \"mc_mean\": " << format_double(r.mc_mean_y)
        << ", \"closed_var\": " << format_double(r.closed_y.variance)
        << ", \"mc_var\": " << format_double(r.mc_var_y) << "}}";
    out << (i + 1 < results.size() ? ",\n" : "\n");
  }
  out << "  ],\n  \"pass\": " << (all ? "true" : "false") << "\n}\n";
  return out.str();
}

}  // namespace kmace
