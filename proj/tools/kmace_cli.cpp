// Command line harness: dataset generation, CNC selection, benchmark
// sweeps, Monte-Carlo moment verification, and clustering agreement
// metrics. Every subcommand embeds its inputs and seeds in the output so
// results replay byte for byte.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kmace/ace.hpp"
#include "kmace/csv.hpp"
#include "kmace/datagen.hpp"
#include "kmace/error.hpp"
#include "kmace/kernel.hpp"
#include "kmace/mc_check.hpp"
#include "kmace/metrics.hpp"
#include "kmace/parallel.hpp"
#include "kmace/report_io.hpp"

namespace {

using namespace kmace;

int exit_code_for(errc code) {
  switch (code) {
    case errc::range_invalid:
    case errc::unknown_scenario:
    case errc::grid_too_small:
    case errc::non_positive_alpha:
    case errc::non_positive_sigma:
    case errc::degenerate_cluster_number:
    case errc::config_invalid:
      return 1;
    case errc::internal:
    case errc::not_positive_semidefinite:
      return 3;
    default:
      return 2;
  }
}

std::vector<double> parse_sigma_grid(const std::string& text) {
  // lo:hi:steps, linearly spaced.
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
  const auto first = text.find(':');
  const auto second = text.rfind(':');
  if (first == std::string::npos || second == first)
    fail(errc::config_invalid, "--sigma-grid expects lo:hi:steps");
  auto parse = [&](const std::string& s, auto& out) {
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || p != s.data() + s.size())
      fail(errc::config_invalid, "--sigma-grid: cannot parse '" + s + "'");
  };
  parse(text.substr(0, first), lo);
  parse(text.substr(first + 1, second - first - 1), hi);
  parse(text.substr(second + 1), steps);
  if (steps < 1 || lo <= 0.0 || hi < lo)
    fail(errc::config_invalid, "--sigma-grid needs 0 < lo <= hi and steps >= 1");
  std::vector<double> grid(static_cast<std::size_t>(steps));
  if (steps == 1) {
    grid[0] = lo;
  } else {
    for (int i = 0; i < steps; ++i)
      grid[static_cast<std::size_t>(i)] =
          lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
  }
  return grid;
}

std::string out_or(const std::string& out, const std::string& fallback) {
  return out.empty() ? fallback : out;
}

struct SelectArgs {
  std::string input;
  std::string method = "kmace";
  int m_min = 2;
  int m_max = 10;
  double alpha = 5.0;
  double beta = 5.0;
  std::uint64_t seed = 0;
  std::string sigma_grid;
  std::string out;
};

void run_select(const SelectArgs& args) {
  const Dataset data = load_dataset_csv(args.input);
  const RngSpec rng{args.seed, "select"};
  std::string json;
  if (args.method == "kernel-kmace") {
    std::vector<double> grid = args.sigma_grid.empty()
                                   ? default_sigma_grid(data)
                                   : parse_sigma_grid(args.sigma_grid);
    const KernelSelection sel = kernel_select_cnc(
        data, args.m_min, args.m_max, std::move(grid), args.alpha, args.beta, rng);
    json = kernel_selection_json(sel, args.method);
    write_text_file(out_or(args.out, "selection.json"), json);
    const std::string sweep_path = out_or(args.out, "selection.json") + ".sweep.csv";
    write_text_file(sweep_path, sigma_sweep_csv(sel.sweep));
    std::printf("m_hat=%d sigma_hat=%s -> %s\n", sel.report.m_hat,
                format_double(sel.sweep.sigma_hat).c_str(),
                out_or(args.out, "selection.json").c_str());
  } else if (args.method == "kmace") {
    const SelectionReport report =
        select_cnc(data, args.m_min, args.m_max, args.alpha, args.beta, rng);
    json = selection_report_json(report, args.method);
    write_text_file(out_or(args.out, "selection.json"), json);
    std::printf("m_hat=%d -> %s\n", report.m_hat,
                out_or(args.out, "selection.json").c_str());
  } else {
    fail(errc::config_invalid, "--method must be kmace or kernel-kmace");
  }
}

struct BenchArgs {
  std::string scenario_name;
  std::string method = "kmace";
  int runs = 100;
  int m_min = 2;
  int m_max = 15;
  double alpha = 5.0;
  double beta = 5.0;
  std::uint64_t seed = 0;
  std::string sigma_grid;
  std::string out;
};

void run_bench(const BenchArgs& args) {
  if (args.runs < 1) fail(errc::config_invalid, "--runs must be >= 1");
  const int true_m = scenario(args.scenario_name, RngSpec{0, ""}).cluster_count();
  std::vector<int> m_hats(static_cast<std::size_t>(args.runs));
  std::vector<double> aris(static_cast<std::size_t>(args.runs));
  std::vector<double> nvis(static_cast<std::size_t>(args.runs));

  parallel_for(static_cast<std::size_t>(args.runs), [&](std::size_t i) {
    // Run i derives its seed as base + i for reproducible replications.
    const RngSpec run_rng{args.seed + i, "bench/" + args.scenario_name};
    const Dataset data = sample_mixture(scenario(args.scenario_name, run_rng));
    std::vector<int> assign;
    int m_hat = 0;
    if (args.method == "kernel-kmace") {
      std::vector<double> grid = args.sigma_grid.empty()
                                     ? default_sigma_grid(data)
                                     : parse_sigma_grid(args.sigma_grid);
      const KernelSelection sel =
          kernel_select_cnc(data, args.m_min, args.m_max, std::move(grid),
                            args.alpha, args.beta, run_rng.derive("select"));
      m_hat = sel.report.m_hat;
      assign = sel.report.chosen_partition.assign;
    } else if (args.method == "kmace") {
      const SelectionReport report =
          select_cnc(data, args.m_min, args.m_max, args.alpha, args.beta,
                     run_rng.derive("select"));
      m_hat = report.m_hat;
      assign = report.chosen_partition.assign;
    } else {
      fail(errc::config_invalid, "--method must be kmace or kernel-kmace");
    }
    m_hats[i] = m_hat;
    aris[i] = adjusted_rand_index(*data.labels, assign);
    nvis[i] = normalized_variation_information(*data.labels, assign);
  });

  const CncAccuracy acc = cnc_accuracy(m_hats, true_m);
  BenchRow row;
  row.method = args.method;
  row.m_hat_mean = acc.mean;
  row.m_hat_std = acc.stddev;
  row.accuracy = acc.accuracy_pct;
  for (double v : aris) row.ari += v;
  for (double v : nvis) row.nvi += v;
  row.ari /= args.runs;
  row.nvi /= args.runs;
  std::vector<BenchRow> rows{row};
  const std::string csv = metrics_table_csv(rows);
  write_text_file(out_or(args.out, "bench.csv"), csv);
  std::printf("%s", csv.c_str());
}

struct McArgs {
  std::string config_path;
  int random_configs = 20;
  long draws = 100000;
  double perturb_pct = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

MomentCheckConfig parse_mc_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(errc::config_invalid, std::string("config parse: ") + e.what());
  }
  MomentCheckConfig config;
  try {
    config.n = j.at("n").get<int>();
    config.d = j.at("d").get<int>();
    config.draws = j.value("draws", 100000L);
    config.rng = RngSpec{j.value("seed", 0ULL), "mc-config"};
    const auto& centers = j.at("centers");
    config.centers = Matrix(static_cast<std::size_t>(config.n),
                            static_cast<std::size_t>(config.d));
    for (int i = 0; i < config.n; ++i)
      for (int f = 0; f < config.d; ++f)
        config.centers(static_cast<std::size_t>(i), static_cast<std::size_t>(f)) =
            centers.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(f)).get<double>();
    for (const auto& s : j.at("spectra"))
      config.spectra.push_back(s.get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    fail(errc::config_invalid, std::string("config fields: ") + e.what());
  }
  return config;
}

void run_mc_oracle(const McArgs& args) {
  std::vector<MomentCheckConfig> configs;
  if (!args.config_path.empty()) {
    configs.push_back(parse_mc_config(args.config_path));
  } else {
    for (int i = 0; i < args.random_configs; ++i)
      configs.push_back(
          random_moment_config(i, args.draws, RngSpec{args.seed, "mc-oracle"}));
  }
  for (auto& c : configs) c.perturb_factor = 1.0 + args.perturb_pct / 100.0;

  std::vector<MomentCheckResult> results(configs.size());
  parallel_for(configs.size(), [&](std::size_t i) {
    results[i] = run_moment_check(configs[i]);
  });
  const std::string json = moment_check_report_json(results);
  write_text_file(out_or(args.out, "mc_oracle.json"), json);
  int passed = 0;
  for (const auto& r : results) passed += r.pass() ? 1 : 0;
  std::printf("%d/%zu configurations PASS\n", passed, results.size());
  if (passed != static_cast<int>(results.size()))
    fail(errc::config_invalid, "closed forms rejected by the simulation");
}

std::vector<int> load_labels(const std::string& path) {
  const Dataset data = load_dataset_csv(path);
  if (data.labels) return *data.labels;
  if (data.dim() == 1) {
    std::vector<int> labels(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
      labels[i] = static_cast<int>(data.samples(i, 0));
    return labels;
  }
  fail(errc::config_invalid,
       path + ": expected a 'label' column or a single-column file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"K-means / kernel K-means clustering with ACE-based selection "
               "of the number of clusters"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset CSV");
  std::string gen_scenario;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "dataset.csv";
  gen->add_option("scenario", gen_scenario,
                  "scenario name (s1-s4, u1-u6)")->required();
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("-o,--out", gen_out, "output CSV path");

  // select
  auto* sel = app.add_subcommand("select", "Estimate the number of clusters");
  SelectArgs sel_args;
  sel->add_option("input", sel_args.input, "dataset CSV")->required();
  sel->add_option("--method", sel_args.method, "kmace | kernel-kmace");
  sel->add_option("--m-min", sel_args.m_min, "smallest cluster count");
  sel->add_option("--m-max", sel_args.m_max, "largest cluster count");
  sel->add_option("--alpha", sel_args.alpha, "validation-band multiplier");
  sel->add_option("--beta", sel_args.beta, "confidence-band multiplier");
  sel->add_option("--seed", sel_args.seed, "rng seed");
  sel->add_option("--sigma-grid", sel_args.sigma_grid,
                  "kernel widths lo:hi:steps (kernel method)");
  sel->add_option("-o,--out", sel_args.out, "output JSON path");

  // bench
  auto* bench = app.add_subcommand("bench", "Repeated-run scenario benchmark");
  BenchArgs bench_args;
  bench->add_option("scenario", bench_args.scenario_name, "scenario name")->required();
  bench->add_option("--method", bench_args.method, "kmace | kernel-kmace");
  bench->add_option("--runs", bench_args.runs, "number of seeded runs");
  bench->add_option("--m-min", bench_args.m_min, "smallest cluster count");
  bench->add_option("--m-max", bench_args.m_max, "largest cluster count");
  bench->add_option("--alpha", bench_args.alpha, "validation-band multiplier");
  bench->add_option("--beta", bench_args.beta, "confidence-band multiplier");
  bench->add_option("--seed", bench_args.seed, "base seed; run i uses seed+i");
  bench->add_option("--sigma-grid", bench_args.sigma_grid, "kernel widths lo:hi:steps");
  bench->add_option("-o,--out", bench_args.out, "output CSV path");

  // mc-oracle
  auto* mc = app.add_subcommand(
      "mc-oracle", "Verify moment closed forms against simulation");
  McArgs mc_args;
  mc->add_option("--config", mc_args.config_path, "JSON moment-check config");
  mc->add_option("--configs", mc_args.random_configs, "randomized config count");
  mc->add_option("--draws", mc_args.draws, "simulation draws per config");
  mc->add_option("--perturb", mc_args.perturb_pct,
                 "perturb closed forms by this percent (self-test)");
  mc->add_option("--seed", mc_args.seed, "rng seed");
  mc->add_option("-o,--out", mc_args.out, "output JSON path");

  // evaluate
  auto* eval = app.add_subcommand("evaluate",
                                  "Agreement metrics between two label CSVs");
  std::string eval_truth;
  std::string eval_pred;
  std::string eval_format = "json";
  std::string eval_out;
  eval->add_option("truth", eval_truth, "reference labels CSV")->required();
  eval->add_option("predicted", eval_pred, "candidate labels CSV")->required();
  eval->add_option("--format", eval_format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  eval->add_option("-o,--out", eval_out, "output path (stdout when empty)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      const MixtureSpec spec =
          scenario(gen_scenario, RngSpec{gen_seed, "generate"});
      const Dataset data = sample_mixture(spec);
      save_dataset_csv(data, gen_out);
      write_text_file(gen_out + ".spec.json", mixture_spec_json(spec));
      std::printf("%zu samples, %d clusters -> %s\n", data.size(),
                  spec.cluster_count(), gen_out.c_str());
    } else if (*sel) {
      run_select(sel_args);
    } else if (*bench) {
      run_bench(bench_args);
    } else if (*mc) {
      run_mc_oracle(mc_args);
    } else if (*eval) {
      const auto truth = load_labels(eval_truth);
      const auto predicted = load_labels(eval_pred);
      const double ari = adjusted_rand_index(truth, predicted);
      const double nvi = normalized_variation_information(truth, predicted);
      std::string text;
      if (eval_format == "csv") {
        text = "ari,nvi\n" + format_double(ari) + "," + format_double(nvi) + "\n";
      } else {
        text = "{\n  \"ari\": " + format_double(ari) +
               ",\n  \"nvi\": " + format_double(nvi) + "\n}\n";
      }
      if (eval_out.empty()) {
        std::printf("%s", text.c_str());
      } else {
        write_text_file(eval_out, text);
      }
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
  return 0;
}
