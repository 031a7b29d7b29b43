#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "kmace/csv.hpp"
#include "kmace/dataset.hpp"
#include "kmace/error.hpp"
#include "kmace/rng.hpp"

using namespace kmace;

TEST_CASE("validate_dataset passes finite unlabeled data through") {
  Matrix raw{{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
  const Dataset data = validate_dataset(raw);
  CHECK(data.size() == 3);
  CHECK(data.dim() == 2);
  CHECK(!data.labels.has_value());
  CHECK(data.samples == raw);
}

TEST_CASE("validate_dataset rejects non-finite values") {
  Matrix raw{{1.0, std::numeric_limits<double>::quiet_NaN()}};
  CHECK_THROWS_WITH_AS(validate_dataset(raw), doctest::Contains("NonFiniteValue"),
                       Error);
  Matrix inf{{std::numeric_limits<double>::infinity()}};
  CHECK_THROWS_AS(validate_dataset(inf), Error);
}

TEST_CASE("validate_dataset remaps labels to contiguous ids") {
  Matrix raw{{0.0}, {1.0}, {2.0}};
  const Dataset data = validate_dataset(raw, std::vector<int>{5, 5, 9});
  REQUIRE(data.labels.has_value());
  CHECK(*data.labels == std::vector<int>{0, 0, 1});
  CHECK(data.true_cluster_count() == 2);
}

TEST_CASE("validate_dataset errors") {
  CHECK_THROWS_AS(validate_dataset(Matrix{}), Error);
  Matrix raw{{1.0}, {2.0}};
  CHECK_THROWS_WITH_AS(validate_dataset(raw, std::vector<int>{0}),
                       doctest::Contains("LabelLengthMismatch"), Error);
}

TEST_CASE("rng reproduces the identical sequence per (seed, stream)") {
  RngSpec spec{42, "pipeline"};
  Rng a(spec);
  Rng b(spec);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng c(spec);
  Rng d(spec.derive("other"));
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) all_equal &= c.next_u64() == d.next_u64();
  CHECK(!all_equal);
}

TEST_CASE("rng normal draws have sane moments") {
  Rng rng(RngSpec{7, "normal"});
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("csv round trip preserves samples and labels") {
  Matrix raw{{1.5, -2.25}, {0.0, 1e-17}, {3.0, 4.0}};
  const Dataset data = validate_dataset(raw, std::vector<int>{0, 1, 0}, "t");
  const std::string path = "csv_roundtrip_test.csv";
  save_dataset_csv(data, path);
  const Dataset loaded = load_dataset_csv(path);
  CHECK(loaded.samples == data.samples);
  REQUIRE(loaded.labels.has_value());
  CHECK(*loaded.labels == *data.labels);
  std::remove(path.c_str());
}

TEST_CASE("csv loader reports the offending line") {
  const std::string path = "csv_badline_test.csv";
  {
    std::ofstream out(path);
    out << "f0,f1\n1.0,2.0\nnope,3.0\n";
  }
  CHECK_THROWS_WITH_AS(load_dataset_csv(path), doctest::Contains(":3"), Error);
  std::remove(path.c_str());
  CHECK_THROWS_WITH_AS(load_dataset_csv("does_not_exist.csv"),
                       doctest::Contains("IoError"), Error);
}
