#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace kmace {

/// Seed plus stream label. The same (seed, stream) pair reproduces the
/// identical draw sequence bit for bit; derived specs give independent
/// streams for sub-tasks (restarts, runs, sweeps) without seed bookkeeping.
struct RngSpec {
  std::uint64_t seed = 0;
  std::string stream;

  RngSpec derive(std::string_view label) const {
    RngSpec out;
    out.seed = seed;
    out.stream = stream.empty() ? std::string(label)
                                : stream + "/" + std::string(label);
    return out;
  }
};

/// Deterministic random engine. The mt19937_64 output sequence is pinned by
/// the standard; the uniform/normal transforms are implemented here because
/// std::*_distribution sequences are not portable across standard libraries.
class Rng {
 public:
  explicit Rng(const RngSpec& spec);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform index in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Standard normal draw (Box-Muller, cached pair).
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// FNV-1a hash of a label, used to mix stream names into seeds.
std::uint64_t hash_label(std::string_view label) noexcept;

}  // namespace kmace
