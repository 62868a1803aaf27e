#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ricfb/linalg.hpp"

namespace ricfb {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A seed failed the post-generation rank validation; retry with the next one.
struct DegenerateDrawError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Problem instance parameters: K users, per-node antenna counts, and the
/// rank map D[j][i] of the channel from transmitter i to receiver j.
struct NetworkConfig {
  int users = 0;
  std::vector<int> tx_antennas;  // M_i
  std::vector<int> rx_antennas;  // N_j
  std::vector<std::vector<int>> rank_map;  // D[j][i], row = receiver

  void validate() const;
  int rank(int rx, int tx) const { return rank_map[rx][tx]; }
};

/// Symmetric shorthand: every node has M antennas, every direct link rank
/// direct_rank, every cross link rank cross_rank.
struct SymmetricConfig {
  int users = 0;
  int antennas = 0;     // M
  int direct_rank = 0;  // D_d
  int cross_rank = 0;   // D_c

  void validate() const;
  NetworkConfig to_network() const;
};

/// One rank-1 factor pair of a channel matrix: H += a * b^T (plain transpose).
struct FactorPair {
  ComplexVector a;  // N_j x 1
  ComplexVector b;  // M_i x 1
};

/// A drawn channel: factor vectors per (rx, tx) pair and the assembled
/// matrices. Regenerating with the same (config, seed) reproduces the
/// matrices bit-exactly.
class ChannelInstance {
 public:
  ChannelInstance(NetworkConfig config, std::uint64_t seed,
                  std::vector<std::vector<std::vector<FactorPair>>> factors);

  const NetworkConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  const ComplexMatrix& matrix(int rx, int tx) const { return h_[rx][tx]; }
  const std::vector<FactorPair>& factors(int rx, int tx) const {
    return factors_[rx][tx];
  }

  /// Replaces one assembled matrix (test hook for forced rank mismatches).
  void override_matrix(int rx, int tx, ComplexMatrix m) {
    h_[rx][tx] = std::move(m);
  }

 private:
  NetworkConfig config_;
  std::uint64_t seed_;
  std::vector<std::vector<std::vector<FactorPair>>> factors_;
  std::vector<std::vector<ComplexMatrix>> h_;
};

/// Draws factor vectors from the deterministic stream keyed by
/// (seed, rx, tx, path, coordinate), assembles H, and validates ranks.
ChannelInstance generate(const NetworkConfig& config, std::uint64_t seed,
                         const Tolerance& tol = {});

inline ChannelInstance generate(const SymmetricConfig& config,
                                std::uint64_t seed, const Tolerance& tol = {}) {
  return generate(config.to_network(), seed, tol);
}

struct RankReport {
  struct Entry {
    int rx = 0, tx = 0;
    int expected = 0, measured = 0;
    bool pass = false;
  };
  std::vector<Entry> entries;
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

RankReport validate(const ChannelInstance& instance, const Tolerance& tol = {});

/// Channel file schema: factors only, matrices re-assembled on load.
std::string to_json(const ChannelInstance& instance);
ChannelInstance channel_from_json(const std::string& text);
void save_channel(const ChannelInstance& instance, const std::string& path);
ChannelInstance load_channel(const std::string& path);

}  // namespace ricfb
