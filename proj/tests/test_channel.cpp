#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "ricfb/channel.hpp"

using namespace ricfb;

TEST_CASE("symmetric example setup: four 2x2 matrices, each rank 1") {
  SymmetricConfig cfg{2, 2, 1, 1};
  ChannelInstance inst = generate(cfg, 42);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      CHECK(inst.matrix(j, i).rows() == 2);
      CHECK(inst.matrix(j, i).cols() == 2);
      CHECK(rank_tol(inst.matrix(j, i)) == 1);
    }
}

TEST_CASE("zero-rank pair gives the zero matrix") {
  NetworkConfig cfg;
  cfg.users = 2;
  cfg.tx_antennas = {2, 3};
  cfg.rx_antennas = {2, 2};
  cfg.rank_map = {{2, 0}, {1, 2}};
  ChannelInstance inst = generate(cfg, 7);
  CHECK(inst.matrix(0, 1).norm() == 0.0);
  CHECK(rank_tol(inst.matrix(0, 0)) == 2);
  CHECK(rank_tol(inst.matrix(1, 0)) == 1);
}

TEST_CASE("generation is bit-exact in (config, seed)") {
  SymmetricConfig cfg{3, 4, 2, 3};
  ChannelInstance a = generate(cfg, 123);
  ChannelInstance b = generate(cfg, 123);
  ChannelInstance c = generate(cfg, 124);
  bool identical = true, differs = false;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      if (a.matrix(j, i) != b.matrix(j, i)) identical = false;
      if (a.matrix(j, i) != c.matrix(j, i)) differs = true;
    }
  CHECK(identical);
  CHECK(differs);
}

TEST_CASE("invalid configurations are rejected") {
  NetworkConfig cfg;
  cfg.users = 2;
  cfg.tx_antennas = {2, 2};
  cfg.rx_antennas = {2, 2};
  cfg.rank_map = {{3, 1}, {1, 1}};  // D > min(M, N)
  CHECK_THROWS_AS(generate(cfg, 0), ConfigError);
}

TEST_CASE("validate reports measured ranks and forced mismatches") {
  SymmetricConfig cfg{2, 3, 2, 1};
  ChannelInstance inst = generate(cfg, 5);
  RankReport ok = validate(inst);
  CHECK(ok.all_pass());
  CHECK(ok.entries.size() == 4);

  inst.override_matrix(0, 1, ComplexMatrix::Zero(3, 3));
  RankReport bad = validate(inst);
  CHECK_FALSE(bad.all_pass());
  int failures = 0;
  for (const auto& e : bad.entries)
    if (!e.pass) {
      ++failures;
      CHECK(e.rx == 0);
      CHECK(e.tx == 1);
      CHECK(e.measured == 0);
    }
  CHECK(failures == 1);
}

TEST_CASE("monte carlo: 100 seeds all validate") {
  SymmetricConfig cfg{3, 5, 1, 5};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ChannelInstance inst = generate(cfg, seed);
    CHECK(validate(inst).all_pass());
  }
}

TEST_CASE("channel file round-trip reassembles identical matrices") {
  NetworkConfig cfg;
  cfg.users = 2;
  cfg.tx_antennas = {3, 2};
  cfg.rx_antennas = {2, 4};
  cfg.rank_map = {{1, 2}, {2, 0}};
  ChannelInstance inst = generate(cfg, 99);
  std::string path = (std::filesystem::temp_directory_path() /
                      "ricfb_channel_roundtrip.json").string();
  save_channel(inst, path);
  ChannelInstance back = load_channel(path);
  CHECK(back.seed() == inst.seed());
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
      CHECK(back.matrix(j, i) == inst.matrix(j, i));
  std::filesystem::remove(path);
}
