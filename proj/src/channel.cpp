#include "ricfb/channel.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "ricfb/seeded_rng.hpp"

namespace ricfb {

using nlohmann::json;

void NetworkConfig::validate() const {
  if (users < 2) throw ConfigError("NetworkConfig: need at least 2 users");
  if (static_cast<int>(tx_antennas.size()) != users ||
      static_cast<int>(rx_antennas.size()) != users ||
      static_cast<int>(rank_map.size()) != users)
    throw ConfigError("NetworkConfig: antenna/rank arrays must have K entries");
  for (int i = 0; i < users; ++i)
    if (tx_antennas[i] < 1 || rx_antennas[i] < 1)
      throw ConfigError("NetworkConfig: antenna counts must be >= 1");
  for (int j = 0; j < users; ++j) {
    if (static_cast<int>(rank_map[j].size()) != users)
      throw ConfigError("NetworkConfig: rank map must be K x K");
    for (int i = 0; i < users; ++i) {
      int cap = std::min(tx_antennas[i], rx_antennas[j]);
      if (rank_map[j][i] < 0 || rank_map[j][i] > cap)
        throw ConfigError("NetworkConfig: D[" + std::to_string(j) + "][" +
                          std::to_string(i) + "] exceeds min(M_i, N_j)");
    }
  }
}

void SymmetricConfig::validate() const {
  if (users < 2) throw ConfigError("SymmetricConfig: need at least 2 users");
  if (antennas < 1) throw ConfigError("SymmetricConfig: antennas must be >= 1");
  if (direct_rank < 0 || direct_rank > antennas || cross_rank < 0 ||
      cross_rank > antennas)
    throw ConfigError("SymmetricConfig: ranks must lie in [0, M]");
}

NetworkConfig SymmetricConfig::to_network() const {
  validate();
  NetworkConfig net;
  net.users = users;
  net.tx_antennas.assign(users, antennas);
  net.rx_antennas.assign(users, antennas);
  net.rank_map.assign(users, std::vector<int>(users, cross_rank));
  for (int i = 0; i < users; ++i) net.rank_map[i][i] = direct_rank;
  return net;
}

ChannelInstance::ChannelInstance(
    NetworkConfig config, std::uint64_t seed,
    std::vector<std::vector<std::vector<FactorPair>>> factors)
    : config_(std::move(config)), seed_(seed), factors_(std::move(factors)) {
  const int k = config_.users;
  h_.assign(k, std::vector<ComplexMatrix>(k));
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) {
      ComplexMatrix h = ComplexMatrix::Zero(config_.rx_antennas[j],
                                            config_.tx_antennas[i]);
      for (const auto& f : factors_[j][i])
        h += f.a * f.b.transpose();  // transpose, not adjoint
      h_[j][i] = std::move(h);
    }
}

ChannelInstance generate(const NetworkConfig& config, std::uint64_t seed,
                         const Tolerance& tol) {
  config.validate();
  const int k = config.users;
  std::vector<std::vector<std::vector<FactorPair>>> factors(
      k, std::vector<std::vector<FactorPair>>(k));
  SeededRng root(seed, {0x6368616e6e656cULL});  // channel factor stream
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) {
      const int d = config.rank_map[j][i];
      factors[j][i].reserve(d);
      for (int path = 0; path < d; ++path) {
        SeededRng stream = root.derive(static_cast<std::uint64_t>(j) << 40 |
                                       static_cast<std::uint64_t>(i) << 20 |
                                       static_cast<std::uint64_t>(path));
        FactorPair f;
        f.a = ComplexVector(config.rx_antennas[j]);
        f.b = ComplexVector(config.tx_antennas[i]);
        for (int r = 0; r < f.a.size(); ++r) f.a(r) = stream.cgauss(r);
        for (int r = 0; r < f.b.size(); ++r)
          f.b(r) = stream.cgauss(1000 + r);
        factors[j][i].push_back(std::move(f));
      }
    }
  ChannelInstance instance(config, seed, std::move(factors));
  RankReport report = validate(instance, tol);
  if (!report.all_pass())
    throw DegenerateDrawError(
        "generate: drawn instance failed rank validation at seed " +
        std::to_string(seed));
  return instance;
}

RankReport validate(const ChannelInstance& instance, const Tolerance& tol) {
  RankReport report;
  const auto& cfg = instance.config();
  for (int j = 0; j < cfg.users; ++j)
    for (int i = 0; i < cfg.users; ++i) {
      RankReport::Entry e;
      e.rx = j;
      e.tx = i;
      e.expected = cfg.rank_map[j][i];
      e.measured = rank_tol(instance.matrix(j, i), tol);
      e.pass = (e.expected == e.measured);
      report.entries.push_back(e);
    }
  return report;
}

namespace {

json vector_to_json(const ComplexVector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

ComplexVector vector_from_json(const json& arr) {
  ComplexVector v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = {arr[i][0].get<double>(),
                                       arr[i][1].get<double>()};
  return v;
}

}  // namespace

std::string to_json(const ChannelInstance& instance) {
  const auto& cfg = instance.config();
  json out;
  out["config"] = {{"users", cfg.users},
                   {"tx_antennas", cfg.tx_antennas},
                   {"rx_antennas", cfg.rx_antennas},
                   {"rank_map", cfg.rank_map}};
  out["seed"] = instance.seed();
  json factors = json::object();
  for (int j = 0; j < cfg.users; ++j)
    for (int i = 0; i < cfg.users; ++i) {
      json pairs = json::array();
      for (const auto& f : instance.factors(j, i))
        pairs.push_back({{"a", vector_to_json(f.a)}, {"b", vector_to_json(f.b)}});
      factors[std::to_string(j + 1) + "," + std::to_string(i + 1)] =
          std::move(pairs);
    }
  out["factors"] = std::move(factors);
  return out.dump(2);
}

ChannelInstance channel_from_json(const std::string& text) {
  json in = json::parse(text);
  NetworkConfig cfg;
  cfg.users = in["config"]["users"].get<int>();
  cfg.tx_antennas = in["config"]["tx_antennas"].get<std::vector<int>>();
  cfg.rx_antennas = in["config"]["rx_antennas"].get<std::vector<int>>();
  cfg.rank_map = in["config"]["rank_map"].get<std::vector<std::vector<int>>>();
  cfg.validate();
  std::vector<std::vector<std::vector<FactorPair>>> factors(
      cfg.users, std::vector<std::vector<FactorPair>>(cfg.users));
  for (int j = 0; j < cfg.users; ++j)
    for (int i = 0; i < cfg.users; ++i) {
      const json& pairs =
          in["factors"][std::to_string(j + 1) + "," + std::to_string(i + 1)];
      for (const auto& p : pairs)
        factors[j][i].push_back(
            {vector_from_json(p["a"]), vector_from_json(p["b"])});
    }
  return ChannelInstance(cfg, in["seed"].get<std::uint64_t>(),
                         std::move(factors));
}

void save_channel(const ChannelInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << to_json(instance) << "\n";
}

ChannelInstance load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return channel_from_json(text);
}

}  // namespace ricfb
