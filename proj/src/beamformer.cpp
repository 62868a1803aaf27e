#include "ricfb/beamformer.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "ricfb/polytope.hpp"
#include "ricfb/seeded_rng.hpp"

namespace ricfb {

namespace {

constexpr std::uint64_t kBeamStream = 0x6265616d73ULL;

/// Generic unit-norm columns inside span(basis), orthonormalized.
ComplexMatrix draw_in_span(const ComplexMatrix& basis, int count,
                           const SeededRng& rng) {
  const Eigen::Index m = basis.rows();
  if (count == 0) return ComplexMatrix(m, 0);
  ComplexMatrix mix(basis.cols(), count);
  for (Eigen::Index c = 0; c < mix.cols(); ++c)
    for (Eigen::Index r = 0; r < mix.rows(); ++r)
      mix(r, c) = rng.cgauss(static_cast<std::uint64_t>(c) * mix.rows() + r);
  ComplexMatrix cols = basis * mix;
  Eigen::HouseholderQR<ComplexMatrix> qr(cols);
  return qr.householderQ() * ComplexMatrix::Identity(m, count);
}

ComplexMatrix unit_columns(ComplexMatrix m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    double n = m.col(c).norm();
    if (n > 0) m.col(c) /= n;
  }
  return m;
}

void require_forced_zero(const ComplexMatrix& h, const ComplexMatrix& v,
                         const Tolerance& tol, const std::string& what) {
  if (v.cols() == 0) return;
  double r = (h * v).norm();
  if (r > tol.residual)
    throw InfeasibleAllocationError(what + ": zero-forcing residual " +
                                    std::to_string(r));
}

void require_forced_nonzero(const ComplexMatrix& h, const ComplexMatrix& v,
                            const Tolerance& tol, const std::string& what) {
  if (v.cols() == 0 || h.norm() == 0.0) return;
  for (Eigen::Index c = 0; c < v.cols(); ++c)
    if ((h * v.col(c)).norm() <= tol.residual)
      throw DegenerateDrawError(what + ": column " + std::to_string(c) +
                                " vanishes through a link that must stay "
                                "nonzero");
}

void require_rank(const ComplexMatrix& m, int expected, const Tolerance& tol,
                  const std::string& what) {
  int got = rank_tol(m, tol);
  if (got != expected)
    throw DegenerateDrawError(what + ": rank " + std::to_string(got) +
                              ", expected " + std::to_string(expected));
}

ComplexMatrix orthonormal_column_basis(const ComplexMatrix& a,
                                       const Tolerance& tol) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  int r = 0;
  if (smax > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > tol.rank_rel * smax) ++r;
  return svd.matrixU().leftCols(r);
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& a) {
  return Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(a)
      .pseudoInverse();
}

}  // namespace

ComplexMatrix TxBeams::stacked() const {
  std::vector<ComplexMatrix> blocks;
  for (int t = 1; t <= 7; ++t) blocks.push_back(type[t]);
  blocks.push_back(direct);
  for (const auto& c : cross) blocks.push_back(c);
  return hstack(blocks);
}

TwoUserAllocation alloc_two_user(const NetworkConfig& config) {
  config.validate();
  if (config.users != 2)
    throw ConfigError("alloc_two_user: config must have K = 2");
  TwoUserParams p = TwoUserParams::from_config(config);
  const int cap = std::max({p.m1, p.m2, p.n1, p.n2});

  TwoUserAllocation best{};
  int best_value = -1;
  for (int a = 0; a <= cap; ++a)          // d_1^[1]
    for (int b = 0; b <= cap; ++b)        // d_1^[2]
      for (int c = 0; c <= cap; ++c)      // d_2^[1]
        for (int d = 0; d <= cap; ++d)    // d_2^[2]
          for (int f = 0; f <= cap; ++f) {  // d^f
            bool ok = a <= p.m1 - p.d21 && c <= p.m2 - p.d12 &&
                      f <= std::min(p.m1 - p.d11, p.m2 - p.d22) &&
                      a + b <= p.d11 && c + d <= p.d22 && b + f <= p.d21 &&
                      d + f <= p.d12 && b + f + c + d <= p.n2 &&
                      d + f + a + b <= p.n1;
            if (!ok) continue;
            int value = a + b + c + d + f;
            if (value > best_value) {
              best_value = value;
              best = {{a, c}, {b, d}, f};
            }
          }
  return best;
}

ThreeUserAllocation alloc_three_user(const SymmetricConfig& config) {
  config.validate();
  if (config.users != 3)
    throw ConfigError("alloc_three_user: config must have K = 3");
  const long long m = config.antennas, dd = config.direct_rank,
                  dc = config.cross_rank;

  struct Candidate {
    std::string label;
    std::array<Rational, 7> d;
    Rational objective;  // per-user units
    bool integral;
  };
  std::vector<Candidate> candidates;
  auto add = [&](const std::string& label, std::array<Rational, 7> d) {
    for (const auto& v : d)
      if (v < Rational(0)) return;  // prescription invalid outside its regime
    // type-5 columns exist only for 2*D_d <= M <= 2*D_c
    if (d[4] > Rational(0) && !(2 * dd <= m && m <= 2 * dc)) return;
    Candidate c;
    c.label = label;
    c.d = d;
    c.objective = d[0] + d[1] + d[2] + d[3] +
                  (d[4] + d[5] + d[6]) * Rational(1, 2);
    c.integral = true;
    for (const auto& v : d)
      if (!v.is_integer()) c.integral = false;
    if (d[4].is_integer() && d[4].num() % 2 != 0) c.integral = false;
    candidates.push_back(std::move(c));
  };

  const Rational z(0);
  if (dc <= m && m <= 2 * dc) {
    if (m >= 2 * dd && m <= dd + dc)
      add("case1-align",
          {Rational(m - dc), z, z, Rational(dd + dc - m),
           Rational(2 * m - 4 * dd, 3), z, z});
    if (m >= 2 * dd && m >= dd + dc)
      add("case1-zf+align",
          {Rational(dd, 2), Rational(dd, 2), z, z,
           Rational(4 * dc - 2 * m, 3), Rational(m - dc - dd),
           Rational(m - dc - dd)});
    if (m <= 2 * dd)
      add("case1-nofeedback",
          {Rational(m - dc), z, z, Rational(dc) - Rational(m, 2), z, z, z});
  }
  if (2 * dc <= m && m <= 2 * dc + dd) {
    if (m >= dc + dd)
      add("case2-zf",
          {Rational(2 * dc + dd - m, 2), Rational(2 * dc + dd - m, 2),
           Rational(m - 2 * dc), z, z, Rational(m - dc - dd),
           Rational(m - dc - dd)});
    if (m <= dc + dd)
      add("case2-nofeedback",
          {Rational(dc, 2), Rational(dc, 2), Rational(m - 2 * dc), z, z, z, z});
  }
  if (m >= 2 * dc + dd)
    add("case3-zf", {z, z, Rational(dd), z, z, Rational(dc), Rational(dc)});

  if (candidates.empty())
    throw DomainError("alloc_three_user: no case prescription applies");

  // Largest objective wins; on ties keep the listed (alignment-first) order
  // but never pick a fractional prescription over an equal integral one.
  const Candidate* best = &candidates[0];
  for (const auto& c : candidates) {
    if (c.objective > best->objective ||
        (c.objective == best->objective && c.integral && !best->integral))
      best = &c;
  }

  if (!best->integral) {
    std::string what = "alloc_three_user: " + best->label +
                       " prescribes fractional counts (";
    for (int t = 0; t < 7; ++t)
      what += (t ? ", " : "") + best->d[t].str();
    what += "); a symbol extension would be required";
    throw IntegralityError(what, best->d);
  }

  ThreeUserAllocation out;
  out.case_label = best->label;
  for (int t = 0; t < 7; ++t) out.counts[t] = static_cast<int>(best->d[t].num());

  // Re-check the chosen counts against the constraint system by substitution.
  SymmetricParams params{3, static_cast<int>(m), static_cast<int>(dd),
                         static_cast<int>(dc)};
  Polyhedron poly = three_user_constraints(params);
  for (const auto& row : poly.rows) {
    Rational lhs(0);
    for (int t = 0; t < 7; ++t) lhs += row.coeffs[t] * Rational(out.counts[t]);
    if (lhs > row.bound)
      throw std::logic_error("alloc_three_user: " + out.case_label +
                             " violates a constraint row");
  }
  return out;
}

BeamformerSet build_two_user(const ChannelInstance& instance,
                             const TwoUserAllocation& alloc,
                             const Tolerance& tol) {
  const auto& cfg = instance.config();
  if (cfg.users != 2)
    throw ConfigError("build_two_user: instance must have K = 2");
  SeededRng rng(instance.seed(), {kBeamStream});

  BeamformerSet bf;
  bf.scheme = SchemeKind::TwoUser;
  bf.tx.resize(2);
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const int m = cfg.tx_antennas[i];
    const ComplexMatrix& h_cross = instance.matrix(j, i);
    const ComplexMatrix& h_direct = instance.matrix(i, i);
    const int d1 = alloc.cross_null[i], d2 = alloc.generic[i],
              df = alloc.relay;

    ComplexMatrix null_cross = nullspace_basis(h_cross, tol);
    if (null_cross.cols() < d1)
      throw InfeasibleAllocationError(
          "build_two_user: type-1 request exceeds nullspace of the cross link");
    bf.tx[i].type[1] = draw_in_span(null_cross, d1, rng.derive(i * 8 + 1));

    // Generic columns; redraw if some forced-nonzero product degenerates.
    SeededRng grng = rng.derive(i * 8 + 2);
    for (int attempt = 0;; ++attempt) {
      ComplexMatrix v(m, d2);
      for (int c = 0; c < d2; ++c)
        for (int r = 0; r < m; ++r)
          v(r, c) = grng.cgauss(static_cast<std::uint64_t>(attempt) * 4096 +
                                c * static_cast<std::uint64_t>(m) + r);
      v = unit_columns(v);
      bool ok = true;
      for (int c = 0; c < d2 && ok; ++c) {
        if (h_direct.norm() > 0 && (h_direct * v.col(c)).norm() <= tol.residual)
          ok = false;
        if (h_cross.norm() > 0 && (h_cross * v.col(c)).norm() <= tol.residual)
          ok = false;
      }
      if (ok) {
        bf.tx[i].type[2] = std::move(v);
        break;
      }
      if (attempt > 32)
        throw DegenerateDrawError("build_two_user: generic columns degenerate");
    }

    ComplexMatrix null_direct = nullspace_basis(h_direct, tol);
    if (null_direct.cols() < df)
      throw InfeasibleAllocationError(
          "build_two_user: relay request exceeds nullspace of the direct link");
    bf.tx[i].type[3] = draw_in_span(null_direct, df, rng.derive(i * 8 + 3));

    require_forced_zero(h_cross, bf.tx[i].type[1], tol, "type-1 tx " +
                                                            std::to_string(i));
    require_forced_nonzero(h_direct, bf.tx[i].type[1], tol,
                           "type-1 tx " + std::to_string(i));
    require_forced_zero(h_direct, bf.tx[i].type[3], tol,
                        "type-3 tx " + std::to_string(i));
    require_forced_nonzero(h_cross, bf.tx[i].type[3], tol,
                           "type-3 tx " + std::to_string(i));
    require_rank(bf.tx[i].stacked(), d1 + d2 + df, tol,
                 "build_two_user: stacked V_" + std::to_string(i));
  }

  // Receive-side effective matrices must have full column rank.
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    ComplexMatrix eff = hstack({instance.matrix(i, i) * bf.tx[i].type[1],
                                instance.matrix(i, i) * bf.tx[i].type[2],
                                instance.matrix(i, j) * bf.tx[j].type[2],
                                instance.matrix(i, j) * bf.tx[j].type[3]});
    require_rank(eff,
                 alloc.cross_null[i] + alloc.generic[i] + alloc.generic[j] +
                     alloc.relay,
                 tol, "build_two_user: effective matrix at rx " +
                          std::to_string(i));
  }
  return bf;
}

AlignmentSystem type5_pair_system(const ChannelInstance& instance, int i,
                                  const Tolerance& tol) {
  const auto& cfg = instance.config();
  if (cfg.users != 3)
    throw ConfigError("type5_pair_system: instance must have K = 3");
  const int m = cfg.tx_antennas[0];
  const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
  ComplexMatrix t(3 * m, 2 * m);
  t.setZero();
  t.block(0, 0, m, m) = instance.matrix(i2, i);
  t.block(0, m, m, m) = -instance.matrix(i2, i1);
  t.block(m, 0, m, m) = instance.matrix(i, i);
  t.block(2 * m, m, m, m) = instance.matrix(i1, i1);
  AlignmentSystem sys;
  sys.nullspace = nullspace_basis(t, tol);
  sys.measured_rank = 2 * m - static_cast<int>(sys.nullspace.cols());
  sys.t = std::move(t);
  return sys;
}

namespace {

/// Type-4 cyclic alignment. At receiver r the constrained transmitter is
/// r-1 and the anchor is r+1:
///   span(H_{r,r-1} V4_{r-1})  within  span(H_{r,r+1} [V1_{r+1} V4_{r+1}]).
/// Each receiver induces the linear step  v_{r+1} -> v_{r-1} given by
/// pinv(H_{r,r-1}) o P_r o H_{r,r+1}, where P_r projects onto col(H_{r,r-1})
/// along span(H_{r,r+1} V1_{r+1}); the discarded component is exactly the
/// anchor interference already present. Closing the cycle makes V4 of tx 1
/// an eigenvector set of the composed map, which reduces to plain inverse
/// products when d1 = 0 and the cross links are square full rank.
void build_type4(const ChannelInstance& instance, BeamformerSet& bf, int d4,
                 const Tolerance& tol) {
  const int m = instance.config().tx_antennas[0];
  std::array<ComplexMatrix, 3> step;
  for (int r = 0; r < 3; ++r) {
    const int sink = (r + 2) % 3, src = (r + 1) % 3;
    const ComplexMatrix& h_sink = instance.matrix(r, sink);
    const ComplexMatrix& h_src = instance.matrix(r, src);
    ComplexMatrix col_basis = orthonormal_column_basis(h_sink, tol);
    ComplexMatrix anchor = h_src * bf.tx[src].type[1];
    if (col_basis.cols() + anchor.cols() != m)
      throw AlignmentError(
          "type-4 alignment needs d1 + rank(cross) = M at receiver " +
              std::to_string(r),
          sink, 0.0);
    ComplexMatrix frame = hstack({col_basis, anchor});
    if (rank_tol(frame, tol) != m)
      throw AlignmentError("type-4 projector frame is singular at receiver " +
                               std::to_string(r),
                           sink, 0.0);
    ComplexMatrix oblique =
        col_basis * frame.inverse().topRows(col_basis.cols());
    step[r] = pseudo_inverse(h_sink) * oblique * h_src;
  }
  // step[r]: tx (r+1) coords -> tx (r+2) coords; the cycle closes on tx 1.
  ComplexMatrix composed = step[2] * step[1] * step[0];
  Eigen::ComplexEigenSolver<ComplexMatrix> eig(composed);
  if (eig.info() != Eigen::Success)
    throw AlignmentError("type-4 eigendecomposition failed", 1, 0.0);
  std::vector<int> order(m);
  for (int k = 0; k < m; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(eig.eigenvalues()(a)) > std::abs(eig.eigenvalues()(b));
  });
  ComplexMatrix v1(m, d4);
  for (int k = 0; k < d4; ++k) v1.col(k) = eig.eigenvectors().col(order[k]);
  bf.tx[1].type[4] = unit_columns(v1);
  bf.tx[2].type[4] = unit_columns(step[0] * bf.tx[1].type[4]);
  bf.tx[0].type[4] = unit_columns(step[1] * bf.tx[2].type[4]);

  for (int r = 0; r < 3; ++r) {
    const int sink = (r + 2) % 3, src = (r + 1) % 3;
    ComplexMatrix image = instance.matrix(r, sink) * bf.tx[sink].type[4];
    ComplexMatrix anchor_span =
        hstack({instance.matrix(r, src) * bf.tx[src].type[1],
                instance.matrix(r, src) * bf.tx[src].type[4]});
    if (!span_contains(image, anchor_span, tol)) {
      LeastSquaresResult ls =
          least_squares(anchor_span, ComplexVector(image.col(0)));
      throw AlignmentError("type-4 closure fails at receiver " +
                               std::to_string(r),
                           sink, ls.residual);
    }
  }
}

void check_three_user_ranks(const ChannelInstance& instance,
                            const BeamformerSet& bf,
                            const ThreeUserAllocation& alloc,
                            const Tolerance& tol) {
  const auto& d = alloc.counts;
  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    ComplexMatrix a1 = hstack({instance.matrix(i, i) * bf.tx[i].type[1],
                               instance.matrix(i, i) * bf.tx[i].type[2],
                               instance.matrix(i, i) * bf.tx[i].type[3],
                               instance.matrix(i, i) * bf.tx[i].type[4]});
    ComplexMatrix a2 = hstack({instance.matrix(i, i1) * bf.tx[i1].type[1],
                               instance.matrix(i, i1) * bf.tx[i1].type[4],
                               instance.matrix(i, i1) * bf.tx[i1].type[5],
                               instance.matrix(i, i1) * bf.tx[i1].type[6]});
    ComplexMatrix a3 = hstack({instance.matrix(i, i2) * bf.tx[i2].type[2],
                               instance.matrix(i, i2) * bf.tx[i2].type[4],
                               instance.matrix(i, i2) * bf.tx[i2].type[5],
                               instance.matrix(i, i2) * bf.tx[i2].type[7]});
    const int three_halves_d5 = d[4] + d[4] / 2;
    require_rank(a1, d[0] + d[1] + d[2] + d[3], tol, "rank(A1)");
    require_rank(a2, d[0] + d[3] + d[4] + d[5], tol, "rank(A2)");
    require_rank(a3, d[1] + d[3] + d[4] + d[6], tol, "rank(A3)");
    require_rank(hstack({a2, a3}),
                 d[0] + d[1] + d[3] + three_halves_d5 + d[5] + d[6], tol,
                 "rank([A2 A3])");
    require_rank(hstack({a1, a2, a3}),
                 2 * d[0] + 2 * d[1] + d[2] + 2 * d[3] + three_halves_d5 +
                     d[5] + d[6],
                 tol, "rank([A1 A2 A3])");
  }
}

}  // namespace

BeamformerSet build_three_user(const ChannelInstance& instance,
                               const ThreeUserAllocation& alloc,
                               const Tolerance& tol) {
  const auto& cfg = instance.config();
  if (cfg.users != 3)
    throw ConfigError("build_three_user: instance must have K = 3");
  for (int i = 0; i < 3; ++i)
    if (cfg.tx_antennas[i] != cfg.tx_antennas[0] ||
        cfg.rx_antennas[i] != cfg.tx_antennas[0])
      throw ConfigError("build_three_user: instance must be symmetric");
  const int m = cfg.tx_antennas[0];
  const auto& d = alloc.counts;
  SeededRng rng(instance.seed(), {kBeamStream});

  BeamformerSet bf;
  bf.scheme = SchemeKind::ThreeUserSymmetric;
  bf.tx.resize(3);

  auto draw_null = [&](const std::vector<ComplexMatrix>& mats, int count,
                       std::uint64_t key, const std::string& what) {
    ComplexMatrix basis = joint_nullspace(mats, tol);
    if (basis.cols() < count)
      throw InfeasibleAllocationError(
          "build_three_user: " + what + " needs " + std::to_string(count) +
          " columns, nullspace has " + std::to_string(basis.cols()));
    return draw_in_span(basis, count, rng.derive(key));
  };

  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    const ComplexMatrix& hd = instance.matrix(i, i);
    const ComplexMatrix& hc1 = instance.matrix(i1, i);
    const ComplexMatrix& hc2 = instance.matrix(i2, i);
    bf.tx[i].type[1] = draw_null({hc1}, d[0], i * 16 + 1, "type-1");
    bf.tx[i].type[2] = draw_null({hc2}, d[1], i * 16 + 2, "type-2");
    bf.tx[i].type[3] = draw_null({hc1, hc2}, d[2], i * 16 + 3, "type-3");
    bf.tx[i].type[6] = draw_null({hd, hc1}, d[5], i * 16 + 6, "type-6");
    bf.tx[i].type[7] = draw_null({hd, hc2}, d[6], i * 16 + 7, "type-7");
    bf.tx[i].type5_first = ComplexMatrix(m, 0);
    bf.tx[i].type5_second = ComplexMatrix(m, 0);
  }

  if (d[4] > 0) {
    if (d[4] % 2 != 0)
      throw InfeasibleAllocationError("build_three_user: d5 must be even");
    const int half = d[4] / 2;
    for (int i = 0; i < 3; ++i) {
      AlignmentSystem sys = type5_pair_system(instance, i, tol);
      if (sys.nullspace.cols() < half)
        throw InfeasibleAllocationError(
            "build_three_user: type-5 pair system nullspace too small");
      ComplexMatrix pair =
          draw_in_span(sys.nullspace, half, rng.derive(i * 16 + 5));
      bf.tx[i].type5_first = unit_columns(pair.topRows(m));
      bf.tx[(i + 1) % 3].type5_second = unit_columns(pair.bottomRows(m));
    }
  }
  for (int i = 0; i < 3; ++i)
    bf.tx[i].type[5] = hstack({bf.tx[i].type5_first, bf.tx[i].type5_second});

  if (d[3] > 0) build_type4(instance, bf, d[3], tol);
  else
    for (int i = 0; i < 3; ++i) bf.tx[i].type[4] = ComplexMatrix(m, 0);

  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
    require_forced_zero(instance.matrix(i1, i), bf.tx[i].type[1], tol, "type-1");
    require_forced_nonzero(instance.matrix(i, i), bf.tx[i].type[1], tol, "type-1");
    require_forced_nonzero(instance.matrix(i2, i), bf.tx[i].type[1], tol, "type-1");
    require_forced_zero(instance.matrix(i2, i), bf.tx[i].type[2], tol, "type-2");
    require_forced_nonzero(instance.matrix(i, i), bf.tx[i].type[2], tol, "type-2");
    require_forced_nonzero(instance.matrix(i1, i), bf.tx[i].type[2], tol, "type-2");
    require_forced_zero(instance.matrix(i1, i), bf.tx[i].type[3], tol, "type-3");
    require_forced_zero(instance.matrix(i2, i), bf.tx[i].type[3], tol, "type-3");
    require_forced_nonzero(instance.matrix(i, i), bf.tx[i].type[3], tol, "type-3");
    require_forced_zero(instance.matrix(i, i), bf.tx[i].type[5], tol, "type-5");
    require_forced_zero(instance.matrix(i, i), bf.tx[i].type[6], tol, "type-6");
    require_forced_zero(instance.matrix(i1, i), bf.tx[i].type[6], tol, "type-6");
    require_forced_nonzero(instance.matrix(i2, i), bf.tx[i].type[6], tol, "type-6");
    require_forced_zero(instance.matrix(i, i), bf.tx[i].type[7], tol, "type-7");
    require_forced_zero(instance.matrix(i2, i), bf.tx[i].type[7], tol, "type-7");
    require_forced_nonzero(instance.matrix(i1, i), bf.tx[i].type[7], tol, "type-7");
    int total = 0;
    for (int t = 1; t <= 7; ++t) total += static_cast<int>(bf.tx[i].type[t].cols());
    require_rank(bf.tx[i].stacked(), total, tol,
                 "build_three_user: stacked V_" + std::to_string(i));
  }
  check_three_user_ranks(instance, bf, alloc, tol);
  return bf;
}

std::pair<BeamformerSet, KUserAllocation> build_k_user_corollary(
    const ChannelInstance& instance, const Tolerance& tol) {
  const auto& cfg = instance.config();
  const int k = cfg.users;
  const int m = cfg.tx_antennas[0];
  for (int i = 0; i < k; ++i)
    if (cfg.tx_antennas[i] != m || cfg.rx_antennas[i] != m)
      throw ConfigError("build_k_user_corollary: instance must be symmetric");
  const int dd = cfg.rank_map[0][0];
  const int dc = k > 1 ? cfg.rank_map[0][1] : 0;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i)
      if (cfg.rank_map[j][i] != (i == j ? dd : dc))
        throw ConfigError("build_k_user_corollary: rank map must be symmetric");
  if (m < dd + (k - 1) * dc)
    throw DomainError(
        "build_k_user_corollary: requires M >= D_d + (K-1)*D_c (= " +
        std::to_string(dd + (k - 1) * dc) + ")");

  SeededRng rng(instance.seed(), {kBeamStream});
  BeamformerSet bf;
  bf.scheme = SchemeKind::KUserCorollary;
  bf.tx.resize(k);
  for (int i = 0; i < k; ++i) {
    std::vector<ComplexMatrix> all_cross;
    for (int j = 0; j < k; ++j)
      if (j != i) all_cross.push_back(instance.matrix(j, i));
    ComplexMatrix basis = joint_nullspace(all_cross, tol);
    if (basis.cols() < dd)
      throw InfeasibleAllocationError(
          "build_k_user_corollary: direct block nullspace deficit");
    bf.tx[i].direct = draw_in_span(basis, dd, rng.derive(i * 64));

    bf.tx[i].cross.assign(k, ComplexMatrix(m, 0));
    for (int target = 0; target < k; ++target) {
      if (target == i) continue;
      std::vector<ComplexMatrix> nulled{instance.matrix(i, i)};
      for (int l = 0; l < k; ++l)
        if (l != i && l != target) nulled.push_back(instance.matrix(l, i));
      ComplexMatrix cb = joint_nullspace(nulled, tol);
      if (cb.cols() < dc)
        throw InfeasibleAllocationError(
            "build_k_user_corollary: cross block nullspace deficit");
      bf.tx[i].cross[target] =
          draw_in_span(cb, dc, rng.derive(i * 64 + target + 1));
      require_forced_nonzero(instance.matrix(target, i), bf.tx[i].cross[target],
                             tol, "k-user cross block");
    }
    require_forced_nonzero(instance.matrix(i, i), bf.tx[i].direct, tol,
                           "k-user direct block");
    require_rank(bf.tx[i].stacked(), dd + (k - 1) * dc, tol,
                 "build_k_user_corollary: stacked V_" + std::to_string(i));
  }

  // Each receiver must see D_d + (K-1)*D_c independent directions.
  for (int j = 0; j < k; ++j) {
    std::vector<ComplexMatrix> blocks{instance.matrix(j, j) * bf.tx[j].direct};
    for (int i = 0; i < k; ++i)
      if (i != j) blocks.push_back(instance.matrix(j, i) * bf.tx[i].cross[j]);
    require_rank(hstack(blocks), dd + (k - 1) * dc, tol,
                 "build_k_user_corollary: receive matrix at rx " +
                     std::to_string(j));
  }
  return {std::move(bf), KUserAllocation{k, dd, dc}};
}

namespace {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& rows, int fallback_rows) {
  if (rows.empty()) return ComplexMatrix(fallback_rows, 0);
  ComplexMatrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {
          rows[r][c][0].get<double>(), rows[r][c][1].get<double>()};
  return m;
}

}  // namespace

std::string to_json(const BeamformerSet& bf) {
  using nlohmann::json;
  json out;
  out["scheme"] = bf.scheme == SchemeKind::TwoUser ? "two-user"
                  : bf.scheme == SchemeKind::ThreeUserSymmetric
                      ? "three-user"
                      : "k-user";
  json txs = json::array();
  json alloc = json::array();
  for (const auto& tx : bf.tx) {
    json t;
    Eigen::Index m = 0;
    for (int ty = 1; ty <= 7; ++ty) m = std::max(m, tx.type[ty].rows());
    m = std::max({m, tx.type5_first.rows(), tx.type5_second.rows(),
                  tx.direct.rows()});
    for (const auto& c : tx.cross) m = std::max(m, c.rows());
    t["antennas"] = m;
    for (int ty = 1; ty <= 7; ++ty)
      if (ty != 5 && tx.type[ty].cols() > 0)
        t["type" + std::to_string(ty)] = matrix_to_json(tx.type[ty]);
    if (tx.type5_first.cols() > 0) t["type5_first"] = matrix_to_json(tx.type5_first);
    if (tx.type5_second.cols() > 0)
      t["type5_second"] = matrix_to_json(tx.type5_second);
    if (tx.direct.cols() > 0) t["direct"] = matrix_to_json(tx.direct);
    for (std::size_t j = 0; j < tx.cross.size(); ++j)
      if (tx.cross[j].cols() > 0)
        t["cross" + std::to_string(j)] = matrix_to_json(tx.cross[j]);
    json counts;
    for (int ty = 1; ty <= 7; ++ty)
      counts["type" + std::to_string(ty)] = tx.type[ty].cols();
    if (tx.direct.cols() > 0 || !tx.cross.empty()) {
      counts["direct"] = tx.direct.cols();
      for (std::size_t j = 0; j < tx.cross.size(); ++j)
        counts["cross" + std::to_string(j)] = tx.cross[j].cols();
    }
    alloc.push_back(std::move(counts));
    txs.push_back(std::move(t));
  }
  out["allocation"] = std::move(alloc);
  out["tx"] = std::move(txs);
  return out.dump(2);
}

BeamformerSet beamformer_from_json(const std::string& text) {
  using nlohmann::json;
  json in = json::parse(text);
  BeamformerSet bf;
  std::string scheme = in["scheme"].get<std::string>();
  bf.scheme = scheme == "two-user" ? SchemeKind::TwoUser
              : scheme == "three-user" ? SchemeKind::ThreeUserSymmetric
                                       : SchemeKind::KUserCorollary;
  const int k = static_cast<int>(in["tx"].size());
  bf.tx.resize(k);
  for (int i = 0; i < k; ++i) {
    const json& t = in["tx"][i];
    const int m = t["antennas"].get<int>();
    auto field = [&](const std::string& name) {
      return t.contains(name) ? matrix_from_json(t[name], m)
                              : ComplexMatrix(m, 0);
    };
    auto& tx = bf.tx[i];
    for (int ty = 1; ty <= 7; ++ty)
      tx.type[ty] = field("type" + std::to_string(ty));
    tx.type5_first = field("type5_first");
    tx.type5_second = field("type5_second");
    tx.type[5] = hstack({tx.type5_first, tx.type5_second});
    if (tx.type[5].cols() == 0) tx.type[5] = ComplexMatrix(m, 0);
    tx.direct = field("direct");
    if (bf.scheme == SchemeKind::KUserCorollary) {
      tx.cross.assign(k, ComplexMatrix(m, 0));
      for (int j = 0; j < k; ++j)
        tx.cross[j] = field("cross" + std::to_string(j));
    }
  }
  return bf;
}

void save_beamformer(const BeamformerSet& bf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << to_json(bf) << "\n";
}

BeamformerSet load_beamformer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return beamformer_from_json(text);
}

TwoUserAllocation two_user_allocation_of(const BeamformerSet& bf) {
  if (bf.scheme != SchemeKind::TwoUser || bf.tx.size() != 2)
    throw std::invalid_argument("two_user_allocation_of: wrong scheme");
  TwoUserAllocation a;
  for (int i = 0; i < 2; ++i) {
    a.cross_null[i] = static_cast<int>(bf.tx[i].type[1].cols());
    a.generic[i] = static_cast<int>(bf.tx[i].type[2].cols());
  }
  a.relay = static_cast<int>(bf.tx[0].type[3].cols());
  return a;
}

ThreeUserAllocation three_user_allocation_of(const BeamformerSet& bf) {
  if (bf.scheme != SchemeKind::ThreeUserSymmetric || bf.tx.size() != 3)
    throw std::invalid_argument("three_user_allocation_of: wrong scheme");
  ThreeUserAllocation a;
  a.case_label = "recovered-from-blocks";
  for (int t = 1; t <= 7; ++t)
    a.counts[t - 1] = static_cast<int>(bf.tx[0].type[t].cols());
  return a;
}

KUserAllocation k_user_allocation_of(const BeamformerSet& bf) {
  if (bf.scheme != SchemeKind::KUserCorollary || bf.tx.empty())
    throw std::invalid_argument("k_user_allocation_of: wrong scheme");
  KUserAllocation a;
  a.users = static_cast<int>(bf.tx.size());
  a.direct = static_cast<int>(bf.tx[0].direct.cols());
  a.cross = 0;
  for (const auto& c : bf.tx[0].cross)
    if (c.cols() > 0) a.cross = static_cast<int>(c.cols());
  return a;
}

}  // namespace ricfb
