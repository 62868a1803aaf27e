#include "ricfb/polytope.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace ricfb {

int Polyhedron::var_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("Polyhedron: unknown variable " + name);
}

void Polyhedron::add_row(std::vector<Rational> coeffs, Rational bound) {
  if (coeffs.size() != variables.size())
    throw std::invalid_argument("Polyhedron: row width mismatch");
  rows.push_back({std::move(coeffs), bound});
}

void Polyhedron::add_nonnegativity_rows() {
  for (std::size_t j = 0; j < variables.size(); ++j) {
    std::vector<Rational> c(variables.size(), Rational(0));
    c[j] = Rational(-1);
    rows.push_back({std::move(c), Rational(0)});
  }
}

std::string Polyhedron::dump() const {
  std::string out;
  for (const auto& row : rows) {
    bool first = true;
    for (std::size_t j = 0; j < variables.size(); ++j) {
      if (row.coeffs[j].is_zero()) continue;
      if (!first) out += " + ";
      out += row.coeffs[j].str() + "*" + variables[j];
      first = false;
    }
    if (first) out += "0";
    out += " <= " + row.bound.str() + "\n";
  }
  return out;
}

Polyhedron two_user_constraints(const TwoUserParams& p) {
  p.validate();
  Polyhedron poly;
  poly.variables = {"d1_1", "d1_2", "d2_1", "d2_2", "df"};
  auto r = [&](std::initializer_list<long long> c, long long b) {
    std::vector<Rational> coeffs;
    for (long long v : c) coeffs.emplace_back(v);
    poly.add_row(std::move(coeffs), Rational(b));
  };
  r({1, 0, 0, 0, 0}, p.m1 - p.d21);  // cross-null cap at tx 1
  r({0, 0, 1, 0, 0}, p.m2 - p.d12);  // cross-null cap at tx 2
  r({0, 0, 0, 0, 1}, std::min(p.m1 - p.d11, p.m2 - p.d22));  // relay cap
  r({1, 1, 0, 0, 0}, p.d11);  // direct-link rank, tx 1
  r({0, 0, 1, 1, 0}, p.d22);  // direct-link rank, tx 2
  r({0, 1, 0, 0, 1}, p.d21);  // cross-link rank, tx 1 -> rx 2
  r({0, 0, 0, 1, 1}, p.d12);  // cross-link rank, tx 2 -> rx 1
  r({0, 1, 1, 1, 1}, p.n2);   // receive dimension at rx 2
  r({1, 1, 0, 1, 1}, p.n1);   // receive dimension at rx 1
  poly.add_nonnegativity_rows();
  poly.objective.assign(5, Rational(1));
  return poly;
}

Polyhedron three_user_constraints(const SymmetricParams& p) {
  p.validate();
  if (p.users != 3)
    throw DomainError("three_user_constraints: K must be 3");
  const long long m = p.antennas, dd = p.direct_rank, dc = p.cross_rank;
  Polyhedron poly;
  poly.variables = {"d1", "d2", "d3", "d4", "d5", "d6", "d7"};
  auto r = [&](std::initializer_list<Rational> c, Rational b) {
    poly.add_row(std::vector<Rational>(c), b);
  };
  const Rational z(0), one(1);
  long long d5cap = (2 * dd <= m && m <= 2 * dc) ? 2 * m - 4 * dd : 0;
  r({one, z, z, z, z, z, z}, Rational(m - dc));  // one cross nullspace
  r({z, one, z, z, z, z, z}, Rational(m - dc));  // other cross nullspace
  r({z, z, one, z, z, z, z}, Rational(std::max(m - 2 * dc, 0LL)));  // joint cross
  r({z, z, z, z, one, z, z}, Rational(d5cap));  // paired alignment system
  r({z, z, z, z, z, one, z}, Rational(std::max(m - dc - dd, 0LL)));  // direct+next
  r({z, z, z, z, z, z, one}, Rational(std::max(m - dc - dd, 0LL)));  // direct+prev
  r({one, one, one, one, z, z, z}, Rational(dd));  // direct-link rank
  r({one, z, z, one, one, one, z}, Rational(dc));  // next cross-link rank
  r({z, one, z, one, one, z, one}, Rational(dc));  // prev cross-link rank
  // receive dimension; each aligned pair costs 3/2 per two symbols
  r({Rational(2), Rational(2), one, Rational(2), Rational(3, 2), one, one},
    Rational(m));
  r({one, one, one, one, one, one, one}, Rational(m));  // transmit dimension
  poly.add_nonnegativity_rows();
  poly.objective = {one, one, one, one, Rational(1, 2), Rational(1, 2),
                    Rational(1, 2)};
  return poly;
}

namespace {

/// Dense rational simplex tableau over rows Ax + s = b, s >= 0, x >= 0.
/// Phase 1 (driving negative slacks out) is included so callers may pass any
/// feasible system, not just ones with b >= 0.
class SimplexTableau {
 public:
  SimplexTableau(const Polyhedron& poly)
      : n_(static_cast<int>(poly.variables.size())),
        m_(static_cast<int>(poly.rows.size())) {
    tab_.assign(m_, std::vector<Rational>(n_ + m_ + 1, Rational(0)));
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) tab_[i][j] = poly.rows[i].coeffs[j];
      tab_[i][n_ + i] = Rational(1);
      tab_[i].back() = poly.rows[i].bound;
      basis_[i] = n_ + i;
    }
  }

  LpResult maximize(const std::vector<Rational>& objective) {
    ensure_feasible();
    std::vector<Rational> cost(n_ + m_ + 1, Rational(0));
    for (int j = 0; j < n_; ++j) cost[j] = -objective[j];
    // Restate the cost row in terms of the current (phase-1) basis.
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_ && !cost[basis_[i]].is_zero()) {
        Rational f = cost[basis_[i]];
        for (int j = 0; j <= n_ + m_; ++j) cost[j] -= f * tab_[i][j];
      }
    run(cost, /*phase1=*/false);
    LpResult out;
    out.value = cost.back();
    out.witness.assign(n_, Rational(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) out.witness[basis_[i]] = tab_[i].back();
    return out;
  }

 private:
  void ensure_feasible() {
    bool negative = false;
    for (int i = 0; i < m_; ++i)
      if (tab_[i].back() < Rational(0)) negative = true;
    if (!negative) return;
    // Phase 1: minimize sum of artificial infeasibility via the textbook
    // trick of one artificial column entering on the most negative row.
    int art = n_ + m_;
    for (auto& row : tab_) row.insert(row.end() - 1, Rational(0));
    int worst = 0;
    for (int i = 0; i < m_; ++i) {
      tab_[i][art] = Rational(-1);
      if (tab_[i].back() < tab_[worst].back()) worst = i;
    }
    std::vector<Rational> cost(n_ + m_ + 2, Rational(0));
    cost[art] = Rational(1);
    pivot(worst, art, cost);
    basis_[worst] = art;
    run(cost, /*phase1=*/true);
    if (!cost.back().is_zero())
      throw InfeasibleError("maximize: polyhedron is infeasible");
    // Drive the artificial column out of the basis if it lingers at zero.
    for (int i = 0; i < m_; ++i)
      if (basis_[i] == art) {
        for (int j = 0; j < n_ + m_; ++j)
          if (!tab_[i][j].is_zero()) {
            pivot(i, j, cost);
            basis_[i] = j;
            break;
          }
      }
    for (auto& row : tab_) row.erase(row.end() - 2);
  }

  void run(std::vector<Rational>& cost, bool phase1) {
    const int width = static_cast<int>(tab_[0].size()) - 1;
    while (true) {
      int enter = -1;  // Bland: lowest-index negative reduced cost
      for (int j = 0; j < width; ++j)
        if (cost[j] < Rational(0)) {
          enter = j;
          break;
        }
      if (enter < 0) return;
      int leave = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        if (!(tab_[i][enter] > Rational(0))) continue;
        Rational ratio = tab_[i].back() / tab_[i][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) {
        if (phase1)
          throw std::logic_error("simplex: phase 1 cannot be unbounded");
        throw UnboundedError("maximize: objective is unbounded");
      }
      pivot(leave, enter, cost);
      basis_[leave] = enter;
    }
  }

  void pivot(int row, int col, std::vector<Rational>& cost) {
    Rational p = tab_[row][col];
    for (auto& v : tab_[row]) v /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == row || tab_[i][col].is_zero()) continue;
      Rational f = tab_[i][col];
      for (std::size_t j = 0; j < tab_[i].size(); ++j)
        tab_[i][j] -= f * tab_[row][j];
    }
    if (!cost[col].is_zero()) {
      Rational f = cost[col];
      for (std::size_t j = 0; j < cost.size(); ++j) cost[j] -= f * tab_[row][j];
    }
  }

  int n_, m_;
  std::vector<std::vector<Rational>> tab_;
  std::vector<int> basis_;
};

/// Scales a row to integer coefficients with gcd 1 (canonical form for
/// syntactic deduplication).
void normalize_row(Polyhedron::Row& row) {
  long long lcm = 1;
  auto fold = [&](const Rational& v) {
    lcm = std::lcm(lcm, v.den());
  };
  for (const auto& c : row.coeffs) fold(c);
  fold(row.bound);
  long long g = 0;
  auto scale = [&](Rational& v) {
    v *= Rational(lcm);
    g = std::gcd(g, v.num() < 0 ? -v.num() : v.num());
  };
  for (auto& c : row.coeffs) scale(c);
  scale(row.bound);
  if (g > 1) {
    for (auto& c : row.coeffs) c /= Rational(g);
    row.bound /= Rational(g);
  }
}

std::string row_key(const Polyhedron::Row& row) {
  std::string key;
  for (const auto& c : row.coeffs) key += c.str() + "|";
  key += "<=" + row.bound.str();
  return key;
}

}  // namespace

LpResult maximize(const Polyhedron& poly) {
  if (poly.objective.size() != poly.variables.size())
    throw std::invalid_argument("maximize: objective width mismatch");
  if (poly.rows.empty()) throw UnboundedError("maximize: no constraints");
  SimplexTableau tableau(poly);
  return tableau.maximize(poly.objective);
}

Polyhedron fm_eliminate(const Polyhedron& poly, const std::string& var) {
  const int k = poly.var_index(var);
  Polyhedron out;
  out.variables = poly.variables;
  out.variables.erase(out.variables.begin() + k);
  out.objective.clear();  // objective does not survive projection

  auto strip = [&](const Polyhedron::Row& row, const Rational& scale,
                   const Polyhedron::Row* other = nullptr,
                   const Rational& other_scale = Rational(0)) {
    Polyhedron::Row r;
    r.coeffs.reserve(out.variables.size());
    for (std::size_t j = 0; j < poly.variables.size(); ++j) {
      if (static_cast<int>(j) == k) continue;
      Rational v = row.coeffs[j] * scale;
      if (other) v += other->coeffs[j] * other_scale;
      r.coeffs.push_back(v);
    }
    r.bound = row.bound * scale;
    if (other) r.bound += other->bound * other_scale;
    return r;
  };

  std::vector<const Polyhedron::Row*> pos, neg;
  std::set<std::string> seen;
  auto push = [&](Polyhedron::Row r) {
    normalize_row(r);
    bool all_zero = true;
    for (const auto& c : r.coeffs)
      if (!c.is_zero()) {
        all_zero = false;
        break;
      }
    if (all_zero && r.bound >= Rational(0)) return;  // vacuous 0 <= b
    if (seen.insert(row_key(r)).second) out.rows.push_back(std::move(r));
  };

  for (const auto& row : poly.rows) {
    if (row.coeffs[k] > Rational(0))
      pos.push_back(&row);
    else if (row.coeffs[k] < Rational(0))
      neg.push_back(&row);
    else
      push(strip(row, Rational(1)));
  }
  for (const auto* p : pos)
    for (const auto* n : neg) {
      // scale to cancel x_k: row_p / p_k + row_n / (-n_k)
      push(strip(*p, Rational(1) / p->coeffs[k], n,
                 Rational(-1) / n->coeffs[k]));
    }
  return out;
}

Rational fm_objective_bound(const Polyhedron& poly) {
  if (poly.objective.size() != poly.variables.size())
    throw std::invalid_argument("fm_objective_bound: objective width mismatch");
  Polyhedron work;
  work.variables = poly.variables;
  work.variables.push_back("_t");
  for (const auto& row : poly.rows) {
    Polyhedron::Row r = row;
    r.coeffs.push_back(Rational(0));
    work.rows.push_back(std::move(r));
  }
  Polyhedron::Row trow;  // t - objective . x <= 0
  for (const auto& c : poly.objective) trow.coeffs.push_back(-c);
  trow.coeffs.push_back(Rational(1));
  trow.bound = Rational(0);
  work.rows.push_back(std::move(trow));

  std::vector<std::string> order(poly.variables);
  for (const auto& name : order) work = fm_eliminate(work, name);

  bool bounded = false;
  Rational best;
  for (const auto& row : work.rows) {
    const Rational& a = row.coeffs[0];
    if (a > Rational(0)) {
      Rational b = row.bound / a;
      if (!bounded || b < best) best = b;
      bounded = true;
    } else if (a.is_zero() && row.bound < Rational(0)) {
      throw InfeasibleError("fm_objective_bound: projected system infeasible");
    }
  }
  if (!bounded)
    throw UnboundedError("fm_objective_bound: objective is unbounded");
  return best;
}

}  // namespace ricfb
