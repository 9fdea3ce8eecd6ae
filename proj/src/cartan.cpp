#include "iserre/cartan.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

namespace iserre {

CartanDatum::CartanDatum(std::vector<std::vector<int>> a, std::vector<int> eps)
    : a_(std::move(a)), eps_(std::move(eps)) {
  if (auto err = check(a_, eps_); !err.empty()) throw InvalidDatum(err);
}

std::string CartanDatum::check(const std::vector<std::vector<int>>& a, const std::vector<int>& eps) {
  const std::size_t n = eps.size();
  if (n == 0) return "empty index set";
  if (a.size() != n) return "cartan matrix has " + std::to_string(a.size()) + " rows, expected " + std::to_string(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n)
      return "cartan row " + std::to_string(i + 1) + " has " + std::to_string(a[i].size()) + " entries";
    if (eps[i] <= 0) return "epsilon_" + std::to_string(i + 1) + " must be positive";
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i][i] != 2) return "a_" + std::to_string(i + 1) + std::to_string(i + 1) + " must be 2";
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      std::string ij = "a_{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "}";
      if (a[i][j] > 0) return ij + " must be <= 0";
      if ((a[i][j] == 0) != (a[j][i] == 0)) return ij + " = 0 but the transposed entry is not";
      if (eps[i] * a[i][j] != eps[j] * a[j][i]) return "epsilon does not symmetrize " + ij;
    }
  }
  return {};
}

int CartanDatum::dot(int i, const RootVector& mu) const {
  int s = 0;
  for (int j = 0; j < rank(); ++j) s += a_[i][j] * mu[j];
  return eps_[i] * s;
}

int CartanDatum::dot(const RootVector& mu, const RootVector& nu) const {
  int s = 0;
  for (int i = 0; i < rank(); ++i)
    if (mu[i] != 0) s += mu[i] * dot(i, nu);
  return s;
}

RootVector CartanDatum::simple_root(int i) const {
  RootVector v(rank(), 0);
  v[i] = 1;
  return v;
}

RootVector CartanDatum::reflect(int i, RootVector v) const {
  int c = 0;
  for (int j = 0; j < rank(); ++j) c += a_[i][j] * v[j];
  v[i] -= c;
  return v;
}

RootVector CartanDatum::apply(const ReducedWord& w, RootVector v) const {
  for (auto it = w.rbegin(); it != w.rend(); ++it) v = reflect(*it, std::move(v));
  return v;
}

bool is_positive(const RootVector& v) {
  bool nonzero = false;
  for (int x : v) {
    if (x < 0) return false;
    nonzero = nonzero || x > 0;
  }
  return nonzero;
}

bool is_negative(const RootVector& v) {
  RootVector w(v);
  for (auto& x : w) x = -x;
  return is_positive(w);
}

SatakeDatum SatakeDatum::split(const CartanDatum& c) {
  SatakeDatum d;
  d.cartan = c;
  d.bullet.assign(c.rank(), false);
  d.tau.resize(c.rank());
  std::iota(d.tau.begin(), d.tau.end(), 0);
  return d;
}

std::vector<int> SatakeDatum::white() const {
  std::vector<int> out;
  for (int i = 0; i < rank(); ++i)
    if (!bullet[i]) out.push_back(i);
  return out;
}

std::vector<int> SatakeDatum::black() const {
  std::vector<int> out;
  for (int i = 0; i < rank(); ++i)
    if (bullet[i]) out.push_back(i);
  return out;
}

ReducedWord longest_element(const SatakeDatum& d, std::size_t bound) {
  const auto& c = d.cartan;
  const int n = c.rank();
  const std::vector<int> black = d.black();
  // Columns of the matrix of w on the root lattice: col[j] = w(alpha_j).
  std::vector<std::vector<std::int64_t>> col(n, std::vector<std::int64_t>(n, 0));
  for (int j = 0; j < n; ++j) col[j][j] = 1;
  constexpr std::int64_t kLimit = std::int64_t(1) << 40;
  ReducedWord word;
  while (true) {
    int next = -1;
    for (int j : black) {
      // w(alpha_j) is a root, so its sign is the sign of any nonzero coordinate.
      for (int k = 0; k < n; ++k) {
        if (col[j][k] != 0) {
          if (col[j][k] > 0) next = j;
          break;
        }
      }
      if (next >= 0) break;
    }
    if (next < 0) return word;
    if (word.size() >= bound)
      throw NotFiniteType("black subdiagram exceeded the Weyl group exploration bound");
    // w s_j: w s_j(alpha_k) = w(alpha_k) - a_jk w(alpha_j)
    for (int k = 0; k < n; ++k) {
      int ajk = c.a(next, k);
      if (k == next || ajk == 0) continue;
      for (int l = 0; l < n; ++l) {
        col[k][l] -= ajk * col[next][l];
        if (std::llabs(col[k][l]) > kLimit)
          throw NotFiniteType("black subdiagram is not of finite type (root coordinates diverge)");
      }
    }
    for (int l = 0; l < n; ++l) col[next][l] = -col[next][l];
    word.push_back(next);
  }
}

namespace {

// Positive roots of the black subsystem by closure under black reflections.
std::vector<RootVector> black_positive_roots(const SatakeDatum& d, std::size_t bound) {
  const auto& c = d.cartan;
  std::set<RootVector> seen;
  std::vector<RootVector> frontier;
  for (int j : d.black()) {
    seen.insert(c.simple_root(j));
    frontier.push_back(c.simple_root(j));
  }
  while (!frontier.empty()) {
    std::vector<RootVector> next;
    for (const auto& v : frontier)
      for (int j : d.black()) {
        RootVector w = c.reflect(j, v);
        if (is_positive(w) && seen.insert(w).second) {
          if (seen.size() > bound) throw NotFiniteType("black root system exceeded the exploration bound");
          next.push_back(std::move(w));
        }
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

std::size_t inversion_count(const SatakeDatum& d, const ReducedWord& w) {
  std::size_t count = 0;
  for (const auto& beta : black_positive_roots(d, kDefaultWeylBound))
    if (is_negative(d.cartan.apply(w, beta))) ++count;
  return count;
}

int twice_rho_pairing(const SatakeDatum& d, const ReducedWord& w_bullet, int i) {
  // Positive coroots beta_t = s_{j1} ... s_{j(t-1)} (h_{jt}), with the coroot
  // action s_j(h_k) = h_k - a_kj h_j; their pairing with alpha_i is sum_k c_k a_ki.
  const auto& c = d.cartan;
  const int n = c.rank();
  int total = 0;
  for (std::size_t t = 0; t < w_bullet.size(); ++t) {
    std::vector<int> h(n, 0);
    h[w_bullet[t]] = 1;
    for (std::size_t s = t; s-- > 0;) {
      int j = w_bullet[s];
      int pair = 0;
      for (int k = 0; k < n; ++k) pair += h[k] * c.a(k, j);
      h[j] -= pair;
    }
    for (int k = 0; k < n; ++k) total += h[k] * c.a(k, i);
  }
  return total;
}

bool ValidationReport::ok() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& c : conditions) {
    os << (c.pass ? "pass" : "FAIL") << "  " << c.name;
    if (!c.offending.empty()) {
      os << "  [";
      for (std::size_t k = 0; k < c.offending.size(); ++k) os << (k ? "," : "") << c.offending[k] + 1;
      os << "]";
    }
    if (!c.detail.empty()) os << "  " << c.detail;
    os << "\n";
  }
  os << "w_bullet = [";
  for (std::size_t k = 0; k < w_bullet.size(); ++k) os << (k ? "," : "") << w_bullet[k] + 1;
  os << "]\n";
  os << "rho convention: " << rho_convention << "\n";
  return os.str();
}

ValidationReport validate_satake(const SatakeDatum& d, std::size_t bound) {
  ValidationReport rep;
  rep.rho_convention =
      "rho^vee_bullet = half the sum of the positive black coroots; "
      "<h_k, alpha_i> = a_ki; condition: 2<rho^vee_bullet, alpha_i> is even";
  const auto& c = d.cartan;
  const int n = c.rank();

  ConditionResult shape{"datum shape"};
  if (static_cast<int>(d.bullet.size()) != n || static_cast<int>(d.tau.size()) != n) {
    shape.pass = false;
    shape.detail = "bullet/tau length does not match the rank";
    rep.conditions.push_back(shape);
    return rep;
  }
  rep.conditions.push_back(shape);

  ConditionResult gcm{"generalized Cartan matrix"};
  if (auto err = CartanDatum::check(c.matrix(), c.epsilons()); !err.empty()) {
    gcm.pass = false;
    gcm.detail = err;
  }
  rep.conditions.push_back(gcm);
  if (!gcm.pass) return rep;

  ConditionResult inv{"tau is an involution preserving a and epsilon"};
  bool tau_range = true;
  for (int i = 0; i < n; ++i)
    if (d.tau[i] < 0 || d.tau[i] >= n) {
      inv.pass = tau_range = false;
      inv.offending.push_back(i);
    }
  if (tau_range) {
    for (int i = 0; i < n; ++i) {
      bool bad = d.tau[d.tau[i]] != i || c.eps(d.tau[i]) != c.eps(i);
      for (int j = 0; j < n && !bad; ++j) bad = c.a(d.tau[i], d.tau[j]) != c.a(i, j);
      if (bad) {
        inv.pass = false;
        inv.offending.push_back(i);
      }
    }
  } else {
    inv.detail = "tau entries out of range";
  }
  rep.conditions.push_back(inv);
  if (!tau_range) return rep;

  ConditionResult stable{"tau preserves the black set"};
  for (int i = 0; i < n; ++i)
    if (d.bullet[i] != d.bullet[d.tau[i]]) {
      stable.pass = false;
      stable.offending.push_back(i);
    }
  rep.conditions.push_back(stable);

  ConditionResult finite{"black subdiagram of finite type"};
  bool have_w = true;
  try {
    rep.w_bullet = longest_element(d, bound);
  } catch (const NotFiniteType& e) {
    finite.pass = false;
    finite.offending = d.black();
    finite.detail = e.what();
    have_w = false;
  }
  rep.conditions.push_back(finite);

  ConditionResult wb{"w_bullet(alpha_j) = -alpha_{tau j} on black nodes"};
  ConditionResult rho{"<rho^vee_bullet, alpha_i> integral for tau-fixed white i"};
  if (have_w) {
    for (int j : d.black()) {
      RootVector img = c.apply(rep.w_bullet, c.simple_root(j));
      RootVector want(n, 0);
      want[d.tau[j]] = -1;
      if (img != want) {
        wb.pass = false;
        wb.offending.push_back(j);
      }
    }
    for (int i : d.white()) {
      if (d.tau[i] != i) continue;
      int twice = twice_rho_pairing(d, rep.w_bullet, i);
      if (twice % 2 != 0) {
        rho.pass = false;
        rho.offending.push_back(i);
        rho.detail += (rho.detail.empty() ? "" : "; ") + std::string("<rho^vee, alpha_") +
                      std::to_string(i + 1) + "> = " + std::to_string(twice) + "/2";
      }
    }
  } else {
    wb.pass = rho.pass = false;
    wb.detail = rho.detail = "not checked: black part is not of finite type";
  }
  rep.conditions.push_back(wb);
  rep.conditions.push_back(rho);
  return rep;
}

}  // namespace iserre
