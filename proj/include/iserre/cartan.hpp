#pragma once

// Cartan data, Satake data and Weyl group combinatorics.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iserre {

using RootVector = std::vector<int>;
using ReducedWord = std::vector<int>;

class InvalidDatum : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotFiniteType : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetrizable generalized Cartan matrix with its symmetrizers.
/// Indices are 0-based.
class CartanDatum {
 public:
  CartanDatum() = default;
  /// Throws InvalidDatum if the matrix is not a symmetrizable GCM for eps.
  CartanDatum(std::vector<std::vector<int>> a, std::vector<int> eps);

  /// Empty string if (a, eps) is a valid datum, otherwise the first problem found.
  static std::string check(const std::vector<std::vector<int>>& a, const std::vector<int>& eps);

  int rank() const { return static_cast<int>(eps_.size()); }
  int a(int i, int j) const { return a_[i][j]; }
  int eps(int i) const { return eps_[i]; }
  const std::vector<std::vector<int>>& matrix() const { return a_; }
  const std::vector<int>& epsilons() const { return eps_; }

  /// i·j = eps_i a_ij
  int dot(int i, int j) const { return eps_[i] * a_[i][j]; }
  /// i·mu for a root-lattice element mu
  int dot(int i, const RootVector& mu) const;
  /// mu·nu, bilinear extension
  int dot(const RootVector& mu, const RootVector& nu) const;

  RootVector simple_root(int i) const;
  /// s_i(v) = v - (sum_j a_ij v_j) alpha_i
  RootVector reflect(int i, RootVector v) const;
  /// Applies s_{w[0]} s_{w[1]} ... s_{w[k-1]} to v (rightmost first).
  RootVector apply(const ReducedWord& w, RootVector v) const;

  friend bool operator==(const CartanDatum&, const CartanDatum&) = default;

 private:
  std::vector<std::vector<int>> a_;
  std::vector<int> eps_;
};

bool is_positive(const RootVector& v);
bool is_negative(const RootVector& v);

struct SatakeDatum {
  CartanDatum cartan;
  std::vector<bool> bullet;  // membership in the black part
  std::vector<int> tau;      // involution of the index set

  /// Split datum: no black nodes, tau = id.
  static SatakeDatum split(const CartanDatum& c);

  int rank() const { return cartan.rank(); }
  bool is_bullet(int i) const { return bullet[i]; }
  std::vector<int> white() const;
  std::vector<int> black() const;
};

struct ConditionResult {
  std::string name;
  bool pass = true;
  std::vector<int> offending;  // 0-based indices
  std::string detail;
};

struct ValidationReport {
  std::vector<ConditionResult> conditions;
  ReducedWord w_bullet;  // empty when the black part is not of finite type
  std::string rho_convention;

  bool ok() const;
  std::string to_string() const;  // human-readable, 1-based indices
};

inline constexpr std::size_t kDefaultWeylBound = 1'000'000;

/// Reduced word for the longest element of the parabolic subgroup generated by
/// the black reflections. Throws NotFiniteType past `bound` steps or when the
/// root coordinates grow without bound.
ReducedWord longest_element(const SatakeDatum& d, std::size_t bound = kDefaultWeylBound);

/// Number of positive roots of the black subsystem sent to negative roots by w.
std::size_t inversion_count(const SatakeDatum& d, const ReducedWord& w);

ValidationReport validate_satake(const SatakeDatum& d, std::size_t bound = kDefaultWeylBound);

/// Twice <rho^vee_bullet, alpha_i>: the sum over positive black coroots of their
/// pairing with alpha_i. Requires a finite black part.
int twice_rho_pairing(const SatakeDatum& d, const ReducedWord& w_bullet, int i);

}  // namespace iserre
