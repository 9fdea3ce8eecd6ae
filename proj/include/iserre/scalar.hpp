#pragma once

// Exact arithmetic in Q(q, s_1, ..., s_k): Laurent polynomials in q with
// polynomial dependence on formal parameters, and reduced fractions of them.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace iserre {

inline constexpr int kMaxParams = 12;

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero scalar") {}
};

/// Exponent vector: one signed slot for q, one unsigned slot per parameter.
struct Monomial {
  std::int32_t q = 0;
  std::array<std::uint8_t, kMaxParams> p{};

  bool has_params() const;
  Monomial operator*(const Monomial& o) const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
  // Parameters are compared first (lexicographically), then the q exponent.
  friend auto operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.p <=> b.p; c != 0) return c;
    return a.q <=> b.q;
  }
};

class LaurentPoly {
 public:
  using Term = std::pair<Monomial, mpq_class>;

  LaurentPoly() = default;
  LaurentPoly(long c);  // NOLINT: integers promote implicitly
  explicit LaurentPoly(const mpq_class& c);
  static LaurentPoly monomial(const Monomial& m, const mpq_class& c = 1);
  static LaurentPoly q_power(int e);
  static LaurentPoly param(int index, int e = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  bool is_univariate() const;  // no parameter appears
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  int min_q() const;
  int max_q() const;
  const Term& leading() const { return terms_.back(); }

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const mpq_class& c);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly shifted(int dq) const;  // multiply by q^dq
  LaurentPoly bar() const;            // q -> q^-1
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  std::string to_string() const;

  // Terms must be sorted by monomial with nonzero coefficients.
  static LaurentPoly from_sorted(std::vector<Term> terms);
  static LaurentPoly from_unsorted(std::vector<Term> terms);

 private:
  std::vector<Term> terms_;
};

/// Reduced fraction num/den. The denominator has lowest q-exponent 0 and
/// leading coefficient 1, and shares no nonunit factor with the numerator,
/// so equal values have identical representations.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long c) : num_(c) {}  // NOLINT
  Scalar(const mpq_class& c) : num_(c) {}  // NOLINT
  Scalar(LaurentPoly num) : num_(std::move(num)) {}  // NOLINT
  Scalar(LaurentPoly num, LaurentPoly den);

  static Scalar q() { return Scalar(LaurentPoly::q_power(1)); }
  static Scalar q_power(int e) { return Scalar(LaurentPoly::q_power(e)); }
  static Scalar param(int index) { return Scalar(LaurentPoly::param(index)); }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return den_.is_one() && num_.is_one(); }
  bool is_laurent() const { return den_.is_one(); }
  bool has_params() const { return !num_.is_univariate() || !den_.is_univariate(); }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar&, const Scalar&) = default;

  Scalar inv() const;  // throws DivisionByZero
  std::optional<Scalar> try_inv() const;
  Scalar pow(int e) const;
  Scalar bar() const;
  Scalar shifted(int dq) const;  // multiply by q^dq

  /// Canonical text, parseable by the expression language.
  std::string to_string() const;

 private:
  void normalize();

  LaurentPoly num_;
  LaurentPoly den_{1};
};

/// Appends "coeff*monomial" to a sum being printed; an empty monomial prints
/// the bare coefficient. Compound coefficients are parenthesized.
void append_term(std::string& out, const Scalar& coeff, const std::string& monomial);

/// Compact lossless text encoding used by on-disk caches.
std::string serialize(const Scalar& s);
/// Inverse of serialize; throws std::invalid_argument on malformed input.
Scalar deserialize_scalar(const std::string& text);

// q-combinatorics in base q^eps.
Scalar q_int(int m, int eps = 1);
Scalar q_factorial(int m, int eps = 1);
Scalar q_binom(int a, int b, int eps = 1);

/// Polynomial gcd in Q[q, s_1..s_k]; inputs must have nonnegative exponents.
/// The result is normalized with leading coefficient 1.
LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b);
/// Exact quotient a / b in Q[q^{+-1}, s]; throws std::invalid_argument if inexact.
LaurentPoly poly_exact_div(const LaurentPoly& a, const LaurentPoly& b);

/// Least common multiple of the denominators of a family of scalars.
class CommonDenominator {
 public:
  void include(const Scalar& c);
  const LaurentPoly& value() const { return lcm_; }
  /// c * value(), a Laurent polynomial when c was included.
  LaurentPoly numerator(const Scalar& c) const;

 private:
  LaurentPoly lcm_{1};
  std::vector<LaurentPoly> dens_;
  mutable std::vector<std::pair<LaurentPoly, LaurentPoly>> cofactors_;
};

// ---------------------------------------------------------------------------
// Exact linear solving over the fraction field.

using ScalarMatrix = std::vector<std::vector<Scalar>>;

struct LinearSolution {
  bool consistent = false;
  std::vector<Scalar> solution;               // one particular solution
  std::vector<std::vector<Scalar>> nullspace;  // basis of the homogeneous solutions
  std::size_t rank = 0;
  std::string inconsistency;  // empty when consistent

  bool unique() const { return consistent && nullspace.empty(); }
};

LinearSolution solve_linear(const ScalarMatrix& a, const std::vector<Scalar>& b);

}  // namespace iserre
