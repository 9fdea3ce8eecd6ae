#pragma once

// The Drinfeld double in triangular normal form: sums of F-word * K-monomial * E-word.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "iserre/uplus.hpp"

namespace iserre {

/// Exponents of Kt_i (first rank entries) and Kp_i (last rank entries).
using KSig = std::vector<int>;

struct TermKey {
  Word f;
  KSig k;
  Word e;
  friend auto operator<=>(const TermKey&, const TermKey&) = default;
  friend bool operator==(const TermKey&, const TermKey&) = default;
};

class UTilde {
 public:
  using Map = std::map<TermKey, Scalar>;

  UTilde() = default;
  const Map& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  void add_term(const TermKey& key, const Scalar& c);

  UTilde& operator+=(const UTilde& o);
  UTilde& operator-=(const UTilde& o);
  UTilde& operator*=(const Scalar& c);
  friend UTilde operator+(UTilde a, const UTilde& b) { return a += b; }
  friend UTilde operator-(UTilde a, const UTilde& b) { return a -= b; }
  friend UTilde operator*(UTilde a, const Scalar& c) { return a *= c; }
  friend UTilde operator*(const Scalar& c, UTilde a) { return a *= c; }
  friend bool operator==(const UTilde&, const UTilde&) = default;

  /// Canonical text in the expression language (1-based indices); "0" when empty.
  std::string to_string(std::size_t max_terms = 0) const;

 private:
  Map terms_;
};

/// Index of one coordinate of the pairing vector: test word number fv of
/// weight fw on the F-side, the K-monomial, test word number ev of weight ew
/// on the E-side.
struct PairingKey {
  RootVector fw;
  int fv;
  KSig k;
  RootVector ew;
  int ev;
  friend auto operator<=>(const PairingKey&, const PairingKey&) = default;
  friend bool operator==(const PairingKey&, const PairingKey&) = default;
};

/// Deliberate corruptions of structure constants, used to show that the
/// checks are sensitive to them.
struct Mutation {
  bool r1 = false;        // rescales the Kp term of the E/F crossing rule
  bool r2 = false;        // flips the q-exponent when Kt moves past F
  bool idp_sign = false;  // flips the sign of the central factor in odd-parity divided powers
  bool any() const { return r1 || r2 || idp_sign; }
};

class UTildeAlgebra {
 public:
  explicit UTildeAlgebra(CartanDatum c, Mutation m = {});
  UTildeAlgebra(std::shared_ptr<UPlusAlgebra> plus, Mutation m = {});
  ~UTildeAlgebra();

  const CartanDatum& cartan() const { return plus_->cartan(); }
  int rank() const { return cartan().rank(); }
  const UPlusAlgebra& plus() const { return *plus_; }
  std::shared_ptr<UPlusAlgebra> plus_shared() const { return plus_; }
  const Mutation& mutation() const { return mutation_; }

  // Generators and embeddings.
  UTilde scalar(const Scalar& s) const;
  UTilde one() const { return scalar(Scalar(1)); }
  UTilde E(int i) const;
  UTilde F(int i) const;
  UTilde Kt(int i, int power = 1) const;
  UTilde Kp(int i, int power = 1) const;
  UTilde K(const KSig& sig) const;
  UTilde from_uplus(const UPlus& x) const;
  /// F-side copy of x (F_i in place of E_i).
  UTilde from_uminus(const UPlus& x) const;

  UTilde mul(const UTilde& a, const UTilde& b) const;
  UTilde pow(const UTilde& a, int n) const;
  UTilde commutator(const UTilde& a, const UTilde& b) const;

  /// Unique representative: F- and E-parts rewritten over standard words.
  UTilde canonical(const UTilde& x) const;
  /// Exact zero test: test functionals on both tensor factors, applied to x
  /// with denominators cleared.
  bool is_zero(const UTilde& x) const;
  /// Nonzero values of those functionals on x. The map x -> pairing_vector(x)
  /// is linear and injective, so it serves as a coordinate system.
  std::map<PairingKey, Scalar> pairing_vector(const UTilde& x) const;
  /// Some nonzero coordinate of the pairing vector (found with early exit), or
  /// nothing when x = 0.
  std::optional<std::pair<PairingKey, Scalar>> nonzero_pairing(const UTilde& x) const;
  /// Kp_i -> Kt_i^{-1}: the image in the quotient by Kt_i Kp_i = 1.
  UTilde central_reduce(const UTilde& x) const;

  UTilde braid_T(int i, const UTilde& x) const;
  /// T_{w[0]} T_{w[1]} ... T_{w[k-1]} (x)
  UTilde braid_Tw(const ReducedWord& w, const UTilde& x) const;
  /// Throws std::invalid_argument naming the offending terms unless x has
  /// only E-content in its normal form.
  UPlus as_uplus(const UTilde& x) const;

  /// Normal form of E_e * F_f.
  const UTilde& straighten(const Word& e, const Word& f) const;

 private:
  UTilde mul_terms(const TermKey& a, const Scalar& ca, const TermKey& b, const Scalar& cb) const;
  UTilde braid_image(int i, const TermKey& key) const;
  bool pair_impl(const UTilde& x, std::map<PairingKey, Scalar>* out,
                 std::pair<PairingKey, Scalar>* first = nullptr) const;
  struct Cleared {
    LaurentPoly den;
    std::vector<std::pair<TermKey, LaurentPoly>> terms;
  };
  const Cleared& straighten_cleared(const Word& e, const Word& f) const;
  int k_cross_f(const KSig& k, const RootVector& f_weight) const;
  int e_cross_k(const RootVector& e_weight, const KSig& k) const;

  std::shared_ptr<UPlusAlgebra> plus_;
  Mutation mutation_;
  mutable std::recursive_mutex mu_;
  mutable std::map<std::pair<Word, Word>, UTilde> straighten_memo_;
  mutable std::map<std::pair<Word, Word>, Cleared> cleared_memo_;
  mutable std::map<std::pair<int, Word>, UTilde> braid_e_memo_, braid_f_memo_;
};

}  // namespace iserre
