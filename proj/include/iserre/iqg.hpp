#pragma once

// The iquantum group layer: B_i, k~_i, Z_i, divided powers of B_i, and the
// elements entering the Serre-Lusztig relations.

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "iserre/utilde.hpp"

namespace iserre {

/// ktilde: work in the double. sigma: work in the central reduction with
/// B_i = F_i + s[i] T(E_i) K_i^{-1}, s[i] a formal parameter.
enum class Mode { ktilde, sigma };
enum class JPower { plain, divided };

/// A case the formulas do not cover (for instance tau j != j in divided mode).
class UnsupportedCase : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(Mode m);
std::string to_string(JPower j);

class IQGContext {
 public:
  /// Validates d (throws InvalidDatum listing the failed conditions unless
  /// `force`); `plus` may share U+ caches between contexts over the same Cartan datum.
  explicit IQGContext(SatakeDatum d, Mode mode = Mode::ktilde, Mutation mut = {},
                      std::shared_ptr<UPlusAlgebra> plus = nullptr, bool force = false);

  const SatakeDatum& satake() const { return satake_; }
  const UTildeAlgebra& alg() const { return *alg_; }
  const CartanDatum& cartan() const { return satake_.cartan; }
  Mode mode() const { return mode_; }
  const ReducedWord& w_bullet() const { return w_bullet_; }

  /// T_{w_bullet}(E_{tau i})
  const UPlus& TE(int i) const { return te_.at(i); }
  /// r_i(T_{w_bullet} E_i) and ir(T_{w_bullet} E_i); require tau i = i.
  const UPlus& rTE(int i) const;
  const UPlus& lrTE(int i) const;
  /// Weight of ir(T_{w_bullet} E_i).
  RootVector mu(int i) const;

  UTilde B(int i) const;
  UTilde ktilde(int i) const;
  /// q_i k~_i r_i(T E_i), or q_i s[i] r_i(T E_i) in sigma mode.
  UTilde central_factor(int i) const;
  UPlus Z(int i) const;
  UPlus Zprime(int i) const;

  /// Product in the working algebra (central reduction applied in sigma mode).
  UTilde mul(const UTilde& a, const UTilde& b) const;
  UTilde mul(std::initializer_list<const UTilde*> factors) const;
  bool is_zero(const UTilde& x) const { return alg_->is_zero(x); }

  UTilde Bpow(int i, int n) const;
  /// Divided power of B_i with parity p; 0 for m < 0.
  UTilde idp(int i, int m, int p) const;
  UTilde s_element(int i, int j, int n) const;
  UTilde y_tilde(int i, int j, int n, int m, int p, int t, int e, JPower jp) const;
  UTilde y_tilde_prime(int i, int j, int n, int m, int p, int t, int e, JPower jp) const;

  /// Throws UnsupportedCase / std::invalid_argument unless i is a tau-fixed white node.
  void require_fixed_white(int i) const;

 private:
  UTilde y_impl(int i, int j, int n, int m, int p, int t, int e, JPower jp, bool prime) const;
  UTilde j_factor(int j, int n, int t, JPower jp) const;

  SatakeDatum satake_;
  Mode mode_;
  std::unique_ptr<UTildeAlgebra> alg_;
  ReducedWord w_bullet_;
  std::vector<UPlus> te_;
  std::map<int, UPlus> rte_, lrte_;
  mutable std::recursive_mutex mu_;
  mutable std::map<std::tuple<int, int, int>, UTilde> idp_memo_;
  mutable std::map<std::pair<int, int>, UTilde> pow_memo_;
};

/// sum_{r+s=m} (-1)^r q_i^{e r (1 - n a_ij - m)} F_i^(r) F_j^(n) F_i^(s)
UTilde f_minus(const UTildeAlgebra& U, int i, int j, int n, int m, int e);

}  // namespace iserre
