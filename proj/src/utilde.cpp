#include "iserre/utilde.hpp"

#include <sstream>

namespace iserre {

// ---------------------------------------------------------------------------
// UTilde

void UTilde::add_term(const TermKey& key, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

UTilde& UTilde::operator+=(const UTilde& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

UTilde& UTilde::operator-=(const UTilde& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

UTilde& UTilde::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, x] : terms_) x *= c;
  return *this;
}

namespace {

std::string k_string(const KSig& k) {
  const std::size_t n = k.size() / 2;
  std::string s;
  auto emit = [&](const char* name, std::size_t i, int e) {
    if (e == 0) return;
    if (!s.empty()) s += '*';
    s += name;
    s += '[' + std::to_string(i + 1) + ']';
    if (e != 1) s += '^' + std::to_string(e);
  };
  for (std::size_t i = 0; i < n; ++i) emit("K", i, k[i]);
  for (std::size_t i = 0; i < n; ++i) emit("K'", i, k[n + i]);
  return s;
}

std::string monomial_string(const TermKey& key) {
  std::string s;
  for (const std::string& part : {word_string(key.f, 'F'), k_string(key.k), word_string(key.e, 'E')}) {
    if (part.empty()) continue;
    if (!s.empty()) s += '*';
    s += part;
  }
  return s;
}

}  // namespace

std::string UTilde::to_string(std::size_t max_terms) const {
  if (terms_.empty()) return "0";
  std::string out;
  std::size_t count = 0;
  for (const auto& [k, c] : terms_) {
    if (max_terms && count == max_terms) {
      out += " + ... (" + std::to_string(terms_.size() - max_terms) + " more terms)";
      break;
    }
    append_term(out, c, monomial_string(k));
    ++count;
  }
  return out;
}

// ---------------------------------------------------------------------------
// UTildeAlgebra

UTildeAlgebra::UTildeAlgebra(CartanDatum c, Mutation m)
    : plus_(std::make_shared<UPlusAlgebra>(std::move(c))), mutation_(m) {}

UTildeAlgebra::UTildeAlgebra(std::shared_ptr<UPlusAlgebra> plus, Mutation m)
    : plus_(std::move(plus)), mutation_(m) {}

UTildeAlgebra::~UTildeAlgebra() = default;

UTilde UTildeAlgebra::scalar(const Scalar& s) const {
  UTilde x;
  x.add_term({Word{}, KSig(2 * rank(), 0), Word{}}, s);
  return x;
}

UTilde UTildeAlgebra::E(int i) const {
  UTilde x;
  x.add_term({Word{}, KSig(2 * rank(), 0), Word(1, static_cast<char>(i))}, Scalar(1));
  return x;
}

UTilde UTildeAlgebra::F(int i) const {
  UTilde x;
  x.add_term({Word(1, static_cast<char>(i)), KSig(2 * rank(), 0), Word{}}, Scalar(1));
  return x;
}

UTilde UTildeAlgebra::Kt(int i, int power) const {
  KSig k(2 * rank(), 0);
  k[i] = power;
  return K(k);
}

UTilde UTildeAlgebra::Kp(int i, int power) const {
  KSig k(2 * rank(), 0);
  k[rank() + i] = power;
  return K(k);
}

UTilde UTildeAlgebra::K(const KSig& sig) const {
  UTilde x;
  x.add_term({Word{}, sig, Word{}}, Scalar(1));
  return x;
}

UTilde UTildeAlgebra::from_uplus(const UPlus& x) const {
  UTilde out;
  for (const auto& [w, c] : x.terms()) out.add_term({Word{}, KSig(2 * rank(), 0), w}, c);
  return out;
}

UTilde UTildeAlgebra::from_uminus(const UPlus& x) const {
  UTilde out;
  for (const auto& [w, c] : x.terms()) out.add_term({w, KSig(2 * rank(), 0), Word{}}, c);
  return out;
}

// K * F_f = q^{result} F_f * K
int UTildeAlgebra::k_cross_f(const KSig& k, const RootVector& fw) const {
  const int n = rank();
  int x = 0;
  for (int i = 0; i < n; ++i) {
    if (k[i] == 0 && k[n + i] == 0) continue;
    int d = cartan().dot(i, fw);
    x += (mutation_.r2 ? 1 : -1) * k[i] * d + k[n + i] * d;
  }
  return x;
}

// E_e * K = q^{result} K * E_e
int UTildeAlgebra::e_cross_k(const RootVector& ew, const KSig& k) const {
  const int n = rank();
  int x = 0;
  for (int i = 0; i < n; ++i) {
    if (k[i] == 0 && k[n + i] == 0) continue;
    int d = cartan().dot(i, ew);
    x += -k[i] * d + k[n + i] * d;
  }
  return x;
}

const UTilde& UTildeAlgebra::straighten(const Word& e, const Word& f) const {
  std::lock_guard lock(mu_);
  auto key = std::make_pair(e, f);
  if (auto it = straighten_memo_.find(key); it != straighten_memo_.end()) return it->second;
  const int n = rank();
  UTilde out;
  if (e.empty() || f.empty()) {
    out.add_term({f, KSig(2 * n, 0), e}, Scalar(1));
    return straighten_memo_.emplace(key, std::move(out)).first->second;
  }
  // e F_i F_rest = F_i (e F_rest) + (r_i(e) Kt_i - Kp_i ir(e)) F_rest / (q_i - q_i^-1)
  const int i = static_cast<unsigned char>(f[0]);
  const Word rest = f.substr(1);
  const RootVector rest_w = word_weight(rest, n);
  for (const auto& [k, c] : straighten(e, rest).terms()) out.add_term({f.substr(0, 1) + k.f, k.k, k.e}, c);

  const int eps = cartan().eps(i);
  const Scalar denom = (Scalar::q_power(eps) - Scalar::q_power(-eps)).inv();
  const UPlus ex = UPlus::word(e);

  KSig kt(2 * n, 0);
  kt[i] = 1;
  // r_i(e) Kt_i F_rest = q^{-i.rest} r_i(e) F_rest Kt_i
  const UPlus rx = plus_->r(i, ex), lx = plus_->rl(i, ex);
  for (const auto& [w, c] : rx.terms()) {
    Scalar base = c * denom * Scalar::q_power(k_cross_f(kt, rest_w));
    for (const auto& [k, d] : straighten(w, rest).terms()) {
      KSig sig = k.k;
      ++sig[i];
      out.add_term({k.f, sig, k.e}, base * d * Scalar::q_power(e_cross_k(word_weight(k.e, n), kt)));
    }
  }
  KSig kp(2 * n, 0);
  kp[n + i] = 1;
  Scalar kp_coeff = -denom;
  if (mutation_.r1) kp_coeff *= Scalar::q();
  // Kp_i ir(e) F_rest
  for (const auto& [w, c] : lx.terms()) {
    for (const auto& [k, d] : straighten(w, rest).terms()) {
      KSig sig = k.k;
      ++sig[n + i];
      out.add_term({k.f, sig, k.e}, kp_coeff * c * d * Scalar::q_power(k_cross_f(kp, word_weight(k.f, n))));
    }
  }
  return straighten_memo_.emplace(key, std::move(out)).first->second;
}

UTilde UTildeAlgebra::mul_terms(const TermKey& a, const Scalar& ca, const TermKey& b, const Scalar& cb) const {
  const int n = rank();
  UTilde out;
  const Scalar cab = ca * cb;
  auto combine = [&](const TermKey& mid, const Scalar& cm) {
    KSig sig(2 * n);
    for (int t = 0; t < 2 * n; ++t) sig[t] = a.k[t] + mid.k[t] + b.k[t];
    int qe = k_cross_f(a.k, word_weight(mid.f, n)) + e_cross_k(word_weight(mid.e, n), b.k);
    out.add_term({a.f + mid.f, std::move(sig), mid.e + b.e}, cab * cm * Scalar::q_power(qe));
  };
  if (a.e.empty() || b.f.empty()) {
    combine({b.f, KSig(2 * n, 0), a.e}, Scalar(1));
  } else {
    std::lock_guard lock(mu_);
    for (const auto& [k, c] : straighten(a.e, b.f).terms()) combine(k, c);
  }
  return out;
}

const UTildeAlgebra::Cleared& UTildeAlgebra::straighten_cleared(const Word& e, const Word& f) const {
  std::lock_guard lock(mu_);
  auto key = std::make_pair(e, f);
  if (auto it = cleared_memo_.find(key); it != cleared_memo_.end()) return it->second;
  const UTilde& s = straighten(e, f);
  CommonDenominator cd;
  for (const auto& [k, c] : s.terms()) cd.include(c);
  Cleared out{cd.value(), {}};
  for (const auto& [k, c] : s.terms()) out.terms.emplace_back(k, cd.numerator(c));
  return cleared_memo_.emplace(key, std::move(out)).first->second;
}

UTilde UTildeAlgebra::mul(const UTilde& a, const UTilde& b) const {
  if (a.empty() || b.empty()) return {};
  // Work with numerators over one common denominator so that each output
  // coefficient is reduced once.
  const int n = rank();
  CommonDenominator da, db, ds;
  for (const auto& [k, c] : a.terms()) da.include(c);
  for (const auto& [k, c] : b.terms()) db.include(c);
  std::vector<std::pair<const TermKey*, LaurentPoly>> na, nb;
  for (const auto& [k, c] : a.terms()) na.emplace_back(&k, da.numerator(c));
  for (const auto& [k, c] : b.terms()) nb.emplace_back(&k, db.numerator(c));
  std::map<std::pair<Word, Word>, LaurentPoly> smul;  // lcm / den of each straightening
  for (const auto& [ka, x] : na)
    for (const auto& [kb, y] : nb)
      if (!ka->e.empty() && !kb->f.empty()) {
        auto key = std::make_pair(ka->e, kb->f);
        if (!smul.count(key)) {
          smul.emplace(key, LaurentPoly());
          ds.include(Scalar(LaurentPoly(1), straighten_cleared(ka->e, kb->f).den));
        }
      }
  for (auto& [key, m] : smul) m = ds.numerator(Scalar(LaurentPoly(1), straighten_cleared(key.first, key.second).den));

  std::map<TermKey, LaurentPoly> acc;
  auto combine = [&](const TermKey& ta, const TermKey& mid, const TermKey& tb, const LaurentPoly& c) {
    KSig sig(2 * n);
    for (int t = 0; t < 2 * n; ++t) sig[t] = ta.k[t] + mid.k[t] + tb.k[t];
    int qe = k_cross_f(ta.k, word_weight(mid.f, n)) + e_cross_k(word_weight(mid.e, n), tb.k);
    acc[{ta.f + mid.f, std::move(sig), mid.e + tb.e}] += c.shifted(qe);
  };
  const TermKey trivial{{}, KSig(2 * n, 0), {}};
  for (const auto& [ka, x] : na)
    for (const auto& [kb, y] : nb) {
      const LaurentPoly xy = x * y;
      if (ka->e.empty() || kb->f.empty()) {
        combine(*ka, {kb->f, trivial.k, ka->e}, *kb, xy * ds.value());
        continue;
      }
      const Cleared& s = straighten_cleared(ka->e, kb->f);
      const LaurentPoly xym = xy * smul.at({ka->e, kb->f});
      for (const auto& [mid, c] : s.terms) combine(*ka, mid, *kb, xym * c);
    }
  const LaurentPoly den = da.value() * db.value() * ds.value();
  UTilde out;
  for (auto& [k, c] : acc)
    if (!c.is_zero()) out.add_term(k, Scalar(std::move(c), den));
  return out;
}

UTilde UTildeAlgebra::pow(const UTilde& a, int n) const {
  if (n < 0) throw std::invalid_argument("negative power of a Ũ element");
  UTilde r = one();
  for (int k = 0; k < n; ++k) r = mul(r, a);
  return r;
}

UTilde UTildeAlgebra::commutator(const UTilde& a, const UTilde& b) const { return mul(a, b) - mul(b, a); }

namespace {

struct FKey {
  KSig k;
  Word e;
  friend auto operator<=>(const FKey&, const FKey&) = default;
};

struct EKey {
  Word f;
  KSig k;
  friend auto operator<=>(const EKey&, const EKey&) = default;
};

}  // namespace

UTilde UTildeAlgebra::canonical(const UTilde& x) const {
  std::map<FKey, UPlus> by_ke;
  for (const auto& [k, c] : x.terms()) by_ke[{k.k, k.e}].add_term(k.f, c);
  std::map<EKey, UPlus> by_fk;
  for (const auto& [ke, fpart] : by_ke) {
    const UPlus nf = plus_->normal_form(fpart);
    for (const auto& [f, c] : nf.terms()) by_fk[{f, ke.k}].add_term(ke.e, c);
  }
  UTilde out;
  for (const auto& [fk, epart] : by_fk) {
    const UPlus nf = plus_->normal_form(epart);
    for (const auto& [e, c] : nf.terms()) out.add_term({fk.f, fk.k, e}, c);
  }
  return out;
}

bool UTildeAlgebra::pair_impl(const UTilde& x, std::map<PairingKey, Scalar>* out,
                              std::pair<PairingKey, Scalar>* first) const {
  if (x.empty()) return true;
  const int n = rank();
  CommonDenominator cd;
  for (const auto& [k, c] : x.terms()) cd.include(c);
  // F-side first: group by (F-weight, K, E-word)
  struct Group {
    RootVector fw;
    KSig k;
    Word e;
    auto operator<=>(const Group&) const = default;
  };
  std::map<Group, LaurentElement> by_e;
  for (const auto& [key, c] : x.terms()) by_e[{word_weight(key.f, n), key.k, key.e}].emplace(key.f, cd.numerator(c));
  struct Mid {
    RootVector fw;
    int fv;
    KSig k;
    RootVector ew;
    auto operator<=>(const Mid&) const = default;
  };
  std::map<Mid, LaurentElement> by_f;
  for (const auto& [g, fpart] : by_e) {
    const std::vector<LaurentPoly> vals = plus_->pairings(fpart, g.fw);
    for (std::size_t v = 0; v < vals.size(); ++v) {
      if (vals[v].is_zero()) continue;
      auto& slot = by_f[{g.fw, static_cast<int>(v), g.k, word_weight(g.e, n)}][g.e];
      slot += vals[v];
    }
  }
  for (auto& [m, epart] : by_f) {
    for (auto it = epart.begin(); it != epart.end();) it = it->second.is_zero() ? epart.erase(it) : std::next(it);
    if (!out) {
      if (!first) {
        if (!plus_->pairings_vanish(epart, m.ew)) return false;
        continue;
      }
      if (auto hit = plus_->first_nonzero_pairing(epart, m.ew)) {
        *first = {PairingKey{m.fw, m.fv, m.k, m.ew, static_cast<int>(hit->first)}, Scalar(hit->second, cd.value())};
        return false;
      }
      continue;
    }
    if (epart.empty()) continue;
    const std::vector<LaurentPoly> vals = plus_->pairings(epart, m.ew);
    for (std::size_t v = 0; v < vals.size(); ++v)
      if (!vals[v].is_zero()) out->emplace(PairingKey{m.fw, m.fv, m.k, m.ew, static_cast<int>(v)}, Scalar(vals[v], cd.value()));
  }
  return true;
}

bool UTildeAlgebra::is_zero(const UTilde& x) const { return pair_impl(x, nullptr); }

std::map<PairingKey, Scalar> UTildeAlgebra::pairing_vector(const UTilde& x) const {
  std::map<PairingKey, Scalar> out;
  pair_impl(x, &out);
  return out;
}

std::optional<std::pair<PairingKey, Scalar>> UTildeAlgebra::nonzero_pairing(const UTilde& x) const {
  std::pair<PairingKey, Scalar> hit;
  if (pair_impl(x, nullptr, &hit)) return std::nullopt;
  return hit;
}

UTilde UTildeAlgebra::central_reduce(const UTilde& x) const {
  const int n = rank();
  UTilde out;
  for (const auto& [k, c] : x.terms()) {
    KSig sig = k.k;
    for (int i = 0; i < n; ++i) {
      sig[i] -= sig[n + i];
      sig[n + i] = 0;
    }
    out.add_term({k.f, std::move(sig), k.e}, c);
  }
  return out;
}

UTilde UTildeAlgebra::braid_image(int i, const TermKey& key) const {
  const int n = rank();
  const auto& c = cartan();
  const int eps = c.eps(i);
  std::lock_guard lock(mu_);

  auto gen_e = [&](int j) {
    if (j == i) return mul(F(i), Kp(i, -1)) * Scalar(-1);
    const int m = -c.a(i, j);
    UTilde s;
    for (int r = 0; r <= m; ++r) {
      UPlus t = plus_->divided_power(i, m - r) * UPlus::gen(j) * plus_->divided_power(i, r);
      Scalar coeff = Scalar::q_power(-eps * r);
      if (r % 2) coeff = -coeff;
      s += from_uplus(t) * coeff;
    }
    return s;
  };
  auto gen_f = [&](int j) {
    if (j == i) return mul(Kt(i, -1), E(i)) * Scalar(-1);
    const int m = -c.a(i, j);
    UTilde s;
    for (int r = 0; r <= m; ++r) {
      UPlus t = plus_->divided_power(i, r) * UPlus::gen(j) * plus_->divided_power(i, m - r);
      Scalar coeff = Scalar::q_power(eps * r);
      if (r % 2) coeff = -coeff;
      s += from_uminus(t) * coeff;
    }
    return s;
  };
  // Images of words, memoized by prefix.
  auto word_image = [&](auto& memo, const Word& w, auto&& gen) -> UTilde {
    UTilde acc = one();
    std::size_t start = 0;
    for (std::size_t len = w.size(); len > 0; --len) {
      auto it = memo.find({i, w.substr(0, len)});
      if (it != memo.end()) {
        acc = it->second;
        start = len;
        break;
      }
    }
    for (std::size_t p = start; p < w.size(); ++p) {
      acc = mul(acc, gen(static_cast<unsigned char>(w[p])));
      memo.emplace(std::make_pair(i, w.substr(0, p + 1)), acc);
    }
    return acc;
  };

  KSig sig(2 * n);
  {
    RootVector kt(key.k.begin(), key.k.begin() + n), kp(key.k.begin() + n, key.k.end());
    kt = c.reflect(i, kt);
    kp = c.reflect(i, kp);
    for (int t = 0; t < n; ++t) {
      sig[t] = kt[t];
      sig[n + t] = kp[t];
    }
  }
  UTilde fi = key.f.empty() ? one() : word_image(braid_f_memo_, key.f, gen_f);
  UTilde ei = key.e.empty() ? one() : word_image(braid_e_memo_, key.e, gen_e);
  return mul(mul(fi, K(sig)), ei);
}

UTilde UTildeAlgebra::braid_T(int i, const UTilde& x) const {
  UTilde out;
  for (const auto& [k, c] : x.terms()) out += braid_image(i, k) * c;
  return out;
}

UTilde UTildeAlgebra::braid_Tw(const ReducedWord& w, const UTilde& x) const {
  UTilde y = x;
  for (auto it = w.rbegin(); it != w.rend(); ++it) y = braid_T(*it, y);
  return y;
}

UPlus UTildeAlgebra::as_uplus(const UTilde& x) const {
  auto pure = [&](const UTilde& y) {
    for (const auto& [k, c] : y.terms()) {
      if (!k.f.empty()) return false;
      for (int v : k.k)
        if (v != 0) return false;
    }
    return true;
  };
  const UTilde* src = &x;
  UTilde can;
  if (!pure(x)) {
    can = canonical(x);
    src = &can;
    if (!pure(can)) {
      UTilde bad;
      for (const auto& [k, c] : can.terms()) {
        bool ok = k.f.empty();
        for (int v : k.k) ok = ok && v == 0;
        if (!ok) bad.add_term(k, c);
      }
      throw std::invalid_argument("element has F or K content: " + bad.to_string(20));
    }
  }
  UPlus out;
  for (const auto& [k, c] : src->terms()) out.add_term(k.e, c);
  return out;
}

}  // namespace iserre
