#include "iserre/uplus.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace iserre {

Word make_word(std::initializer_list<int> letters) {
  Word w;
  for (int l : letters) w.push_back(static_cast<char>(l));
  return w;
}

RootVector word_weight(const Word& w, int rank) {
  RootVector v(rank, 0);
  for (char c : w) ++v[static_cast<unsigned char>(c)];
  return v;
}

std::string word_string(const Word& w, char letter) {
  std::string s;
  for (std::size_t k = 0; k < w.size();) {
    std::size_t l = k;
    while (l < w.size() && w[l] == w[k]) ++l;
    if (!s.empty()) s += '*';
    s += letter;
    s += '[' + std::to_string(static_cast<unsigned char>(w[k]) + 1) + ']';
    if (l - k > 1) s += '^' + std::to_string(l - k);
    k = l;
  }
  return s;
}

// ---------------------------------------------------------------------------
// UPlus

UPlus UPlus::word(const Word& w, const Scalar& c) {
  UPlus x;
  x.add_term(w, c);
  return x;
}

void UPlus::add_term(const Word& w, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

UPlus& UPlus::operator+=(const UPlus& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

UPlus& UPlus::operator-=(const UPlus& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

UPlus& UPlus::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, x] : terms_) x *= c;
  return *this;
}

UPlus operator*(const UPlus& a, const UPlus& b) {
  UPlus r;
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) r.add_term(wa + wb, ca * cb);
  return r;
}

std::map<RootVector, UPlus> UPlus::components(int rank) const {
  std::map<RootVector, UPlus> out;
  for (const auto& [w, c] : terms_) out[word_weight(w, rank)].terms_.emplace(w, c);
  return out;
}

std::string UPlus::to_string(char letter) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [w, c] : terms_) append_term(out, c, word_string(w, letter));
  return out;
}

// ---------------------------------------------------------------------------
// Sparse vectors

void axpy(SparseVec& y, const Scalar& a, const SparseVec& x) {
  if (a.is_zero() || x.empty()) return;
  SparseVec out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, a * x[j].second);
      ++j;
    } else {
      Scalar s = y[i].second + a * x[j].second;
      if (!s.is_zero()) out.emplace_back(y[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

SparseVec scaled(const SparseVec& x, const Scalar& a) {
  SparseVec out;
  if (a.is_zero()) return out;
  out.reserve(x.size());
  for (const auto& [k, v] : x) out.emplace_back(k, v * a);
  return out;
}

// ---------------------------------------------------------------------------
// UPlusAlgebra

struct UPlusAlgebra::WeightData {
  bool built = false;
  std::vector<Word> standard;                    // ascending
  std::unordered_map<Word, int> index;           // standard word -> position
  std::unordered_map<Word, SparseVec> rules;     // nonstandard candidate -> coordinates
  std::unordered_map<Word, SparseVec> nf_memo;   // other words
};

UPlusAlgebra::UPlusAlgebra(CartanDatum c) : cartan_(std::move(c)) {}
UPlusAlgebra::~UPlusAlgebra() = default;

UPlus UPlusAlgebra::r(int i, const UPlus& x) const {
  UPlus out;
  for (const auto& [w, c] : x.terms()) {
    // letters after position p contribute q^{i . weight}
    int exp = 0;
    for (std::size_t p = w.size(); p-- > 0;) {
      int l = static_cast<unsigned char>(w[p]);
      if (l == i) out.add_term(w.substr(0, p) + w.substr(p + 1), c * Scalar::q_power(exp));
      exp += cartan_.dot(i, l);
    }
  }
  return out;
}

UPlus UPlusAlgebra::rl(int i, const UPlus& x) const {
  UPlus out;
  for (const auto& [w, c] : x.terms()) {
    int exp = 0;
    for (std::size_t p = 0; p < w.size(); ++p) {
      int l = static_cast<unsigned char>(w[p]);
      if (l == i) out.add_term(w.substr(0, p) + w.substr(p + 1), c * Scalar::q_power(exp));
      exp += cartan_.dot(i, l);
    }
  }
  return out;
}

UPlus UPlusAlgebra::divided_power(int i, int n) const {
  if (n < 0) return {};
  return UPlus::word(Word(n, static_cast<char>(i)), q_factorial(n, cartan_.eps(i)).inv());
}

UPlus UPlusAlgebra::serre_element(int i, int j) const {
  if (i == j) throw std::invalid_argument("serre_element requires i != j");
  const int m = 1 - cartan_.a(i, j);
  UPlus out;
  for (int r = 0; r <= m; ++r) {
    UPlus t = divided_power(i, r) * UPlus::gen(j) * divided_power(i, m - r);
    if (r % 2) t *= Scalar(-1);
    out += t;
  }
  return out;
}

UPlusAlgebra::WeightData& UPlusAlgebra::data(const RootVector& nu) const {
  std::lock_guard lock(mu_);
  auto& slot = cache_[nu];
  if (!slot) slot = std::make_unique<WeightData>();
  if (!slot->built) build(nu, *slot);
  return *slot;
}

void UPlusAlgebra::build(const RootVector& nu, WeightData& d) const {
  int height = 0;
  for (int x : nu) {
    if (x < 0) throw std::invalid_argument("negative weight");
    height += x;
  }
  auto add_standard = [&](const Word& w) {
    d.index.emplace(w, static_cast<int>(d.standard.size()));
    d.standard.push_back(w);
  };
  if (height <= 1) {
    Word w;
    for (int k = 0; k < rank(); ++k)
      if (nu[k] == 1) w.push_back(static_cast<char>(k));
    add_standard(w);
    d.built = true;
    return;
  }
  // Candidates: standard word of weight nu - alpha_k followed by k, whose
  // tail after the first letter is standard as well.
  std::vector<Word> candidates;
  for (int k = 0; k < rank(); ++k) {
    if (nu[k] == 0) continue;
    RootVector lower = nu;
    --lower[k];
    for (const Word& s : data(lower).standard) {
      Word c = s + static_cast<char>(k);
      RootVector tail = nu;
      --tail[static_cast<unsigned char>(c[0])];
      if (data(tail).index.count(c.substr(1))) candidates.push_back(std::move(c));
    }
  }
  std::sort(candidates.begin(), candidates.end());

  struct Row {
    SparseVec v;     // fingerprint
    SparseVec elem;  // coordinates over the standard words found so far
  };
  std::unordered_map<int, Row> pivots;
  for (const Word& c : candidates) {
    SparseVec v = word_fingerprint(c, nu);
    SparseVec elem;
    while (!v.empty()) {
      auto it = pivots.find(v.front().first);
      if (it == pivots.end()) break;
      Scalar f = -v.front().second;
      axpy(v, f, it->second.v);
      axpy(elem, f, it->second.elem);
    }
    if (v.empty()) {
      d.rules.emplace(c, scaled(elem, Scalar(-1)));
    } else {
      int s = static_cast<int>(d.standard.size());
      add_standard(c);
      elem.emplace_back(s, Scalar(1));
      Scalar f = v.front().second.inv();
      int key = v.front().first;
      pivots.emplace(key, Row{scaled(v, f), scaled(elem, f)});
    }
  }
  d.built = true;
}

const SparseVec& UPlusAlgebra::nf(const Word& w, const RootVector& nu) const {
  std::lock_guard lock(mu_);
  WeightData& d = data(nu);
  static const SparseVec unit{{0, Scalar(1)}};
  if (auto it = d.index.find(w); it != d.index.end()) {
    // standard words map to unit vectors; memoize to return a stable reference
    auto [m, ins] = d.nf_memo.try_emplace(w);
    if (ins) m->second = SparseVec{{it->second, Scalar(1)}};
    return m->second;
  }
  if (auto it = d.rules.find(w); it != d.rules.end()) return it->second;
  if (auto it = d.nf_memo.find(w); it != d.nf_memo.end()) return it->second;
  if (w.size() <= 1) return unit;

  SparseVec out;
  const Word prefix = w.substr(0, w.size() - 1);
  const int last = static_cast<unsigned char>(w.back());
  RootVector pre_nu = nu;
  --pre_nu[last];
  WeightData& pre = data(pre_nu);
  if (!pre.index.count(prefix)) {
    SparseVec coeffs = nf(prefix, pre_nu);
    for (const auto& [k, c] : coeffs) axpy(out, c, nf(pre.standard[k] + static_cast<char>(last), nu));
  } else {
    const int first = static_cast<unsigned char>(w[0]);
    RootVector suf_nu = nu;
    --suf_nu[first];
    SparseVec coeffs = nf(w.substr(1), suf_nu);
    WeightData& suf = data(suf_nu);
    for (const auto& [k, c] : coeffs) axpy(out, c, nf(static_cast<char>(first) + suf.standard[k], nu));
  }
  return d.nf_memo.emplace(w, std::move(out)).first->second;
}

SparseVec UPlusAlgebra::word_fingerprint(const Word& w, const RootVector& nu) const {
  SparseVec out;
  int offset = 0;
  for (int i = 0; i < rank(); ++i) {
    if (nu[i] == 0) continue;
    RootVector lower = nu;
    --lower[i];
    int exp = 0;
    for (std::size_t p = 0; p < w.size(); ++p) {
      int l = static_cast<unsigned char>(w[p]);
      if (l == i) {
        SparseVec part = nf(w.substr(0, p) + w.substr(p + 1), lower);
        for (auto& e : part) e.first += offset;
        axpy(out, Scalar::q_power(exp), part);
      }
      exp += cartan_.dot(i, l);
    }
    offset += static_cast<int>(data(lower).standard.size());
  }
  return out;
}

SparseVec UPlusAlgebra::fingerprint(const UPlus& x, const RootVector& nu) const {
  SparseVec out;
  for (const auto& [w, c] : x.terms()) {
    if (word_weight(w, rank()) != nu) throw std::invalid_argument("fingerprint: element is not homogeneous");
    axpy(out, c, word_fingerprint(w, nu));
  }
  return out;
}

bool UPlusAlgebra::is_zero_by_elimination(const UPlus& x) const {
  for (const auto& [nu, comp] : x.components(rank())) {
    bool zero_weight = std::all_of(nu.begin(), nu.end(), [](int v) { return v == 0; });
    if (zero_weight) {
      if (!comp.empty()) return false;  // a single empty-word term with nonzero coefficient
      continue;
    }
    if (!fingerprint(comp, nu).empty()) return false;
  }
  return true;
}

bool UPlusAlgebra::is_zero(const UPlus& x) const {
  for (const auto& [nu, comp] : x.components(rank()))
    if (!pairings_vanish(clear_denominators(comp), nu)) return false;
  return true;
}

bool UPlusAlgebra::is_zero_by_descent(const UPlus& x) const {
  for (const auto& [nu, comp] : x.components(rank())) {
    bool zero_weight = std::all_of(nu.begin(), nu.end(), [](int v) { return v == 0; });
    if (zero_weight) {
      if (!comp.empty()) return false;
      continue;
    }
    for (int i = 0; i < rank(); ++i)
      if (nu[i] > 0 && !is_zero_by_descent(rl(i, comp))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Dimensions from the denominator identity

std::int64_t graded_dimension(const CartanDatum& c, const RootVector& nu) {
  const int n = c.rank();
  if (static_cast<int>(nu.size()) != n) throw std::invalid_argument("graded_dimension: weight has the wrong rank");
  for (int v : nu)
    if (v < 0) return 0;
  auto below = [&](const RootVector& d) {
    for (int k = 0; k < n; ++k)
      if (d[k] > nu[k]) return false;
    return true;
  };
  // rho - w rho for the Weyl group elements w with rho - w rho <= nu, with the
  // sign (-1)^l(w). Going up in the weak order strictly increases rho - w rho,
  // so pruning at nu loses nothing.
  std::map<RootVector, int> sign;
  std::deque<RootVector> todo{RootVector(n, 0)};
  sign[todo.front()] = 1;
  while (!todo.empty()) {
    RootVector d = todo.front();
    todo.pop_front();
    for (int i = 0; i < n; ++i) {
      int pair = 0;
      for (int j = 0; j < n; ++j) pair += c.a(i, j) * d[j];
      if (1 - pair <= 0) continue;  // s_i w is shorter
      RootVector e = d;
      e[i] += 1 - pair;
      if (!below(e) || sign.count(e)) continue;
      sign[e] = -sign[d];
      todo.push_back(e);
    }
  }
  // sum_mu P(mu) e^{-mu} times sum_w sign(w) e^{-(rho - w rho)} = 1
  std::map<RootVector, std::int64_t> memo;
  auto count = [&](auto&& self, const RootVector& mu) -> std::int64_t {
    if (auto it = memo.find(mu); it != memo.end()) return it->second;
    std::int64_t total = std::all_of(mu.begin(), mu.end(), [](int v) { return v == 0; }) ? 1 : 0;
    for (const auto& [d, sg] : sign) {
      if (std::all_of(d.begin(), d.end(), [](int v) { return v == 0; })) continue;
      RootVector rest = mu;
      bool ok = true;
      for (int k = 0; k < n; ++k)
        if ((rest[k] -= d[k]) < 0) ok = false;
      if (ok) total -= sg * self(self, rest);
    }
    return memo[mu] = total;
  };
  return count(count, nu);
}

// ---------------------------------------------------------------------------
// Laurent elements and the pairing zero test

LaurentElement clear_denominators(const UPlus& x, LaurentPoly* den) {
  CommonDenominator cd;
  for (const auto& [w, c] : x.terms()) cd.include(c);
  LaurentElement out;
  out.reserve(x.size());
  for (const auto& [w, c] : x.terms()) out.emplace(w, cd.numerator(c));
  if (den) *den = cd.value();
  return out;
}

namespace {

LaurentElement left_derivation(const CartanDatum& c, int i, const LaurentElement& x) {
  LaurentElement out;
  out.reserve(x.size() * 2);
  for (const auto& [w, v] : x) {
    int exp = 0;
    for (std::size_t p = 0; p < w.size(); ++p) {
      int l = static_cast<unsigned char>(w[p]);
      if (l == i) {
        Word sub = w;
        sub.erase(p, 1);
        auto [it, fresh] = out.try_emplace(std::move(sub));
        it->second += v.shifted(exp);
      }
      exp += c.dot(i, l);
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

// Walks the prefix tree of the sorted words [lo, hi) that agree up to `depth`.
// Returns false as soon as a nonzero value is met when `out` is null.
bool walk(const CartanDatum& c, const std::vector<Word>& words, std::size_t lo, std::size_t hi, std::size_t depth,
          const LaurentElement& y, std::vector<LaurentPoly>* out, std::pair<std::size_t, LaurentPoly>* first = nullptr) {
  if (y.empty()) return true;
  if (depth == words[lo].size()) {
    auto it = y.find(Word{});
    if (it == y.end()) return true;
    if (out) (*out)[lo] = it->second;
    else if (first) *first = {lo, it->second};
    return out != nullptr;
  }
  for (std::size_t a = lo; a < hi;) {
    std::size_t b = a;
    while (b < hi && words[b][depth] == words[a][depth]) ++b;
    const LaurentElement z = left_derivation(c, static_cast<unsigned char>(words[a][depth]), y);
    if (!walk(c, words, a, b, depth + 1, z, out, first)) return false;
    a = b;
  }
  return true;
}

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(z & kPrime) + static_cast<std::uint64_t>(z >> 61);
  while (r >= kPrime) r -= kPrime;
  return r;
}

std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mod_mul(a, a))
    if (e & 1) r = mod_mul(r, a);
  return r;
}

std::uint64_t mod_inv(std::uint64_t a) { return mod_pow(a, kPrime - 2); }

using ModVec = std::vector<std::pair<int, std::uint64_t>>;

void mod_axpy(ModVec& y, std::uint64_t a, const ModVec& x) {
  if (a == 0 || x.empty()) return;
  ModVec out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, mod_mul(a, x[j].second));
      ++j;
    } else {
      std::uint64_t s = y[i].second + mod_mul(a, x[j].second);
      if (s >= kPrime) s -= kPrime;
      if (s) out.emplace_back(y[i].first, s);
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

}  // namespace

// The standard-word elimination over Z/p with q specialized to a fixed value.
// Words independent here are independent over Q(q).
class UPlusAlgebra::ModularDual {
 public:
  ModularDual(const CartanDatum& c, std::uint64_t qval) : c_(c), q_(qval), qinv_(mod_inv(qval)) {}

  const std::vector<Word>& basis(const RootVector& nu) { return data(nu).standard; }

 private:
  struct Data {
    bool built = false;
    std::vector<Word> standard;
    std::unordered_map<Word, int> index;
    std::unordered_map<Word, ModVec> rules, memo;
  };

  std::uint64_t qpow(int e) {
    auto it = qpow_.find(e);
    if (it != qpow_.end()) return it->second;
    return qpow_[e] = mod_pow(e >= 0 ? q_ : qinv_, static_cast<std::uint64_t>(e >= 0 ? e : -e));
  }

  Data& data(const RootVector& nu) {
    auto& slot = cache_[nu];
    if (!slot) slot = std::make_unique<Data>();
    if (!slot->built) build(nu, *slot);
    return *slot;
  }

  void build(const RootVector& nu, Data& d) {
    const int n = c_.rank();
    int height = 0;
    for (int x : nu) height += x;
    auto add_standard = [&](const Word& w) {
      d.index.emplace(w, static_cast<int>(d.standard.size()));
      d.standard.push_back(w);
    };
    if (height <= 1) {
      Word w;
      for (int k = 0; k < n; ++k)
        if (nu[k] == 1) w.push_back(static_cast<char>(k));
      add_standard(w);
      d.built = true;
      return;
    }
    std::vector<Word> candidates;
    for (int k = 0; k < n; ++k) {
      if (nu[k] == 0) continue;
      RootVector lower = nu;
      --lower[k];
      for (const Word& s : data(lower).standard) {
        Word cand = s + static_cast<char>(k);
        RootVector tail = nu;
        --tail[static_cast<unsigned char>(cand[0])];
        if (data(tail).index.count(cand.substr(1))) candidates.push_back(std::move(cand));
      }
    }
    std::sort(candidates.begin(), candidates.end());
    struct Row {
      ModVec v, elem;
    };
    std::unordered_map<int, Row> pivots;
    for (const Word& cand : candidates) {
      ModVec v = fingerprint(cand, nu), elem;
      while (!v.empty()) {
        auto it = pivots.find(v.front().first);
        if (it == pivots.end()) break;
        std::uint64_t f = kPrime - v.front().second;
        mod_axpy(v, f, it->second.v);
        mod_axpy(elem, f, it->second.elem);
      }
      if (v.empty()) {
        for (auto& e : elem) e.second = e.second ? kPrime - e.second : 0;
        d.rules.emplace(cand, std::move(elem));
      } else {
        int s = static_cast<int>(d.standard.size());
        add_standard(cand);
        elem.emplace_back(s, 1);
        std::uint64_t f = mod_inv(v.front().second);
        for (auto& e : v) e.second = mod_mul(e.second, f);
        for (auto& e : elem) e.second = mod_mul(e.second, f);
        int key = v.front().first;
        pivots.emplace(key, Row{std::move(v), std::move(elem)});
      }
    }
    d.built = true;
  }

  const ModVec& nf(const Word& w, const RootVector& nu) {
    Data& d = data(nu);
    if (auto it = d.memo.find(w); it != d.memo.end()) return it->second;
    if (auto it = d.rules.find(w); it != d.rules.end()) return it->second;
    ModVec out;
    if (auto it = d.index.find(w); it != d.index.end()) {
      out.emplace_back(it->second, 1);
    } else if (w.size() <= 1) {
      out.emplace_back(0, 1);
    } else {
      const Word prefix = w.substr(0, w.size() - 1);
      const int last = static_cast<unsigned char>(w.back());
      RootVector pre_nu = nu;
      --pre_nu[last];
      Data& pre = data(pre_nu);
      if (!pre.index.count(prefix)) {
        const ModVec coeffs = nf(prefix, pre_nu);
        for (const auto& [k, c] : coeffs) mod_axpy(out, c, nf(pre.standard[k] + static_cast<char>(last), nu));
      } else {
        const int first = static_cast<unsigned char>(w[0]);
        RootVector suf_nu = nu;
        --suf_nu[first];
        const ModVec coeffs = nf(w.substr(1), suf_nu);
        Data& suf = data(suf_nu);
        for (const auto& [k, c] : coeffs) mod_axpy(out, c, nf(static_cast<char>(first) + suf.standard[k], nu));
      }
    }
    return d.memo.emplace(w, std::move(out)).first->second;
  }

  ModVec fingerprint(const Word& w, const RootVector& nu) {
    ModVec out;
    int offset = 0;
    for (int i = 0; i < c_.rank(); ++i) {
      if (nu[i] == 0) continue;
      RootVector lower = nu;
      --lower[i];
      int exp = 0;
      for (std::size_t p = 0; p < w.size(); ++p) {
        int l = static_cast<unsigned char>(w[p]);
        if (l == i) {
          ModVec part = nf(w.substr(0, p) + w.substr(p + 1), lower);
          for (auto& e : part) e.first += offset;
          mod_axpy(out, qpow(exp), part);
        }
        exp += c_.dot(i, l);
      }
      offset += static_cast<int>(data(lower).standard.size());
    }
    return out;
  }

  const CartanDatum& c_;
  std::uint64_t q_, qinv_;
  std::unordered_map<int, std::uint64_t> qpow_;
  std::map<RootVector, std::unique_ptr<Data>> cache_;
};

std::vector<Word> UPlusAlgebra::test_words(const RootVector& nu) const {
  std::lock_guard lock(mu_);
  if (static_cast<int>(nu.size()) != rank()) throw std::invalid_argument("test_words: weight has the wrong rank");
  if (std::all_of(nu.begin(), nu.end(), [](int v) { return v == 0; })) return {Word{}};
  const std::int64_t dim = graded_dimension(cartan_, nu);
  // fixed sample points for q; a rank drop at one of them is astronomically unlikely
  static constexpr std::uint64_t kSamples[] = {0x1d2b3c4d5e6f7081ULL % kPrime, 0x0f1e2d3c4b5a6978ULL % kPrime,
                                               0x123456789abcdefULL % kPrime};
  for (std::size_t attempt = 0; attempt < std::size(kSamples); ++attempt) {
    if (!dual_) dual_ = std::make_unique<ModularDual>(cartan_, kSamples[dual_attempt_]);
    std::vector<Word> words = dual_->basis(nu);
    if (static_cast<std::int64_t>(words.size()) == dim) return words;
    dual_.reset();
    dual_attempt_ = (dual_attempt_ + 1) % std::size(kSamples);
  }
  throw std::runtime_error("test_words: could not certify a dual basis");
}

std::vector<LaurentPoly> UPlusAlgebra::pairings(const LaurentElement& x, const RootVector& nu) const {
  const std::vector<Word> words = test_words(nu);
  std::vector<LaurentPoly> out(words.size());
  for (const auto& [w, c] : x)
    if (word_weight(w, rank()) != nu) throw std::invalid_argument("pairings: element is not homogeneous of the given weight");
  walk(cartan_, words, 0, words.size(), 0, x, &out);
  return out;
}

bool UPlusAlgebra::pairings_vanish(const LaurentElement& x, const RootVector& nu) const {
  if (x.empty()) return true;
  const std::vector<Word> words = test_words(nu);
  return walk(cartan_, words, 0, words.size(), 0, x, nullptr);
}

std::optional<std::pair<std::size_t, LaurentPoly>> UPlusAlgebra::first_nonzero_pairing(const LaurentElement& x,
                                                                                      const RootVector& nu) const {
  if (x.empty()) return std::nullopt;
  const std::vector<Word> words = test_words(nu);
  std::pair<std::size_t, LaurentPoly> hit;
  if (walk(cartan_, words, 0, words.size(), 0, x, nullptr, &hit)) return std::nullopt;
  return hit;
}

std::vector<Word> UPlusAlgebra::basis(const RootVector& nu) const {
  std::lock_guard lock(mu_);
  return data(nu).standard;
}

SparseVec UPlusAlgebra::word_coordinates(const Word& w) const {
  std::lock_guard lock(mu_);
  return nf(w, word_weight(w, rank()));
}

SparseVec UPlusAlgebra::coordinates(const UPlus& x, const RootVector& nu) const {
  std::lock_guard lock(mu_);
  SparseVec out;
  for (const auto& [w, c] : x.terms()) {
    if (word_weight(w, rank()) != nu) throw std::invalid_argument("coordinates: element is not homogeneous of the given weight");
    axpy(out, c, nf(w, nu));
  }
  return out;
}

UPlus UPlusAlgebra::normal_form(const UPlus& x) const {
  std::lock_guard lock(mu_);
  UPlus out;
  for (const auto& [nu, comp] : x.components(rank())) {
    SparseVec v = coordinates(comp, nu);
    const auto& b = data(nu).standard;
    for (const auto& [k, c] : v) out.add_term(b[k], c);
  }
  return out;
}

std::size_t UPlusAlgebra::cached_weights() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

namespace {

std::string cartan_tag(const CartanDatum& c) {
  std::ostringstream os;
  for (const auto& row : c.matrix()) {
    for (int v : row) os << v << ',';
    os << ';';
  }
  for (int e : c.epsilons()) os << e << ',';
  return os.str();
}

nlohmann::json encode_vec(const SparseVec& v) {
  auto arr = nlohmann::json::array();
  for (const auto& [k, c] : v) arr.push_back({k, serialize(c)});
  return arr;
}

SparseVec decode_vec(const nlohmann::json& j) {
  SparseVec v;
  for (const auto& e : j) v.emplace_back(e.at(0).get<int>(), deserialize_scalar(e.at(1).get<std::string>()));
  return v;
}

std::string encode_word(const Word& w) {
  std::string s;
  for (char c : w) s += std::to_string(static_cast<unsigned char>(c)) + ".";
  return s;
}

Word decode_word(const std::string& s) {
  Word w;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t dot = s.find('.', pos);
    if (dot == std::string::npos) throw std::invalid_argument("bad word encoding");
    w.push_back(static_cast<char>(std::stoi(s.substr(pos, dot - pos))));
    pos = dot + 1;
  }
  return w;
}

}  // namespace

std::string UPlusAlgebra::export_cache() const {
  std::lock_guard lock(mu_);
  nlohmann::json j;
  j["cartan"] = cartan_tag(cartan_);
  auto weights = nlohmann::json::array();
  for (const auto& [nu, d] : cache_) {
    if (!d || !d->built) continue;
    nlohmann::json e;
    e["weight"] = nu;
    auto std_words = nlohmann::json::array();
    for (const auto& w : d->standard) std_words.push_back(encode_word(w));
    e["standard"] = std_words;
    std::map<Word, SparseVec> sorted(d->rules.begin(), d->rules.end());
    auto rules = nlohmann::json::array();
    for (const auto& [w, v] : sorted) rules.push_back({encode_word(w), encode_vec(v)});
    e["rules"] = rules;
    weights.push_back(e);
  }
  j["weights"] = weights;
  return j.dump();
}

bool UPlusAlgebra::import_cache(const std::string& text) {
  std::lock_guard lock(mu_);
  try {
    auto j = nlohmann::json::parse(text);
    if (j.at("cartan").get<std::string>() != cartan_tag(cartan_)) return false;
    std::map<RootVector, std::unique_ptr<WeightData>> loaded;
    for (const auto& e : j.at("weights")) {
      auto nu = e.at("weight").get<RootVector>();
      if (static_cast<int>(nu.size()) != rank()) return false;
      auto d = std::make_unique<WeightData>();
      for (const auto& w : e.at("standard")) {
        Word word = decode_word(w.get<std::string>());
        d->index.emplace(word, static_cast<int>(d->standard.size()));
        d->standard.push_back(word);
      }
      for (const auto& r : e.at("rules")) d->rules.emplace(decode_word(r.at(0).get<std::string>()), decode_vec(r.at(1)));
      d->built = true;
      loaded[nu] = std::move(d);
    }
    for (auto& [nu, d] : loaded)
      if (!cache_.count(nu) || !cache_[nu]->built) cache_[nu] = std::move(d);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace iserre
