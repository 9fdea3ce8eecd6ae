#include "iserre/relcheck.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <set>
#include <thread>

namespace iserre {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::verified: return "verified";
    case Verdict::refuted: return "refuted";
    default: return "unsupported";
  }
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["relation"] = relation;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  j["verdict"] = to_string(verdict);
  if (!note.empty()) j["note"] = note;
  j["element_terms"] = element_terms;
  if (verdict == Verdict::refuted) {
    j["witness_kind"] = witness_kind;
    j["witness_terms"] = witness_terms;
    j["witness"] = witness;
  }
  if (timing) j["seconds"] = seconds;
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string idx(int i) { return std::to_string(i + 1); }

int qi_pow(const IQGContext& ctx, int i, int e) { return ctx.cartan().eps(i) * e; }

// Fills verdict, counts and witness from the element that should vanish.
std::string word_indices(const Word& w) {
  std::string s;
  for (char c : w) s += (s.empty() ? "" : ".") + std::to_string(static_cast<unsigned char>(c) + 1);
  return s.empty() ? "()" : s;
}

std::string weight_string(const RootVector& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s + ")";
}

std::int64_t largest_dimension(const UTildeAlgebra& alg, const UTilde& x) {
  const int n = alg.rank();
  std::set<RootVector> weights;
  for (const auto& [k, c] : x.terms()) {
    weights.insert(word_weight(k.f, n));
    weights.insert(word_weight(k.e, n));
  }
  std::int64_t d = 0;
  for (const auto& w : weights) d = std::max(d, graded_dimension(alg.cartan(), w));
  return d;
}

void witness(Report& r, const UTildeAlgebra& alg, const UTilde& x, const CheckOptions& o) {
  if (largest_dimension(alg, x) <= o.witness_dim_limit) {
    const UTilde w = alg.canonical(x);
    r.witness_kind = "normal_form";
    r.witness_terms = w.size();
    r.witness = w.to_string(o.witness_terms);
    return;
  }
  // too large for the exact normal form: one nonzero coordinate suffices
  const auto hit = alg.nonzero_pairing(x);
  const auto& [key, value] = *hit;
  const int n = alg.rank();
  std::string k;
  for (int i = 0; i < 2 * n; ++i)
    k += (i ? "," : "") + std::to_string(key.k[i]);
  r.witness_kind = "pairing";
  r.witness_terms = 1;
  r.witness = "F-weight " + weight_string(key.fw) + " test word " + word_indices(alg.plus().test_words(key.fw)[key.fv]) +
              ", K exponents (" + k + "), E-weight " + weight_string(key.ew) + " test word " +
              word_indices(alg.plus().test_words(key.ew)[key.ev]) + ": " + value.to_string();
}

void conclude(Report& r, const UTildeAlgebra& alg, const UTilde& x, const CheckOptions& o,
              Clock::time_point start) {
  r.element_terms = x.size();
  const bool zero = alg.is_zero(x);
  r.verdict = zero ? Verdict::verified : Verdict::refuted;
  if (!zero) witness(r, alg, x, o);
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.timing = o.timing;
}

Report base(const std::string& rel, const IQGContext& ctx, std::vector<std::pair<std::string, std::string>> params) {
  Report r;
  r.relation = rel;
  r.params = std::move(params);
  r.params.emplace_back("mode", to_string(ctx.mode()));
  return r;
}

// Runs body; precondition failures become "unsupported".
template <class F>
Report guarded(Report r, const CheckOptions& o, F&& body) {
  const auto start = Clock::now();
  try {
    body(r, start);
  } catch (const UnsupportedCase& e) {
    r.verdict = Verdict::unsupported;
    r.note = e.what();
  } catch (const std::invalid_argument& e) {
    r.verdict = Verdict::unsupported;
    r.note = e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.timing = o.timing;
  return r;
}

void require_pair(const IQGContext& ctx, int i, int j) {
  ctx.require_fixed_white(i);
  if (j < 0 || j >= ctx.satake().rank() || ctx.satake().is_bullet(j))
    throw std::invalid_argument("j = " + idx(j) + " is not a white node");
  if (i == j) throw std::invalid_argument("i and j must differ");
}

}  // namespace

UTilde iserre_element(const IQGContext& ctx, int i, int j, int n, int p, int u) {
  require_pair(ctx, i, j);
  if (n < 0 || u < 0) throw std::invalid_argument("n and u must be nonnegative");
  const int A = n * ctx.cartan().a(i, j);
  const int deg = 1 - A + 2 * u;
  const int p2 = ((p + A) % 2 + 2) % 2;
  const UTilde bj = ctx.Bpow(j, n);
  UTilde out;
  for (int r = 0; r <= deg; ++r) {
    const UTilde left = ctx.idp(i, r, p), right = ctx.idp(i, deg - r, p2);
    UTilde t = ctx.mul({&left, &bj, &right});
    out += r % 2 ? t * Scalar(-1) : t;
  }
  return out;
}

Report check_iserre(const IQGContext& ctx, int i, int j, int n, int p, const CheckOptions& o) {
  Report r = base("iserre", ctx, {{"i", idx(i)}, {"j", idx(j)}, {"n", std::to_string(n)}, {"parity", std::to_string(p & 1)}});
  return guarded(std::move(r), o, [&](Report& rep, Clock::time_point start) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    conclude(rep, ctx.alg(), iserre_element(ctx, i, j, n, p & 1, 0), o, start);
  });
}

Report check_nstd(const IQGContext& ctx, int i, int j, int n, int u, int p, const CheckOptions& o) {
  Report r = base("nstd", ctx,
                  {{"i", idx(i)}, {"j", idx(j)}, {"n", std::to_string(n)}, {"u", std::to_string(u)}, {"parity", std::to_string(p & 1)}});
  return guarded(std::move(r), o, [&](Report& rep, Clock::time_point start) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    conclude(rep, ctx.alg(), iserre_element(ctx, i, j, n, p & 1, u), o, start);
  });
}

Report check_recursion(const IQGContext& ctx, int i, int j, int n, int m, int p, int t, int e, JPower jp,
                       const CheckOptions& o) {
  Report r = base("recursion", ctx,
                  {{"i", idx(i)}, {"j", idx(j)}, {"n", std::to_string(n)}, {"m", std::to_string(m)}, {"parity", std::to_string(p & 1)},
                   {"t", std::to_string(t & 1)}, {"e", std::to_string(e)}, {"jpower", to_string(jp)}});
  return guarded(std::move(r), o, [&](Report& rep, Clock::time_point start) {
    require_pair(ctx, i, j);
    const auto& U = ctx.alg();
    const int A = n * ctx.cartan().a(i, j);
    const int eps = ctx.cartan().eps(i);
    const UTilde y = ctx.y_tilde(i, j, n, m, p & 1, t & 1, e, jp);
    const UTilde y_up = ctx.y_tilde(i, j, n, m + 1, p & 1, t & 1, e, jp);
    const UTilde y_down = ctx.y_tilde(i, j, n, m - 1, p & 1, t & 1, e, jp);
    const UTilde b = ctx.B(i);
    UTilde lhs = ctx.mul(b, y) * Scalar::q_power(qi_pow(ctx, i, -e * (2 * m + A))) - ctx.mul(y, b);
    // k~_i r_i(T E_i) q_i^{1 - e(2m + A - 1)} is the central factor times q_i^{-e(2m + A - 1)}
    UTilde rhs = y_up * -q_int(m + 1, eps) +
                 ctx.mul(ctx.central_factor(i), y_down) * (q_int(m + A - 1, eps) * Scalar::q_power(qi_pow(ctx, i, -e * (2 * m + A - 1))));
    conclude(rep, U, lhs - rhs, o, start);
  });
}

Report check_ytilde(const IQGContext& ctx, int i, int j, int n, int m, int p, int t, int e, YVariant v, JPower jp,
                    const CheckOptions& o) {
  Report r = base(v == YVariant::y ? "ytilde" : "ytilde-prime", ctx,
                  {{"i", idx(i)}, {"j", idx(j)}, {"n", std::to_string(n)}, {"m", std::to_string(m)}, {"parity", std::to_string(p & 1)},
                   {"t", std::to_string(t & 1)}, {"e", std::to_string(e)}, {"jpower", to_string(jp)}});
  return guarded(std::move(r), o, [&](Report& rep, Clock::time_point start) {
    require_pair(ctx, i, j);
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    const int A = n * ctx.cartan().a(i, j);
    const UTilde x = v == YVariant::y ? ctx.y_tilde(i, j, n, m, p & 1, t & 1, e, jp)
                                      : ctx.y_tilde_prime(i, j, n, m, p & 1, t & 1, e, jp);
    conclude(rep, ctx.alg(), x, o, start);
    if (!(m < 0 || m > -A)) {
      rep.note = std::string("out of theorem range; element is ") + (rep.verdict == Verdict::verified ? "zero" : "nonzero");
      rep.verdict = Verdict::unsupported;
    }
  });
}

Report check_lusztig(const UTildeAlgebra& alg, int i, int j, int n, int m, int e, const CheckOptions& o) {
  Report r;
  r.relation = "lusztig";
  r.params = {{"i", idx(i)}, {"j", idx(j)}, {"n", std::to_string(n)}, {"m", std::to_string(m)}, {"e", std::to_string(e)}};
  const auto start = Clock::now();
  try {
    const int rank = alg.rank();
    if (i < 0 || j < 0 || i >= rank || j >= rank || i == j) throw std::invalid_argument("need distinct indices in range");
    if (e != 1 && e != -1) throw std::invalid_argument("e must be +1 or -1");
    const int A = n * alg.cartan().a(i, j);
    if (m < 1 - A) throw std::invalid_argument("m must be at least 1 - n a_ij = " + std::to_string(1 - A));
    conclude(r, alg, f_minus(alg, i, j, n, m, e), o, start);
  } catch (const std::invalid_argument& ex) {
    r.verdict = Verdict::unsupported;
    r.note = ex.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.timing = o.timing;
  return r;
}

// ---------------------------------------------------------------------------
// Universal coefficients

nlohmann::ordered_json RhoTable::to_json() const {
  nlohmann::ordered_json j;
  j["i"] = i + 1;
  j["j"] = this->j + 1;
  j["n"] = n;
  j["a_ij"] = a_ij;
  j["eps_i"] = eps_i;
  j["eps_j"] = eps_j;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [rs, c] : entries) arr.push_back({{"r", rs.first}, {"s", rs.second}, {"rho", c.to_string()}});
  j["entries"] = arr;
  j["solved"] = solved;
  j["residual_zero"] = residual_zero;
  j["laurent"] = laurent;
  if (!problem.empty()) j["problem"] = problem;
  return j;
}

std::string RhoTable::to_string() const {
  std::string s = "rho table for (i, j, n) = (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ", " +
                  std::to_string(n) + "), a_ij = " + std::to_string(a_ij) + ", eps = (" + std::to_string(eps_i) + ", " +
                  std::to_string(eps_j) + ")\n";
  if (entries.empty()) s += "  (no nonzero entries)\n";
  for (const auto& [rs, c] : entries)
    s += "  rho(" + std::to_string(rs.first) + "," + std::to_string(rs.second) + ") = " + c.to_string() + "\n";
  if (!problem.empty()) s += "  problem: " + problem + "\n";
  return s;
}

UTilde rho_monomial(const IQGContext& ctx, int i, int j, int n, int r, int s) {
  const int A = n * ctx.cartan().a(i, j);
  const int k2 = 1 - A - r - s;
  if (k2 < 0 || k2 % 2) throw std::invalid_argument("rho_monomial: r + s has the wrong size or parity");
  // the central factor carries an extra q_i
  const UTilde unit = ctx.central_factor(i) * Scalar::q_power(-ctx.cartan().eps(i));
  UTilde acc = ctx.alg().one();
  for (int k = 0; k < k2 / 2; ++k) acc = ctx.mul(acc, unit);
  const UTilde bi = ctx.Bpow(i, r), bj = ctx.Bpow(j, n), bs = ctx.Bpow(i, s);
  return ctx.mul({&acc, &bi, &bj, &bs});
}

UTilde rho_combination(const IQGContext& ctx, const RhoTable& t) {
  UTilde out;
  for (const auto& [rs, c] : t.entries) out += rho_monomial(ctx, t.i, t.j, t.n, rs.first, rs.second) * c;
  return out;
}

RhoTable extract_rho(const IQGContext& ctx, int i, int j, int n) {
  require_pair(ctx, i, j);
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  RhoTable t;
  t.i = i;
  t.j = j;
  t.n = n;
  t.a_ij = ctx.cartan().a(i, j);
  t.eps_i = ctx.cartan().eps(i);
  t.eps_j = ctx.cartan().eps(j);
  const auto& U = ctx.alg();
  const int A = n * t.a_ij;
  std::vector<std::pair<int, int>> unknowns;
  for (int tot = -1 - A; tot >= 0; tot -= 2)
    for (int r = 0; r <= tot; ++r) unknowns.emplace_back(r, tot - r);

  const UTilde S = ctx.s_element(i, j, n);
  std::vector<std::map<PairingKey, Scalar>> cols;
  std::vector<UTilde> monos;
  for (const auto& [r, s] : unknowns) {
    monos.push_back(rho_monomial(ctx, i, j, n, r, s));
    cols.push_back(U.pairing_vector(monos.back()));
  }
  const auto rhs = U.pairing_vector(S);
  std::map<PairingKey, std::size_t> rows;
  auto add_keys = [&](const std::map<PairingKey, Scalar>& v) {
    for (const auto& [k, c] : v) rows.emplace(k, 0);
  };
  add_keys(rhs);
  for (const auto& c : cols) add_keys(c);
  std::size_t r = 0;
  for (auto& [k, pos] : rows) pos = r++;
  ScalarMatrix a(rows.size(), std::vector<Scalar>(unknowns.size()));
  std::vector<Scalar> b(rows.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [k, v] : cols[c]) a[rows.at(k)][c] = v;
  for (const auto& [k, v] : rhs) b[rows.at(k)] = v;

  const LinearSolution sol = solve_linear(a, b);
  if (!sol.consistent) {
    t.problem = "no solution: " + sol.inconsistency;
    return t;
  }
  if (!sol.unique()) {
    t.problem = "solution is not unique (nullspace of dimension " + std::to_string(sol.nullspace.size()) + ")";
    return t;
  }
  t.solved = true;
  t.laurent = true;
  for (std::size_t c = 0; c < unknowns.size(); ++c) {
    const Scalar& v = sol.solution[c];
    if (v.is_zero()) continue;
    t.entries.emplace(unknowns[c], v);
    if (!v.is_laurent()) t.laurent = false;
  }
  UTilde residual = S;
  for (std::size_t c = 0; c < unknowns.size(); ++c)
    if (!sol.solution[c].is_zero()) residual -= monos[c] * sol.solution[c];
  t.residual_zero = U.is_zero(residual);
  if (!t.residual_zero) t.problem = "nonzero residual";
  else if (!t.laurent) t.problem = "an entry is not a Laurent polynomial";
  return t;
}

Report check_rho(const IQGContext& ctx, int i, int j, int n, const CheckOptions& o) {
  Report r = base("rho", ctx, {{"i", idx(i)}, {"j", idx(j)}, {"n", std::to_string(n)}});
  return guarded(std::move(r), o, [&](Report& rep, Clock::time_point) {
    const RhoTable t = extract_rho(ctx, i, j, n);
    rep.verdict = t.ok() ? Verdict::verified : Verdict::refuted;
    rep.note = t.to_string();
    if (!t.ok()) {
      rep.witness_kind = "rho_table";
      rep.witness = t.problem;
    }
  });
}

Report universality_compare(const IQGContext& a, const IQGContext& b, int ia, int ja, int ib, int jb, int n,
                            const CheckOptions& o) {
  const auto& ca = a.cartan();
  const auto& cb = b.cartan();
  for (auto [ctx, i, j] : {std::tuple{&a, ia, ja}, std::tuple{&b, ib, jb}}) require_pair(*ctx, i, j);
  if (ca.a(ia, ja) != cb.a(ib, jb) || ca.eps(ia) != cb.eps(ib) || ca.eps(ja) != cb.eps(jb))
    throw std::invalid_argument("local data (a_ij, eps_i, eps_j) differ: (" + std::to_string(ca.a(ia, ja)) + ", " +
                                std::to_string(ca.eps(ia)) + ", " + std::to_string(ca.eps(ja)) + ") vs (" +
                                std::to_string(cb.a(ib, jb)) + ", " + std::to_string(cb.eps(ib)) + ", " +
                                std::to_string(cb.eps(jb)) + ")");
  Report r;
  r.relation = "compare";
  r.params = {{"i", idx(ia)}, {"j", idx(ja)}, {"i2", idx(ib)}, {"j2", idx(jb)}, {"n", std::to_string(n)},
              {"mode", to_string(a.mode())}};
  const auto start = Clock::now();
  const RhoTable ta = extract_rho(a, ia, ja, n), tb = extract_rho(b, ib, jb, n);
  const bool same = ta.ok() && tb.ok() && ta.same_entries(tb);
  r.verdict = same ? Verdict::verified : Verdict::refuted;
  r.note = ta.to_string() + tb.to_string();
  if (!same) {
    std::string w;
    if (!ta.ok()) w += "first table: " + ta.problem + "; ";
    if (!tb.ok()) w += "second table: " + tb.problem + "; ";
    std::set<std::pair<int, int>> keys;
    for (const auto& [k, v] : ta.entries) keys.insert(k);
    for (const auto& [k, v] : tb.entries) keys.insert(k);
    for (const auto& k : keys) {
      auto x = ta.entries.count(k) ? ta.entries.at(k) : Scalar();
      auto y = tb.entries.count(k) ? tb.entries.at(k) : Scalar();
      if (!(x == y))
        w += "(" + std::to_string(k.first) + "," + std::to_string(k.second) + "): " + x.to_string() + " vs " + y.to_string() + "; ";
    }
    r.witness_kind = "rho_table";
    r.witness = w;
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.timing = o.timing;
  return r;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

const std::map<std::string, std::vector<std::string>>& relation_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"iserre", {"i", "j", "n", "parity"}},
      {"nstd", {"i", "j", "n", "u", "parity"}},
      {"recursion", {"i", "j", "n", "m", "parity", "t", "e"}},
      {"ytilde", {"i", "j", "n", "m", "parity", "t", "e"}},
      {"ytilde-prime", {"i", "j", "n", "m", "parity", "t", "e"}},
      {"lusztig", {"i", "j", "n", "m", "e"}},
      {"rho", {"i", "j", "n"}},
  };
  return keys;
}

}  // namespace

SuiteConfig parse_suite(const std::string& text, const std::function<SatakeDatum(const std::string&)>& datum_loader) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("suite config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("suite config: top level must be an object");
  SuiteConfig cfg;
  if (!j.contains("datum") || !j["datum"].is_string()) throw std::invalid_argument("suite config: missing \"datum\" path");
  cfg.datum = datum_loader(j["datum"].get<std::string>());
  for (const auto& [k, v] : j.items())
    if (k != "datum" && k != "mode" && k != "jpower" && k != "checks" && k != "jobs")
      throw std::invalid_argument("suite config: unknown key \"" + k + "\"");
  if (j.contains("mode")) {
    const auto m = j["mode"].get<std::string>();
    if (m != "ktilde" && m != "sigma") throw std::invalid_argument("suite config: mode must be ktilde or sigma");
    cfg.mode = m == "sigma" ? Mode::sigma : Mode::ktilde;
  }
  if (j.contains("jpower")) {
    const auto m = j["jpower"].get<std::string>();
    if (m != "plain" && m != "divided") throw std::invalid_argument("suite config: jpower must be plain or divided");
    cfg.jpower = m == "divided" ? JPower::divided : JPower::plain;
  }
  if (j.contains("jobs")) cfg.jobs = std::max(1, j["jobs"].get<int>());
  if (j.contains("checks")) {
    if (!j["checks"].is_array()) throw std::invalid_argument("suite config: \"checks\" must be an array");
    for (const auto& c : j["checks"]) {
      CheckSpec entry;
      if (!c.contains("relation")) throw std::invalid_argument("suite config: check without \"relation\"");
      entry.relation = c["relation"].get<std::string>();
      auto it = relation_keys().find(entry.relation);
      if (it == relation_keys().end()) throw std::invalid_argument("suite config: unknown relation \"" + entry.relation + "\"");
      for (const auto& [k, v] : c.items()) {
        if (k == "relation") continue;
        if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
          throw std::invalid_argument("suite config: relation " + entry.relation + " takes no parameter \"" + k + "\"");
        std::vector<int> vals;
        if (v.is_number_integer()) vals.push_back(v.get<int>());
        else if (v.is_array()) vals = v.get<std::vector<int>>();
        else throw std::invalid_argument("suite config: parameter \"" + k + "\" must be an integer or a list of integers");
        entry.grid[k] = vals;
      }
      for (const auto& k : it->second) {
        if (entry.grid.count(k)) continue;
        if (k == "t") entry.grid[k] = {0};
        else throw std::invalid_argument("suite config: relation " + entry.relation + " needs parameter \"" + k + "\"");
      }
      cfg.checks.push_back(std::move(entry));
    }
  }
  return cfg;
}

std::vector<Report> run_suite(const SuiteConfig& cfg, const CheckOptions& o, const Mutation& mut,
                              std::shared_ptr<UPlusAlgebra> plus) {
  const IQGContext ctx(cfg.datum, cfg.mode, mut, std::move(plus));
  std::vector<std::function<Report()>> tasks;
  for (const auto& entry : cfg.checks) {
    const auto& keys = relation_keys().at(entry.relation);
    if (std::any_of(keys.begin(), keys.end(), [&](const std::string& key) { return entry.grid.at(key).empty(); })) continue;
    std::vector<std::size_t> pos(keys.size(), 0);
    while (true) {
      std::map<std::string, int> v;
      for (std::size_t k = 0; k < keys.size(); ++k) v[keys[k]] = entry.grid.at(keys[k]).at(pos[k]);
      const std::string rel = entry.relation;
      const JPower jp = cfg.jpower;
      tasks.push_back([&ctx, &o, rel, v, jp]() {
        const int i = v.at("i") - 1, j = v.at("j") - 1, n = v.at("n");
        if (rel == "iserre") return check_iserre(ctx, i, j, n, v.at("parity"), o);
        if (rel == "nstd") return check_nstd(ctx, i, j, n, v.at("u"), v.at("parity"), o);
        if (rel == "recursion")
          return check_recursion(ctx, i, j, n, v.at("m"), v.at("parity"), v.at("t"), v.at("e"), jp, o);
        if (rel == "lusztig") return check_lusztig(ctx.alg(), i, j, n, v.at("m"), v.at("e"), o);
        if (rel == "rho") return check_rho(ctx, i, j, n, o);
        return check_ytilde(ctx, i, j, n, v.at("m"), v.at("parity"), v.at("t"), v.at("e"),
                            rel == "ytilde" ? YVariant::y : YVariant::y_prime, jp, o);
      });
      // odometer over the grid, last key fastest
      bool done = true;
      for (std::size_t k = keys.size(); k-- > 0;) {
        if (++pos[k] < entry.grid.at(keys[k]).size()) {
          done = false;
          break;
        }
        pos[k] = 0;
      }
      if (done) break;
    }
  }
  std::vector<Report> out(tasks.size());
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(tasks.size())));
  if (jobs <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) out[t] = tasks[t]();
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::size_t t; (t = next++) < tasks.size();) out[t] = tasks[t]();
    });
  for (auto& th : pool) th.join();
  return out;
}

std::string summary_line(const std::vector<Report>& reports) {
  std::size_t v = 0, r = 0, u = 0;
  for (const auto& rep : reports) {
    if (rep.verdict == Verdict::verified) ++v;
    else if (rep.verdict == Verdict::refuted) ++r;
    else ++u;
  }
  return "verified/refuted/unsupported: " + std::to_string(v) + "/" + std::to_string(r) + "/" + std::to_string(u);
}

}  // namespace iserre
