// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// `--full` adds the rank-3 Kac-Moody datum at n = 2, a_ij = -2 (several minutes).

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "iserre/relcheck.hpp"
#include "test_data.hpp"

using namespace iserre;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Scalar qp(int e) { return Scalar::q_power(e); }

std::string fmt_seconds(double s) {
  std::ostringstream o;
  o.precision(s < 10 ? 2 : 0);
  o << std::fixed << s << " s";
  return o.str();
}

std::string describe(const Report& r) {
  std::string s = r.relation;
  for (const auto& [k, v] : r.params) s += " " + k + "=" + v;
  return s;
}

class Criterion {
 public:
  explicit Criterion(int number, std::string title) : number_(number), title_(std::move(title)), start_(Clock::now()) {}

  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }
  void expect_verified(const Report& r, const std::string& where) {
    std::string what = where + ": " + describe(r) + " -> " + to_string(r.verdict);
    if (!r.note.empty()) what += " (" + r.note + ")";
    expect(r.verdict == Verdict::verified, what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  double elapsed() const { return seconds_since(start_); }

  bool finish() const {
    const bool ok = failures_.empty();
    std::cout << "criterion " << number_ << ": " << (ok ? "PASS" : "FAIL") << "  " << title_ << "  [" << checks_
              << " checks, " << fmt_seconds(elapsed()) << "]\n";
    for (const auto& f : failures_) std::cout << "    failed: " << f << "\n";
    for (const auto& n : notes_) std::cout << "    " << n << "\n";
    std::cout.flush();
    return ok;
  }

 private:
  int number_;
  std::string title_;
  Clock::time_point start_;
  std::size_t checks_ = 0;
  std::vector<std::string> failures_, notes_;
};

struct Pair {
  std::string name;
  SatakeDatum datum;
  int i, j;  // 0-based
};

// White pairs with a_ij = -1 and -2 in split and non-split data.
std::vector<Pair> pairs_a1() {
  return {{"split A2", testdata::split_a2(), 0, 1}, {"B3", testdata::b3(), 1, 0}, {"B3", testdata::b3(), 0, 1}};
}
std::vector<Pair> pairs_a2() {
  return {{"split B2", testdata::split_b2(), 0, 1}, {"KM3", testdata::km3(), 0, 1}};
}

// Split datum with a_12 = a_21 = -2 and eps = (1, 1); same local data as the KM3 pair (1, 2).
SatakeDatum split_affine() { return SatakeDatum::split(CartanDatum({{2, -2}, {-2, 2}}, {1, 1})); }

bool criterion1() {
  Criterion c(1, "white example, a_ij = -1 (split A2; B3 with i = 2, j = 1), < 10 s each");
  for (const auto& p : {Pair{"split A2", testdata::split_a2(), 0, 1}, Pair{"B3", testdata::b3(), 1, 0}}) {
    const auto t = Clock::now();
    IQGContext C(p.datum);
    const UTilde lhs = C.s_element(p.i, p.j, 1) - C.mul(C.central_factor(p.i), C.B(p.j));
    const bool zero = C.is_zero(lhs);
    const double s = seconds_since(t);
    c.expect(zero, p.name + ": left side is nonzero");
    c.expect(s < 10, p.name + ": took " + fmt_seconds(s));
    c.note(p.name + ": zero in " + fmt_seconds(s));
  }
  return c.finish();
}

bool criterion2() {
  Criterion c(2, "white example, a_ij = -2 (split B2; KM3 with i = 1, j = 2), < 60 s each");
  for (const auto& p : pairs_a2()) {
    const auto t = Clock::now();
    IQGContext C(p.datum);
    // the 4-term sum runs from B_i^3 B_j, so it is -S
    const UTilde four = C.s_element(p.i, p.j, 1) * Scalar(-1);
    const UTilde rhs = C.mul(C.central_factor(p.i), C.alg().commutator(C.B(p.i), C.B(p.j))) * q_int(2, C.cartan().eps(p.i)).pow(2);
    const bool zero = C.is_zero(four - rhs);
    const double s = seconds_since(t);
    c.expect(zero, p.name + ": difference is nonzero");
    c.expect(s < 60, p.name + ": took " + fmt_seconds(s));
    c.note(p.name + ": zero in " + fmt_seconds(s));
  }
  return c.finish();
}

bool criterion3(bool full) {
  Criterion c(3, "minimal-degree relations, n in {1, 2}, a_ij in {-1, -2}, both parities");
  for (const auto& p : pairs_a1()) {
    IQGContext C(p.datum);
    for (int n : {1, 2})
      for (int par : {0, 1}) c.expect_verified(check_iserre(C, p.i, p.j, n, par), p.name);
  }
  for (const auto& p : pairs_a2()) {
    IQGContext C(p.datum);
    for (int n : {1, 2}) {
      if (n == 2 && p.name == "KM3" && !full) {
        c.note("KM3, n = 2: skipped (about 7 min; run with --full); n = 2 at a_ij = -2 is covered by split B2");
        continue;
      }
      for (int par : {0, 1}) c.expect_verified(check_iserre(C, p.i, p.j, n, par), p.name);
    }
  }
  return c.finish();
}

bool criterion4() {
  Criterion c(4, "non-standard degree relations, u in {1, 2}, n = 1, a_ij = -1, both parities");
  for (const auto& p : pairs_a1()) {
    IQGContext C(p.datum);
    for (int u : {1, 2})
      for (int par : {0, 1}) c.expect_verified(check_nstd(C, p.i, p.j, 1, u, par), p.name);
  }
  return c.finish();
}

bool criterion5() {
  Criterion c(5, "recursion, n = 1, m in 0..3, e = +-1, both parities, plain j-power");
  std::vector<Pair> all = pairs_a1();
  all.push_back(pairs_a2().front());
  for (const auto& p : all) {
    IQGContext C(p.datum);
    for (int m = 0; m <= 3; ++m)
      for (int e : {1, -1})
        for (int par : {0, 1}) c.expect_verified(check_recursion(C, p.i, p.j, 1, m, par, 0, e, JPower::plain), p.name);
  }
  return c.finish();
}

bool criterion6() {
  Criterion c(6, "y~ and y~' vanish, m in {-2, -1, 1 - a, 2 - a, 3 - a}, n = 1, e = +-1, both parities");
  std::vector<Pair> all = pairs_a1();
  for (const auto& p : pairs_a2()) all.push_back(p);
  for (const auto& p : all) {
    IQGContext C(p.datum);
    const int a = C.cartan().a(p.i, p.j);
    for (int m : {-2, -1, 1 - a, 2 - a, 3 - a})
      for (int e : {1, -1})
        for (int par : {0, 1})
          for (auto v : {YVariant::y, YVariant::y_prime})
            c.expect_verified(check_ytilde(C, p.i, p.j, 1, m, par, 0, e, v, JPower::plain), p.name);
  }
  return c.finish();
}

bool criterion7() {
  Criterion c(7, "coefficient tables: solvable, Laurent, universal, and the white-example values");
  struct Named {
    std::string name;
    SatakeDatum d;
    int i, j;
  };
  std::vector<Named> data{{"split A2", testdata::split_a2(), 0, 1},       {"split A2 eps 2", testdata::split_a2_eps2(), 0, 1},
                          {"B3 (2,1)", testdata::b3(), 1, 0},             {"B3 (1,2)", testdata::b3(), 0, 1},
                          {"split B2", testdata::split_b2(), 0, 1},       {"split affine", split_affine(), 0, 1},
                          {"KM3 (1,2)", testdata::km3(), 0, 1}};
  std::map<std::string, RhoTable> tables;
  for (const auto& x : data) {
    IQGContext C(x.d);
    RhoTable t = extract_rho(C, x.i, x.j, 1);
    c.expect(t.ok(), x.name + ": " + (t.problem.empty() ? "table not solved" : t.problem));
    c.expect_verified(check_rho(C, x.i, x.j, 1), x.name);
    tables[x.name] = t;
  }
  // split vs non-split with the same (a_ij, eps_i, eps_j)
  c.expect(tables["split A2 eps 2"].same_entries(tables["B3 (2,1)"]), "split A2 eps 2 vs B3 (2,1) differ");
  c.expect(tables["split A2 eps 2"].same_entries(tables["B3 (1,2)"]), "split A2 eps 2 vs B3 (1,2) differ");
  c.expect(tables["split affine"].same_entries(tables["KM3 (1,2)"]), "split affine vs KM3 (1,2) differ");
  c.expect_verified(universality_compare(IQGContext(testdata::split_a2_eps2()), IQGContext(testdata::b3()), 0, 1, 1, 0, 1),
                    "split A2 eps 2 vs B3");
  c.expect_verified(universality_compare(IQGContext(split_affine()), IQGContext(testdata::km3()), 0, 1, 0, 1, 1),
                    "split affine vs KM3");

  // a_ij = -1: rho(0,0) = q_i
  for (const auto& [name, eps] : {std::pair<std::string, int>{"split A2", 1}, {"B3 (2,1)", 2}, {"B3 (1,2)", 2}}) {
    const auto& e = tables[name].entries;
    c.expect(e.size() == 1 && e.count({0, 0}) && e.at({0, 0}) == qp(eps), name + ": rho(0,0) is not q_i");
  }
  // a_ij = -2: the stated values rho(1,0) = -rho(0,1) = [2]_i^2 q_i
  for (const auto& name : {std::string("split B2"), std::string("split affine"), std::string("KM3 (1,2)")}) {
    const RhoTable& t = tables[name];
    const int eps = t.eps_i;
    const Scalar v = q_int(2, eps).pow(2) * qp(eps);
    const auto get = [&](int r, int s) { return t.entries.count({r, s}) ? t.entries.at({r, s}) : Scalar(0); };
    const bool stated = get(1, 0) == v && get(0, 1) == -v && t.entries.size() == 2;
    const bool negated = get(1, 0) == -v && get(0, 1) == v && t.entries.size() == 2;
    c.expect(stated, name + ": rho(1,0) = " + get(1, 0).to_string() + ", rho(0,1) = " + get(0, 1).to_string() +
                         ", expected rho(1,0) = -rho(0,1) = " + v.to_string());
    if (negated)
      c.note(name + ": the table is exactly the negative of the stated values. S starts with +B_j B_i^3, while the "
                    "white example (criterion 2, which passes) is the sum starting from +B_i^3 B_j, i.e. -S");
  }
  return c.finish();
}

Word random_word(std::mt19937& rng, int rank, int len) {
  std::uniform_int_distribution<int> l(0, rank - 1);
  Word w;
  for (int k = 0; k < len; ++k) w.push_back(static_cast<char>(l(rng)));
  return w;
}

bool criterion8() {
  Criterion c(8, "infrastructure property suites");
  std::mt19937 rng(20240611);
  const std::vector<SatakeDatum> fixed{testdata::split_a2(), testdata::split_b2(), testdata::b3(), testdata::km3()};

  // twisted Leibniz rules for r_i and ir on random words of degree <= 6
  for (const auto& d : fixed) {
    UPlusAlgebra A(d.cartan);
    const int n = A.rank();
    for (int it = 0; it < 25; ++it) {
      std::uniform_int_distribution<int> len(0, 6);
      const Word a = random_word(rng, n, len(rng));
      const Word b = random_word(rng, n, std::uniform_int_distribution<int>(0, 6 - static_cast<int>(a.size()))(rng));
      const UPlus x = UPlus::word(a), y = UPlus::word(b);
      for (int i = 0; i < n; ++i) {
        c.expect(A.r(i, x * y) == x * A.r(i, y) + A.r(i, x) * y * qp(A.cartan().dot(i, word_weight(b, n))),
                 "r Leibniz on " + word_string(a, 'E') + " * " + word_string(b, 'E'));
        c.expect(A.rl(i, x * y) == A.rl(i, x) * y + x * A.rl(i, y) * qp(A.cartan().dot(i, word_weight(a, n))),
                 "ir Leibniz on " + word_string(a, 'E') + " * " + word_string(b, 'E'));
      }
    }
  }

  // x F_i - F_i x = (r_i(x) Kt_i - Kp_i ir(x)) / (q_i - q_i^-1), x of degree <= 5
  for (const auto& d : fixed) {
    UTildeAlgebra U(d.cartan);
    for (int it = 0; it < 8; ++it) {
      UPlus x;
      std::uniform_int_distribution<int> len(1, 5), co(-2, 2);
      for (int t = 0; t < 2; ++t) x.add_term(random_word(rng, U.rank(), len(rng)), Scalar(co(rng)) * qp(co(rng)));
      const int i = it % U.rank(), eps = U.cartan().eps(i);
      const UTilde X = U.from_uplus(x);
      const UTilde rhs = (U.mul(U.from_uplus(U.plus().r(i, x)), U.Kt(i)) - U.mul(U.Kp(i), U.from_uplus(U.plus().rl(i, x)))) *
                         (qp(eps) - qp(-eps)).inv();
      c.expect(U.is_zero(U.commutator(X, U.F(i)) - rhs), "E/F commutation with x = " + x.to_string());
    }
  }

  // rank-2 braid relations on generators
  for (const auto& d : {testdata::split_a1a1(), testdata::split_a2(), testdata::split_b2(), testdata::split_g2()}) {
    UTildeAlgebra U(d.cartan);
    const int prod = U.cartan().a(0, 1) * U.cartan().a(1, 0);
    const int m = prod == 0 ? 2 : prod == 1 ? 3 : prod == 2 ? 4 : 6;
    ReducedWord w1, w2;
    for (int k = 0; k < m; ++k) {
      w1.push_back(k % 2);
      w2.push_back((k + 1) % 2);
    }
    for (const auto& g : {U.E(0), U.E(1), U.F(0), U.F(1), U.Kt(0), U.Kp(1)})
      c.expect(U.is_zero(U.braid_Tw(w1, g) - U.braid_Tw(w2, g)), "braid relation of order " + std::to_string(m));
  }

  // two reduced words of the same element act alike
  {
    UTildeAlgebra U(testdata::b3().cartan);
    c.expect(U.is_zero(U.braid_Tw({1, 2, 1, 2}, U.E(0)) - U.braid_Tw({2, 1, 2, 1}, U.E(0))), "B3: T_2323 vs T_3232 on E_1");
    c.expect(U.is_zero(U.braid_Tw({0, 1, 0}, U.E(2)) - U.braid_Tw({1, 0, 1}, U.E(2))), "B3: T_121 vs T_212 on E_3");
  }

  // Kt_i Kp_i is central
  for (const auto& d : fixed) {
    UTildeAlgebra U(d.cartan);
    for (int i = 0; i < U.rank(); ++i) {
      const UTilde z = U.mul(U.Kt(i), U.Kp(i));
      for (int j = 0; j < U.rank(); ++j)
        c.expect(U.commutator(z, U.E(j)).empty() && U.commutator(z, U.F(j)).empty(), "Kt Kp central");
    }
  }

  // r_i(T E_i) commutes with B_j, F_j and T(E_j) Kp_j; the Z elements commute
  for (const auto& d : fixed) {
    IQGContext C(d, Mode::sigma);
    const auto& U = C.alg();
    for (int i : d.white()) {
      const UTilde r = U.from_uplus(C.rTE(i));
      for (int j : d.white()) {
        c.expect(C.is_zero(U.commutator(r, C.B(j))), "rTB");
        c.expect(C.is_zero(U.commutator(r, U.F(j))), "rTFE with F");
        c.expect(C.is_zero(U.commutator(r, U.mul(U.from_uplus(C.TE(j)), U.Kp(j)))), "rTFE with TE Kp");
        c.expect(C.is_zero(U.commutator(U.from_uplus(C.Z(i)), U.from_uplus(C.Z(j)))), "ZZ");
        // F_j T(E_i) Kt_i^-1 commutation after central reduction
        const UTilde x = U.mul(U.from_uplus(C.TE(i)), U.Kt(i, -1));
        UTilde lhs = C.mul(U.F(j), x) - C.mul(x, U.F(j)) * qp(-C.cartan().dot(i, j));
        if (j == d.tau[i]) lhs -= U.from_uplus(C.Z(j)) + U.mul(U.from_uplus(C.Zprime(j)), U.Kt(i, -2));
        c.expect(C.is_zero(lhs), "F/TE commutation");
      }
    }
  }

  // B_i B^(m) = [m+1] B^(m+1) + [m] q_i k~_i r_i(T E_i) B^(m-1) (parity matching), m <= 5
  for (const auto& d : fixed) {
    IQGContext C(d);
    for (int i : d.white()) {
      const int eps = C.cartan().eps(i);
      for (int par : {0, 1})
        for (int m = 0; m <= 5; ++m) {
          UTilde rhs = C.idp(i, m + 1, par) * q_int(m + 1, eps);
          if (m % 2 == par) rhs += C.mul(C.central_factor(i), C.idp(i, m - 1, par)) * q_int(m, eps);
          c.expect(C.is_zero(C.mul(C.B(i), C.idp(i, m, par)) - rhs), "divided power recursion m = " + std::to_string(m));
        }
    }
  }

  // Lusztig's higher Serre elements on the F side
  struct Triple {
    SatakeDatum d;
    int n, m;
  };
  for (const auto& t : {Triple{testdata::split_a2(), 1, 2}, Triple{testdata::split_a2(), 2, 3}, Triple{testdata::split_b2(), 1, 3}})
    for (int e : {1, -1}) c.expect_verified(check_lusztig(UTildeAlgebra(t.d.cartan), 0, 1, t.n, t.m, e), "f-");
  return c.finish();
}

bool criterion9() {
  Criterion c(9, "flipping the central-factor sign refutes the minimal-degree relations with a witness");
  Mutation m;
  m.idp_sign = true;
  std::size_t refuted = 0, total = 0;
  std::vector<Pair> all = pairs_a1();
  all.push_back(pairs_a2().front());
  for (const auto& p : all) {
    IQGContext C(p.datum, Mode::ktilde, m);
    for (int par : {0, 1}) {
      const Report r = check_iserre(C, p.i, p.j, 1, par);
      ++total;
      if (r.verdict != Verdict::refuted) continue;
      ++refuted;
      c.expect(!r.witness.empty() && !r.witness_kind.empty(), p.name + ": refuted without a witness");
    }
  }
  c.expect(refuted > 0, "no minimal-degree check was refuted");
  c.note(std::to_string(refuted) + " of " + std::to_string(total) + " checks refuted");
  return c.finish();
}

}  // namespace

int main(int argc, char** argv) {
  bool full = false;
  for (int k = 1; k < argc; ++k) full |= std::strcmp(argv[k], "--full") == 0;
  const std::vector<std::function<bool()>> all{criterion1, criterion2, [full] { return criterion3(full); },
                                               criterion4, criterion5, criterion6,
                                               criterion7, criterion8, criterion9};
  int failed = 0;
  for (const auto& f : all) failed += f() ? 0 : 1;
  std::cout << (all.size() - failed) << "/" << all.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
