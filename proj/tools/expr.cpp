#include "expr.hpp"

#include <gmpxx.h>

#include <cctype>

namespace iserre::cli {

ExprError::ExprError(std::size_t pos, const std::string& msg)
    : std::invalid_argument("at offset " + std::to_string(pos) + ": " + msg), pos_(pos) {}

namespace {

using Kind = Expr::Kind;

struct Tok {
  enum Type { end, integer, ident, sym } type;
  std::string text;
  std::size_t pos;
};

std::vector<Tok> lex(const std::string& s) {
  std::vector<Tok> out;
  std::size_t k = 0;
  while (k < s.size()) {
    const unsigned char c = s[k];
    if (std::isspace(c)) {
      ++k;
    } else if (std::isdigit(c)) {
      std::size_t e = k;
      while (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e]))) ++e;
      out.push_back({Tok::integer, s.substr(k, e - k), k});
      k = e;
    } else if (std::isalpha(c)) {
      std::size_t e = k;
      while (e < s.size() && std::isalpha(static_cast<unsigned char>(s[e]))) ++e;
      if (e - k == 1 && c == 'K' && e < s.size() && s[e] == '\'') ++e;
      out.push_back({Tok::ident, s.substr(k, e - k), k});
      k = e;
    } else if (s.compare(k, 2, "\xcf\x82") == 0) {  // final sigma
      out.push_back({Tok::ident, "s", k});
      k += 2;
    } else if (std::string("+-*/^()[],;_").find(static_cast<char>(c)) != std::string::npos) {
      out.push_back({Tok::sym, std::string(1, static_cast<char>(c)), k});
      ++k;
    } else {
      throw ExprError(k, std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
  }
  out.push_back({Tok::end, "", s.size()});
  return out;
}

ExprPtr node(Kind k, std::size_t pos) {
  auto e = std::make_unique<Expr>();
  e->kind = k;
  e->pos = pos;
  return e;
}

ExprPtr binary(Kind k, ExprPtr a, ExprPtr b, std::size_t pos) {
  auto e = node(k, pos);
  e->kids.push_back(std::move(a));
  e->kids.push_back(std::move(b));
  return e;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : toks_(lex(s)) {}

  ExprPtr run() {
    ExprPtr e = expr();
    if (peek().type != Tok::end) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  std::vector<Tok> toks_;
  std::size_t at_ = 0;

  const Tok& peek(std::size_t ahead = 0) const { return toks_[std::min(at_ + ahead, toks_.size() - 1)]; }
  bool is_sym(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).type == Tok::sym && peek(ahead).text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ExprError(peek().pos, msg); }
  void expect(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'");
    ++at_;
  }

  long integer(bool allow_sign) {
    bool neg = false;
    if (allow_sign && is_sym("-")) {
      neg = true;
      ++at_;
    }
    if (peek().type != Tok::integer) fail("expected an integer");
    const std::string& t = peek().text;
    if (t.size() > 9) fail("integer too large");
    ++at_;
    const long v = std::stol(t);
    return neg ? -v : v;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (is_sym("+") || is_sym("-")) {
      const std::size_t pos = peek().pos;
      const bool plus = peek().text == "+";
      ++at_;
      e = binary(plus ? Kind::add : Kind::sub, std::move(e), term(), pos);
    }
    return e;
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (is_sym("*") || is_sym("/")) {
      const std::size_t pos = peek().pos;
      const bool times = peek().text == "*";
      ++at_;
      e = binary(times ? Kind::mul : Kind::div, std::move(e), factor(), pos);
    }
    return e;
  }

  ExprPtr factor() {
    if (is_sym("-")) {
      auto e = node(Kind::neg, peek().pos);
      ++at_;
      e->kids.push_back(factor());
      return e;
    }
    ExprPtr a = atom();
    if (is_sym("^")) {
      auto e = node(Kind::pow, peek().pos);
      ++at_;
      e->ints.push_back(integer(true));
      e->kids.push_back(std::move(a));
      return e;
    }
    return a;
  }

  ExprPtr atom() {
    const Tok& t = peek();
    if (t.type == Tok::integer) {
      auto e = node(Kind::integer, t.pos);
      e->name = t.text;
      ++at_;
      return e;
    }
    if (is_sym("(")) {
      ++at_;
      ExprPtr e = expr();
      expect(")");
      return e;
    }
    if (is_sym("[")) return bracket();
    if (t.type != Tok::ident) fail(t.type == Tok::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
    const std::string name = t.text;
    const std::size_t pos = t.pos;
    ++at_;
    if (name == "q") return node(Kind::q, pos);
    if (name == "s") {
      auto e = node(Kind::param, pos);
      expect("[");
      e->ints.push_back(integer(false));
      expect("]");
      return e;
    }
    if (name == "idp") {
      auto e = node(Kind::idp, pos);
      expect("[");
      e->ints.push_back(integer(false));
      expect(";");
      e->ints.push_back(integer(true));
      expect(";");
      e->ints.push_back(integer(false));
      expect("]");
      return e;
    }
    if (name == "E" || name == "F" || name == "K" || name == "K'" || name == "B" || name == "kt") {
      auto e = node(Kind::gen, pos);
      e->name = name;
      expect("[");
      e->ints.push_back(integer(false));
      expect("]");
      return e;
    }
    throw ExprError(pos, "unknown name '" + name + "'");
  }

  // '[' int ']' ('_' int)?  or  '[' expr ',' expr ']'
  ExprPtr bracket() {
    const std::size_t pos = peek().pos;
    const std::size_t sign = is_sym("-", 1) ? 1 : 0;
    if (peek(1 + sign).type == Tok::integer && is_sym("]", 2 + sign)) {
      ++at_;
      auto e = node(Kind::qint, pos);
      e->ints.push_back(integer(true));
      expect("]");
      if (is_sym("_")) {
        ++at_;
        e->ints.push_back(integer(false));
      }
      return e;
    }
    ++at_;
    ExprPtr a = expr();
    expect(",");
    ExprPtr b = expr();
    expect("]");
    return binary(Kind::comm, std::move(a), std::move(b), pos);
  }
};

int precedence(const Expr& e) {
  switch (e.kind) {
    case Kind::add:
    case Kind::sub:
      return 1;
    case Kind::mul:
    case Kind::div:
      return 2;
    case Kind::neg:
      return 3;
    case Kind::pow:
      return 4;
    default:
      return 5;
  }
}

std::string print(const Expr& e, int parent) {
  std::string s;
  switch (e.kind) {
    case Kind::integer:
      s = e.name;
      break;
    case Kind::q:
      s = "q";
      break;
    case Kind::param:
      s = "s[" + std::to_string(e.ints[0]) + "]";
      break;
    case Kind::qint:
      s = "[" + std::to_string(e.ints[0]) + "]";
      if (e.ints.size() > 1) s += "_" + std::to_string(e.ints[1]);
      break;
    case Kind::gen:
      s = e.name + "[" + std::to_string(e.ints[0]) + "]";
      break;
    case Kind::idp:
      s = "idp[" + std::to_string(e.ints[0]) + "; " + std::to_string(e.ints[1]) + "; " + std::to_string(e.ints[2]) + "]";
      break;
    case Kind::neg:
      s = "-" + print(*e.kids[0], 3);
      break;
    case Kind::add:
      s = print(*e.kids[0], 1) + " + " + print(*e.kids[1], 2);
      break;
    case Kind::sub:
      s = print(*e.kids[0], 1) + " - " + print(*e.kids[1], 2);
      break;
    case Kind::mul:
      s = print(*e.kids[0], 2) + "*" + print(*e.kids[1], 3);
      break;
    case Kind::div:
      s = print(*e.kids[0], 2) + "/" + print(*e.kids[1], 3);
      break;
    case Kind::pow:
      s = print(*e.kids[0], 5) + "^" + std::to_string(e.ints[0]);
      break;
    case Kind::comm:
      s = "[" + print(*e.kids[0], 0) + ", " + print(*e.kids[1], 0) + "]";
      break;
  }
  return precedence(e) < parent ? "(" + s + ")" : s;
}

// A single term with empty words: c * K-monomial. Returns false otherwise.
bool as_k_monomial(const UTilde& x, TermKey* key, Scalar* c) {
  if (x.size() != 1) return false;
  const auto& [k, v] = *x.terms().begin();
  if (!k.f.empty() || !k.e.empty()) return false;
  *key = k;
  *c = v;
  return true;
}

bool is_scalar(const UTilde& x, Scalar* c) {
  if (x.empty()) {
    *c = Scalar(0);
    return true;
  }
  TermKey k;
  if (!as_k_monomial(x, &k, c)) return false;
  for (int v : k.k)
    if (v != 0) return false;
  return true;
}

class Evaluator {
 public:
  explicit Evaluator(const IQGContext& ctx) : ctx_(ctx), U_(ctx.alg()) {}

  UTilde eval(const Expr& e) const {
    try {
      return eval_inner(e);
    } catch (const ExprError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ExprError(e.pos, ex.what());
    }
  }

 private:
  const IQGContext& ctx_;
  const UTildeAlgebra& U_;

  int index(const Expr& e, long v) const {
    if (v < 1 || v > ctx_.cartan().rank())
      throw ExprError(e.pos, "index " + std::to_string(v) + " out of range 1.." + std::to_string(ctx_.cartan().rank()));
    return static_cast<int>(v - 1);
  }

  UTilde eval_inner(const Expr& e) const {
    switch (e.kind) {
      case Kind::integer:
        return U_.scalar(Scalar(mpq_class(e.name)));
      case Kind::q:
        return U_.scalar(Scalar::q());
      case Kind::param:
        if (e.ints[0] < 1 || e.ints[0] > kMaxParams)
          throw ExprError(e.pos, "parameter index must be in 1.." + std::to_string(kMaxParams));
        return U_.scalar(Scalar::param(static_cast<int>(e.ints[0] - 1)));
      case Kind::qint: {
        const int eps = e.ints.size() > 1 ? ctx_.cartan().eps(index(e, e.ints[1])) : 1;
        return U_.scalar(q_int(static_cast<int>(e.ints[0]), eps));
      }
      case Kind::gen: {
        const int i = index(e, e.ints[0]);
        if (e.name == "E") return U_.E(i);
        if (e.name == "F") return U_.F(i);
        if (e.name == "K") return U_.Kt(i);
        if (e.name == "K'") return U_.Kp(i);
        if (e.name == "B") return ctx_.B(i);
        return ctx_.ktilde(i);
      }
      case Kind::idp: {
        const int i = index(e, e.ints[0]);
        if (e.ints[2] != 0 && e.ints[2] != 1) throw ExprError(e.pos, "parity must be 0 or 1");
        if (ctx_.satake().tau[i] != i) throw ExprError(e.pos, "idp needs a tau-fixed index");
        return ctx_.idp(i, static_cast<int>(e.ints[1]), static_cast<int>(e.ints[2]));
      }
      case Kind::neg:
        return eval(*e.kids[0]) * Scalar(-1);
      case Kind::add:
        return eval(*e.kids[0]) + eval(*e.kids[1]);
      case Kind::sub:
        return eval(*e.kids[0]) - eval(*e.kids[1]);
      case Kind::mul:
        return ctx_.mul(eval(*e.kids[0]), eval(*e.kids[1]));
      case Kind::div: {
        Scalar c;
        if (!is_scalar(eval(*e.kids[1]), &c)) throw ExprError(e.kids[1]->pos, "division by a non-scalar");
        if (c.is_zero()) throw ExprError(e.kids[1]->pos, "division by zero");
        return eval(*e.kids[0]) * c.inv();
      }
      case Kind::pow:
        return power(e, eval(*e.kids[0]), e.ints[0]);
      case Kind::comm: {
        UTilde a = eval(*e.kids[0]), b = eval(*e.kids[1]);
        return ctx_.mul(a, b) - ctx_.mul(b, a);
      }
    }
    throw ExprError(e.pos, "bad node");
  }

  UTilde power(const Expr& e, UTilde base, long n) const {
    if (n < 0) {
      TermKey k;
      Scalar c;
      if (!as_k_monomial(base, &k, &c) || c.is_zero())
        throw ExprError(e.pos, "negative power of a non-invertible element");
      for (int& v : k.k) v = -v;
      base = UTilde();
      base.add_term(k, c.inv());
      n = -n;
    }
    UTilde out = U_.one();
    while (n > 0) {
      if (n & 1) out = ctx_.mul(out, base);
      n >>= 1;
      if (n) base = ctx_.mul(base, base);
    }
    return out;
  }
};

}  // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(text).run(); }

std::string print_expr(const Expr& e) { return print(e, 0); }

UTilde eval_expr(const IQGContext& ctx, const Expr& e) { return Evaluator(ctx).eval(e); }

}  // namespace iserre::cli
