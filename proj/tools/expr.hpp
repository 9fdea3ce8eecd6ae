#pragma once

// Expression language over the double and its iquantum subalgebra.
//
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | atom ('^' int)?
//   atom    := gen | scalar | '(' expr ')' | '[' expr ',' expr ']' | '[' int ']' ('_' int)?
//   gen     := ('E'|'F'|'K'|"K'"|'B'|'kt') '[' int ']' | 'idp' '[' int ';' int ';' int ']'
//   scalar  := integer | 'q' | ('s'|'ς') '[' int ']'
//
// Division is only by scalars; negative powers only of invertible monomials.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "iserre/iqg.hpp"

namespace iserre::cli {

class ExprError : public std::invalid_argument {
 public:
  ExprError(std::size_t pos, const std::string& msg);
  std::size_t position() const { return pos_; }  // 0-based byte offset

 private:
  std::size_t pos_;
};

struct Expr {
  enum class Kind { integer, q, param, qint, gen, idp, neg, add, sub, mul, div, pow, comm };
  Kind kind;
  std::string name;         // generator name for gen
  std::vector<long> ints;   // literal value, indices, exponents (1-based indices)
  std::vector<std::unique_ptr<Expr>> kids;
  std::size_t pos = 0;      // source offset for error messages
};

using ExprPtr = std::unique_ptr<Expr>;

ExprPtr parse_expr(const std::string& text);
/// Fully parenthesised where needed; parse_expr(print_expr(e)) prints back identically.
std::string print_expr(const Expr& e);
/// Throws ExprError for unknown indices and unsupported generators.
UTilde eval_expr(const IQGContext& ctx, const Expr& e);

}  // namespace iserre::cli
