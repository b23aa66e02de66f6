#ifndef HARDY_EXPR_HPP
#define HARDY_EXPR_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hardy
{

//! Closed-form coefficient expression in one free variable (`t` or `r`).
//!
//! Grammar: numbers (decimal/scientific), the free variable, `pi`,
//! `+ - * / ^` with the usual precedence (`^` right-associative, binds
//! tighter than unary minus), parentheses and the functions
//! `sqrt ln exp sin cos abs` (one argument) and `pow` (two arguments).
//!
//! An Expr is immutable after parsing and may be evaluated concurrently.
class Expr
{
public:
  enum class Kind { number, constant, variable, negate, binary, call };
  enum class Func { sqrt, ln, exp, sin, cos, abs, pow };

  struct Node
  {
    Kind kind;
    double value = 0.0;  // number
    char op = 0;         // binary: + - * / ^
    Func func = Func::sqrt;
    std::vector<std::shared_ptr<const Node>> args;
  };

  //! the constant expression 0 in variable `t`
  Expr();

  //! throws ParseError carrying the byte offset of the failure
  static Expr parse(std::string_view src);

  //! IEEE double evaluation; throws DomainError instead of returning a non-finite value
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

  //! fully parenthesized canonical form; parse(to_string()) == *this
  std::string to_string() const;

  //! 't' or 'r'; for constant expressions the default 't'
  char variable() const noexcept { return var_; }
  bool is_constant() const noexcept { return !uses_var_; }
  const Node& root() const noexcept { return *root_; }

  bool operator==(const Expr& other) const;

private:
  Expr(std::shared_ptr<const Node> root, char var, bool uses_var);

  std::shared_ptr<const Node> root_;
  char var_ = 't';
  bool uses_var_ = false;
};

inline Expr parse_expr(std::string_view src) { return Expr::parse(src); }

} // namespace hardy

#endif // HARDY_EXPR_HPP
