#include "hardy/error.hpp"
#include "hardy/expr.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>

using hardy::DomainError;
using hardy::Expr;
using hardy::ParseError;

TEST_CASE("parse_expr: closed-form coefficients")
{
  CHECK(Expr::parse("1/(4*t^2)")(1.0) == doctest::Approx(0.25));
  CHECK(Expr::parse("sqrt(2*t - 0.5*t^2)")(2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(Expr::parse("sqrt(2*t - 0.5*t^2)")(3.0) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
  CHECK(Expr::parse("ln(t)")(1.0) == 0.0);
  CHECK(Expr::parse("(2*t-t^2)^(-2)")(1.0) == 1.0);
  CHECK(Expr::parse("2^3^2")(0.0) == 512.0); // right-associative
  CHECK(Expr::parse("-t^2")(3.0) == -9.0);
  CHECK(Expr::parse("t^-2")(2.0) == 0.25);
  CHECK(Expr::parse("1.5e-3 * 2E+2")(0.0) == doctest::Approx(0.3));
  CHECK(Expr::parse("pow(r, 0.5) + abs(-r) + exp(0) + cos(pi) + sin(0)")(4.0) == doctest::Approx(2 + 4 + 1 - 1));
  CHECK(Expr::parse("r").variable() == 'r');
  CHECK(Expr::parse("3").is_constant());
}

TEST_CASE("parse_expr: errors carry byte offsets")
{
  auto offset_of = [](const char* src) -> std::optional<std::size_t> {
    try
    {
      (void)Expr::parse(src);
    }
    catch(const ParseError& e)
    {
      return e.offset();
    }
    return std::nullopt;
  };
  CHECK(offset_of("ln(") == 3u);
  CHECK(offset_of("t + foo") == 4u);
  CHECK(offset_of("t * r") == 4u); // second free variable
  CHECK(offset_of("pow(t)") == 0u);
  CHECK(offset_of("sqrt(t, 2)") == 0u);
  CHECK(offset_of("1 +") == 3u);
  CHECK(offset_of("(t") == 2u);
  CHECK(offset_of("t)") == 1u);
  CHECK(offset_of("1e") == 1u);
  CHECK(offset_of("t # 2") == 2u);
}

TEST_CASE("eval_expr: domain errors are tagged, never NaN")
{
  CHECK_THROWS_AS(Expr::parse("sqrt(t)")(-1.0), DomainError);
  CHECK_THROWS_AS(Expr::parse("ln(t)")(0.0), DomainError);
  CHECK_THROWS_AS(Expr::parse("1/t")(0.0), DomainError);
  CHECK_THROWS_AS(Expr::parse("t^0.5")(-2.0), DomainError);
  CHECK_THROWS_AS(Expr::parse("exp(t)")(1000.0), DomainError);
  CHECK(Expr::parse("t^3")(-2.0) == -8.0);
  try
  {
    (void)Expr::parse("sqrt(t)")(-1.0);
  }
  catch(const DomainError& e)
  {
    CHECK(e.x() == -1.0);
  }
}

namespace
{

// Test-side expression tree with its own evaluator, independent of hardy::Expr.
struct RefNode
{
  enum Kind { num, var, neg, add, sub, mul, div, pow_op, fsqrt, fln, fexp, fsin, fcos, fabs_, fpow } kind;
  double value = 0;
  std::unique_ptr<RefNode> a, b;
};

struct RefDomain
{
};

double ref_eval(const RefNode& n, double x)
{
  auto fin = [](double v) {
    if(!std::isfinite(v))
      throw RefDomain{};
    return v;
  };
  auto powchk = [&](double a, double b) {
    if((a < 0 && b != std::trunc(b)) || (a == 0 && b < 0))
      throw RefDomain{};
    return fin(std::pow(a, b));
  };
  switch(n.kind)
  {
  case RefNode::num: return n.value;
  case RefNode::var: return x;
  case RefNode::neg: return -ref_eval(*n.a, x);
  case RefNode::add: return fin(ref_eval(*n.a, x) + ref_eval(*n.b, x));
  case RefNode::sub: return fin(ref_eval(*n.a, x) - ref_eval(*n.b, x));
  case RefNode::mul: return fin(ref_eval(*n.a, x) * ref_eval(*n.b, x));
  case RefNode::div:
  {
    const double l = ref_eval(*n.a, x), r = ref_eval(*n.b, x);
    if(r == 0)
      throw RefDomain{};
    return fin(l / r);
  }
  case RefNode::pow_op:
  case RefNode::fpow: return powchk(ref_eval(*n.a, x), ref_eval(*n.b, x));
  case RefNode::fsqrt:
  {
    const double v = ref_eval(*n.a, x);
    if(v < 0)
      throw RefDomain{};
    return std::sqrt(v);
  }
  case RefNode::fln:
  {
    const double v = ref_eval(*n.a, x);
    if(v <= 0)
      throw RefDomain{};
    return std::log(v);
  }
  case RefNode::fexp: return fin(std::exp(ref_eval(*n.a, x)));
  case RefNode::fsin: return std::sin(ref_eval(*n.a, x));
  case RefNode::fcos: return std::cos(ref_eval(*n.a, x));
  case RefNode::fabs_: return std::fabs(ref_eval(*n.a, x));
  }
  return 0;
}

std::string ref_print(const RefNode& n, std::mt19937_64& rng)
{
  // random (but valid) spacing, and redundant parentheses around every binary node
  auto sp = [&] { return (rng() % 3 == 0) ? std::string(" ") : std::string(); };
  switch(n.kind)
  {
  case RefNode::num:
  {
    char buf[40];
    std::snprintf(buf, sizeof buf, rng() % 2 ? "%.17g" : "%.17e", n.value);
    return buf;
  }
  case RefNode::var: return "t";
  case RefNode::neg: return "(-(" + ref_print(*n.a, rng) + "))";
  case RefNode::add: return "(" + ref_print(*n.a, rng) + sp() + "+" + sp() + ref_print(*n.b, rng) + ")";
  case RefNode::sub: return "(" + ref_print(*n.a, rng) + sp() + "-" + sp() + ref_print(*n.b, rng) + ")";
  case RefNode::mul: return "(" + ref_print(*n.a, rng) + "*" + ref_print(*n.b, rng) + ")";
  case RefNode::div: return "(" + ref_print(*n.a, rng) + "/" + ref_print(*n.b, rng) + ")";
  case RefNode::pow_op: return "(" + ref_print(*n.a, rng) + "^" + ref_print(*n.b, rng) + ")";
  case RefNode::fpow: return "pow(" + ref_print(*n.a, rng) + "," + sp() + ref_print(*n.b, rng) + ")";
  case RefNode::fsqrt: return "sqrt(" + ref_print(*n.a, rng) + ")";
  case RefNode::fln: return "ln(" + ref_print(*n.a, rng) + ")";
  case RefNode::fexp: return "exp(" + ref_print(*n.a, rng) + ")";
  case RefNode::fsin: return "sin(" + ref_print(*n.a, rng) + ")";
  case RefNode::fcos: return "cos(" + ref_print(*n.a, rng) + ")";
  case RefNode::fabs_: return "abs(" + ref_print(*n.a, rng) + ")";
  }
  return "";
}

std::unique_ptr<RefNode> random_tree(std::mt19937_64& rng, int depth)
{
  auto n = std::make_unique<RefNode>();
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 15);
  const int k = pick(rng);
  if(k == 0)
  {
    n->kind = RefNode::num;
    n->value = std::uniform_real_distribution<double>(0.0, 4.0)(rng);
    return n;
  }
  if(k == 1)
  {
    n->kind = RefNode::var;
    return n;
  }
  static const RefNode::Kind kinds[] = {RefNode::neg,   RefNode::add, RefNode::sub, RefNode::mul, RefNode::div,
                                        RefNode::pow_op, RefNode::fpow, RefNode::fsqrt, RefNode::fln, RefNode::fexp,
                                        RefNode::fsin,  RefNode::fcos, RefNode::fabs_, RefNode::add};
  n->kind = kinds[(k - 2) % 14];
  n->a = random_tree(rng, depth - 1);
  const bool binary = n->kind == RefNode::add || n->kind == RefNode::sub || n->kind == RefNode::mul ||
                      n->kind == RefNode::div || n->kind == RefNode::pow_op || n->kind == RefNode::fpow;
  if(binary)
  {
    if(n->kind == RefNode::pow_op || n->kind == RefNode::fpow)
    {
      // keep exponents small so results stay finite most of the time
      n->b = std::make_unique<RefNode>();
      n->b->kind = RefNode::num;
      n->b->value = static_cast<double>(static_cast<int>(rng() % 7) - 3) * (rng() % 2 ? 1.0 : 0.5);
    }
    else
      n->b = random_tree(rng, depth - 1);
  }
  return n;
}

} // namespace

TEST_CASE("property: parse . print . parse is the identity on ASTs")
{
  std::mt19937_64 rng(20241018);
  for(int trial = 0; trial < 1000; ++trial)
  {
    auto tree = random_tree(rng, 4);
    const std::string src = ref_print(*tree, rng);
    const Expr e1 = Expr::parse(src);
    const Expr e2 = Expr::parse(e1.to_string());
    INFO(src);
    REQUIRE(e1 == e2);
    CHECK(e2.to_string() == e1.to_string());
  }
}

TEST_CASE("property: evaluation agrees with an independent reference evaluator")
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xs(-3.0, 3.0);
  int compared = 0, domain = 0;
  for(int trial = 0; trial < 1000; ++trial)
  {
    auto tree = random_tree(rng, 4);
    const std::string src = ref_print(*tree, rng);
    const Expr e = Expr::parse(src);
    for(int k = 0; k < 5; ++k)
    {
      const double x = xs(rng);
      bool ref_domain = false;
      double expected = 0;
      try
      {
        expected = ref_eval(*tree, x);
      }
      catch(const RefDomain&)
      {
        ref_domain = true;
      }
      INFO(src << " at x=" << x);
      if(ref_domain)
      {
        ++domain;
        CHECK_THROWS_AS(e(x), DomainError);
      }
      else
      {
        ++compared;
        const double got = e(x);
        CHECK(std::fabs(got - expected) <= 1e-14 * std::max(1.0, std::fabs(expected)));
      }
    }
  }
  CHECK(compared > 2000);
  CHECK(domain > 0);
}
