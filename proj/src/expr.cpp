#include "hardy/expr.hpp"

#include "hardy/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace hardy
{

namespace
{

using NodePtr = std::shared_ptr<const Expr::Node>;

struct FuncInfo
{
  std::string_view name;
  Expr::Func func;
  std::size_t arity;
};

constexpr FuncInfo kFunctions[] = {
  {"sqrt", Expr::Func::sqrt, 1}, {"ln", Expr::Func::ln, 1},   {"exp", Expr::Func::exp, 1},
  {"sin", Expr::Func::sin, 1},   {"cos", Expr::Func::cos, 1}, {"abs", Expr::Func::abs, 1},
  {"pow", Expr::Func::pow, 2},
};

std::string_view func_name(Expr::Func f)
{
  for(const auto& fi : kFunctions)
    if(fi.func == f)
      return fi.name;
  return "?";
}

NodePtr make_node(Expr::Node n) { return std::make_shared<const Expr::Node>(std::move(n)); }

// recursive descent over the byte string; `pos_` is the byte offset reported in errors
class Parser
{
public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all()
  {
    auto n = parse_sum();
    skip_ws();
    if(pos_ != src_.size())
      throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
    return n;
  }

  char variable() const { return var_ ? var_ : 't'; }
  bool uses_variable() const { return var_ != 0; }

private:
  void skip_ws()
  {
    while(pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c)
  {
    skip_ws();
    if(pos_ < src_.size() && src_[pos_] == c)
    {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum()
  {
    auto lhs = parse_product();
    for(;;)
    {
      skip_ws();
      if(pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
      {
        char op = src_[pos_++];
        auto rhs = parse_product();
        lhs = make_node({Expr::Kind::binary, 0.0, op, Expr::Func::sqrt, {lhs, rhs}});
      }
      else
        return lhs;
    }
  }

  NodePtr parse_product()
  {
    auto lhs = parse_unary();
    for(;;)
    {
      skip_ws();
      if(pos_ < src_.size() && (src_[pos_] == '*' || src_[pos_] == '/'))
      {
        char op = src_[pos_++];
        auto rhs = parse_unary();
        lhs = make_node({Expr::Kind::binary, 0.0, op, Expr::Func::sqrt, {lhs, rhs}});
      }
      else
        return lhs;
    }
  }

  NodePtr parse_unary()
  {
    if(accept('-'))
      return make_node({Expr::Kind::negate, 0.0, 0, Expr::Func::sqrt, {parse_unary()}});
    if(accept('+'))
      return parse_unary();
    return parse_power();
  }

  NodePtr parse_power()
  {
    auto base = parse_primary();
    if(accept('^'))
    {
      auto exponent = parse_unary(); // right-associative: a^b^c = a^(b^c)
      return make_node({Expr::Kind::binary, 0.0, '^', Expr::Func::sqrt, {base, exponent}});
    }
    return base;
  }

  NodePtr parse_primary()
  {
    skip_ws();
    if(pos_ >= src_.size())
      throw ParseError("unexpected end of input", pos_);

    const char c = src_[pos_];
    if(c == '(')
    {
      ++pos_;
      auto inner = parse_sum();
      if(!accept(')'))
        throw ParseError("expected ')'", pos_);
      return inner;
    }
    if((c >= '0' && c <= '9') || c == '.')
      return parse_number();
    if(std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_identifier();
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  NodePtr parse_number()
  {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while(pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9')
        ++pos_, ++n;
      return n;
    };
    std::size_t nd = digits();
    if(pos_ < src_.size() && src_[pos_] == '.')
    {
      ++pos_;
      nd += digits();
    }
    if(nd == 0)
      throw ParseError("malformed number", start);
    if(pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E'))
    {
      std::size_t save = pos_++;
      if(pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
        ++pos_;
      if(digits() == 0)
        throw ParseError("malformed exponent", save);
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if(res.ec != std::errc() || res.ptr != src_.data() + pos_)
      throw ParseError("malformed number", start);
    return make_node({Expr::Kind::number, v, 0, Expr::Func::sqrt, {}});
  }

  NodePtr parse_identifier()
  {
    const std::size_t start = pos_;
    while(pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string_view id = src_.substr(start, pos_ - start);

    for(const auto& fi : kFunctions)
    {
      if(fi.name != id)
        continue;
      if(!accept('('))
        throw ParseError("expected '(' after function '" + std::string(id) + "'", pos_);
      std::vector<NodePtr> args;
      args.push_back(parse_sum());
      while(accept(','))
        args.push_back(parse_sum());
      if(!accept(')'))
        throw ParseError("expected ')'", pos_);
      if(args.size() != fi.arity)
        throw ParseError("function '" + std::string(id) + "' expects " + std::to_string(fi.arity) +
                           " argument(s), got " + std::to_string(args.size()),
                         start);
      return make_node({Expr::Kind::call, 0.0, 0, fi.func, std::move(args)});
    }

    if(id == "pi")
      return make_node({Expr::Kind::constant, std::numbers::pi, 0, Expr::Func::sqrt, {}});

    if(id == "t" || id == "r")
    {
      if(var_ != 0 && var_ != id[0])
        throw ParseError("second free variable '" + std::string(id) + "' (only one allowed)", start);
      var_ = id[0];
      return make_node({Expr::Kind::variable, 0.0, 0, Expr::Func::sqrt, {}});
    }

    throw ParseError("unknown identifier '" + std::string(id) + "'", start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  char var_ = 0;
};

double checked(double v, const char* what, double x)
{
  if(!std::isfinite(v))
    throw DomainError(std::string("non-finite result of ") + what, x);
  return v;
}

double eval_node(const Expr::Node& n, double x)
{
  switch(n.kind)
  {
  case Expr::Kind::number:
  case Expr::Kind::constant:
    return n.value;
  case Expr::Kind::variable:
    return x;
  case Expr::Kind::negate:
    return -eval_node(*n.args[0], x);
  case Expr::Kind::binary:
  {
    const double a = eval_node(*n.args[0], x);
    const double b = eval_node(*n.args[1], x);
    switch(n.op)
    {
    case '+': return checked(a + b, "+", x);
    case '-': return checked(a - b, "-", x);
    case '*': return checked(a * b, "*", x);
    case '/':
      if(b == 0.0)
        throw DomainError("division by zero", x);
      return checked(a / b, "/", x);
    default:
      if(a < 0.0 && b != std::trunc(b))
        throw DomainError("non-integer power of negative base", x);
      if(a == 0.0 && b < 0.0)
        throw DomainError("negative power of zero", x);
      return checked(std::pow(a, b), "^", x);
    }
  }
  case Expr::Kind::call:
  {
    const double a = eval_node(*n.args[0], x);
    switch(n.func)
    {
    case Expr::Func::sqrt:
      if(a < 0.0)
        throw DomainError("sqrt of negative argument", x);
      return std::sqrt(a);
    case Expr::Func::ln:
      if(a <= 0.0)
        throw DomainError("ln of non-positive argument", x);
      return std::log(a);
    case Expr::Func::exp: return checked(std::exp(a), "exp", x);
    case Expr::Func::sin: return checked(std::sin(a), "sin", x);
    case Expr::Func::cos: return checked(std::cos(a), "cos", x);
    case Expr::Func::abs: return std::fabs(a);
    case Expr::Func::pow:
    {
      const double b = eval_node(*n.args[1], x);
      if(a < 0.0 && b != std::trunc(b))
        throw DomainError("non-integer power of negative base", x);
      if(a == 0.0 && b < 0.0)
        throw DomainError("negative power of zero", x);
      return checked(std::pow(a, b), "pow", x);
    }
    }
  }
  }
  return 0.0;
}

void print_node(const Expr::Node& n, char var, std::string& out)
{
  switch(n.kind)
  {
  case Expr::Kind::number:
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", n.value);
    out += buf;
    return;
  }
  case Expr::Kind::constant:
    out += "pi";
    return;
  case Expr::Kind::variable:
    out += var;
    return;
  case Expr::Kind::negate:
    out += "(-";
    print_node(*n.args[0], var, out);
    out += ')';
    return;
  case Expr::Kind::binary:
    out += '(';
    print_node(*n.args[0], var, out);
    out += ' ';
    out += n.op;
    out += ' ';
    print_node(*n.args[1], var, out);
    out += ')';
    return;
  case Expr::Kind::call:
    out += func_name(n.func);
    out += '(';
    for(std::size_t i = 0; i < n.args.size(); ++i)
    {
      if(i)
        out += ", ";
      print_node(*n.args[i], var, out);
    }
    out += ')';
    return;
  }
}

bool equal_nodes(const Expr::Node& a, const Expr::Node& b)
{
  if(a.kind != b.kind || a.args.size() != b.args.size())
    return false;
  switch(a.kind)
  {
  case Expr::Kind::number:
    if(a.value != b.value)
      return false;
    break;
  case Expr::Kind::binary:
    if(a.op != b.op)
      return false;
    break;
  case Expr::Kind::call:
    if(a.func != b.func)
      return false;
    break;
  default:
    break;
  }
  for(std::size_t i = 0; i < a.args.size(); ++i)
    if(!equal_nodes(*a.args[i], *b.args[i]))
      return false;
  return true;
}

} // namespace

Expr::Expr() : Expr(make_node({Kind::number, 0.0, 0, Func::sqrt, {}}), 't', false) {}

Expr::Expr(std::shared_ptr<const Node> root, char var, bool uses_var)
  : root_(std::move(root)), var_(var), uses_var_(uses_var)
{
}

Expr Expr::parse(std::string_view src)
{
  Parser p(src);
  auto root = p.parse_all();
  return Expr(std::move(root), p.variable(), p.uses_variable());
}

double Expr::eval(double x) const { return eval_node(*root_, x); }

std::string Expr::to_string() const
{
  std::string out;
  print_node(*root_, var_, out);
  return out;
}

bool Expr::operator==(const Expr& other) const
{
  return uses_var_ == other.uses_var_ && (!uses_var_ || var_ == other.var_) && equal_nodes(*root_, *other.root_);
}

} // namespace hardy
