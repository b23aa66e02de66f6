#include "hardy/grid.hpp"

#include "hardy/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hardy
{

std::string_view to_string(EndpointKind k)
{
  switch(k)
  {
  case EndpointKind::regular: return "regular";
  case EndpointKind::singular: return "singular";
  case EndpointKind::infinite: return "infinite";
  }
  return "?";
}

std::string_view to_string(Side s) { return s == Side::left ? "left" : "right"; }

std::string_view to_string(Grading g)
{
  switch(g)
  {
  case Grading::uniform: return "uniform";
  case Grading::log_left: return "log-left";
  case Grading::log_right: return "log-right";
  case Grading::log_both: return "log-both";
  }
  return "?";
}

EndpointKind endpoint_kind_from_string(std::string_view s)
{
  if(s == "regular")
    return EndpointKind::regular;
  if(s == "singular")
    return EndpointKind::singular;
  if(s == "infinite")
    return EndpointKind::infinite;
  throw GridError("unknown endpoint kind '" + std::string(s) + "'");
}

Grading grading_from_string(std::string_view s)
{
  if(s == "uniform")
    return Grading::uniform;
  if(s == "log-left")
    return Grading::log_left;
  if(s == "log-right")
    return Grading::log_right;
  if(s == "log-both")
    return Grading::log_both;
  throw GridError("unknown grading '" + std::string(s) + "'");
}

Interval::Interval(double a_, double b_, EndpointKind left_, EndpointKind right_)
  : a(a_), b(b_), left(left_), right(right_)
{
  if(!(a < b))
    throw GridError("interval requires a < b");
  if(std::isinf(a) != (left == EndpointKind::infinite) || std::isinf(b) != (right == EndpointKind::infinite))
    throw GridError("endpoint kind 'infinite' must match an infinite bound");
}

double Interval::reference_point() const
{
  const bool fa = std::isfinite(a), fb = std::isfinite(b);
  if(fa && fb)
    return 0.5 * (a + b);
  if(fa)
    return a + 1.0;
  if(fb)
    return b - 1.0;
  return 0.0;
}

std::vector<double> make_grid(const Interval& iv, std::pair<double, double> cutoffs, std::size_t n,
                              Grading grading)
{
  auto [lo, hi] = cutoffs;
  if(n < 16)
    throw GridError("grid needs at least 16 nodes");
  if(!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw GridError("cutoffs must be finite and increasing");
  const bool lo_ok = lo > iv.a || (lo == iv.a && iv.left == EndpointKind::regular);
  const bool hi_ok = hi < iv.b || (hi == iv.b && iv.right == EndpointKind::regular);
  if(!lo_ok || !hi_ok)
    throw GridError("cutoffs (" + std::to_string(lo) + ", " + std::to_string(hi) + ") outside the interval");

  const bool fa = std::isfinite(iv.a), fb = std::isfinite(iv.b);
  std::function<double(double)> to_s, from_s;
  const double a = iv.a, b = iv.b;

  const bool want_left = grading == Grading::log_left || grading == Grading::log_both;
  const bool want_right = grading == Grading::log_right || grading == Grading::log_both;

  if(grading == Grading::uniform)
  {
    to_s = [](double t) { return t; };
    from_s = [](double s) { return s; };
  }
  else if(fa && !fb)
  {
    const double a0 = lo == a ? a - 1.0 : a;
    to_s = [a0](double t) { return std::log(t - a0); };
    from_s = [a0](double s) { return a0 + std::exp(s); };
  }
  else if(!fa && fb)
  {
    const double b0 = hi == b ? b + 1.0 : b;
    to_s = [b0](double t) { return -std::log(b0 - t); };
    from_s = [b0](double s) { return b0 - std::exp(-s); };
  }
  else if(!fa && !fb)
  {
    to_s = [](double t) { return std::asinh(t); };
    from_s = [](double s) { return std::sinh(s); };
  }
  else if(want_left && want_right)
  {
    to_s = [a, b](double t) { return std::log((t - a) / (b - t)); };
    from_s = [a, b](double s) {
      return s > 0 ? (a * std::exp(-s) + b) / (1.0 + std::exp(-s)) : (a + b * std::exp(s)) / (1.0 + std::exp(s));
    };
  }
  else if(want_left)
  {
    const double a0 = lo == a ? a - (b - a) : a;
    to_s = [a0](double t) { return std::log(t - a0); };
    from_s = [a0](double s) { return a0 + std::exp(s); };
  }
  else
  {
    const double b0 = hi == b ? b + (b - a) : b;
    to_s = [b0](double t) { return -std::log(b0 - t); };
    from_s = [b0](double s) { return b0 - std::exp(-s); };
  }

  const double s0 = to_s(lo), s1 = to_s(hi);
  if(!std::isfinite(s0) || !std::isfinite(s1))
    throw GridError("log grading needs cutoffs away from the graded endpoint");

  std::vector<double> nodes(n);
  for(std::size_t i = 0; i < n; ++i)
    nodes[i] = from_s(s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(n - 1));
  nodes.front() = lo;
  nodes.back() = hi;
  for(std::size_t i = 1; i < n; ++i)
    if(!(nodes[i] > nodes[i - 1]))
      throw GridError("grid collapsed in floating point; reduce n or widen cutoffs");
  return nodes;
}

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values, std::vector<double> derivs,
                           EndpointKind left, EndpointKind right)
  : nodes_(std::move(nodes)), values_(std::move(values)), derivs_(std::move(derivs)), left_(left), right_(right)
{
  if(nodes_.size() < 2 || values_.size() != nodes_.size())
    throw GridError("grid function needs >= 2 nodes and one value per node");
  if(!derivs_.empty() && derivs_.size() != nodes_.size())
    throw GridError("derivative data must have one value per node");
  for(std::size_t i = 0; i < nodes_.size(); ++i)
  {
    if(i > 0 && !(nodes_[i] > nodes_[i - 1]))
      throw GridError("grid nodes must be strictly increasing");
    if(!std::isfinite(values_[i]) || (!derivs_.empty() && !std::isfinite(derivs_[i])))
      throw GridError("non-finite grid value at t=" + std::to_string(nodes_[i]));
  }
}

GridFunction GridFunction::sample(std::span<const double> nodes, const CoefficientFn& f, const CoefficientFn* df)
{
  std::vector<double> t(nodes.begin(), nodes.end()), v(nodes.size()), d;
  for(std::size_t i = 0; i < t.size(); ++i)
    v[i] = f(t[i]);
  if(df)
  {
    d.resize(t.size());
    for(std::size_t i = 0; i < t.size(); ++i)
      d[i] = (*df)(t[i]);
  }
  return GridFunction(std::move(t), std::move(v), std::move(d));
}

std::size_t GridFunction::locate(double x) const
{
  const double span = nodes_.back() - nodes_.front();
  const double slack = 1e-12 * std::max(span, std::fabs(x));
  if(x < nodes_.front() - slack || x > nodes_.back() + slack || std::isnan(x))
    throw GridError("evaluation at t=" + std::to_string(x) + " outside grid [" + std::to_string(nodes_.front()) +
                    ", " + std::to_string(nodes_.back()) + "]");
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(i, nodes_.size() - 2);
}

double GridFunction::operator()(double x) const
{
  const std::size_t i = locate(x);
  const double t0 = nodes_[i], t1 = nodes_[i + 1], h = t1 - t0;
  if(x == t0)
    return values_[i];
  if(x == t1)
    return values_[i + 1];
  const double s = (x - t0) / h;
  if(derivs_.empty())
    return values_[i] + s * (values_[i + 1] - values_[i]);
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * values_[i] + h10 * h * derivs_[i] + h01 * values_[i + 1] + h11 * h * derivs_[i + 1];
}

double GridFunction::derivative(double x) const
{
  const std::size_t i = locate(x);
  const double t0 = nodes_[i], t1 = nodes_[i + 1], h = t1 - t0;
  if(derivs_.empty())
    return (values_[i + 1] - values_[i]) / h;
  if(x == t0)
    return derivs_[i];
  if(x == t1)
    return derivs_[i + 1];
  const double s = (x - t0) / h, s2 = s * s;
  const double d00 = (6 * s2 - 6 * s) / h, d10 = 3 * s2 - 4 * s + 1, d01 = (-6 * s2 + 6 * s) / h, d11 = 3 * s2 - 2 * s;
  return d00 * values_[i] + d10 * derivs_[i] + d01 * values_[i + 1] + d11 * derivs_[i + 1];
}

GridFunction GridFunction::restrict(double lo, double hi) const
{
  std::vector<double> t, v, d;
  for(std::size_t i = 0; i < nodes_.size(); ++i)
  {
    if(nodes_[i] < lo || nodes_[i] > hi)
      continue;
    t.push_back(nodes_[i]);
    v.push_back(values_[i]);
    if(!derivs_.empty())
      d.push_back(derivs_[i]);
  }
  return GridFunction(std::move(t), std::move(v), std::move(d), left_, right_);
}

GridFunction GridFunction::scaled(double factor) const
{
  auto v = values_;
  auto d = derivs_;
  for(auto& x : v)
    x *= factor;
  for(auto& x : d)
    x *= factor;
  return GridFunction(nodes_, std::move(v), std::move(d), left_, right_);
}

CoefficientFn GridFunction::as_coefficient(std::string label) const
{
  auto self = std::make_shared<const GridFunction>(*this);
  return CoefficientFn([self](double x) { return (*self)(x); }, std::move(label));
}

} // namespace hardy
