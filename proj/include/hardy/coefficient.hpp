#ifndef HARDY_COEFFICIENT_HPP
#define HARDY_COEFFICIENT_HPP

#include "hardy/expr.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace hardy
{

//! Evaluable scalar function of one variable (p, q, w, phi, f, ...).
//! Cheap to copy; the wrapped callable is shared and must be pure.
class CoefficientFn
{
public:
  using Callable = std::function<double(double)>;

  CoefficientFn(double constant = 0.0); // NOLINT: implicit on purpose, `CoefficientFn p = 1.0`
  explicit CoefficientFn(Expr e);
  CoefficientFn(Callable fn, std::string label);

  static CoefficientFn parse(std::string_view src) { return CoefficientFn(Expr::parse(src)); }

  double operator()(double x) const { return (*fn_)(x); }

  const std::string& label() const noexcept { return label_; }
  std::optional<double> constant_value() const noexcept { return constant_; }

private:
  std::shared_ptr<const Callable> fn_;
  std::string label_;
  std::optional<double> constant_;
};

//! Richardson-extrapolated central difference of order 1 or 2.
//! `scale` is a length over which f is smooth (typically the distance to the
//! nearest singularity); the stencil never leaves (x - scale/2, x + scale/2).
double numeric_derivative(const CoefficientFn& f, double x, int order, double scale);

} // namespace hardy

#endif // HARDY_COEFFICIENT_HPP
