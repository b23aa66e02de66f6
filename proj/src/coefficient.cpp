#include "hardy/coefficient.hpp"

#include "hardy/error.hpp"

#include <array>
#include <cmath>

namespace hardy
{

CoefficientFn::CoefficientFn(double constant)
  : fn_(std::make_shared<const Callable>([constant](double) { return constant; })),
    label_(std::to_string(constant)), constant_(constant)
{
}

CoefficientFn::CoefficientFn(Expr e) : label_(e.to_string())
{
  if(e.is_constant())
    constant_ = e.eval(0.0);
  fn_ = std::make_shared<const Callable>([e = std::move(e)](double x) { return e.eval(x); });
}

CoefficientFn::CoefficientFn(Callable fn, std::string label)
  : fn_(std::make_shared<const Callable>(std::move(fn))), label_(std::move(label))
{
}

double numeric_derivative(const CoefficientFn& f, double x, int order, double scale)
{
  if(order != 1 && order != 2)
    throw ModuleError("ode_engine", "numeric_derivative supports order 1 or 2");
  if(!(scale > 0.0))
    throw ModuleError("ode_engine", "numeric_derivative needs a positive scale");

  // three-level Richardson tableau on steps h, h/2, h/4 (error O(h^6))
  constexpr int levels = 3;
  std::array<double, levels> d{};
  double h = 0.04 * scale;
  const double fx = order == 2 ? f(x) : 0.0;
  for(int i = 0; i < levels; ++i, h *= 0.5)
  {
    const double fp = f(x + h), fm = f(x - h);
    d[i] = order == 1 ? (fp - fm) / (2.0 * h) : (fp - 2.0 * fx + fm) / (h * h);
  }
  for(int k = 1; k < levels; ++k)
  {
    const double factor = std::pow(4.0, k);
    for(int i = levels - 1; i >= k; --i)
      d[i] = (factor * d[i] - d[i - 1]) / (factor - 1.0);
  }
  return d[levels - 1];
}

} // namespace hardy
