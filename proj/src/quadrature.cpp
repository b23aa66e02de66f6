#include "hardy/quadrature.hpp"

#include "hardy/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <vector>

namespace hardy
{

namespace
{

struct Panel
{
  double a, b, value, error, l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// single GK15 panel; node and weight tables come from Boost (abscissa 0 is the centre,
// even Kronrod indices coincide with the 7 Gauss nodes)
Panel gk15(const std::function<double(double)>& f, double a, double b)
{
  using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& x = kronrod::abscissa();
  const auto& wk = kronrod::weights();
  const auto& wg = gauss::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double f0 = f(c);
  double k = wk[0] * f0, g = wg[0] * f0, l1 = wk[0] * std::fabs(f0);
  for(std::size_t i = 1; i < x.size(); ++i)
  {
    const double fl = f(c - h * x[i]), fr = f(c + h * x[i]);
    k += wk[i] * (fl + fr);
    l1 += wk[i] * (std::fabs(fl) + std::fabs(fr));
    if(i % 2 == 0)
      g += wg[i / 2] * (fl + fr);
  }
  Panel p{a, b, k * h, std::fabs((k - g) * h), l1 * std::fabs(h)};
  // QUADPACK-style sharpening: |K - G| overstates the error of the Kronrod result
  if(p.l1 > 0.0)
    p.error = p.l1 * std::min(1.0, std::pow(200.0 * p.error / p.l1, 1.5));
  return p;
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                           unsigned max_panels)
{
  if(!std::isfinite(a) || !std::isfinite(b))
    throw QuadratureError("integrate() takes finite bounds; map infinite ranges first");
  QuadratureResult r;
  if(a == b)
    return r;
  const double sign = a < b ? 1.0 : -1.0;
  if(a > b)
    std::swap(a, b);

  std::priority_queue<Panel> heap;
  heap.push(gk15(f, a, b));
  double value = heap.top().value, error = heap.top().error, l1 = heap.top().l1;
  auto converged = [&] {
    return error <= rel_tol * l1 + std::numeric_limits<double>::min() ||
           error <= 64.0 * std::numeric_limits<double>::epsilon() * l1;
  };
  while(!converged() && heap.size() < max_panels && std::isfinite(value))
  {
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if(!(mid > worst.a && mid < worst.b))
      break;
    heap.pop();
    const Panel left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  // re-sum to remove drift from the running updates
  value = error = l1 = 0.0;
  while(!heap.empty())
  {
    value += heap.top().value;
    error += heap.top().error;
    l1 += heap.top().l1;
    heap.pop();
  }
  r.value = sign * value;
  r.error = error;
  r.l1 = l1;
  if(!std::isfinite(r.value))
  {
    char buf[120];
    std::snprintf(buf, sizeof buf, "non-finite integral on [%.6g, %.6g]", a, b);
    throw QuadratureError(buf);
  }
  const double target = rel_tol * r.l1 + std::numeric_limits<double>::min();
  if(r.error > 1000.0 * target && r.error > 1e-13 * r.l1)
  {
    char buf[160];
    std::snprintf(buf, sizeof buf, "quadrature did not converge on [%.6g, %.6g]: error %.3g", a, b, r.error);
    throw QuadratureError(buf);
  }
  return r;
}

} // namespace hardy
