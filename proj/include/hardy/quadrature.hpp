#ifndef HARDY_QUADRATURE_HPP
#define HARDY_QUADRATURE_HPP

#include <functional>

namespace hardy
{

struct QuadratureResult
{
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0; // integral of |f|
};

//! Globally adaptive Gauss-Kronrod (7/15) on a finite interval [a,b] (a > b allowed, sign flips).
//! The panel with the largest error estimate is bisected until the total error meets rel_tol.
//! Throws QuadratureError when the estimate is non-finite or the error target is missed by 1000x.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                           unsigned max_panels = 4000);

inline double integral(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12)
{
  return integrate(f, a, b, rel_tol).value;
}

} // namespace hardy

#endif // HARDY_QUADRATURE_HPP
