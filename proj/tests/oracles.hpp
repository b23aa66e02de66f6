#ifndef HARDY_TESTS_ORACLES_HPP
#define HARDY_TESTS_ORACLES_HPP

// independent reference computations shared by the unit and acceptance tests

#include "hardy/radial.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace oracle
{

template<typename F>
double gk(F f, double a, double b)
{
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-14);
}

// 6th-order central difference
template<typename F>
double d1_central6(F f, double t, double h)
{
  return (-f(t - 3 * h) + 9 * f(t - 2 * h) - 45 * f(t - h) + 45 * f(t + h) - 9 * f(t + 2 * h) + f(t + 3 * h)) /
         (60 * h);
}

inline double omega(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }

// bump with int phi dx = mass
inline hardy::CoefficientFn bump(int n, double R, double mass)
{
  const auto shape = hardy::radial_bump(R);
  const double m = omega(n) * gk([&](double s) { return shape(s) * std::pow(s, n - 1.0); }, 0.0, R);
  return hardy::radial_bump(R, mass / m);
}

// Newton potential (1/((n-2) omega_n)) int phi(|y|) |x - y|^(2-n) dy, for |x| = r > R, by quadrature
// over the radius s and the angle between x and y
inline double newton_potential(int n, const hardy::CoefficientFn& phi, double R, double r)
{
  const double pre = omega(n - 1) / ((n - 2.0) * omega(n));
  auto radial = [&](double s) {
    auto ang = [&](double psi) {
      return std::pow(std::sin(psi), n - 2.0) *
             std::pow(r * r + s * s - 2.0 * r * s * std::cos(psi), -(n - 2.0) / 2.0);
    };
    return phi(s) * std::pow(s, n - 1.0) * gk(ang, 0.0, std::numbers::pi);
  };
  return pre * gk(radial, 0.0, R);
}

// geometric sample of (1.05 R, 50 R)
inline std::vector<double> exterior_points(double R, std::size_t k)
{
  std::vector<double> r;
  for(std::size_t i = 0; i < k; ++i)
    r.push_back(R * 1.05 * std::pow(50.0 / 1.05, static_cast<double>(i) / (k - 1.0)));
  return r;
}

} // namespace oracle

#endif // HARDY_TESTS_ORACLES_HPP
