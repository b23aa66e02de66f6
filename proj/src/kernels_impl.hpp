// Shared loop bodies for the serial and OpenMP kernel sets. Included by
// kernels_serial.cpp (HARDY_KERNELS_PARALLEL=0) and kernels_omp.cpp (=1).
#ifndef HARDY_KERNELS_IMPL_HPP
#define HARDY_KERNELS_IMPL_HPP

#include "hardy/error.hpp"
#include "hardy/kernels.hpp"
#include "hardy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#if HARDY_KERNELS_PARALLEL
#define HARDY_OMP_FOR _Pragma("omp parallel for schedule(static)")
#define HARDY_OMP_FOR_DYNAMIC _Pragma("omp parallel for schedule(dynamic, 8)")
#define HARDY_OMP_FOR_MAX_M _Pragma("omp parallel for reduction(max : m)")
#else
#define HARDY_OMP_FOR
#define HARDY_OMP_FOR_DYNAMIC
#define HARDY_OMP_FOR_MAX_M
#endif

namespace hardy::kernels::HARDY_KERNELS_NS
{

namespace
{

// first exception thrown inside a parallel region, rethrown after the join
class ExceptionSlot
{
public:
  template<typename F>
  void run(F&& f) noexcept
  {
    try
    {
      f();
    }
    catch(...)
    {
      std::lock_guard lock(mutex_);
      if(!eptr_)
        eptr_ = std::current_exception();
    }
  }
  void rethrow() const
  {
    if(eptr_)
      std::rethrow_exception(eptr_);
  }

private:
  std::mutex mutex_;
  std::exception_ptr eptr_;
};

} // namespace

void sample(const CoefficientFn& f, std::span<const double> x, std::span<double> out)
{
  ExceptionSlot slot;
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  HARDY_OMP_FOR
  for(std::ptrdiff_t i = 0; i < n; ++i)
    slot.run([&] { out[i] = f(x[i]); });
  slot.rethrow();
}

void segment_integrals(const CoefficientFn& f, std::span<const double> x, std::span<double> out, double rel_tol)
{
  ExceptionSlot slot;
  const auto n = static_cast<std::ptrdiff_t>(x.size()) - 1;
  HARDY_OMP_FOR_DYNAMIC
  for(std::ptrdiff_t i = 0; i < n; ++i)
    slot.run([&] { out[i] = integrate([&f](double t) { return f(t); }, x[i], x[i + 1], rel_tol).value; });
  slot.rethrow();
}

void fd_derivative(std::span<const double> x, std::span<const double> f, std::span<double> out, int order)
{
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  HARDY_OMP_FOR
  for(std::ptrdiff_t i = 0; i < n; ++i)
  {
    double w[5];
    std::size_t first = 0;
    fd_weights(x, static_cast<std::size_t>(i), order, w, first);
    double acc = 0.0;
    for(int k = 0; k < 5; ++k)
      acc += w[k] * f[first + k];
    out[i] = acc;
  }
}

void sl_apply(std::span<const double> x, std::span<const double> f, std::span<const double> df,
              std::span<const double> p, std::span<const double> q, std::span<double> out)
{
  const std::size_t n = x.size();
  std::vector<double> flux(n);
  if(df.empty())
    fd_derivative(x, f, flux, 1);
  else
    std::copy(df.begin(), df.end(), flux.begin());

  const auto nn = static_cast<std::ptrdiff_t>(n);
  HARDY_OMP_FOR
  for(std::ptrdiff_t i = 0; i < nn; ++i)
    flux[i] *= p[i];

  HARDY_OMP_FOR
  for(std::ptrdiff_t i = 2; i < nn - 2; ++i)
  {
    double w[5];
    std::size_t first = 0;
    fd_weights(x, static_cast<std::size_t>(i), 1, w, first);
    double dflux = 0.0;
    for(int k = 0; k < 5; ++k)
      dflux += w[k] * flux[first + k];
    out[i] = -dflux + q[i] * f[i];
  }
}

FemSystem assemble_fem(std::span<const double> x, const CoefficientFn& p, const CoefficientFn& q,
                       const CoefficientFn& w)
{
  const std::size_t n = x.size();
  const auto ne = static_cast<std::ptrdiff_t>(n) - 1;
  // per-element 2x2 blocks: [00, 01, 11]
  std::vector<double> ke(3 * (n - 1)), me(3 * (n - 1));

  static const double gx[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
  static const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  ExceptionSlot slot;
  HARDY_OMP_FOR
  for(std::ptrdiff_t e = 0; e < ne; ++e)
  {
    slot.run([&] {
      const double h = x[e + 1] - x[e];
      double k00 = 0, k01 = 0, k11 = 0, m00 = 0, m01 = 0, m11 = 0;
      for(int g = 0; g < 3; ++g)
      {
        const double t = x[e] + gx[g] * h;
        const double phi0 = 1.0 - gx[g], phi1 = gx[g];
        const double pv = p(t), qv = q(t), wv = w(t);
        const double jw = gw[g] * h;
        k00 += jw * (pv / (h * h) + qv * phi0 * phi0);
        k01 += jw * (-pv / (h * h) + qv * phi0 * phi1);
        k11 += jw * (pv / (h * h) + qv * phi1 * phi1);
        m00 += jw * wv * phi0 * phi0;
        m01 += jw * wv * phi0 * phi1;
        m11 += jw * wv * phi1 * phi1;
      }
      ke[3 * e] = k00, ke[3 * e + 1] = k01, ke[3 * e + 2] = k11;
      me[3 * e] = m00, me[3 * e + 1] = m01, me[3 * e + 2] = m11;
    });
  }
  slot.rethrow();

  FemSystem sys;
  sys.stiffness.diag.assign(n, 0.0);
  sys.stiffness.off.assign(n - 1, 0.0);
  sys.mass.diag.assign(n, 0.0);
  sys.mass.off.assign(n - 1, 0.0);
  const auto nn = static_cast<std::ptrdiff_t>(n);
  HARDY_OMP_FOR
  for(std::ptrdiff_t i = 0; i < nn; ++i)
  {
    double kd = 0, md = 0;
    if(i > 0)
      kd += ke[3 * (i - 1) + 2], md += me[3 * (i - 1) + 2];
    if(i < ne)
    {
      kd += ke[3 * i], md += me[3 * i];
      sys.stiffness.off[i] = ke[3 * i + 1];
      sys.mass.off[i] = me[3 * i + 1];
    }
    sys.stiffness.diag[i] = kd;
    sys.mass.diag[i] = md;
  }
  return sys;
}

double max_abs(std::span<const double> v)
{
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  HARDY_OMP_FOR_MAX_M
  for(std::ptrdiff_t i = 0; i < n; ++i)
    m = std::max(m, std::fabs(v[i]));
  return m;
}

} // namespace hardy::kernels::HARDY_KERNELS_NS

#endif // HARDY_KERNELS_IMPL_HPP
