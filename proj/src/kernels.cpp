#include "hardy/kernels.hpp"

#include <algorithm>
#include <atomic>

namespace hardy::kernels
{

namespace
{
std::atomic<Backend> g_backend{Backend::parallel};
}

void set_backend(Backend b) noexcept { g_backend.store(b); }
Backend backend() noexcept { return g_backend.load(); }

void fd_weights(std::span<const double> x, std::size_t i, int order, double w[5], std::size_t& first)
{
  const std::size_t n = x.size();
  first = i < 2 ? 0 : std::min(i - 2, n - 5);
  const double z = x[i];

  // Fornberg's recursion for derivatives 0..order on the 5 stencil nodes
  double c[5][3] = {};
  double c1 = 1.0, c4 = x[first] - z;
  c[0][0] = 1.0;
  for(int a = 1; a < 5; ++a)
  {
    const int mn = std::min(a, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[first + a] - z;
    for(int b = 0; b < a; ++b)
    {
      const double c3 = x[first + a] - x[first + b];
      c2 *= c3;
      if(b == a - 1)
      {
        for(int k = mn; k >= 1; --k)
          c[a][k] = c1 * (k * c[a - 1][k - 1] - c5 * c[a - 1][k]) / c2;
        c[a][0] = -c1 * c5 * c[a - 1][0] / c2;
      }
      for(int k = mn; k >= 1; --k)
        c[b][k] = (c4 * c[b][k] - k * c[b][k - 1]) / c3;
      c[b][0] = c4 * c[b][0] / c3;
    }
    c1 = c2;
  }
  for(int k = 0; k < 5; ++k)
    w[k] = c[k][order];
}

#define HARDY_DISPATCH(call) (backend() == Backend::parallel ? parallel::call : serial::call)

void sample(const CoefficientFn& f, std::span<const double> x, std::span<double> out)
{
  HARDY_DISPATCH(sample(f, x, out));
}

void segment_integrals(const CoefficientFn& f, std::span<const double> x, std::span<double> out, double rel_tol)
{
  HARDY_DISPATCH(segment_integrals(f, x, out, rel_tol));
}

void fd_derivative(std::span<const double> x, std::span<const double> f, std::span<double> out, int order)
{
  HARDY_DISPATCH(fd_derivative(x, f, out, order));
}

void sl_apply(std::span<const double> x, std::span<const double> f, std::span<const double> df,
              std::span<const double> p, std::span<const double> q, std::span<double> out)
{
  HARDY_DISPATCH(sl_apply(x, f, df, p, q, out));
}

FemSystem assemble_fem(std::span<const double> x, const CoefficientFn& p, const CoefficientFn& q,
                       const CoefficientFn& w)
{
  return HARDY_DISPATCH(assemble_fem(x, p, q, w));
}

double max_abs(std::span<const double> v) { return HARDY_DISPATCH(max_abs(v)); }

#undef HARDY_DISPATCH

} // namespace hardy::kernels
