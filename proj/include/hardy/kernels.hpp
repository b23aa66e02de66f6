#ifndef HARDY_KERNELS_HPP
#define HARDY_KERNELS_HPP

#include "hardy/coefficient.hpp"

#include <span>
#include <vector>

//! Data-parallel inner loops. Every kernel exists twice: `serial` is the
//! reference implementation kept for testing, `parallel` is the OpenMP path.
//! The free functions in `hardy::kernels` dispatch on the active backend.
namespace hardy::kernels
{

enum class Backend { serial, parallel };

void set_backend(Backend b) noexcept;
Backend backend() noexcept;

//! symmetric tridiagonal matrix: diag[0..n), off[0..n-1)
struct Tridiagonal
{
  std::vector<double> diag;
  std::vector<double> off;
};

//! P1 finite-element stiffness  int p u'v' + q u v  and mass  int w u v  on all nodes
struct FemSystem
{
  Tridiagonal stiffness;
  Tridiagonal mass;
};

//! 5-point finite-difference weights (Fornberg) for the derivative of order
//! `order` at x[i], stencil shifted inward near the ends
void fd_weights(std::span<const double> x, std::size_t i, int order, double w[5], std::size_t& first);

#define HARDY_KERNEL_DECLS                                                                                      \
  void sample(const CoefficientFn& f, std::span<const double> x, std::span<double> out);                        \
  void segment_integrals(const CoefficientFn& f, std::span<const double> x, std::span<double> out,              \
                         double rel_tol);                                                                       \
  void fd_derivative(std::span<const double> x, std::span<const double> f, std::span<double> out, int order);   \
  void sl_apply(std::span<const double> x, std::span<const double> f, std::span<const double> df,               \
                std::span<const double> p, std::span<const double> q, std::span<double> out);                   \
  FemSystem assemble_fem(std::span<const double> x, const CoefficientFn& p, const CoefficientFn& q,              \
                         const CoefficientFn& w);                                                               \
  double max_abs(std::span<const double> v);

namespace serial
{
HARDY_KERNEL_DECLS
}
namespace parallel
{
HARDY_KERNEL_DECLS
}
HARDY_KERNEL_DECLS

#undef HARDY_KERNEL_DECLS

// sl_apply: out[i] = -(p f')'(x_i) + q_i f_i for i in [2, n-3]; entries 0,1,n-2,n-1 are left untouched.
// df may be empty, in which case f' is itself taken by 5-point differences.

} // namespace hardy::kernels

#endif // HARDY_KERNELS_HPP
