// Serial reference kernels against their OpenMP counterparts.
// Run with OMP_NUM_THREADS set to the core count to see the speedup.

#include "hardy/certify.hpp"
#include "hardy/kernels.hpp"
#include "hardy/radial.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace hardy;
namespace k = hardy::kernels;

namespace
{

std::vector<double> grid(std::size_t n)
{
  std::vector<double> x(n);
  for(std::size_t i = 0; i < n; ++i)
    x[i] = 1e-6 * std::pow(1e12, static_cast<double>(i) / (n - 1.0));
  return x;
}

const CoefficientFn heavy([](double t) { return std::exp(-std::sqrt(t)) * std::cos(std::log(t)) + 1.0 / (1.0 + t); },
                          "heavy");
const CoefficientFn euler_w([](double t) { return 0.25 / (t * t); }, "1/(4t^2)");

template<k::Backend B>
void sample(benchmark::State& st)
{
  const auto x = grid(static_cast<std::size_t>(st.range(0)));
  std::vector<double> out(x.size());
  for(auto _ : st)
  {
    if constexpr(B == k::Backend::serial)
      k::serial::sample(heavy, x, out);
    else
      k::parallel::sample(heavy, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template<k::Backend B>
void segment_integrals(benchmark::State& st)
{
  const auto x = grid(static_cast<std::size_t>(st.range(0)));
  std::vector<double> out(x.size() - 1);
  for(auto _ : st)
  {
    if constexpr(B == k::Backend::serial)
      k::serial::segment_integrals(heavy, x, out, 1e-10);
    else
      k::parallel::segment_integrals(heavy, x, out, 1e-10);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template<k::Backend B>
void assemble_fem(benchmark::State& st)
{
  const auto x = grid(static_cast<std::size_t>(st.range(0)));
  for(auto _ : st)
  {
    auto sys = B == k::Backend::serial ? k::serial::assemble_fem(x, heavy, heavy, euler_w)
                                       : k::parallel::assemble_fem(x, heavy, heavy, euler_w);
    benchmark::DoNotOptimize(sys.mass.diag.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template<k::Backend B>
void sl_apply(benchmark::State& st)
{
  const auto x = grid(static_cast<std::size_t>(st.range(0)));
  const std::size_t n = x.size();
  std::vector<double> f(n), p(n), q(n), out(n);
  for(std::size_t i = 0; i < n; ++i)
  {
    f[i] = std::sqrt(x[i]);
    p[i] = 1.0;
    q[i] = euler_w(x[i]);
  }
  for(auto _ : st)
  {
    if constexpr(B == k::Backend::serial)
      k::serial::sl_apply(x, f, {}, p, q, out);
    else
      k::parallel::sl_apply(x, f, {}, p, q, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

// end-to-end: every kernel call inside goes through the selected backend
template<k::Backend B>
void certify_classical(benchmark::State& st)
{
  k::set_backend(B);
  const Interval half(0.0, std::numeric_limits<double>::infinity(), EndpointKind::singular, EndpointKind::infinite);
  const SLProblem prob{1.0, 0.0, half};
  const auto fam = classical_family(half, {1e-8, 1e8});
  for(auto _ : st)
    benchmark::DoNotOptimize(certify_optimality_1d(prob, fam).residual);
  k::set_backend(k::Backend::parallel);
}

template<k::Backend B>
void rellich(benchmark::State& st)
{
  k::set_backend(B);
  const auto rp = make_radial_problem(3, radial_bump(1.0), 1.0);
  const auto psis = random_annular_bumps(1.05, 6.0, static_cast<std::size_t>(st.range(0)), 1);
  for(auto _ : st)
    benchmark::DoNotOptimize(rellich_check(rp, 0.5 / rp.sup_t, psis).front().lhs);
  k::set_backend(k::Backend::parallel);
}

} // namespace

constexpr auto S = k::Backend::serial;
constexpr auto P = k::Backend::parallel;

BENCHMARK(sample<S>)->Name("sample/serial")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(sample<P>)->Name("sample/omp")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(segment_integrals<S>)->Name("segment_integrals/serial")->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(segment_integrals<P>)->Name("segment_integrals/omp")->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(assemble_fem<S>)->Name("assemble_fem/serial")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(assemble_fem<P>)->Name("assemble_fem/omp")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(sl_apply<S>)->Name("sl_apply/serial")->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(sl_apply<P>)->Name("sl_apply/omp")->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(certify_classical<S>)->Name("certify_classical/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(certify_classical<P>)->Name("certify_classical/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(rellich<S>)->Name("rellich/serial")->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(rellich<P>)->Name("rellich/omp")->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
