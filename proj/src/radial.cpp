#include "hardy/radial.hpp"

#include "hardy/error.hpp"
#include "hardy/kernels.hpp"
#include "hardy/quadrature.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <random>

namespace hardy
{

namespace
{

[[noreturn]] void fail(const std::string& msg) { throw ModuleError("hardy_nd", msg); }

std::vector<double> geometric(double lo, double hi, std::size_t n)
{
  std::vector<double> x(n);
  for(std::size_t i = 0; i < n; ++i)
    x[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  x.front() = lo;
  x.back() = hi;
  return x;
}

} // namespace

double unit_sphere_area(int n)
{
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

CoefficientFn radial_bump(double R, double amplitude)
{
  if(!(R > 0.0) || !std::isfinite(R))
    fail("bump radius must be positive and finite");
  return CoefficientFn(
    [R, amplitude](double r) {
      const double x = r / R;
      return x < 1.0 ? amplitude * std::exp(-1.0 / (1.0 - x * x)) : 0.0;
    },
    "bump");
}

std::string_view to_string(NDKind k)
{
  switch(k)
  {
  case NDKind::classical: return "classical";
  case NDKind::pullback: return "pullback";
  case NDKind::improved: return "improved";
  }
  return "?";
}

GridFunction green_potential_radial(int n, const CoefficientFn& phi, std::span<const double> r)
{
  if(n < 3)
    fail("dimension must be at least 3, got " + std::to_string(n));
  const std::size_t N = r.size();
  if(N < 2 || !(r[0] >= 0.0))
    fail("radial grid needs >= 2 nodes starting at r >= 0");
  for(std::size_t i = 1; i < N; ++i)
    if(!(r[i] > r[i - 1]))
      fail("radial grid must be strictly increasing");

  std::vector<double> ph(N);
  kernels::sample(phi, r, ph);
  if(ph.back() != 0.0)
    fail("phi does not vanish at the end of the grid (unbounded support?)");
  for(std::size_t i = 0; i < N; ++i)
    if(!(ph[i] >= 0.0))
      fail("phi must be nonnegative, phi(" + std::to_string(r[i]) + ") = " + std::to_string(ph[i]));
  if(kernels::max_abs(ph) == 0.0)
    fail("phi vanishes identically on the grid");

  const double dn = n;
  const CoefficientFn m_int([phi, dn](double s) { return phi(s) * std::pow(s, dn - 1.0); }, "phi s^(n-1)");
  const CoefficientFn t_int([phi](double s) { return phi(s) * s; }, "phi s");

  std::vector<double> x(r.begin(), r.end());
  const bool head = x.front() > 0.0;
  if(head)
    x.insert(x.begin(), 0.0);
  std::vector<double> sm(x.size() - 1), st(x.size() - 1);
  kernels::segment_integrals(m_int, x, sm, 1e-13);
  kernels::segment_integrals(t_int, x, st, 1e-13);

  std::vector<double> m(N), tail(N);
  double acc = head ? sm[0] : 0.0;
  const std::size_t off = head ? 1 : 0;
  m[0] = acc;
  for(std::size_t i = 1; i < N; ++i)
    m[i] = (acc += sm[i - 1 + off]);
  acc = 0.0;
  tail[N - 1] = 0.0;
  for(std::size_t i = N - 1; i-- > 0;)
    tail[i] = (acc += st[i + off]);

  std::vector<double> G(N), dG(N);
  for(std::size_t i = 0; i < N; ++i)
  {
    const double ri = r[i];
    const double inner = ri > 0.0 ? std::pow(ri, 2.0 - dn) * m[i] : 0.0;
    G[i] = (inner + tail[i]) / (dn - 2.0);
    dG[i] = ri > 0.0 ? -std::pow(ri, 1.0 - dn) * m[i] : 0.0;
  }
  return GridFunction(std::vector<double>(r.begin(), r.end()), std::move(G), std::move(dG));
}

std::pair<double, double> RadialProblem::green(double r) const
{
  // past R_phi the mass is complete and G is exactly C r^(2-n)
  if(r < R_phi)
    return {G(r), G.derivative(r)};
  const double dn = n;
  return {C * std::pow(r, 2.0 - dn), -(dn - 2.0) * C * std::pow(r, 1.0 - dn)};
}

std::pair<double, double> RadialProblem::t(double r) const
{
  const auto [g, dg] = green(r);
  if(auto c = u.constant_value())
    return {g / *c, dg / *c};
  const double uv = u(r), du = numeric_derivative(u, r, 1, r);
  return {g / uv, (dg * uv - g * du) / (uv * uv)};
}

RadialProblem make_radial_problem(int n, const CoefficientFn& phi, double R_phi, const CoefficientFn& u,
                                  const RadialOptions& opts)
{
  if(n < 3)
    fail("dimension must be at least 3, got " + std::to_string(n));
  if(!(R_phi > 0.0) || !std::isfinite(R_phi))
    fail("R_phi must be positive and finite");
  if(!(opts.r_min > 0.0 && opts.r_min < 0.01) || !(opts.r_max > 1.0) || opts.core < 4 || opts.inner < 16 ||
     opts.outer < 16)
    fail("invalid radial grid options");

  RadialProblem rp;
  rp.n = n;
  rp.R_phi = R_phi;
  rp.u = u;
  rp.phi = CoefficientFn([phi, R_phi](double r) { return r < R_phi ? phi(r) : 0.0; }, phi.label());

  auto x = geometric(opts.r_min * R_phi, 0.01 * R_phi, opts.core);
  for(std::size_t i = 1; i < opts.inner; ++i)
    x.push_back(0.01 * R_phi + (R_phi - 0.01 * R_phi) * static_cast<double>(i) / static_cast<double>(opts.inner - 1));
  const auto outer = geometric(R_phi, opts.r_max * R_phi, opts.outer);
  x.insert(x.end(), outer.begin() + 1, outer.end());
  x.back() = opts.r_max * R_phi;

  rp.G = green_potential_radial(n, rp.phi, x);
  const double dn = n;
  const auto it = std::lower_bound(x.begin(), x.end(), R_phi);
  const std::size_t iR = static_cast<std::size_t>(it - x.begin());
  rp.C = rp.G.values()[iR] * std::pow(x[iR], dn - 2.0);
  rp.mass = unit_sphere_area(n) * (dn - 2.0) * rp.C;

  std::vector<double> uv(x.size());
  kernels::sample(u, x, uv);
  for(std::size_t i = 0; i < x.size(); ++i)
  {
    if(!(uv[i] > 0.0))
      fail("u must be positive, u(" + std::to_string(x[i]) + ") = " + std::to_string(uv[i]));
    rp.sup_t = std::max(rp.sup_t, rp.G.values()[i] / uv[i]);
  }

  // -(r^(n-1) G')' - r^(n-1) phi by differences of the flux
  std::vector<double> flux(x.size()), dflux(x.size());
  double src_max = 0.0;
  for(std::size_t i = 0; i < x.size(); ++i)
  {
    flux[i] = std::pow(x[i], dn - 1.0) * rp.G.derivatives()[i];
    src_max = std::max(src_max, std::pow(x[i], dn - 1.0) * rp.phi(x[i]));
  }
  kernels::fd_derivative(x, flux, dflux, 1);
  for(std::size_t i = 0; i < x.size(); ++i)
    rp.poisson_residual =
      std::max(rp.poisson_residual, std::fabs(-dflux[i] - std::pow(x[i], dn - 1.0) * rp.phi(x[i])));
  rp.poisson_residual /= 1.0 + src_max;

  if(!u.constant_value())
    for(std::size_t i = 0; i < x.size(); ++i)
    {
      const double r = x[i];
      const double lap = numeric_derivative(u, r, 2, r) + (dn - 1.0) / r * numeric_derivative(u, r, 1, r);
      rp.u_residual = std::max(rp.u_residual, std::fabs(lap) * r * r / uv[i]);
    }
  return rp;
}

namespace
{

using OffSupport = std::function<double(double t, double dt)>;

NDWeight build_weight(const RadialProblem& rp_in, NDKind kind, double a, OffSupport w_off, const CoefficientFn& f,
                      const CoefficientFn& df)
{
  const auto rp = std::make_shared<const RadialProblem>(rp_in);
  const auto& x = rp->G.nodes();
  const std::size_t N = x.size();
  const double dn = rp->n;

  NDWeight out;
  out.kind = kind;
  out.a = a;

  std::vector<double> v(N), dv(N), d2(N), W(N);
  for(std::size_t i = 0; i < N; ++i)
  {
    const auto [t, dt] = rp->t(x[i]);
    const double uv = rp->u(x[i]);
    const double du = rp->u.constant_value() ? 0.0 : numeric_derivative(rp->u, x[i], 1, x[i]);
    const double fv = f(t), dfv = df(t);
    if(!(fv > 0.0))
      fail("f(G/u) must be positive, got " + std::to_string(fv) + " at r=" + std::to_string(x[i]));
    v[i] = uv * fv;
    dv[i] = du * fv + uv * dfv * dt;
    if(!rp->off_support(x[i]) && dfv < 0.0 && out.hypothesis_ok)
    {
      out.hypothesis_ok = false;
      out.flags.push_back("f' < 0 at t=" + std::to_string(t) + " inside the image of supp phi");
    }
  }
  // v' is exact, so only one difference is taken
  kernels::fd_derivative(x, dv, d2, 1);
  for(std::size_t i = 0; i < N; ++i)
  {
    if(rp->off_support(x[i]))
    {
      const auto [t, dt] = rp->t(x[i]);
      W[i] = w_off(t, dt);
    }
    else
      W[i] = (-d2[i] - (dn - 1.0) / x[i] * dv[i]) / v[i];
  }
  out.min_W = *std::min_element(W.begin(), W.end());
  if(out.min_W < -1e-10 * kernels::max_abs(W))
    out.flags.push_back("W is negative somewhere (min " + std::to_string(out.min_W) + ")");

  out.ground_state = GridFunction(x, v, dv);
  out.W_grid = GridFunction(x, W, {});
  const auto wg = std::make_shared<const GridFunction>(out.W_grid);
  out.W = CoefficientFn(
    [rp, wg, w_off](double r) {
      if(!rp->off_support(r))
        return (*wg)(r);
      const auto [t, dt] = rp->t(r);
      return w_off(t, dt);
    },
    std::string(to_string(kind)) + " W");
  out.v = CoefficientFn(
    [rp, f](double r) {
      const auto [t, dt] = rp->t(r);
      return rp->u(r) * f(t);
    },
    "v");
  return out;
}

} // namespace

NDWeight classical_weight_nd(const RadialProblem& rp)
{
  const CoefficientFn f([](double t) { return std::sqrt(t); }, "sqrt(t)");
  const CoefficientFn df([](double t) { return 0.5 / std::sqrt(t); }, "1/(2 sqrt(t))");
  return build_weight(
    rp, NDKind::classical, 0.0, [](double t, double dt) { return 0.25 * (dt / t) * (dt / t); }, f, df);
}

NDWeight pullback_weight_nd(const RadialProblem& rp, const WeightFamily1D& fam)
{
  CoefficientFn f, df;
  if(fam.f_closed)
  {
    f = fam.f_closed->first;
    df = fam.f_closed->second;
  }
  else
  {
    const auto t_lo = rp.t(rp.G.nodes().back()).first;
    const auto& fx = fam.f_w.nodes();
    if(t_lo < fx.front() || rp.sup_t > fx.back())
      fail("the family's grid does not cover the range of G/u");
    const auto fw = std::make_shared<const GridFunction>(fam.f_w);
    f = CoefficientFn([fw](double t) { return (*fw)(t); }, "f_w");
    df = CoefficientFn([fw](double t) { return fw->derivative(t); }, "f_w'");
  }
  const CoefficientFn w = fam.w;
  return build_weight(
    rp, NDKind::pullback, 0.0, [w](double t, double dt) { return dt * dt * w(t); }, f, df);
}

NDWeight improved_weight_nd(const RadialProblem& rp, double a)
{
  if(!(a > 0.0) || !(a * rp.sup_t <= 0.99))
    fail("a must satisfy 0 < a <= 0.99 / sup(G/u) = " + std::to_string(0.99 / rp.sup_t) + ", got " +
         std::to_string(a));
  const CoefficientFn f([a](double t) { return std::sqrt(t * (2.0 - a * t)); }, "sqrt(2t - a t^2)");
  const CoefficientFn df([a](double t) { return (1.0 - a * t) / std::sqrt(t * (2.0 - a * t)); }, "f'");
  return build_weight(
    rp, NDKind::improved, a,
    [a](double t, double dt) {
      const double g = t * (2.0 - a * t);
      return dt * dt / (g * g);
    },
    f, df);
}

double AnnularBump::operator()(double r) const
{
  if(r <= r1 || r >= r2)
    return 0.0;
  const double g = (r - r1) * (r2 - r);
  return amplitude * g * g * g;
}

double AnnularBump::d1(double r) const
{
  if(r <= r1 || r >= r2)
    return 0.0;
  const double g = (r - r1) * (r2 - r), dg = r1 + r2 - 2.0 * r;
  return 3.0 * amplitude * g * g * dg;
}

double AnnularBump::d2(double r) const
{
  if(r <= r1 || r >= r2)
    return 0.0;
  const double g = (r - r1) * (r2 - r), dg = r1 + r2 - 2.0 * r;
  return amplitude * (6.0 * g * dg * dg - 6.0 * g * g);
}

std::vector<AnnularBump> random_annular_bumps(double r_lo, double r_hi, std::size_t count, std::uint64_t seed)
{
  if(!(r_lo > 0.0 && r_hi > r_lo))
    fail("annulus range must satisfy 0 < r_lo < r_hi");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<AnnularBump> out;
  for(std::size_t k = 0; k < count; ++k)
  {
    AnnularBump b;
    const double s = unit(rng), e = unit(rng);
    b.r1 = r_lo + (r_hi - r_lo) * 0.8 * s;
    b.r2 = b.r1 + (r_hi - b.r1) * (0.05 + 0.95 * e);
    b.amplitude = std::pow(10.0, -2.0 + 4.0 * unit(rng)) / std::pow(0.5 * (b.r2 - b.r1), 6.0);
    out.push_back(b);
  }
  return out;
}

std::vector<RellichResult> rellich_check(const RadialProblem& rp, double a, const std::vector<AnnularBump>& psis)
{
  if(!(a > 0.0) || !(a * rp.sup_t <= 0.99))
    fail("a out of range for the Rellich check");
  const double dn = rp.n, om = unit_sphere_area(rp.n);
  // W - W_class = (t'/t)^2 a t (4 - a t) / (4 (2 - a t)^2) off supp phi, without cancellation
  auto gap = [&rp, a](double r) {
    const auto [t, dt] = rp.t(r);
    const double q = dt / t, s = 2.0 - a * t;
    return q * q * a * t * (4.0 - a * t) / (4.0 * s * s);
  };

  std::vector<RellichResult> out(psis.size());
  std::vector<std::function<void()>> jobs;
  for(std::size_t k = 0; k < psis.size(); ++k)
  {
    const auto& psi = psis[k];
    if(!(psi.r2 > psi.r1))
      fail("test function needs r1 < r2");
    if(psi.r1 < rp.R_phi)
      fail("test function support overlaps supp phi");
    for(int j = 0; j <= 64; ++j)
    {
      const double r = psi.r1 + (psi.r2 - psi.r1) * j / 64.0;
      if(!(gap(r) > 0.0))
        fail("W - W_class vanishes on supp psi near r=" + std::to_string(r));
    }
    jobs.emplace_back([&, k, psi] {
      auto lhs = [&](double r) {
        const double P = -psi.d2(r) - (dn - 1.0) / r * psi.d1(r);
        return om * P * P * rp.t(r).first / gap(r) * std::pow(r, dn - 1.0);
      };
      auto rhs = [&](double r) {
        const double y = psi(r);
        return om * y * y * gap(r) * rp.t(r).first * std::pow(r, dn - 1.0);
      };
      auto& res = out[k];
      if(psi.amplitude != 0.0)
      {
        res.lhs = integrate(lhs, psi.r1, psi.r2, 1e-12).value;
        res.rhs = integrate(rhs, psi.r1, psi.r2, 1e-12).value;
      }
      res.margin = res.lhs - res.rhs;
      res.tol = 1e-8 * (1.0 + res.lhs);
      res.pass = res.margin >= -res.tol;
    });
  }
  detail::run_all(jobs);
  return out;
}

std::pair<DivergenceVerdict, DivergenceVerdict> null_criticality_integral_nd(const RadialProblem& rp,
                                                                             const NDWeight& ndw,
                                                                             const ClassifyOptions& opts)
{
  const double dn = rp.n;
  const CoefficientFn v = ndw.v, W = ndw.W;
  const CoefficientFn integrand(
    [v, W, dn](double r) {
      const double y = v(r);
      return y * y * W(r) * std::pow(r, dn - 1.0);
    },
    "v^2 W r^(n-1)");
  const Interval iv(0.0, std::numeric_limits<double>::infinity(), EndpointKind::singular, EndpointKind::infinite);
  ClassifyOptions inner = opts;
  inner.limit = rp.G.nodes().front();
  return {improper_integral_classify(integrand, Side::right, iv, opts),
          improper_integral_classify(integrand, Side::left, iv, inner)};
}

} // namespace hardy
