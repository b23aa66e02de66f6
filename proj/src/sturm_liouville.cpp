#include "hardy/sturm_liouville.hpp"

#include "hardy/error.hpp"
#include "hardy/kernels.hpp"
#include "hardy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hardy
{

namespace
{

std::string fmt_g(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// distance scale to the nearest end of the interval
double end_scale(const Interval& iv, double t)
{
  double l = std::numeric_limits<double>::infinity();
  l = std::min(l, std::isfinite(iv.a) ? t - iv.a : std::max(1.0, std::fabs(t)));
  l = std::min(l, std::isfinite(iv.b) ? iv.b - t : std::max(1.0, std::fabs(t)));
  return l > 0.0 ? l : std::max(1.0, std::fabs(t));
}

std::vector<double> sampled(const CoefficientFn& f, std::span<const double> x)
{
  std::vector<double> out(x.size());
  kernels::sample(f, x, out);
  return out;
}

} // namespace

double SLProblem::p_at(double t) const
{
  const double v = p(t);
  if(!(v > 0.0))
    throw ModuleError("sl_core", "p must be positive, p(" + fmt_g(t) + ")=" + fmt_g(v));
  return v;
}

SLProblem SLProblem::shifted(const CoefficientFn& w, double lam) const
{
  SLProblem out = *this;
  const CoefficientFn q0 = q;
  out.q = CoefficientFn([q0, w, lam](double t) { return q0(t) - lam * w(t); }, q.label() + " - lam w");
  return out;
}

double p_wronskian(const SLProblem& prob, const GridFunction& v1, const GridFunction& v2, double t)
{
  return prob.p_at(t) * (v1.derivative(t) * v2(t) - v1(t) * v2.derivative(t));
}

SolutionPair make_solution_pair(const SLProblem& prob, GridFunction v1, GridFunction v2)
{
  const double lo = std::max(v1.front(), v2.front()), hi = std::min(v1.back(), v2.back());
  if(!(lo < hi))
    throw ModuleError("sl_core", "solution pair has no common domain");
  std::vector<double> ts;
  for(double t : v1.nodes())
    if(t >= lo && t <= hi)
      ts.push_back(t);
  if(ts.size() < 2)
    ts = {lo, hi};
  double w0 = p_wronskian(prob, v1, v2, ts.front());
  double dev = 0.0;
  for(double t : ts)
    dev = std::max(dev, std::fabs(p_wronskian(prob, v1, v2, t) - w0));
  if(!(w0 != 0.0) || dev > 1e-6 * std::fabs(w0))
    throw ModuleError("sl_core", "p-Wronskian not conserved: W=" + fmt_g(w0) + ", deviation " + fmt_g(dev));
  return {std::move(v1), std::move(v2), w0};
}

GridFunction apply_L(const SLProblem& prob, const GridFunction& f)
{
  const std::size_t n = f.size();
  if(n < 5)
    throw GridError("apply_L needs at least 5 nodes");
  const auto& x = f.nodes();
  std::vector<double> p = sampled(CoefficientFn([&prob](double t) { return prob.p_at(t); }, "p"), x);
  std::vector<double> q = sampled(prob.q, x);
  std::vector<double> out(n, 0.0);
  kernels::sl_apply(x, f.values(), f.derivatives(), p, q, out);
  return GridFunction(std::vector<double>(x.begin() + 2, x.end() - 2),
                      std::vector<double>(out.begin() + 2, out.end() - 2));
}

Residual residual(const SLProblem& prob, const GridFunction& f)
{
  const std::size_t n = f.size();
  if(n < 5)
    throw GridError("residual needs at least 5 nodes");
  const auto& x = f.nodes();
  std::vector<double> p = sampled(CoefficientFn([&prob](double t) { return prob.p_at(t); }, "p"), x);
  std::vector<double> q = sampled(prob.q, x);
  std::vector<double> zero(n, 0.0), flux(n, 0.0), df(f.derivatives());
  if(df.empty())
  {
    df.resize(n);
    kernels::fd_derivative(x, f.values(), df, 1);
  }
  kernels::sl_apply(x, f.values(), f.derivatives(), p, zero, flux);
  Residual r;
  for(std::size_t i = 2; i + 2 < n; ++i)
  {
    const double a = flux[i], b = q[i] * f.values()[i];
    const double l = end_scale(prob.iv, x[i]);
    const double res = std::fabs(a + b);
    // local magnitude of (p f')' from the size of f and f' on the scale l
    const double local = p[i] * (std::fabs(f.values()[i]) + l * std::fabs(df[i])) / (l * l);
    const double rel = res / (std::fabs(a) + std::fabs(b) + local + std::numeric_limits<double>::min());
    r.sup_abs = std::max(r.sup_abs, res);
    r.sup_terms = std::max(r.sup_terms, std::fabs(a) + std::fabs(b));
    if(rel > r.max_rel)
    {
      r.max_rel = rel;
      r.t_worst = x[i];
    }
  }
  return r;
}

GridFunction reduction_of_order(const SLProblem& prob, const GridFunction& v1, double anchor)
{
  if(!(anchor > v1.front() && anchor <= v1.back()))
    throw ModuleError("sl_core", "anchor " + fmt_g(anchor) + " outside the grid of v1");
  for(std::size_t i = 0; i < v1.size(); ++i)
    if(!(v1.values()[i] > 0.0))
      throw ModuleError("sl_core", "v1 must be positive, v1(" + fmt_g(v1.nodes()[i]) + ")=" + fmt_g(v1.values()[i]));

  std::vector<double> x = v1.nodes();
  auto it = std::lower_bound(x.begin(), x.end(), anchor);
  if(it == x.end() || *it != anchor)
    it = x.insert(it, anchor);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  const std::size_t n = x.size();

  const CoefficientFn integrand(
    [&prob, &v1](double s) {
      const double v = v1(s);
      if(!(v > 0.0))
        throw ModuleError("sl_core", "v1 interpolant not positive at t=" + fmt_g(s));
      return 1.0 / (prob.p_at(s) * v * v);
    },
    "1/(p v1^2)");
  std::vector<double> seg(n - 1);
  kernels::segment_integrals(integrand, x, seg, 1e-12);

  std::vector<double> I(n, 0.0);
  for(std::size_t i = k; i-- > 0;)
    I[i] = I[i + 1] + seg[i];
  for(std::size_t i = k + 1; i < n; ++i)
    I[i] = I[i - 1] - seg[i - 1];

  std::vector<double> v(n), dv(n);
  for(std::size_t i = 0; i < n; ++i)
  {
    const double u = v1(x[i]);
    v[i] = u * I[i];
    dv[i] = v1.derivative(x[i]) * I[i] - 1.0 / (prob.p_at(x[i]) * u);
  }
  return GridFunction(std::move(x), std::move(v), std::move(dv), v1.left_tag(), v1.right_tag());
}

MinimalGrowthCheck minimal_growth_check(const SLProblem& prob, const GridFunction& u, Side endpoint)
{
  const double c = std::clamp(prob.iv.reference_point(), u.front(), u.back());
  const double e = prob.iv.endpoint(endpoint);
  const double edge = endpoint == Side::left ? u.front() : u.back();
  const CoefficientFn integrand(
    [&prob, &u](double s) {
      const double v = u(s);
      return 1.0 / (prob.p_at(s) * v * v);
    },
    "1/(p u^2)");

  std::vector<double> cuts;
  for(int j = 1; j < 200; ++j)
  {
    double t;
    if(std::isfinite(e))
      t = e + (c - e) * std::pow(0.25, j);
    else
      t = c + (endpoint == Side::left ? -1.0 : 1.0) * std::max(1.0, std::fabs(c)) * (std::pow(4.0, j) - 1.0);
    if(endpoint == Side::left ? t < edge : t > edge)
      break;
    cuts.push_back(t);
  }
  MinimalGrowthCheck out;
  if(cuts.size() < 3)
    return out;

  // int from c to each cut, accumulated window by window
  double acc = 0.0, prev = c;
  for(double t : cuts)
  {
    acc += std::fabs(integrate([&integrand](double s) { return integrand(s); }, prev, t, 1e-10).value);
    prev = t;
    out.ratios.emplace_back(t, 1.0 / acc);
  }
  const std::size_t m = out.ratios.size();
  const bool decreasing = out.ratios[m - 1].second < out.ratios[m - 2].second &&
                          out.ratios[m - 2].second < out.ratios[m - 3].second;
  out.passed = decreasing && out.ratios[m - 1].second <= 0.1 * out.ratios.front().second;
  return out;
}

namespace
{

std::pair<double, double> default_window(const Interval& iv, Side endpoint)
{
  const double c = iv.reference_point();
  const double e = iv.endpoint(endpoint);
  double far;
  if(std::isfinite(e))
    far = e + (c - e) * 1e-10;
  else
    far = c + (endpoint == Side::left ? -100.0 : 100.0) * std::max(1.0, std::fabs(c));
  return endpoint == Side::left ? std::pair{far, c} : std::pair{c, far};
}

GridFunction normalized_at(const GridFunction& u, double c)
{
  const double uc = u(c);
  if(!(uc != 0.0) || !std::isfinite(uc))
    throw ModuleError("sl_core", "cannot normalize at t=" + fmt_g(c));
  return u.scaled(1.0 / uc);
}

} // namespace

GridFunction principal_solution(const SLProblem& prob, Side endpoint, const std::optional<GridFunction>& probe,
                                const PrincipalOptions& opts)
{
  const Interval& iv = prob.iv;
  const double c = iv.reference_point();
  const double e = iv.endpoint(endpoint);
  const bool finite_end = std::isfinite(e);

  if(probe)
  {
    const Residual r = residual(prob, *probe);
    if(r.max_rel > 1e-5)
      throw ModuleError("sl_core", "probe is not a solution (relative residual " + fmt_g(r.max_rel) + " at t=" +
                                     fmt_g(r.t_worst) + ")");
    for(double v : probe->values())
      if(!(v > 0.0))
        throw ModuleError("sl_core", "probe must be positive");
    const MinimalGrowthCheck mg = minimal_growth_check(prob, *probe, endpoint);
    if(!mg.passed)
      throw ModuleError("sl_core", "probe fails the minimal-growth ratio test at the " +
                                     std::string(to_string(endpoint)) + " endpoint");
    const double cn = std::clamp(c, probe->front(), probe->back());
    return normalized_at(*probe, cn);
  }

  const auto window = opts.window.value_or(default_window(iv, endpoint));
  const Grading grading = endpoint == Side::left ? Grading::log_left : Grading::log_right;
  const std::vector<double> nodes = make_grid(iv, window, opts.nodes, grading);
  const double cn = std::clamp(c, window.first, window.second);

  IvpOptions ivp = opts.ivp;
  ivp.renormalize = ivp.renormalize || !finite_end;

  // h: h(c)=0, h'(c)=1; its size on the comparison window converts slope changes into sup-norm changes
  auto nest_point = [&](std::size_t k) {
    const double r = std::pow(0.25, static_cast<double>(k));
    if(finite_end)
      return e + (cn - e) * r;
    return cn + (endpoint == Side::left ? -1.0 : 1.0) * std::max(1.0, std::fabs(cn)) * (1.0 / r - 1.0);
  };
  const double cmp = nest_point(2);
  double h_sup = 0.0;
  {
    std::vector<double> ts;
    for(int i = 0; i <= 64; ++i)
      ts.push_back(cmp + (cn - cmp) * i / 64.0);
    if(ts.front() > ts.back())
      std::reverse(ts.begin(), ts.end());
    const GridFunction h = solve_ivp(prob.p, prob.q, std::nullopt, 0.0, cn, 0.0, 1.0, ts, ivp);
    for(double v : h.values())
      h_sup = std::max(h_sup, std::fabs(v));
  }

  // limit of the log-derivative at c; raw, Aitken and logarithmic-tail extrapolants compete,
  // nesting continues past the tolerance while the best successive difference keeps shrinking
  std::vector<double> slopes;
  std::vector<double> seq[3];
  double limit = std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  std::size_t k_best = 0;
  auto offer = [&](std::vector<double>& v, double x, std::size_t k) {
    v.push_back(x);
    if(v.size() < 2 || !std::isfinite(x))
      return;
    const double d = std::fabs(v[v.size() - 1] - v[v.size() - 2]) * h_sup;
    if(d < best)
    {
      best = d;
      limit = x;
      k_best = k;
    }
  };
  for(std::size_t k = 1; k <= opts.max_nestings; ++k)
  {
    const double tau = nest_point(k);
    if(finite_end && std::fabs(tau - e) <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(e)))
      break;
    // zeros in (tau, c] of the solution vanishing at tau mean oscillation near the endpoint
    const CoefficientFn minus_q([q = prob.q](double t) { return -q(t); }, "-q");
    const double lo = std::min(tau, cn), hi = std::max(tau, cn);
    if(finite_end)
    {
      // counted from lo; for the right end this solution may differ from the nested one by one zero
      const long zeros = pruefer_zero_count(prob.p, minus_q, lo, hi, 0.0);
      if(zeros > (endpoint == Side::left ? 0 : 1))
        throw ModuleError("sl_core", "oscillation detected near the " + std::string(to_string(endpoint)) +
                                       " endpoint (operator not nonnegative there)");
    }
    const double tp = prob.p_at(tau);
    std::vector<double> ts{lo, hi};
    const GridFunction u = solve_ivp(prob.p, prob.q, std::nullopt, 0.0, tau, 0.0, 1.0 / tp, ts, ivp);
    const double uc = endpoint == Side::left ? u.values().back() : u.values().front();
    const double duc = endpoint == Side::left ? u.derivatives().back() : u.derivatives().front();
    if(!(uc > 0.0) && !(uc < 0.0))
      throw ModuleError("sl_core", "nested solution vanishes at the reference point");
    if((endpoint == Side::left) != (uc > 0.0))
      throw ModuleError("sl_core", "oscillation detected near the " + std::string(to_string(endpoint)) +
                                     " endpoint (operator not nonnegative there)");
    slopes.push_back(duc / uc);

    const std::size_t m = slopes.size();
    offer(seq[0], slopes[m - 1], k);
    if(m >= 3)
    {
      const double a = slopes[m - 3], b = slopes[m - 2], d = slopes[m - 1];
      const double den = a + d - 2.0 * b;
      offer(seq[1], den != 0.0 ? d - (d - b) * (d - b) / den : d, k);
      offer(seq[2], den != 0.0 ? (2.0 * a * d - b * (a + d)) / den : d, k);
    }
    if(best < opts.tol && (k >= k_best + 2 || best <= 1e-14 * (1.0 + std::fabs(limit))))
      break;
  }
  if(!(best < opts.tol))
    limit = std::numeric_limits<double>::quiet_NaN();
  if(!std::isfinite(limit))
    throw ModuleError("sl_core", "principal solution did not converge after " + std::to_string(opts.max_nestings) +
                                   " nestings");

  GridFunction u = solve_ivp(prob.p, prob.q, std::nullopt, 0.0, cn, 1.0, limit, nodes, ivp);
  u = GridFunction(u.nodes(), u.values(), u.derivatives(), endpoint == Side::left ? iv.left : EndpointKind::regular,
                   endpoint == Side::right ? iv.right : EndpointKind::regular);
  for(std::size_t i = 0; i < u.size(); ++i)
    if(!(u.values()[i] > 0.0))
      throw ModuleError("sl_core", "principal solution not positive at t=" + fmt_g(u.nodes()[i]) +
                                     " (oscillation or loss of accuracy)");
  return normalized_at(u, cn);
}

} // namespace hardy
