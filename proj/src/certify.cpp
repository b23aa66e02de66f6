#include "hardy/certify.hpp"

#include "hardy/error.hpp"
#include "hardy/kernels.hpp"
#include "hardy/ode.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace hardy
{

std::string_view to_string(VerdictKind k)
{
  switch(k)
  {
  case VerdictKind::divergent: return "divergent";
  case VerdictKind::convergent: return "convergent";
  case VerdictKind::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(GrowthModel m)
{
  switch(m)
  {
  case GrowthModel::none: return "none";
  case GrowthModel::log: return "log";
  case GrowthModel::power: return "power";
  case GrowthModel::saturating: return "saturating";
  case GrowthModel::log_log: return "log-log";
  }
  return "?";
}

std::string_view to_string(Verdict v)
{
  switch(v)
  {
  case Verdict::optimal: return "optimal";
  case Verdict::positive_critical_suspected: return "critical-but-positive-critical-suspected";
  case Verdict::not_critical: return "not-critical";
  case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace
{

// point at relative depth `d` (0 < d < 1) between `c` and the endpoint on `side`
double toward(const Interval& iv, Side side, double c, double d)
{
  const double e = iv.endpoint(side);
  if(std::isfinite(e))
    return e + (c - e) * d;
  const double s = std::max(1.0, std::fabs(c)) * (1.0 / d - 1.0);
  return side == Side::left ? c - s : c + s;
}

constexpr std::size_t tail_len = 5;

void classify_increments(DivergenceVerdict& v, const std::vector<double>& d, double r)
{
  const std::size_t n = d.size();
  const double big = *std::max_element(d.begin(), d.end());
  if(big <= 0.0)
  {
    v.kind = VerdictKind::convergent;
    v.model = GrowthModel::saturating;
    return;
  }
  if(n < tail_len)
    return;
  const std::vector<double> tail(d.end() - tail_len, d.end());
  if(tail.back() <= 1e-300 * big)
  {
    v.kind = VerdictKind::convergent;
    v.model = GrowthModel::saturating;
    return;
  }
  if(std::any_of(tail.begin(), tail.end(), [](double x) { return x <= 0.0; }))
    return;

  std::vector<double> rho(tail_len - 1);
  for(std::size_t i = 0; i + 1 < tail_len; ++i)
    rho[i] = tail[i + 1] / tail[i];
  const double rho_max = *std::max_element(rho.begin(), rho.end());
  const double rho_min = *std::min_element(rho.begin(), rho.end());
  const double rho_geo = std::pow(tail.back() / tail.front(), 1.0 / static_cast<double>(tail_len - 1));

  if(rho_max <= 0.5 * 1.05)
  {
    v.kind = VerdictKind::convergent;
    v.model = GrowthModel::saturating;
    v.exponent = rho_geo;
    v.fit_residual = (rho_max - rho_min) / rho_geo;
    return;
  }

  if(std::fabs(rho_geo - 1.0) <= 0.05)
  {
    const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail_len);
    double res = 0.0;
    for(double x : tail)
      res = std::max(res, std::fabs(x - mean) / mean);
    v.model = GrowthModel::log;
    v.exponent = 0.0;
    v.fit_residual = res;
    if(res < 0.05)
      v.kind = VerdictKind::divergent;
    return;
  }

  if(rho_geo > 1.05)
  {
    double res = 0.0;
    for(double x : rho)
      res = std::max(res, std::fabs(x / rho_geo - 1.0));
    v.model = GrowthModel::power;
    v.exponent = std::log(rho_geo) / std::log(1.0 / r);
    v.fit_residual = res;
    if(res < 0.05)
      v.kind = VerdictKind::divergent;
    return;
  }

  if(rho_max >= 1.0)
    return;

  // increments ~ C (j + j0)^-beta: 1/(1 - rho_j) is asymptotically linear in j with slope 1/beta
  const std::size_t m = rho.size();
  std::vector<double> y(m);
  for(std::size_t i = 0; i < m; ++i)
    y[i] = 1.0 / (1.0 - rho[i]);
  const double xm = 0.5 * static_cast<double>(m - 1);
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for(std::size_t i = 0; i < m; ++i)
  {
    sxy += (static_cast<double>(i) - xm) * (y[i] - ym);
    sxx += (static_cast<double>(i) - xm) * (static_cast<double>(i) - xm);
  }
  const double slope = sxy / sxx;
  double res = 0.0;
  for(std::size_t i = 0; i < m; ++i)
    res = std::max(res, std::fabs(y[i] - (ym + slope * (static_cast<double>(i) - xm))) / y[i]);
  v.fit_residual = res;
  if(slope <= 0.0)
  {
    // geometric decay slower than the factor-2 rule
    v.model = GrowthModel::saturating;
    v.exponent = rho_geo;
    return;
  }
  const double beta = 1.0 / slope;
  v.exponent = beta;
  if(res >= 0.05)
    return;
  if(beta >= 1.5)
  {
    v.kind = VerdictKind::convergent;
    v.model = GrowthModel::saturating;
  }
  else if(beta <= 1.15)
  {
    v.kind = VerdictKind::divergent;
    v.model = GrowthModel::log_log;
  }
}

} // namespace

DivergenceVerdict improper_integral_classify(const CoefficientFn& integrand, Side endpoint, const Interval& iv,
                                             const ClassifyOptions& opts)
{
  if(!(opts.ratio > 0.0 && opts.ratio < 1.0))
    throw ModuleError("certify", "window ratio must lie in (0, 1)");
  if(opts.windows < 1)
    throw ModuleError("certify", "need at least one window");

  DivergenceVerdict v;
  v.endpoint = endpoint;
  const double c = iv.reference_point();

  // cutoffs ordered away from the reference point
  std::vector<double> cut{c};
  double depth = 1.0;
  for(std::size_t j = 1; j <= opts.windows; ++j)
  {
    depth *= opts.ratio;
    const double cj = toward(iv, endpoint, c, depth);
    if(opts.limit && (endpoint == Side::left ? cj < *opts.limit : cj > *opts.limit))
      break;
    if(cj == cut.back() || !iv.contains(cj))
      break;
    cut.push_back(cj);
  }
  const std::size_t nw = cut.size() - 1;
  if(nw == 0)
    return v;

  std::vector<double> x(cut);
  if(endpoint == Side::left)
    std::reverse(x.begin(), x.end());

  // sign check on a few interior points per window
  constexpr int probes = 9;
  std::vector<double> pts;
  pts.reserve(nw * probes);
  for(std::size_t i = 0; i < nw; ++i)
    for(int k = 1; k <= probes; ++k)
      pts.push_back(x[i] + (x[i + 1] - x[i]) * k / (probes + 1.0));
  std::vector<double> vals(pts.size());
  kernels::sample(integrand, pts, vals);
  const double vmax = kernels::max_abs(vals);
  for(std::size_t i = 0; i < pts.size(); ++i)
  {
    if(!std::isfinite(vals[i]))
      throw QuadratureError("non-finite integrand at t=" + std::to_string(pts[i]));
    if(vals[i] < -1e-12 * vmax)
      throw ModuleError("certify", "negative integrand detected at t=" + std::to_string(pts[i]));
  }

  std::vector<double> seg(nw);
  kernels::segment_integrals(integrand, x, seg, opts.rel_tol);
  std::vector<double> d(seg);
  if(endpoint == Side::left)
    std::reverse(d.begin(), d.end());

  double acc = 0.0;
  for(std::size_t j = 0; j < nw; ++j)
  {
    acc += d[j];
    v.windows.emplace_back(cut[j + 1], acc);
  }

  classify_increments(v, d, opts.ratio);
  if(v.kind == VerdictKind::divergent)
  {
    // monotone increase over at least 4 windows
    std::size_t rising = 0;
    for(std::size_t j = nw; j-- > 0 && d[j] > 0.0;)
      ++rising;
    if(rising < 4)
      v.kind = VerdictKind::inconclusive;
  }
  return v;
}

std::vector<OscillationRecord> lambda_inf_oscillation_evidence(const SLProblem& prob, const CoefficientFn& w,
                                                               const std::vector<double>& xis,
                                                               const OscillationOptions& opts)
{
  for(double xi : xis)
    if(!(xi >= 0.0) || !std::isfinite(xi))
      throw ModuleError("certify", "xi must be finite and nonnegative");
  for(double d : opts.depths)
    if(!(d > 0.0 && d < 1.0))
      throw ModuleError("certify", "window depths must lie in (0, 1)");

  const Interval& iv = prob.iv;
  const double c = iv.reference_point();
  std::vector<OscillationRecord> out;
  for(double xi : xis)
    for(Side s : {Side::left, Side::right})
    {
      OscillationRecord rec;
      rec.xi = xi;
      rec.endpoint = s;
      for(double d : opts.depths)
        rec.counts.emplace_back(toward(iv, s, c, d), 0L);
      out.push_back(std::move(rec));
    }

  std::vector<std::function<void()>> jobs;
  for(auto& rec : out)
    jobs.emplace_back([&rec, &prob, &w, c] {
      const double lam = 1.0 + rec.xi * rec.xi;
      const CoefficientFn q = prob.q;
      const CoefficientFn q_eff([q, w, lam](double t) { return lam * w(t) - q(t); }, "q_eff");
      for(auto& [e, n] : rec.counts)
      {
        n = rec.endpoint == Side::left ? pruefer_zero_count(prob.p, q_eff, e, c, 0.0)
                                       : pruefer_zero_count(prob.p, q_eff, c, e, 0.0);
      }
      bool mono = true;
      for(std::size_t i = 1; i < rec.counts.size(); ++i)
        mono = mono && rec.counts[i].second >= rec.counts[i - 1].second;
      rec.growing = mono && rec.counts.size() > 1 && rec.counts.back().second > rec.counts.front().second;
    });
  detail::run_all(jobs);
  return out;
}

namespace
{

// number of eigenvalues of (K, M) below sigma, from the LDL^T pivots of K - sigma M
std::size_t count_below(const kernels::FemSystem& sys, double sigma)
{
  const auto& kd = sys.stiffness.diag;
  const auto& ko = sys.stiffness.off;
  const auto& md = sys.mass.diag;
  const auto& mo = sys.mass.off;
  const std::size_t n = kd.size();
  std::size_t neg = 0;
  double piv = 0.0;
  for(std::size_t i = 1; i + 1 < n; ++i)
  {
    const double a = kd[i] - sigma * md[i];
    double d = a;
    if(i > 1)
    {
      const double b = ko[i - 1] - sigma * mo[i - 1];
      d -= b * b / piv;
    }
    if(d == 0.0)
      d = -1e-300;
    if(d < 0.0)
      ++neg;
    piv = d;
  }
  return neg;
}

} // namespace

Lambda0 lambda0_rayleigh(const SLProblem& prob, const CoefficientFn& w, std::pair<double, double> cutoffs,
                         std::size_t mesh)
{
  if(mesh < 16)
    throw ModuleError("certify", "lambda0 mesh needs at least 16 elements");
  const Interval& iv = prob.iv;
  const bool gl = iv.left != EndpointKind::regular, gr = iv.right != EndpointKind::regular;
  const Grading g = gl && gr ? Grading::log_both : gl ? Grading::log_left : gr ? Grading::log_right : Grading::uniform;
  const auto x = make_grid(iv, cutoffs, mesh + 1, g);
  const auto sys = kernels::assemble_fem(x, prob.p, prob.q, w);
  for(std::size_t i = 1; i + 1 < x.size(); ++i)
    if(!(sys.mass.diag[i] > 0.0))
      throw ModuleError("certify", "mass matrix singular: w vanishes near t=" + std::to_string(x[i]));

  double lo = -1.0, hi = 1.0;
  for(int k = 0; count_below(sys, hi) == 0; ++k)
  {
    if(k > 200)
      throw ModuleError("certify", "no eigenvalue bracket found");
    hi = 2.0 * hi + 1.0;
  }
  for(int k = 0; count_below(sys, lo) > 0; ++k)
  {
    if(k > 200)
      throw ModuleError("certify", "no eigenvalue bracket found");
    lo = 2.0 * lo - 1.0;
  }
  for(int k = 0; k < 400 && hi - lo > 1e-10 * (1.0 + std::fabs(0.5 * (lo + hi))); ++k)
  {
    const double mid = 0.5 * (lo + hi);
    if(count_below(sys, mid) == 0)
      lo = mid;
    else
      hi = mid;
  }
  return {0.5 * (lo + hi), lo, hi, mesh};
}

OptimalityReport certify_optimality_1d(const SLProblem& prob, const WeightFamily1D& fam, const CertifyOptions& opts)
{
  const Interval& iv = prob.iv;
  const auto& fw = fam.f_w;
  const double t_lo = fw.nodes().front(), t_hi = fw.nodes().back();
  for(double y : fw.values())
    if(!(y > 0.0))
      throw ModuleError("certify", "f_w must be positive on its window");

  OptimalityReport rep;
  rep.residual = residual(prob.shifted(fam.w), fw).max_rel;

  CoefficientFn f = fam.f_closed ? fam.f_closed->first : fw.as_coefficient("f_w");
  const CoefficientFn p = prob.p, w = fam.w;
  const CoefficientFn ground([p, f](double t) { const double y = f(t); return 1.0 / (p(t) * y * y); }, "1/(p f^2)");
  const CoefficientFn mass([w, f](double t) { const double y = f(t); return w(t) * y * y; }, "w f^2");

  auto copts = [&](Side s) {
    ClassifyOptions o = opts.classify;
    if(!fam.f_closed)
      o.limit = s == Side::left ? t_lo : t_hi;
    return o;
  };
  std::vector<std::function<void()>> jobs{
    [&] { rep.ground_left = improper_integral_classify(ground, Side::left, iv, copts(Side::left)); },
    [&] { rep.ground_right = improper_integral_classify(ground, Side::right, iv, copts(Side::right)); },
    [&] { rep.weight_left = improper_integral_classify(mass, Side::left, iv, copts(Side::left)); },
    [&] { rep.weight_right = improper_integral_classify(mass, Side::right, iv, copts(Side::right)); },
  };
  detail::run_all(jobs);

  // oscillation and lambda_0 only probe where w can be evaluated
  OscillationOptions oo = opts.oscillation;
  if(!fam.f_closed)
  {
    const double c = iv.reference_point();
    std::erase_if(oo.depths, [&](double d) {
      return toward(iv, Side::left, c, d) < t_lo || toward(iv, Side::right, c, d) > t_hi;
    });
  }
  if(!oo.depths.empty() && !opts.xis.empty())
    rep.oscillation = lambda_inf_oscillation_evidence(prob, w, opts.xis, oo);

  if(fam.w_positive && opts.lambda0)
  {
    auto cut = opts.lambda0_cutoffs;
    if(!cut)
    {
      const double c = iv.reference_point();
      cut = {{toward(iv, Side::left, c, 1e-4), toward(iv, Side::right, c, 1e-4)}};
    }
    if(!fam.f_closed)
      cut = {{std::max(cut->first, t_lo), std::min(cut->second, t_hi)}};
    rep.lambda0 = lambda0_rayleigh(prob, w, *cut, opts.lambda0_mesh);
  }

  auto div = [](const DivergenceVerdict& v) { return v.kind == VerdictKind::divergent; };
  auto conv = [](const DivergenceVerdict& v) { return v.kind == VerdictKind::convergent; };
  if(!(rep.residual <= opts.residual_tol))
    rep.verdict = Verdict::inconclusive;
  else if(conv(rep.ground_left) || conv(rep.ground_right))
    rep.verdict = Verdict::not_critical;
  else if(div(rep.ground_left) && div(rep.ground_right))
  {
    if(div(rep.weight_left) && div(rep.weight_right))
      rep.verdict = Verdict::optimal;
    else if(conv(rep.weight_left) || conv(rep.weight_right))
      rep.verdict = Verdict::positive_critical_suspected;
    else
      rep.verdict = Verdict::inconclusive;
  }
  else
    rep.verdict = Verdict::inconclusive;

  rep.assumptions = {
    "divergence is inferred from " + std::to_string(opts.classify.windows) +
      " geometric windows; no proof of unboundedness",
    "p > 0 and w >= 0 are assumed on the whole interval, checked only at sample points",
    "coefficients are assumed smooth enough for the local theory; regularity is not verified",
    "lambda_0 is an upper estimate from a truncated window",
    "oscillation evidence is limited to the tested xi values",
  };
  if(!fam.f_closed)
    rep.assumptions.push_back("f_w is known only on [" + std::to_string(t_lo) + ", " + std::to_string(t_hi) +
                              "]; windows beyond the grid are not examined");
  return rep;
}

} // namespace hardy
