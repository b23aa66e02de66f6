#include "hardy/hardy1d.hpp"

#include "hardy/error.hpp"
#include "hardy/kernels.hpp"
#include "hardy/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

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

[[noreturn]] void fail(const std::string& msg) { throw ModuleError("hardy1d", msg); }

double end_distance(const Interval& iv, double t)
{
  double l = std::max(1.0, std::fabs(t));
  if(std::isfinite(iv.a))
    l = std::min(l, t - iv.a);
  if(std::isfinite(iv.b))
    l = std::min(l, iv.b - t);
  return l;
}

void check_constraint(double c1, double c2, double c3, double k)
{
  const double lhs = c3 * c3 - c1 * c2;
  const double scale = std::max({1.0, std::fabs(k), c3 * c3, std::fabs(c1 * c2)});
  if(std::fabs(lhs - k) > 1e-12 * scale)
    fail("coefficients violate c3^2 - c1 c2 = k: c3^2 - c1 c2 = " + fmt_g(lhs) + ", k = " + fmt_g(k));
}

} // namespace

std::string_view to_string(Provenance p)
{
  switch(p)
  {
  case Provenance::ep: return "ep";
  case Provenance::a_family: return "a-family";
  case Provenance::classical: return "classical";
  case Provenance::series: return "series";
  case Provenance::external: return "external";
  }
  return "external";
}

GridFunction ep_solution(const SLProblem& prob, const EPFamily& fam)
{
  if(!(fam.k > 0.0))
    fail("k must be positive");
  check_constraint(fam.c1, fam.c2, fam.c3, fam.k);
  if(std::fabs(std::fabs(fam.pair.wronskian) - 1.0) > 1e-6)
    fail("solution pair must have p-Wronskian 1, got " + fmt_g(fam.pair.wronskian));

  const GridFunction& v1 = fam.pair.v1;
  const GridFunction& v2 = fam.pair.v2;
  const double lo = std::max(v1.front(), v2.front()), hi = std::min(v1.back(), v2.back());
  std::vector<double> x;
  for(double t : v1.nodes())
    if(t >= lo && t <= hi)
      x.push_back(t);
  const std::size_t n = x.size();
  if(n < 5)
    fail("solution pair has too few common nodes");

  std::vector<double> R(n), dR(n);
  double rmax = 0.0;
  for(std::size_t i = 0; i < n; ++i)
  {
    const double a = v1(x[i]), b = v2(x[i]), da = v1.derivative(x[i]), db = v2.derivative(x[i]);
    R[i] = fam.c1 * a * a + fam.c2 * b * b + 2.0 * fam.c3 * a * b;
    dR[i] = 2.0 * (fam.c1 * a * da + fam.c2 * b * db + fam.c3 * (da * b + a * db));
    rmax = std::max(rmax, std::fabs(R[i]));
  }
  if(!(rmax > 0.0))
    fail("Ermakov-Pinney radicand vanishes identically");

  // maximal zero-free run of nodes around the reference point, shrunk by one cell at an interior zero
  const double c = std::clamp(prob.iv.reference_point(), x.front(), x.back());
  std::size_t ic = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), c) - x.begin());
  ic = std::min(ic, n - 1);
  if(R[ic] == 0.0)
    fail("Ermakov-Pinney radicand vanishes at the reference point");
  const bool pos = R[ic] > 0.0;
  auto same = [&](std::size_t i) { return R[i] != 0.0 && (R[i] > 0.0) == pos; };
  std::size_t first = ic, last = ic;
  while(first > 0 && same(first - 1))
    --first;
  while(last + 1 < n && same(last + 1))
    ++last;
  if(first > 0)
    ++first;
  if(last + 1 < n)
    --last;
  if(last < first + 4)
    fail("zero-free part of the Ermakov-Pinney radicand is too short");

  std::vector<double> t(x.begin() + first, x.begin() + last + 1), f, df;
  for(std::size_t i = first; i <= last; ++i)
  {
    const double y = std::sqrt(std::fabs(R[i]));
    f.push_back(y);
    df.push_back((pos ? dR[i] : -dR[i]) / (2.0 * y));
  }
  const EndpointKind lt = first == 0 ? v1.left_tag() : EndpointKind::regular;
  const EndpointKind rt = last + 1 == n ? v1.right_tag() : EndpointKind::regular;
  return GridFunction(std::move(t), std::move(f), std::move(df), lt, rt);
}

WeightFamily1D ep_weight(const GridFunction& f, double k, const CoefficientFn& p)
{
  for(std::size_t i = 0; i < f.size(); ++i)
    if(!(f.values()[i] > 0.0))
      fail("f must be positive, f(" + fmt_g(f.nodes()[i]) + ")=" + fmt_g(f.values()[i]));
  WeightFamily1D out;
  out.w = CoefficientFn(
    [f, k, p](double t) {
      const double y = f(t);
      return k / (p(t) * y * y * y * y);
    },
    "k/(p f^4)");
  out.f_w = f;
  out.provenance = Provenance::ep;
  out.w_positive = k > 0.0;
  return out;
}

WeightFamily1D classical_family(const Interval& iv, std::pair<double, double> cutoffs, std::size_t nodes)
{
  if(iv.a != 0.0)
    fail("the classical pair lives on intervals (0, b)");
  const CoefficientFn f([](double t) { return std::sqrt(2.0 * t); }, "sqrt(2t)");
  const CoefficientFn df([](double t) { return 1.0 / std::sqrt(2.0 * t); }, "1/sqrt(2t)");
  const Grading g = std::isfinite(iv.b) && iv.right != EndpointKind::regular ? Grading::log_both : Grading::log_left;
  const auto x = make_grid(iv, cutoffs, nodes, g);
  WeightFamily1D out;
  out.w = CoefficientFn([](double t) { return 0.25 / (t * t); }, "1/(4t^2)");
  const GridFunction s = GridFunction::sample(x, f, &df);
  out.f_w = GridFunction(s.nodes(), s.values(), s.derivatives(), iv.left, iv.right);
  out.f_closed = std::pair{f, df};
  out.provenance = Provenance::classical;
  return out;
}

WeightFamily1D a_family(double a, std::size_t nodes, double rel_cut)
{
  if(!(a > 0.0))
    fail("a must be positive (a <= 0 is excluded), got " + fmt_g(a));
  const double b = 2.0 / a;
  const Interval iv(0.0, b, EndpointKind::singular, EndpointKind::singular);
  const CoefficientFn f([a](double t) { return std::sqrt(t * (2.0 - a * t)); }, "sqrt(2t - a t^2)");
  const CoefficientFn df([a](double t) { return (1.0 - a * t) / std::sqrt(t * (2.0 - a * t)); },
                         "(1 - a t)/sqrt(2t - a t^2)");
  const auto x = make_grid(iv, {b * rel_cut, b * (1.0 - rel_cut)}, nodes, Grading::log_both);
  WeightFamily1D out;
  out.w = CoefficientFn(
    [a](double t) {
      const double g = t * (2.0 - a * t);
      return 1.0 / (g * g);
    },
    "(2t - a t^2)^-2");
  const GridFunction s = GridFunction::sample(x, f, &df);
  out.f_w = GridFunction(s.nodes(), s.values(), s.derivatives(), iv.left, iv.right);
  out.f_closed = std::pair{f, df};
  out.provenance = Provenance::a_family;
  return out;
}

UXi u_xi(double a, double M, double xi, std::size_t nodes)
{
  if(!(a > 0.0) || !(M > 0.0) || !(xi > 0.0))
    fail("u_xi needs a, M, xi > 0");
  const double lo = 2.0 / (M * std::exp(std::numbers::pi / xi) + a);
  const double hi = 2.0 / (M + a);
  const Interval iv(0.0, 2.0 / a, EndpointKind::singular, EndpointKind::singular);
  const auto x = make_grid(iv, {lo, hi}, nodes, Grading::log_left);

  std::vector<double> u(x.size()), du(x.size());
  UXi out;
  for(std::size_t i = 0; i < x.size(); ++i)
  {
    const double t = x[i];
    const double g = t * (2.0 - a * t);
    const double f = std::sqrt(g), df = (1.0 - a * t) / f;
    const double th = 0.5 * xi * std::log(M * t / (2.0 - a * t));
    u[i] = f * std::cos(th);
    du[i] = df * std::cos(th) - f * std::sin(th) * xi / g;
    out.excess = std::max(out.excess, std::fabs(u[i]) - f);
    out.dist_to_fw = std::max(out.dist_to_fw, std::fabs(u[i] - f));
  }
  out.excess = std::max(out.excess, 0.0);
  out.bc_right = std::fabs(du.back() - (M * M - a * a) / (4.0 * M) * u.back());
  out.bc_left = std::fabs(u.front());
  out.u = GridFunction(x, u, du);

  const double lam = 1.0 + xi * xi;
  const SLProblem prob{1.0,
                       CoefficientFn(
                         [a, lam](double t) {
                           const double g = t * (2.0 - a * t);
                           return -lam / (g * g);
                         },
                         "-(1 + xi^2) w"),
                       iv};
  out.residual = residual(prob, out.u).max_rel;
  return out;
}

LiouvilleResult liouville_transform(const CoefficientFn& rho, const CoefficientFn& q, const Interval& iv,
                                    std::pair<double, double> cutoffs, std::size_t nodes)
{
  const Grading g = std::isfinite(iv.a) && std::isfinite(iv.b) ? Grading::log_both : Grading::log_left;
  const auto x = make_grid(iv, cutoffs, nodes, g);
  const CoefficientFn root(
    [rho](double t) {
      const double r = rho(t);
      if(!(r > 0.0))
        fail("rho must be positive, rho(" + fmt_g(t) + ")=" + fmt_g(r));
      return std::sqrt(r);
    },
    "sqrt(rho)");
  std::vector<double> seg(x.size() - 1), s(x.size(), 0.0), ds(x.size());
  kernels::segment_integrals(root, x, seg, 1e-12);
  for(std::size_t i = 1; i < x.size(); ++i)
    s[i] = s[i - 1] + seg[i - 1];
  kernels::sample(root, x, ds);

  LiouvilleResult out;
  out.s_map = GridFunction(x, std::move(s), std::move(ds));
  // bracket (rho'/rho)' - (rho'/rho)^2/4 taken from derivatives of ln rho, which is smoother than rho
  const CoefficientFn log_rho([rho](double t) { return std::log(rho(t)); }, "ln rho");
  out.q_hat = CoefficientFn(
    [rho, q, log_rho, iv](double t) {
      const double l = end_distance(iv, t);
      const double r = rho(t);
      const double d1 = numeric_derivative(log_rho, t, 1, l);
      const double d2 = numeric_derivative(log_rho, t, 2, l);
      return q(t) / r - 1.0 + (d2 - 0.25 * d1 * d1) / (4.0 * r);
    },
    "q_hat");
  return out;
}

double series_F_diff(double g, double c1, double c2, double c3)
{
  if(c2 == 0.0)
    return c3 == 0.0 ? g / c1 : std::log1p(2.0 * c3 * g / c1) / (2.0 * c3);
  const double D = c3 * c3 - c1 * c2;
  if(D > 0.0)
  {
    const double sD = std::sqrt(D);
    // c3 - sqrt(D) rewritten as c1 c2/(c3 + sqrt(D)) to avoid cancellation
    const double minus = c3 > 0.0 ? c1 * c2 / (c3 + sD) : c3 - sD;
    const double plus = c3 > 0.0 ? c3 + sD : c1 * c2 / (c3 - sD);
    return (std::log1p(c2 * g / minus) - std::log1p(c2 * g / plus)) / (2.0 * sD);
  }
  if(D == 0.0)
    return c2 * g / (c3 * (c2 * g + c3));
  const double sN = std::sqrt(-D);
  return (std::atan((c2 * g + c3) / sN) - std::atan(c3 / sN)) / sN;
}

std::pair<double, double> series_G(double L, double c1, double c2, int k, double t)
{
  if(!(L > 0.0) || !(c1 > 0.0) || !(c2 >= 0.0) || k < 0)
    fail("series parameters out of range (L > 0, c1 > 0, c2 >= 0, depth >= 0)");
  if(!(t > 0.0 && t <= L))
    throw DomainError("series recursion lives on (0, L]", t);
  const double c3 = std::sqrt(1.0 + c1 * c2);
  double G = (L - t) / (2.0 * L * t);
  double dG = -1.0 / (2.0 * t * t);
  for(int j = 0; j < k; ++j)
  {
    const double d = c1 + c2 * G * G + 2.0 * c3 * G;
    dG /= d;
    G = series_F_diff(G, c1, c2, c3);
  }
  return {G, dG};
}

CoefficientFn series_weight_closed_form(double L, double c1, double c2, int depth)
{
  if(depth < 1)
    fail("series depth must be at least 1");
  (void)series_G(L, c1, c2, 0, L); // parameter validation
  return CoefficientFn(
    [L, c1, c2, depth](double t) {
      double sum = 0.0;
      for(int j = 1; j <= depth; ++j)
      {
        const double d = series_G(L, c1, c2, j, t).second;
        sum += d * d;
      }
      return sum;
    },
    "sum (G_j')^2");
}

SeriesResult weight_series(const SLProblem& prob, double m, const std::vector<std::array<double, 3>>& coeffs,
                           int depth, const SeriesOptions& opts)
{
  if(depth < 1)
    fail("series depth must be at least 1");
  if(coeffs.empty() || (coeffs.size() != 1 && static_cast<int>(coeffs.size()) < depth))
    fail("need one coefficient triple, or one per step");
  for(const auto& c : coeffs)
  {
    if(!(c[0] > 0.0) || !(c[1] >= 0.0) || !(c[2] > 0.0))
      fail("series coefficients need c1 > 0, c2 >= 0, c3 > 0");
    check_constraint(c[0], c[1], c[2], 1.0);
  }
  if(!(opts.alpha >= 0.0))
    fail("alpha must be nonnegative");
  const Interval& iv = prob.iv;
  const double a = iv.a;
  const double L = m + 1.0;
  if(!std::isfinite(a) || !(L > a) || L > iv.b)
    fail("series window (a, m + 1) must lie in the interval");
  const double lo = a + (L - a) * opts.rel_cut;

  // nonnegativity of L on the window, certified by absence of oscillation
  const double top = L < iv.b ? L : a + (L - a) * (1.0 - 1e-9);
  const CoefficientFn minus_q([q = prob.q](double t) { return -q(t); }, "-q");
  if(pruefer_zero_count(prob.p, minus_q, lo, top, 0.0) > 0)
    fail("oscillation detected on (0, m + 1): the operator is not nonnegative there");

  GridFunction v1;
  if(opts.v1_initial)
  {
    const MinimalGrowthCheck mg = minimal_growth_check(prob, *opts.v1_initial, Side::left);
    if(!mg.passed)
      fail("initial v1 fails the minimal-growth test at the left endpoint");
    v1 = opts.v1_initial->restrict(lo, L);
  }
  else
  {
    PrincipalOptions po;
    po.window = std::pair{lo, L};
    po.nodes = opts.nodes;
    v1 = principal_solution(prob, Side::left, std::nullopt, po);
  }

  SeriesResult out;
  SLProblem current = prob;
  double eps_prev = 0.0, eps = 0.5;
  for(int j = 1; j <= depth; ++j)
  {
    const auto& c = coeffs.size() == 1 ? coeffs[0] : coeffs[static_cast<std::size_t>(j - 1)];
    const double end = opts.anchors == AnchorPolicy::fixed ? L : L - eps_prev;
    double anchor = opts.anchors == AnchorPolicy::fixed ? L : L - eps;
    v1 = v1.restrict(lo, end);
    anchor = std::min(anchor, v1.back());
    GridFunction r = reduction_of_order(current, v1, anchor);
    std::vector<double> v2(r.size()), dv2(r.size());
    for(std::size_t i = 0; i < r.size(); ++i)
    {
      const double t = r.nodes()[i];
      v2[i] = opts.alpha * v1(t) + r.values()[i];
      dv2[i] = opts.alpha * v1.derivative(t) + r.derivatives()[i];
    }
    const SolutionPair pair =
      make_solution_pair(current, v1, GridFunction(r.nodes(), std::move(v2), std::move(dv2)));
    const EPFamily fam{pair, c[0], c[1], c[2], 1.0};
    const GridFunction y = ep_solution(current, fam);

    WeightFamily1D term = ep_weight(y, 1.0, prob.p);
    term.provenance = Provenance::series;
    term.depth = j;
    out.terms.push_back(term);
    out.windows.emplace_back(y.front(), y.back());
    out.anchors.push_back(anchor);
    out.alphas.push_back(opts.alpha);
    out.betas.push_back(1.0);

    current = current.shifted(term.w);
    v1 = y;
    eps_prev = eps;
    eps += std::ldexp(1.0, -(j + 1));
  }

  out.y = v1;
  const auto& x = out.y.nodes();
  std::vector<double> acc(x.size(), 0.0);
  for(const auto& term : out.terms)
  {
    std::vector<double> wv(x.size());
    kernels::sample(term.w, x, wv);
    for(std::size_t i = 0; i < x.size(); ++i)
      acc[i] += wv[i];
    out.partial_sums.emplace_back(x, acc);
  }
  return out;
}

} // namespace hardy
