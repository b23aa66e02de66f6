// One pass/fail line per acceptance criterion; exit status 1 if any line fails.

#include "corpus.hpp"
#include "oracles.hpp"

#include "hardy/certify.hpp"
#include "hardy/error.hpp"
#include "hardy/hardy1d.hpp"
#include "hardy/radial.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

using namespace hardy;

namespace
{

const double inf = std::numeric_limits<double>::infinity();
const double pi = std::numbers::pi;
const Interval half_line(0.0, inf, EndpointKind::singular, EndpointKind::infinite);
const CoefficientFn euler_w([](double t) { return 0.25 / (t * t); }, "1/(4t^2)");

struct Outcome
{
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what)
  {
    if(!ok)
    {
      pass = false;
      detail << "[violated: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body)
{
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try
  {
    body(o);
  }
  catch(const Error& e)
  {
    o.pass = false;
    o.detail << "error [" << e.origin() << "]: " << e.what();
  }
  catch(const std::exception& e)
  {
    o.pass = false;
    o.detail << "error: " << e.what();
  }
  if(!o.pass)
    ++failures;
  std::printf("criterion %2d %s  %s  (%.2f s)  %s\n", id, o.pass ? "PASS" : "FAIL", title, seconds_since(t0),
              o.detail.str().c_str());
  std::fflush(stdout);
}

SLProblem laplace(const Interval& iv) { return SLProblem{1.0, 0.0, iv}; }

const RadialProblem& bump_problem(int n)
{
  static const RadialProblem p3 = make_radial_problem(3, oracle::bump(3, 1.0, 1.0), 1.0);
  static const RadialProblem p4 = make_radial_problem(4, oracle::bump(4, 1.0, 1.0), 1.0);
  static const RadialProblem p5 = make_radial_problem(5, oracle::bump(5, 1.0, 1.0), 1.0);
  return n == 3 ? p3 : n == 4 ? p4 : p5;
}

} // namespace

int main()
{
  spdlog::set_level(spdlog::level::warn);

  criterion(1, "classical pair on (0, inf) is optimal", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = certify_optimality_1d(laplace(half_line), classical_family(half_line, {1e-8, 1e8}));
    const double dt = seconds_since(t0);
    o.require(rep.verdict == Verdict::optimal, "verdict optimal");
    for(const auto* v : {&rep.ground_left, &rep.ground_right, &rep.weight_left, &rep.weight_right})
      o.require(v->kind == VerdictKind::divergent && v->model == GrowthModel::log,
                "divergent/log at " + std::string(to_string(v->endpoint)));
    o.require(dt < 5.0, "runtime < 5 s");
    o.detail << "verdict " << to_string(rep.verdict);
  });

  criterion(2, "classical pair truncated to (0, 1) is not optimal", [](Outcome& o) {
    const Interval unit(0.0, 1.0, EndpointKind::singular, EndpointKind::regular);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = certify_optimality_1d(laplace(unit), classical_family(unit, {1e-8, 1.0}));
    const double dt = seconds_since(t0);
    o.require(rep.verdict != Verdict::optimal && rep.verdict != Verdict::inconclusive, "verdict not optimal");
    o.require(rep.ground_right.kind == VerdictKind::convergent, "right 1/(p f^2) convergent");
    o.require(rep.weight_right.kind == VerdictKind::convergent, "right w f^2 convergent");
    o.require(rep.ground_left.kind == VerdictKind::divergent, "left 1/(p f^2) divergent");
    o.require(rep.weight_left.kind == VerdictKind::divergent, "left w f^2 divergent");
    // int_{1/2}^c dt/(2t) = (1/2) ln(2c) for the right-end windows
    double worst = 0.0;
    for(auto [c, val] : rep.ground_right.windows)
      worst = std::max(worst, std::fabs(val - 0.5 * std::log(2.0 * c)));
    o.require(worst <= 1e-10, "right windows match the antiderivative");
    o.require(dt < 5.0, "runtime < 5 s");
    o.detail << "verdict " << to_string(rep.verdict) << ", window error " << worst;
  });

  criterion(3, "a-family solves -f'' = w f and is optimal", [](Outcome& o) {
    double worst_all = 0.0;
    for(double a : {0.1, 0.5, 1.0, 2.0})
    {
      const auto fam = a_family(a);
      const auto& [f, df] = *fam.f_closed;
      const double b = 2.0 / a;
      for(int i = 0; i < 1000; ++i)
      {
        const double s = i % 2 ? -6.0 + 6.0 * i / 999.0 : -3.0 + 3.0 * i / 999.0;
        const double t = i % 2 ? b * 0.5 * std::pow(10.0, s) : b * (1.0 - 0.5 * std::pow(10.0, s));
        const double h = 1e-2 * std::min(t, b - t);
        const double d2 = oracle::d1_central6([&](double x) { return df(x); }, t, h);
        worst_all = std::max(worst_all, std::fabs(-d2 - fam.w(t) * f(t)) / (fam.w(t) * f(t)));
      }
      const Interval iv(0.0, b, EndpointKind::singular, EndpointKind::singular);
      const auto rep = certify_optimality_1d(laplace(iv), fam);
      o.require(rep.verdict == Verdict::optimal, "optimal for a=" + std::to_string(a));
    }
    o.require(worst_all <= 1e-8, "relative residual <= 1e-8");
    o.detail << "max relative residual " << worst_all;
  });

  criterion(4, "u_xi boundary conditions, bound and convergence", [](Outcome& o) {
    double res = 0, bc = 0, excess = 0;
    for(double a : {0.5, 1.0})
      for(double M : {1.0, 2.0, 5.0})
      {
        double prev = inf;
        for(double xi : {1.0, 0.5, 0.25, 0.125})
        {
          const UXi u = u_xi(a, M, xi);
          res = std::max(res, u.residual);
          bc = std::max({bc, u.bc_left, u.bc_right});
          excess = std::max(excess, u.excess);
          o.require(u.dist_to_fw < prev, "monotone distance at a=" + std::to_string(a) + " M=" + std::to_string(M));
          prev = u.dist_to_fw;
        }
      }
    o.require(res <= 1e-7, "ODE residual <= 1e-7");
    o.require(bc <= 1e-9, "boundary conditions <= 1e-9");
    o.require(excess <= 0.0, "|u_xi| <= f_w");
    o.detail << "residual " << res << ", bc " << bc << ", excess " << excess;
  });

  criterion(5, "zero counts for the Euler weight", [](Outcome& o) {
    OscillationOptions opts;
    opts.depths = {1e-4, 1e-6, 1e-8};
    // xi = 1 is lambda = 2, xi = 0 is lambda = 1
    for(const auto& r : lambda_inf_oscillation_evidence(laplace(half_line), euler_w, {1.0, 0.0}, opts))
    {
      if(r.endpoint != Side::left)
        continue;
      for(auto [eps, n] : r.counts)
      {
        const long expect = r.xi == 0.0 ? 0 : static_cast<long>(std::floor(std::log(1.0 / eps) / (2 * pi)));
        if(r.xi == 0.0)
          o.require(n == 0, "no zeros at lambda = 1");
        else
          o.require(std::abs(n - expect) <= 1, "count within 1 at eps=" + std::to_string(eps));
        o.detail << "lambda=" << 1 + r.xi * r.xi << " eps=" << eps << ": " << n << " (" << expect << ") ";
      }
    }
  });

  criterion(6, "lambda_0 of the classical pair", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto l4 = lambda0_rayleigh(laplace(half_line), euler_w, {1e-4, 1e4}, 4000);
    const auto l6 = lambda0_rayleigh(laplace(half_line), euler_w, {1e-6, 1e6}, 4000);
    const double dt = seconds_since(t0);
    o.require(l4.estimate > 1.0 && l4.estimate < 1.05, "estimate in (1.0, 1.05)");
    o.require(l6.estimate < l4.estimate, "strictly decreasing when the window widens");
    o.require(dt < 30.0, "runtime < 30 s");
    // Dirichlet eigenvalue of the Euler operator on (lo, hi): 1 + 4 pi^2 / ln(hi/lo)^2
    const double exact = 1.0 + 4 * pi * pi / std::pow(std::log(1e8), 2);
    o.detail << "(1e-4,1e4): " << l4.estimate << " [exact " << exact << "], (1e-6,1e6): " << l6.estimate;
  });

  criterion(7, "series recursion against hand-differentiated forms", [](Outcome& o) {
    const double L = 2.0;
    double dG = 0.0, dw = 0.0;
    const auto w1 = series_weight_closed_form(L, 1.0 / L, 0.0, 1);
    for(int i = 0; i < 500; ++i)
    {
      const double t = L * std::pow(10.0, -8.0 + 8.0 * i / 499.0) * (1 - 1e-12);
      const auto [G, G1] = series_G(L, 1.0 / L, 0.0, 1, t);
      (void)G1;
      dG = std::max(dG, std::fabs(G - 0.5 * std::log(L / t)) / std::max(1.0, std::fabs(G)));
      dw = std::max(dw, std::fabs(w1(t) * 4 * t * t - 1.0));
    }
    o.require(dG <= 1e-8, "G_1 = (1/2) ln(L/t)");
    o.require(dw <= 1e-8, "first term = 1/(4t^2)");
    bool exceeds = true;
    for(double c1 : {1.0 / L, 0.5 / L})
      for(int depth : {2, 3, 5})
      {
        const auto w = series_weight_closed_form(L, c1, 0.0, depth);
        for(int i = 0; i < 500; ++i)
        {
          const double t = L * std::pow(10.0, -8.0 + 8.0 * i / 499.0) * (1 - 1e-9);
          exceeds = exceeds && w(t) > 0.25 / (t * t);
        }
      }
    o.require(exceeds, "depth >= 2 exceeds (2t)^-2");
    o.detail << "G error " << dG << ", weight error " << dw;
  });

  criterion(8, "pullback of 1D families", [](Outcome& o) {
    double dc = 0.0, di = 0.0;
    for(int n : {3, 4, 5})
    {
      const auto& rp = bump_problem(n);
      const auto pc = pullback_weight_nd(rp, classical_family(half_line, {1e-9, 1e3}));
      const auto cw = classical_weight_nd(rp);
      const double a = 0.7 / rp.sup_t;
      const auto pa = pullback_weight_nd(rp, a_family(a));
      const auto iw = improved_weight_nd(rp, a);
      for(double r : oracle::exterior_points(1.0, 60))
      {
        dc = std::max(dc, std::fabs(pc.W(r) / cw.W(r) - 1.0));
        di = std::max(di, std::fabs(pa.W(r) / iw.W(r) - 1.0));
      }
    }
    o.require(dc <= 1e-8, "classical pullback");
    o.require(di <= 1e-8, "a-family pullback");
    o.detail << "classical " << dc << ", improved " << di;
  });

  criterion(9, "classical radial weight and Green constant", [](Outcome& o) {
    double dw = 0.0, dc = 0.0;
    for(int n : {3, 4, 5})
    {
      const auto& rp = bump_problem(n);
      const auto cw = classical_weight_nd(rp);
      const double k = (n - 2) / 2.0;
      for(double r : oracle::exterior_points(1.0, 60))
        dw = std::max(dw, std::fabs(cw.W(r) * r * r / (k * k) - 1.0));
      for(double r : {1.5, 3.0, 10.0})
      {
        const double newton = oracle::newton_potential(n, rp.phi, 1.0, r);
        dc = std::max(dc, std::fabs(rp.C * std::pow(r, 2.0 - n) / newton - 1.0));
      }
    }
    o.require(dw <= 1e-7, "W = ((n-2)/2)^2 / r^2");
    o.require(dc <= 1e-6, "exterior constant vs Newton potential");
    o.detail << "weight " << dw << ", constant " << dc;
  });

  criterion(10, "improved weight dominates", [](Outcome& o) {
    double worst = 0.0, min_ratio = inf;
    for(int n : {3, 4, 5})
    {
      const auto& rp = bump_problem(n);
      const auto cw = classical_weight_nd(rp);
      for(double s : {0.2, 0.5, 0.9})
      {
        const double a = s / rp.sup_t;
        const auto iw = improved_weight_nd(rp, a);
        for(double r : oracle::exterior_points(1.0, 60))
        {
          const double t = rp.t(r).first;
          const double ratio = iw.W(r) / cw.W(r);
          worst = std::max(worst, std::fabs(ratio * (2 - a * t) * (2 - a * t) / 4.0 - 1.0));
          min_ratio = std::min(min_ratio, ratio);
        }
      }
    }
    o.require(worst <= 1e-8, "ratio = 4/(2 - a G/u)^2");
    o.require(min_ratio > 1.0, "ratio > 1");
    o.detail << "ratio error " << worst << ", min ratio - 1 = " << min_ratio - 1.0;
  });

  criterion(11, "Rellich inequality on seeded annular bumps", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = inf;
    std::size_t count = 0;
    for(int n : {3, 4, 5})
    {
      const auto& rp = bump_problem(n);
      const auto psis = random_annular_bumps(1.05, 6.0, 20, 1000 + n);
      for(const auto& res : rellich_check(rp, 0.5 / rp.sup_t, psis))
      {
        const double slack = (res.lhs - res.rhs) / (1.0 + res.lhs);
        worst = std::min(worst, slack);
        o.require(res.lhs - res.rhs >= -1e-8 * (1.0 + res.lhs), "LHS - RHS >= -1e-8 (1 + LHS)");
        ++count;
      }
    }
    const double dt = seconds_since(t0);
    o.require(count == 60, "60 test functions");
    o.require(dt < 60.0, "runtime < 60 s");
    o.detail << count << " functions, min (LHS-RHS)/(1+LHS) " << worst;
  });

  criterion(12, "exterior null-criticality integral diverges", [](Outcome& o) {
    const auto& rp = bump_problem(3);
    const auto cw = classical_weight_nd(rp);
    const auto iw = improved_weight_nd(rp, 0.5 / rp.sup_t);
    for(const auto* w : {&cw, &iw})
    {
      const auto [at_inf, origin] = null_criticality_integral_nd(rp, *w);
      (void)origin;
      o.require(at_inf.kind == VerdictKind::divergent && at_inf.model == GrowthModel::log,
                std::string(to_string(w->kind)) + " divergent/log");
      o.detail << to_string(w->kind) << ": " << to_string(at_inf.kind) << "/" << to_string(at_inf.model) << " ";
    }
    // integrand C/(4r) outside the support
    const auto [at_inf, origin] = null_criticality_integral_nd(rp, cw);
    (void)origin;
    double worst = 0.0;
    for(auto [c, val] : at_inf.windows)
      worst = std::max(worst, std::fabs(val / (0.25 * rp.C * std::log(c)) - 1.0));
    o.require(worst <= 1e-8, "windows match (C/4) ln r");
  });

  criterion(13, "Liouville normal form of (2t - t^2)^-2", [](Outcome& o) {
    const Interval iv(0.0, 2.0, EndpointKind::singular, EndpointKind::singular);
    const auto lt = liouville_transform(CoefficientFn::parse("(2*t - t^2)^(-2)"), 0.0, iv, {0.05, 1.95});
    double worst = 0.0;
    for(int i = 0; i <= 1000; ++i)
      worst = std::max(worst, std::fabs(lt.q_hat(0.05 + 1.9 * i / 1000.0)));
    o.require(worst <= 1e-6, "sup |q_hat| <= 1e-6");
    o.detail << "sup |q_hat| " << worst;
  });

  criterion(14, "divergence classifier corpus", [](Outcome& o) {
    int right = 0, wrong = 0, unknown = 0;
    for(const auto& it : corpus::items())
    {
      const auto v = improper_integral_classify(it.f, it.side, it.iv);
      if(v.kind == VerdictKind::inconclusive)
        ++unknown;
      else if(v.kind == it.truth)
        ++right;
      else
      {
        ++wrong;
        o.detail << "misclassified " << it.name << " ";
      }
    }
    o.require(right >= 11, ">= 11 correct");
    o.require(wrong == 0, "no misclassification");
    o.require(unknown <= 1, "at most one inconclusive");
    o.detail << right << " correct, " << wrong << " wrong, " << unknown << " inconclusive";
  });

  std::printf("%d of 14 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
