#include "corpus.hpp"

#include "hardy/certify.hpp"
#include "hardy/error.hpp"
#include "hardy/hardy1d.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace hardy;

namespace
{
const double inf = std::numeric_limits<double>::infinity();

const Interval unit(0.0, 1.0, EndpointKind::singular, EndpointKind::singular);
const Interval half_line(0.0, inf, EndpointKind::singular, EndpointKind::infinite);

const CoefficientFn hardy_w([](double t) { return 0.25 / (t * t); }, "1/(4t^2)");

// lambda_0 of -y'' = lam y/(4t^2) with Dirichlet ends at eps and 1/eps: in s = ln t, y = sqrt(t) z
// turns into -z'' = ((lam - 1)/4) z on an interval of length 2 ln(1/eps)
double euler_lambda0(double lo, double hi)
{
  const double len = std::log(hi / lo);
  return 1.0 + 4.0 * std::numbers::pi * std::numbers::pi / (len * len);
}

SLProblem laplace(const Interval& iv) { return SLProblem{1.0, 0.0, iv}; }

} // namespace

TEST_CASE("classifier examples")
{
  const CoefficientFn half_inv([](double t) { return 0.5 / t; }, "1/(2t)");
  auto v = improper_integral_classify(half_inv, Side::left, unit);
  CHECK(v.kind == VerdictKind::divergent);
  CHECK(v.model == GrowthModel::log);
  REQUIRE(v.windows.size() == 8);
  // int_c^{1/2} dt/(2t) = (1/2) ln(1/(2c))
  for(auto [c, val] : v.windows)
    CHECK(val == doctest::Approx(0.5 * std::log(0.5 / c)).epsilon(1e-10));

  v = improper_integral_classify(1.0, Side::left, unit);
  CHECK(v.kind == VerdictKind::convergent);

  const CoefficientFn slow([](double t) { const double l = std::log(1.0 / t); return 1.0 / (t * l * l); }, "slow");
  v = improper_integral_classify(slow, Side::left, unit);
  CHECK(v.kind == VerdictKind::convergent);
  for(auto [c, val] : v.windows)
    CHECK(val == doctest::Approx(1.0 / std::log(2.0) - 1.0 / std::log(1.0 / c)).epsilon(1e-9));
}

TEST_CASE("classifier cutoffs follow the geometric sequence")
{
  ClassifyOptions o;
  o.windows = 5;
  o.ratio = 0.5;
  auto v = improper_integral_classify(1.0, Side::right, half_line, o);
  REQUIRE(v.windows.size() == 5);
  for(std::size_t j = 0; j < 5; ++j)
  {
    CHECK(v.windows[j].first == doctest::Approx(std::pow(2.0, j + 1.0)));
    CHECK(v.windows[j].second == doctest::Approx(std::pow(2.0, j + 1.0) - 1.0));
  }
  CHECK(v.kind == VerdictKind::divergent);
  CHECK(v.model == GrowthModel::power);
  CHECK(v.exponent == doctest::Approx(1.0));
}

TEST_CASE("classifier power exponent")
{
  auto v = improper_integral_classify(CoefficientFn([](double t) { return std::pow(t, -1.5); }, "t^-1.5"),
                                      Side::left, unit);
  CHECK(v.kind == VerdictKind::divergent);
  CHECK(v.model == GrowthModel::power);
  CHECK(v.exponent == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("classifier corpus")
{
  int wrong = 0, unknown = 0;
  for(const auto& it : corpus::items())
  {
    CAPTURE(it.name);
    const auto v = improper_integral_classify(it.f, it.side, it.iv);
    if(v.kind == VerdictKind::inconclusive)
      ++unknown;
    else if(v.kind != it.truth)
      ++wrong;
    CHECK(v.kind == it.truth);
  }
  CHECK(wrong == 0);
  CHECK(unknown <= 1);
}

TEST_CASE("classifier errors")
{
  const CoefficientFn neg([](double t) { return -1.0 / t; }, "-1/t");
  CHECK_THROWS_AS(improper_integral_classify(neg, Side::left, unit), ModuleError);
  ClassifyOptions o;
  o.ratio = 1.5;
  CHECK_THROWS_AS(improper_integral_classify(1.0, Side::left, unit, o), ModuleError);
  const CoefficientFn bad([](double t) { return t < 1e-3 ? std::nan("") : 1.0; }, "nan");
  CHECK_THROWS(improper_integral_classify(bad, Side::left, unit));
}

TEST_CASE("oscillation evidence for the Euler weight")
{
  const auto prob = laplace(half_line);
  OscillationOptions o;
  o.depths = {1e-4, 1e-6, 1e-8};
  const auto recs = lambda_inf_oscillation_evidence(prob, hardy_w, {0.0, 1.0}, o);
  REQUIRE(recs.size() == 4);
  for(const auto& r : recs)
  {
    CAPTURE(r.xi);
    for(auto [e, n] : r.counts)
    {
      if(r.xi == 0.0)
        CHECK(n == 0);
      else if(r.endpoint == Side::left)
        CHECK(std::abs(n - static_cast<long>(std::floor(std::log(1.0 / e) / (2 * std::numbers::pi)))) <= 1);
      else
        CHECK(std::abs(n - static_cast<long>(std::floor(std::log(e) / (2 * std::numbers::pi)))) <= 1);
    }
    CHECK(r.growing == (r.xi > 0.0));
  }

  for(const auto& r : lambda_inf_oscillation_evidence(prob, 0.0, {0.5, 1.0, 4.0}, o))
  {
    CHECK_FALSE(r.growing);
    for(auto [e, n] : r.counts)
      CHECK(n == 0);
  }
}

TEST_CASE("lambda0 matches the Euler closed form")
{
  const auto prob = laplace(half_line);
  const auto l = lambda0_rayleigh(prob, hardy_w, {1e-4, 1e4}, 4000);
  CHECK(l.estimate == doctest::Approx(euler_lambda0(1e-4, 1e4)).epsilon(1e-5));
  CHECK(l.upper - l.lower <= 1e-8 * (1 + std::fabs(l.estimate)));
  CHECK(l.lower <= l.estimate);
  CHECK(l.estimate <= l.upper);
}

TEST_CASE("lambda0 sine eigenvalue and mesh convergence")
{
  const Interval iv(0.0, std::numbers::pi, EndpointKind::regular, EndpointKind::regular);
  const auto prob = laplace(iv);
  const double e1 = lambda0_rayleigh(prob, 1.0, {0.0, std::numbers::pi}, 200).estimate - 1.0;
  const double e2 = lambda0_rayleigh(prob, 1.0, {0.0, std::numbers::pi}, 400).estimate - 1.0;
  CHECK(std::fabs(e2) < 1e-4);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));

  // an indefinite form is reported, not rejected
  SLProblem shifted{1.0, -5.0, iv};
  CHECK(lambda0_rayleigh(shifted, 1.0, {0.0, std::numbers::pi}, 800).estimate == doctest::Approx(-4.0).epsilon(1e-4));

  CHECK_THROWS_AS(lambda0_rayleigh(prob, 0.0, {0.0, std::numbers::pi}, 100), ModuleError);
  const CoefficientFn gap([](double t) { return t > 1.0 && t < 2.0 ? 0.0 : 1.0; }, "gap");
  CHECK_THROWS_AS(lambda0_rayleigh(prob, gap, {0.0, std::numbers::pi}, 300), ModuleError);
}

TEST_CASE("lambda0 is non-increasing as the window widens")
{
  const auto prob = laplace(half_line);
  double prev = inf;
  for(double k : {2.0, 3.0, 4.0, 6.0, 8.0})
  {
    const double est = lambda0_rayleigh(prob, hardy_w, {std::pow(10.0, -k), std::pow(10.0, k)}, 2000).estimate;
    CHECK(est <= prev);
    CHECK(est > 1.0);
    prev = est;
  }
}

TEST_CASE("oscillation and eigenvalue coherence")
{
  const auto prob = laplace(half_line);
  OscillationOptions o;
  o.depths = {1e-10, 1e-20, 1e-30, 1e-40};
  const auto recs = lambda_inf_oscillation_evidence(prob, hardy_w, {0.1}, o);
  bool growing = false;
  for(const auto& r : recs)
    growing = growing || r.growing;
  REQUIRE(growing);
  double prev = inf;
  for(double k : {6.0, 8.0, 10.0, 12.0})
  {
    const double est = lambda0_rayleigh(prob, hardy_w, {std::pow(10.0, -k), std::pow(10.0, k)}, 4000).estimate;
    CHECK(est <= 1.0 + 0.01 + 0.05);
    CHECK(est <= prev);
    prev = est;
  }
}

TEST_CASE("certify the classical pair on the half-line")
{
  const auto rep = certify_optimality_1d(laplace(half_line), classical_family(half_line, {1e-6, 1e6}));
  CHECK(rep.verdict == Verdict::optimal);
  for(const auto* v : {&rep.ground_left, &rep.ground_right, &rep.weight_left, &rep.weight_right})
  {
    CHECK(v->kind == VerdictKind::divergent);
    CHECK(v->model == GrowthModel::log);
  }
  CHECK(rep.residual <= 1e-6);
  REQUIRE(rep.lambda0);
  CHECK(rep.lambda0->estimate == doctest::Approx(euler_lambda0(1e-4, 1e4)).epsilon(1e-4));
  CHECK_FALSE(rep.assumptions.empty());
  for(const auto& r : rep.oscillation)
    CHECK(r.growing);
}

TEST_CASE("certify the truncated classical pair")
{
  const auto rep = certify_optimality_1d(laplace(unit), classical_family(unit, {1e-6, 1.0 - 1e-9}));
  CHECK(rep.verdict == Verdict::not_critical);
  CHECK(rep.ground_left.kind == VerdictKind::divergent);
  CHECK(rep.weight_left.kind == VerdictKind::divergent);
  CHECK(rep.ground_right.kind == VerdictKind::convergent);
  CHECK(rep.weight_right.kind == VerdictKind::convergent);
  // int_{1/2}^c dt/(2t) = (1/2) ln(2c)
  for(auto [c, val] : rep.ground_right.windows)
    CHECK(val == doctest::Approx(0.5 * std::log(2.0 * c)).epsilon(1e-10));
}

TEST_CASE("certify the a-family")
{
  for(double a : {0.1, 0.5, 1.0, 2.0})
  {
    CAPTURE(a);
    const auto fam = a_family(a);
    const Interval iv(0.0, 2.0 / a, EndpointKind::singular, EndpointKind::singular);
    const auto rep = certify_optimality_1d(laplace(iv), fam);
    CHECK(rep.verdict == Verdict::optimal);
  }
}

TEST_CASE("certify without a closed form stays inside the grid")
{
  auto fam = classical_family(half_line, {1e-6, 1e6});
  fam.f_closed.reset();
  const auto rep = certify_optimality_1d(laplace(half_line), fam);
  CHECK(rep.verdict == Verdict::optimal);
  CHECK(rep.ground_left.windows.back().first >= 1e-6);
  CHECK(rep.ground_right.windows.back().first <= 1e6);
}

TEST_CASE("certify reports a weight that is too small")
{
  // w = 0, f = 1 solves -f'' = 0 but the constant is not a ground state on the half-line
  const auto x = make_grid(half_line, {1e-6, 1e6}, 400, Grading::log_left);
  WeightFamily1D fam{0.0, GridFunction::sample(x, 1.0), std::nullopt, Provenance::external, 0, false};
  const auto rep = certify_optimality_1d(laplace(half_line), fam);
  CHECK(rep.verdict == Verdict::not_critical);
  CHECK(rep.ground_left.kind == VerdictKind::convergent);
  CHECK_FALSE(rep.lambda0.has_value());
}
