#include "hardy/ode.hpp"

#include "hardy/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hardy
{

namespace
{

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

constexpr double kSafety = 0.9, kFacMin = 0.2, kFacMax = 10.0, kBeta = 0.04;

} // namespace

template<std::size_t N>
double Dopri5<N>::error_norm(const State& y0, const State& y1, const State& err) const
{
  double acc = 0.0;
  for(std::size_t i = 0; i < N; ++i)
  {
    const double sc = opts_.atol + opts_.rtol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(N));
}

template<std::size_t N>
void Dopri5<N>::advance(double& t, State& y, double t_target)
{
  if(t == t_target)
    return;
  const double dir = t_target > t ? 1.0 : -1.0;
  const double span = std::fabs(t_target - t);
  if(h_ == 0.0)
  {
    // rough starting step from the first derivative scale
    State f0 = rhs_(t, y);
    double d0 = 0, d1 = 0;
    for(std::size_t i = 0; i < N; ++i)
    {
      const double sc = opts_.atol + opts_.rtol * std::fabs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / N), d1 = std::sqrt(d1 / N);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    h_ = std::min(h0, span);
  }
  double h = std::fabs(h_);

  auto axpy = [](const State& base, std::initializer_list<std::pair<double, const State*>> terms, double hh) {
    State out = base;
    for(auto [coef, k] : terms)
      for(std::size_t i = 0; i < N; ++i)
        out[i] += hh * coef * (*k)[i];
    return out;
  };

  while((t_target - t) * dir > 0.0)
  {
    if(++steps_ > opts_.max_steps)
      throw IntegrationError("step budget exhausted", t);
    const double remaining = std::fabs(t_target - t);
    bool last = false;
    if(h >= remaining)
    {
      h = remaining;
      last = true;
    }
    const double hs = dir * h;

    const State k1 = rhs_(t, y);
    const State k2 = rhs_(t + c2 * hs, axpy(y, {{a21, &k1}}, hs));
    const State k3 = rhs_(t + c3 * hs, axpy(y, {{a31, &k1}, {a32, &k2}}, hs));
    const State k4 = rhs_(t + c4 * hs, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, hs));
    const State k5 = rhs_(t + c5 * hs, axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, hs));
    const State k6 = rhs_(t + hs, axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, hs));
    const State y5 = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, hs);
    const State k7 = rhs_(t + hs, y5);

    State err{};
    for(std::size_t i = 0; i < N; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    double en = error_norm(y, y5, err);
    bool finite = std::isfinite(en);
    for(std::size_t i = 0; i < N && finite; ++i)
      finite = std::isfinite(y5[i]);
    if(!finite)
      en = std::numeric_limits<double>::infinity();

    if(en <= 1.0)
    {
      t = last ? t_target : t + hs;
      y = y5;
      const double fac = std::pow(en, -(0.2 - 0.75 * kBeta)) * std::pow(err_old_, kBeta);
      err_old_ = std::max(en, 1e-4);
      const double grow = std::clamp(kSafety * fac, kFacMin, kFacMax);
      // a step shortened to land on the target does not shrink the next one
      h_ = last ? std::max(h * grow, std::fabs(h_)) : h * grow;
      h = std::fabs(h_);
    }
    else
    {
      h *= std::max(kFacMin, kSafety * std::pow(en, -0.2));
      h_ = h;
      if(h < 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(t), 1e-300))
        throw IntegrationError("step size underflow (singularity?)", t);
    }
  }
}

template class Dopri5<1>;
template class Dopri5<2>;

GridFunction solve_ivp(const CoefficientFn& p, const CoefficientFn& q, const std::optional<CoefficientFn>& w,
                       double lam, double t0, double y0, double yp0, std::span<const double> targets,
                       const IvpOptions& opts)
{
  if(targets.size() < 2)
    throw GridError("solve_ivp needs at least two targets");
  for(std::size_t i = 1; i < targets.size(); ++i)
    if(!(targets[i] > targets[i - 1]))
      throw GridError("solve_ivp targets must be strictly increasing");

  auto p_at = [&p](double t) {
    const double v = p(t);
    if(!(v > 0.0))
      throw ModuleError("ode_engine", "p must be positive, p(" + std::to_string(t) + ")=" + std::to_string(v));
    return v;
  };

  using Stepper = Dopri5<2>;
  auto rhs = [&](double t, const Stepper::State& s) -> Stepper::State {
    double pot = q(t);
    if(w && lam != 0.0)
      pot -= lam * (*w)(t);
    return {s[1] / p_at(t), pot * s[0]};
  };

  const std::size_t n = targets.size();
  std::vector<double> vals(n), ders(n);
  const Stepper::State start{y0, p_at(t0) * yp0};
  const auto split =
    static_cast<std::size_t>(std::lower_bound(targets.begin(), targets.end(), t0) - targets.begin());

  double scale = 1.0; // stored values are multiplied by this relative to the running state
  auto renorm = [&](Stepper::State& s, std::size_t lo, std::size_t hi) {
    if(!opts.renormalize)
      return;
    const double m = std::max(std::fabs(s[0]), std::fabs(s[1]));
    if(m > 1e150 || (m < 1e-150 && m > 0.0))
    {
      const double f = 1.0 / m;
      s[0] *= f, s[1] *= f;
      for(std::size_t i = lo; i < hi; ++i)
        vals[i] *= f, ders[i] *= f;
      scale *= f;
    }
  };

  // forward sweep over targets >= t0
  {
    Stepper stepper(rhs, opts);
    double t = t0;
    auto s = start;
    for(std::size_t i = split; i < n; ++i)
    {
      stepper.advance(t, s, targets[i]);
      vals[i] = s[0];
      ders[i] = s[1] / p_at(targets[i]);
      renorm(s, split, i + 1);
    }
  }
  // backward sweep over targets < t0
  {
    const double fwd_scale = scale;
    scale = 1.0;
    Stepper stepper(rhs, opts);
    double t = t0;
    auto s = start;
    for(std::size_t i = split; i-- > 0;)
    {
      stepper.advance(t, s, targets[i]);
      vals[i] = s[0];
      ders[i] = s[1] / p_at(targets[i]);
      renorm(s, i, split);
    }
    // bring the two sweeps onto a common scale
    if(opts.renormalize && fwd_scale != scale)
    {
      const double f = std::min(fwd_scale, scale);
      for(std::size_t i = 0; i < split; ++i)
        vals[i] *= f / scale, ders[i] *= f / scale;
      for(std::size_t i = split; i < n; ++i)
        vals[i] *= f / fwd_scale, ders[i] *= f / fwd_scale;
    }
  }
  return GridFunction(std::vector<double>(targets.begin(), targets.end()), std::move(vals), std::move(ders));
}

namespace
{

// keeps floor(theta/pi) while changing the Prüfer scale: tan(new) = ratio * tan(old)
double rescale_angle(double theta, double ratio)
{
  const double k = std::floor(theta / std::numbers::pi);
  const double phi = theta - k * std::numbers::pi;
  return k * std::numbers::pi + std::atan2(ratio * std::sin(phi), std::cos(phi));
}

struct PrueferRun
{
  double theta_start_scaled;
  double theta_end_scaled;
  double theta_end;
};

PrueferRun run_pruefer(const CoefficientFn& p, const CoefficientFn& q_eff, double t_start, double t_end,
                       double init_angle, const PrueferOptions& opts)
{
  if(!(t_start < t_end) || !std::isfinite(t_start) || !std::isfinite(t_end))
    throw GridError("Prüfer window needs finite t_start < t_end");
  if(!(opts.segment_ratio > 0.0 && opts.segment_ratio < 1.0))
    throw GridError("segment_ratio must lie in (0,1)");

  // segment boundaries graded geometrically toward both window ends, where
  // the coefficients may vary on the scale of the distance to the end
  const double len = t_end - t_start;
  const double half = 0.5 * len;
  auto dmin = [len](double x) {
    return 64.0 * std::numeric_limits<double>::epsilon() * (x != 0.0 ? std::fabs(x) : len);
  };
  std::vector<double> cuts{t_start};
  for(double d = dmin(t_start); d < half; d /= opts.segment_ratio)
    cuts.push_back(t_start + d);
  cuts.push_back(t_start + half);
  std::vector<double> right;
  for(double d = dmin(t_end); d < half; d /= opts.segment_ratio)
    right.push_back(t_end - d);
  cuts.insert(cuts.end(), right.rbegin(), right.rend());
  cuts.push_back(t_end);
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto scale_at = [&](double a, double b) {
    const double m = 0.5 * (a + b);
    const double pv = p(m), qv = q_eff(m);
    if(!(pv > 0.0))
      throw ModuleError("ode_engine", "p must be positive, p(" + std::to_string(m) + ")=" + std::to_string(pv));
    const double s = std::sqrt(pv * std::fabs(qv));
    return (s > 0.0 && std::isfinite(s)) ? s : pv / (b - a);
  };

  IvpOptions io;
  io.rtol = opts.rtol;
  io.atol = opts.atol;

  double scale = scale_at(cuts[0], cuts[1]);
  double theta = rescale_angle(init_angle, scale);
  const double theta0 = theta;
  for(std::size_t k = 0; k + 1 < cuts.size(); ++k)
  {
    if(k > 0)
    {
      const double next = scale_at(cuts[k], cuts[k + 1]);
      theta = rescale_angle(theta, next / scale);
      scale = next;
    }
    const double sc = scale;
    Dopri5<1> stepper(
      [&](double t, const Dopri5<1>::State& th) -> Dopri5<1>::State {
        const double c = std::cos(th[0]), s = std::sin(th[0]);
        return {sc / p(t) * c * c + q_eff(t) / sc * s * s};
      },
      io);
    double t = cuts[k];
    Dopri5<1>::State th{theta};
    stepper.advance(t, th, cuts[k + 1]);
    theta = th[0];
  }
  return {theta0, theta, rescale_angle(theta, 1.0 / scale)};
}

} // namespace

long pruefer_zero_count(const CoefficientFn& p, const CoefficientFn& q_eff, double t_start, double t_end,
                        double init_angle, const PrueferOptions& opts)
{
  const auto run = run_pruefer(p, q_eff, t_start, t_end, init_angle, opts);
  return static_cast<long>(std::floor(run.theta_end_scaled / std::numbers::pi) -
                           std::floor(run.theta_start_scaled / std::numbers::pi));
}

double pruefer_angle(const CoefficientFn& p, const CoefficientFn& q_eff, double t_start, double t_end,
                     double init_angle, const PrueferOptions& opts)
{
  return run_pruefer(p, q_eff, t_start, t_end, init_angle, opts).theta_end;
}

} // namespace hardy
