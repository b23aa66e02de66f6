#ifndef HARDY_ODE_HPP
#define HARDY_ODE_HPP

#include "hardy/coefficient.hpp"
#include "hardy/grid.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>

namespace hardy
{

struct IvpOptions
{
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 2'000'000;
  //! rescale the state when it leaves [1e-150, 1e150]; the returned solution is
  //! then a constant multiple of the requested one (fine for projective uses)
  bool renormalize = false;
};

//! Embedded Dormand-Prince 5(4) with PI step-size control.
//! Integrates y' = f(t, y) exactly onto each requested target.
template<std::size_t N>
class Dopri5
{
public:
  using State = std::array<double, N>;
  using Rhs = std::function<State(double, const State&)>;

  Dopri5(Rhs rhs, IvpOptions opts) : rhs_(std::move(rhs)), opts_(opts) {}

  //! advance (t, y) to t_target (either direction); throws IntegrationError on step underflow
  void advance(double& t, State& y, double t_target);

  std::size_t steps() const noexcept { return steps_; }

private:
  double error_norm(const State& y0, const State& y1, const State& err) const;

  Rhs rhs_;
  IvpOptions opts_;
  double h_ = 0.0;
  double err_old_ = 1e-4;
  std::size_t steps_ = 0;
};

//! Solves -(p y')' + q y = lam * w * y from (t0, y0, y'(t0) = yp0) onto sorted `targets`.
//! The result carries y and y' at every target (cubic Hermite dense output).
GridFunction solve_ivp(const CoefficientFn& p, const CoefficientFn& q, const std::optional<CoefficientFn>& w,
                       double lam, double t0, double y0, double yp0, std::span<const double> targets,
                       const IvpOptions& opts = {});

struct PrueferOptions
{
  double rtol = 1e-10;
  double atol = 1e-12;
  //! geometric segment ratio for the piecewise-constant Prüfer scale
  double segment_ratio = 0.7;
};

//! Number of zeros on (t_start, t_end] of the solution of -(p y')' = q_eff y with
//! initial Prüfer angle `init_angle` (y = rho sin(theta), scaled p y' = rho cos(theta)).
long pruefer_zero_count(const CoefficientFn& p, const CoefficientFn& q_eff, double t_start, double t_end,
                        double init_angle, const PrueferOptions& opts = {});

//! final Prüfer angle (same integration as pruefer_zero_count; unscaled at both ends)
double pruefer_angle(const CoefficientFn& p, const CoefficientFn& q_eff, double t_start, double t_end,
                     double init_angle, const PrueferOptions& opts = {});

} // namespace hardy

#endif // HARDY_ODE_HPP
