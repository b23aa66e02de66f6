#ifndef HARDY_STURM_LIOUVILLE_HPP
#define HARDY_STURM_LIOUVILLE_HPP

#include "hardy/coefficient.hpp"
#include "hardy/grid.hpp"
#include "hardy/ode.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace hardy
{

//! L(y) = -(p y')' + q y on iv; p > 0 is checked where it is evaluated
struct SLProblem
{
  CoefficientFn p = 1.0;
  CoefficientFn q = 0.0;
  Interval iv;

  //! p(t), throwing ModuleError when p(t) <= 0
  double p_at(double t) const;
  //! the same operator with q replaced by q - lam * w
  SLProblem shifted(const CoefficientFn& w, double lam = 1.0) const;
};

//! p (v1' v2 - v1 v2') at t
double p_wronskian(const SLProblem& prob, const GridFunction& v1, const GridFunction& v2, double t);

struct SolutionPair
{
  GridFunction v1;
  GridFunction v2;
  double wronskian = 1.0;
};

//! checks Abel's identity on the common nodes (relative 1e-6) and records the Wronskian
SolutionPair make_solution_pair(const SLProblem& prob, GridFunction v1, GridFunction v2);

//! -(p f')' + q f on the grid interior (two nodes dropped at each end)
GridFunction apply_L(const SLProblem& prob, const GridFunction& f);

struct Residual
{
  double sup_abs = 0.0;   //!< max |L f|
  double sup_terms = 0.0; //!< max |(p f')'| + |q f|
  //! max |L f| / (|(p f')'| + |q f| + p (|f| + l |f'|) / l^2), l = distance to the nearest end
  double max_rel = 0.0;
  double t_worst = 0.0;
};

Residual residual(const SLProblem& prob, const GridFunction& f);

//! v = v1 * int_t^anchor ds / (p v1^2): v(anchor) = 0, p (v1' v - v1 v') = 1
GridFunction reduction_of_order(const SLProblem& prob, const GridFunction& v1, double anchor);

struct MinimalGrowthCheck
{
  bool passed = false;
  //! (cutoff, u/h) ordered from the interior towards the endpoint
  std::vector<std::pair<double, double>> ratios;
};

//! u/h on geometric cutoffs, h = u * int ds/(p u^2) taken from the reference point.
//! Passes when u/h decreases over the three innermost cutoffs and the innermost
//! ratio is at most a tenth of the outermost one.
MinimalGrowthCheck minimal_growth_check(const SLProblem& prob, const GridFunction& u, Side endpoint);

struct PrincipalOptions
{
  //! returned window; defaults to [a + 1e-10 (c - a), c] for a finite end and
  //! [c, c + 100 max(1, |c|)] for an infinite one (c = reference point)
  std::optional<std::pair<double, double>> window;
  std::size_t nodes = 2000;
  std::size_t max_nestings = 40;
  double tol = 1e-8;
  IvpOptions ivp{1e-12, 1e-14, 2'000'000, false};
};

//! Solution of minimal growth at `endpoint`, scaled to 1 at the reference point.
//! With a probe the candidate is verified (solution residual and minimal growth)
//! and returned rescaled; otherwise it is built by Weyl nesting.
GridFunction principal_solution(const SLProblem& prob, Side endpoint, const std::optional<GridFunction>& probe,
                                const PrincipalOptions& opts = {});

} // namespace hardy

#endif // HARDY_STURM_LIOUVILLE_HPP
