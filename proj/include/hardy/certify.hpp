#ifndef HARDY_CERTIFY_HPP
#define HARDY_CERTIFY_HPP

#include "hardy/coefficient.hpp"
#include "hardy/grid.hpp"
#include "hardy/hardy1d.hpp"
#include "hardy/sturm_liouville.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hardy
{

enum class VerdictKind { divergent, convergent, inconclusive };
//! log: constant increments per window; power: geometric growth; saturating: geometric decay;
//! log_log: increments decaying like a power of the window index
enum class GrowthModel { none, log, power, saturating, log_log };

std::string_view to_string(VerdictKind k);
std::string_view to_string(GrowthModel m);

struct DivergenceVerdict
{
  VerdictKind kind = VerdictKind::inconclusive;
  Side endpoint = Side::left;
  //! (cutoff, integral from the cutoff to the reference point)
  std::vector<std::pair<double, double>> windows;
  GrowthModel model = GrowthModel::none;
  //! power: growth exponent; log_log / saturating: decay exponent or ratio
  double exponent = 0.0;
  double fit_residual = 0.0;
};

struct ClassifyOptions
{
  std::size_t windows = 8;
  double ratio = 0.25;
  double rel_tol = 1e-10;
  //! cutoffs never go past this point (e.g. the end of a tabulated integrand)
  std::optional<double> limit;
};

DivergenceVerdict improper_integral_classify(const CoefficientFn& integrand, Side endpoint, const Interval& iv,
                                             const ClassifyOptions& opts = {});

struct OscillationRecord
{
  double xi = 0.0;
  Side endpoint = Side::left;
  //! (window end towards the endpoint, zero count on the window)
  std::vector<std::pair<double, long>> counts;
  bool growing = false;
};

struct OscillationOptions
{
  //! window ends at relative distance `depth` from a finite endpoint, or 1/depth towards infinity
  std::vector<double> depths{1e-2, 1e-4, 1e-6, 1e-8};
};

//! zero counts of -(p y')' + q y = (1 + xi^2) w y on shrinking endpoint windows
std::vector<OscillationRecord> lambda_inf_oscillation_evidence(const SLProblem& prob, const CoefficientFn& w,
                                                               const std::vector<double>& xis,
                                                               const OscillationOptions& opts = {});

struct Lambda0
{
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t mesh = 0;
};

//! smallest eigenvalue of int p phi'^2 + q phi^2 = lam int w phi^2 with P1 elements,
//! Dirichlet at the cutoffs, by inertia bisection
Lambda0 lambda0_rayleigh(const SLProblem& prob, const CoefficientFn& w, std::pair<double, double> cutoffs,
                         std::size_t mesh);

enum class Verdict { optimal, positive_critical_suspected, not_critical, inconclusive };
std::string_view to_string(Verdict v);

struct OptimalityReport
{
  DivergenceVerdict ground_left;  //!< int 1/(p f_w^2) at the left end
  DivergenceVerdict ground_right; //!< int 1/(p f_w^2) at the right end
  DivergenceVerdict weight_left;  //!< int w f_w^2 at the left end
  DivergenceVerdict weight_right; //!< int w f_w^2 at the right end
  std::optional<Lambda0> lambda0;
  std::vector<OscillationRecord> oscillation;
  double residual = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> assumptions;
};

struct CertifyOptions
{
  ClassifyOptions classify;
  std::vector<double> xis{0.5, 1.0, 2.0};
  OscillationOptions oscillation;
  double residual_tol = 1e-6;
  bool lambda0 = true;
  //! lambda_0 on these cutoffs when set
  std::optional<std::pair<double, double>> lambda0_cutoffs;
  std::size_t lambda0_mesh = 4000;
};

OptimalityReport certify_optimality_1d(const SLProblem& prob, const WeightFamily1D& fam,
                                       const CertifyOptions& opts = {});

} // namespace hardy

#endif // HARDY_CERTIFY_HPP
