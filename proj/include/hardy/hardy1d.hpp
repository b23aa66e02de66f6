#ifndef HARDY_HARDY1D_HPP
#define HARDY_HARDY1D_HPP

#include "hardy/coefficient.hpp"
#include "hardy/grid.hpp"
#include "hardy/sturm_liouville.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace hardy
{

//! Ermakov-Pinney family: y = sqrt|c1 v1^2 + c2 v2^2 + 2 c3 v1 v2| solves -(p y')' + q y = k / y^3
//! when p W(v1, v2) = +-1 and c3^2 - c1 c2 = k
struct EPFamily
{
  SolutionPair pair;
  double c1 = 1.0;
  double c2 = 0.0;
  double c3 = 1.0;
  double k = 1.0;
};

enum class Provenance { ep, a_family, classical, series, external };
std::string_view to_string(Provenance p);

//! a Hardy weight w with its positive solution f_w of (L - w) f = 0
struct WeightFamily1D
{
  CoefficientFn w;
  GridFunction f_w;
  //! closed form of f_w (and f_w') valid on the whole interval, when known
  std::optional<std::pair<CoefficientFn, CoefficientFn>> f_closed;
  Provenance provenance = Provenance::external;
  int depth = 0;
  bool w_positive = true;
};

GridFunction ep_solution(const SLProblem& prob, const EPFamily& fam);

//! w = k / (p f^4) packaged with f (k / f^4 for p = 1)
WeightFamily1D ep_weight(const GridFunction& f, double k, const CoefficientFn& p = 1.0);

//! w = 1/(4 t^2), f_w = sqrt(2t) tabulated on [cutoffs]
WeightFamily1D classical_family(const Interval& iv, std::pair<double, double> cutoffs, std::size_t nodes = 2000);

//! w = (2t - a t^2)^-2, f_w = sqrt(2t - a t^2) on (0, 2/a)
WeightFamily1D a_family(double a, std::size_t nodes = 4000, double rel_cut = 1e-9);

struct UXi
{
  GridFunction u;
  double residual = 0.0;     //!< relative residual of -u'' - (1 + xi^2) w u
  double bc_right = 0.0;     //!< |u' - (M^2 - a^2)/(4M) u| at t = 2/(M + a)
  double bc_left = 0.0;      //!< |u| at t = 2/(M e^(pi/xi) + a)
  double excess = 0.0;       //!< max(|u| - sqrt(2t - a t^2), 0) over the nodes
  double dist_to_fw = 0.0;   //!< max |u - sqrt(2t - a t^2)| over the nodes
};

//! u_xi(t) = sqrt(2t - a t^2) cos((xi/2) ln(M t / (2 - a t))) on (2/(M e^(pi/xi) + a), 2/(M + a))
UXi u_xi(double a, double M, double xi, std::size_t nodes = 4000);

struct LiouvilleResult
{
  GridFunction s_map; //!< s(t) = int_alpha^t sqrt(rho), alpha the left cutoff
  CoefficientFn q_hat;
};

//! Liouville normal form of -y'' + q y = lam rho y
LiouvilleResult liouville_transform(const CoefficientFn& rho, const CoefficientFn& q, const Interval& iv,
                                    std::pair<double, double> cutoffs, std::size_t nodes = 2000);

enum class AnchorPolicy { fixed, shrinking };

struct SeriesOptions
{
  //! v2 = alpha v1 + reduction_of_order(v1, anchor); the Wronskian pins beta to 1
  double alpha = 1.0;
  AnchorPolicy anchors = AnchorPolicy::shrinking;
  //! initial minimal-growth solution; computed by principal_solution when absent
  std::optional<GridFunction> v1_initial;
  std::size_t nodes = 4000;
  double rel_cut = 1e-10;
};

struct SeriesResult
{
  std::vector<WeightFamily1D> terms;
  std::vector<GridFunction> partial_sums; //!< w~_1 .. w~_k on the final window
  GridFunction y;                         //!< y_k
  std::vector<std::pair<double, double>> windows;
  std::vector<double> anchors;
  std::vector<double> alphas;
  std::vector<double> betas;
};

//! iterated weights w_j = y_j^-4 for L on (0, m + 1), one (c1, c2, c3) per step
SeriesResult weight_series(const SLProblem& prob, double m, const std::vector<std::array<double, 3>>& coeffs,
                           int depth, const SeriesOptions& opts = {});

//! F(g) - F(0) with F' = 1/(c1 + c2 t^2 + 2 c3 t); every discriminant sign handled
double series_F_diff(double g, double c1, double c2, double c3);

//! G_k and G_k' of the closed-form recursion, G_0 = (L - t)/(2 L t)
std::pair<double, double> series_G(double L, double c1, double c2, int k, double t);

//! sum_{j=1..depth} (G_j')^2
CoefficientFn series_weight_closed_form(double L, double c1, double c2, int depth);

} // namespace hardy

#endif // HARDY_HARDY1D_HPP
