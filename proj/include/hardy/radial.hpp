#ifndef HARDY_RADIAL_HPP
#define HARDY_RADIAL_HPP

#include "hardy/certify.hpp"
#include "hardy/coefficient.hpp"
#include "hardy/grid.hpp"
#include "hardy/hardy1d.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hardy
{

//! area of the unit sphere in R^n
double unit_sphere_area(int n);

//! amplitude * exp(-1/(1 - (r/R)^2)) on [0, R), zero beyond
CoefficientFn radial_bump(double R, double amplitude = 1.0);

//! G(r) = (r^(2-n) int_0^r phi s^(n-1) ds + int_r^inf phi s ds) / (n - 2), with G' attached.
//! phi must vanish at the last node; its support is taken to end inside the grid.
GridFunction green_potential_radial(int n, const CoefficientFn& phi, std::span<const double> r_grid);

struct RadialOptions
{
  std::size_t core = 150;   //!< geometric nodes on [r_min, 0.01 R]
  std::size_t inner = 1000; //!< uniform nodes on [0.01 R, R]
  std::size_t outer = 1500; //!< geometric nodes on [R, r_max]
  double r_min = 1e-6;      //!< relative to R
  double r_max = 1e3;       //!< relative to R
};

struct RadialProblem
{
  int n = 3;
  CoefficientFn phi;  //!< zero for r >= R_phi
  double R_phi = 1.0;
  CoefficientFn u = 1.0;
  GridFunction G;
  double C = 0.0;     //!< G = C r^(2-n) for r >= R_phi
  double mass = 0.0;  //!< int phi dx
  double sup_t = 0.0; //!< sup G/u
  double poisson_residual = 0.0;
  double u_residual = 0.0;

  bool off_support(double r) const { return r >= R_phi || phi(r) == 0.0; }
  //! G and G': grid interpolation inside supp phi, exterior closed form from R_phi on
  std::pair<double, double> green(double r) const;
  //! t = G/u and t'
  std::pair<double, double> t(double r) const;
};

RadialProblem make_radial_problem(int n, const CoefficientFn& phi, double R_phi, const CoefficientFn& u = 1.0,
                                  const RadialOptions& opts = {});

enum class NDKind { classical, pullback, improved };
std::string_view to_string(NDKind k);

struct NDWeight
{
  NDKind kind = NDKind::classical;
  double a = 0.0;
  CoefficientFn W;               //!< of r, closed form off supp phi
  CoefficientFn v;               //!< ground state u f(G/u)
  GridFunction ground_state;     //!< v on the radial grid
  GridFunction W_grid;           //!< W on the radial grid
  double min_W = 0.0;
  bool hypothesis_ok = true;     //!< f' >= 0 on the image of supp phi
  std::vector<std::string> flags;
};

NDWeight classical_weight_nd(const RadialProblem& rp);
NDWeight pullback_weight_nd(const RadialProblem& rp, const WeightFamily1D& fam);
NDWeight improved_weight_nd(const RadialProblem& rp, double a);

//! A ((r - r1)(r2 - r))^3 on (r1, r2)
struct AnnularBump
{
  double r1 = 1.0;
  double r2 = 2.0;
  double amplitude = 1.0;

  double operator()(double r) const;
  double d1(double r) const;
  double d2(double r) const;
};

std::vector<AnnularBump> random_annular_bumps(double r_lo, double r_hi, std::size_t count, std::uint64_t seed);

struct RellichResult
{
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  bool pass = true;
};

std::vector<RellichResult> rellich_check(const RadialProblem& rp, double a, const std::vector<AnnularBump>& psis);

//! divergence of int v^2 W r^(n-1) dr towards r = inf and towards the origin
std::pair<DivergenceVerdict, DivergenceVerdict> null_criticality_integral_nd(const RadialProblem& rp,
                                                                             const NDWeight& ndw,
                                                                             const ClassifyOptions& opts = {});

} // namespace hardy

#endif // HARDY_RADIAL_HPP
