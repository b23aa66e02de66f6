#ifndef HARDY_JOB_HPP
#define HARDY_JOB_HPP

#include "hardy/grid.hpp"
#include "hardy/report.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hardy
{

inline constexpr std::array<std::string_view, 6> job_modes{"verify-1d", "ep-family", "a-family",
                                                           "series",    "nd-example", "rellich"};

struct ProblemConfig
{
  std::string p = "1";
  std::string q = "0";
  std::optional<Interval> interval;
};

struct FamilyConfig
{
  std::string kind = "classical"; //!< classical | a-family | expr | ep
  double a = 1.0;
  double M = 2.0;
  std::vector<double> xis{1.0, 0.5, 0.25, 0.125};
  std::string w, f, df;       //!< kind expr
  std::string v1, dv1, v2, dv2; //!< kind ep
  std::optional<double> anchor;
  double c1 = 1.0, c2 = 0.0, c3 = 1.0, k = 1.0;
};

struct SeriesConfig
{
  double m = 1.0;
  std::vector<std::array<double, 3>> coeffs{{1.0, 0.0, 1.0}};
  int depth = 2;
  double alpha = 1.0;
  std::string anchors = "shrinking";
  std::string v1, dv1;
  //! (c1, c2) of the closed-form recursion to compare against
  std::optional<std::pair<double, double>> closed_form;
  double tol = 1e-6;
  std::size_t nodes = 4000;
};

struct NdConfig
{
  int n = 3;
  std::string phi = "exp(-1/(1-r^2))";
  double R_phi = 1.0;
  std::string u = "1";
  std::optional<double> a;
  double a_rel = 0.5; //!< a = a_rel / sup(G/u) when a is absent
  std::size_t psi_count = 20;
  std::uint64_t seed = 1;
  std::pair<double, double> psi_range{1.05, 6.0}; //!< annulus radii relative to R_phi
};

struct CertifyConfig
{
  std::optional<std::pair<double, double>> cutoffs;
  std::size_t windows = 8;
  double ratio = 0.25;
  std::size_t nodes = 2000;
  std::size_t mesh = 4000;
  bool lambda0 = true;
  std::optional<std::pair<double, double>> lambda0_cutoffs;
  double residual_tol = 1e-6;
  std::vector<double> xis{0.5, 1.0, 2.0};
};

struct OutputConfig
{
  std::string dir = ".";
  std::string report = "report.json";
  bool csv = true;
};

struct JobConfig
{
  std::string mode;
  ProblemConfig problem;
  FamilyConfig family;
  SeriesConfig series;
  NdConfig nd;
  CertifyConfig certify;
  OutputConfig output;
  Json source; //!< the document the config was read from, after overrides
};

//! validates every key; throws ConfigError with the key path
JobConfig parse_config(const Json& doc);

//! `key.path=value`; value is read as JSON when possible, else as a string
void apply_override(Json& doc, std::string_view assignment);

struct JobResult
{
  int exit_status = 1;
  Json report;
  std::vector<std::string> artifacts;
};

//! runs the mode's pipeline and writes the report and CSV files into cfg.output.dir
JobResult run_job(const JobConfig& cfg);

} // namespace hardy

#endif // HARDY_JOB_HPP
