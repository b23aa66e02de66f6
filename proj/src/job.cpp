#include "hardy/job.hpp"

#include "hardy/certify.hpp"
#include "hardy/error.hpp"
#include "hardy/expr.hpp"
#include "hardy/hardy1d.hpp"
#include "hardy/radial.hpp"
#include "hardy/sturm_liouville.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

namespace hardy
{

namespace
{

const double inf = std::numeric_limits<double>::infinity();

// typed access to one config object; remembers which keys were read
class Section
{
public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path))
  {
    if(!j_.is_object())
      throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  bool has(const std::string& k)
  {
    seen_.insert(k);
    return j_.contains(k);
  }

  const Json& raw(const std::string& k)
  {
    seen_.insert(k);
    return j_.at(k);
  }

  double number(const std::string& k, double def, double lo = -inf, double hi = inf)
  {
    if(!has(k))
      return def;
    return check(k, to_number(j_.at(k), key(k)), lo, hi);
  }

  std::optional<double> opt_number(const std::string& k, double lo = -inf, double hi = inf)
  {
    if(!has(k))
      return std::nullopt;
    return check(k, to_number(j_.at(k), key(k)), lo, hi);
  }

  std::size_t count(const std::string& k, std::size_t def, std::size_t lo, std::size_t hi)
  {
    if(!has(k))
      return def;
    const Json& v = j_.at(k);
    if(!v.is_number_integer() || v.get<long long>() < 0)
      throw ConfigError(key(k), "expected a nonnegative integer");
    const auto n = v.get<std::size_t>();
    if(n < lo || n > hi)
      throw ConfigError(key(k), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                                  std::to_string(n));
    return n;
  }

  std::string string(const std::string& k, const std::string& def)
  {
    if(!has(k))
      return def;
    const Json& v = j_.at(k);
    if(!v.is_string())
      throw ConfigError(key(k), "expected a string");
    return v.get<std::string>();
  }

  std::string choice(const std::string& k, const std::string& def, std::initializer_list<std::string_view> allowed)
  {
    auto s = string(k, def);
    if(std::find(allowed.begin(), allowed.end(), s) == allowed.end())
    {
      std::string list;
      for(auto a : allowed)
        list += (list.empty() ? "" : ", ") + std::string(a);
      throw ConfigError(key(k), "must be one of {" + list + "}, got '" + s + "'");
    }
    return s;
  }

  bool boolean(const std::string& k, bool def)
  {
    if(!has(k))
      return def;
    if(!j_.at(k).is_boolean())
      throw ConfigError(key(k), "expected true or false");
    return j_.at(k).get<bool>();
  }

  std::vector<double> numbers(const std::string& k, std::vector<double> def, double lo, double hi)
  {
    if(!has(k))
      return def;
    const Json& v = j_.at(k);
    if(!v.is_array() || v.empty())
      throw ConfigError(key(k), "expected a non-empty array of numbers");
    std::vector<double> out;
    for(std::size_t i = 0; i < v.size(); ++i)
    {
      const std::string kp = key(k) + "[" + std::to_string(i) + "]";
      const double x = to_number(v[i], kp);
      if(!(x >= lo && x <= hi))
        throw ConfigError(kp, "out of range");
      out.push_back(x);
    }
    return out;
  }

  std::optional<std::pair<double, double>> range(const std::string& k)
  {
    if(!has(k))
      return std::nullopt;
    auto v = numbers(k, {}, -inf, inf);
    if(v.size() != 2 || !(v[0] < v[1]))
      throw ConfigError(key(k), "expected [lo, hi] with lo < hi");
    return std::pair{v[0], v[1]};
  }

  Section sub(const std::string& k)
  {
    seen_.insert(k);
    return Section(j_.at(k), key(k));
  }

  void finish() const
  {
    for(auto it = j_.begin(); it != j_.end(); ++it)
      if(!seen_.count(it.key()))
        throw ConfigError(key(it.key()), "unknown key");
  }

  static double to_number(const Json& v, const std::string& kp)
  {
    if(v.is_number())
      return v.get<double>();
    if(!v.is_string())
      throw ConfigError(kp, "expected a number");
    const auto s = v.get<std::string>();
    if(s == "inf" || s == "+inf")
      return inf;
    if(s == "-inf")
      return -inf;
    try
    {
      const Expr e = Expr::parse(s);
      if(!e.is_constant())
        throw ConfigError(kp, "expected a constant, got an expression in " + std::string(1, e.variable()));
      return e.eval(0.0);
    }
    catch(const ParseError& e)
    {
      throw ConfigError(kp, e.what());
    }
  }

private:
  double check(const std::string& k, double x, double lo, double hi) const
  {
    if(std::isnan(x) || x < lo || x > hi)
      throw ConfigError(key(k), "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    return x;
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void check_expr(const std::string& src, const std::string& kp)
{
  try
  {
    (void)Expr::parse(src);
  }
  catch(const ParseError& e)
  {
    throw ConfigError(kp, e.what());
  }
}

CoefficientFn expr_fn(const std::string& src) { return CoefficientFn(Expr::parse(src)); }

std::string expr_field(Section& s, const std::string& k, const std::string& def)
{
  auto v = s.string(k, def);
  if(!v.empty())
    check_expr(v, s.key(k));
  return v;
}

Interval parse_interval(Section s)
{
  const double a = s.number("a", 0.0);
  const double b = s.number("b", inf);
  auto kind = [&](const char* k, double x) {
    const auto def = std::isinf(x) ? "infinite" : "singular";
    try
    {
      return endpoint_kind_from_string(s.choice(k, def, {"regular", "singular", "infinite"}));
    }
    catch(const GridError& e)
    {
      throw ConfigError(s.key(k), e.what());
    }
  };
  const auto left = kind("left", a), right = kind("right", b);
  s.finish();
  try
  {
    return Interval(a, b, left, right);
  }
  catch(const GridError& e)
  {
    throw ConfigError(s.key("a"), e.what());
  }
}

} // namespace

JobConfig parse_config(const Json& doc)
{
  JobConfig cfg;
  cfg.source = doc;
  Section root(doc, "");
  cfg.mode = root.string("mode", "");
  if(std::find(job_modes.begin(), job_modes.end(), cfg.mode) == job_modes.end())
    throw ConfigError("mode", "unknown or missing mode '" + cfg.mode + "'");

  if(root.has("problem"))
  {
    auto s = root.sub("problem");
    cfg.problem.p = expr_field(s, "p", "1");
    cfg.problem.q = expr_field(s, "q", "0");
    if(s.has("interval"))
      cfg.problem.interval = parse_interval(s.sub("interval"));
    s.finish();
  }

  if(root.has("family"))
  {
    auto s = root.sub("family");
    auto& f = cfg.family;
    f.kind = s.choice("kind", f.kind, {"classical", "a-family", "expr", "ep"});
    f.a = s.number("a", f.a, 1e-12, 1e12);
    if(!(f.a > 0.0))
      throw ConfigError("family.a", "must be positive");
    f.M = s.number("M", f.M, 1e-12, 1e12);
    f.xis = s.numbers("xis", f.xis, 1e-6, 1e3);
    f.w = expr_field(s, "w", "");
    f.f = expr_field(s, "f", "");
    f.df = expr_field(s, "df", "");
    f.v1 = expr_field(s, "v1", "");
    f.dv1 = expr_field(s, "dv1", "");
    f.v2 = expr_field(s, "v2", "");
    f.dv2 = expr_field(s, "dv2", "");
    f.anchor = s.opt_number("anchor");
    f.c1 = s.number("c1", f.c1);
    f.c2 = s.number("c2", f.c2);
    f.c3 = s.number("c3", f.c3);
    f.k = s.number("k", f.k, 1e-300, inf);
    s.finish();
    if(f.kind == "expr" && (f.w.empty() || f.f.empty() || f.df.empty()))
      throw ConfigError("family", "kind 'expr' needs w, f and df");
    if(f.kind == "ep" && (f.v1.empty() || f.dv1.empty()))
      throw ConfigError("family", "kind 'ep' needs v1 and dv1");
    if(f.v2.empty() != f.dv2.empty())
      throw ConfigError("family", "v2 and dv2 go together");
  }

  if(root.has("series"))
  {
    auto s = root.sub("series");
    auto& c = cfg.series;
    c.m = s.number("m", c.m, 1e-9, 1e9);
    if(s.has("coeffs"))
    {
      const Json& v = s.raw("coeffs");
      if(!v.is_array() || v.empty())
        throw ConfigError("series.coeffs", "expected a non-empty array of [c1, c2, c3]");
      c.coeffs.clear();
      for(std::size_t i = 0; i < v.size(); ++i)
      {
        const std::string kp = "series.coeffs[" + std::to_string(i) + "]";
        if(!v[i].is_array() || v[i].size() != 3)
          throw ConfigError(kp, "expected [c1, c2, c3]");
        c.coeffs.push_back({Section::to_number(v[i][0], kp), Section::to_number(v[i][1], kp),
                            Section::to_number(v[i][2], kp)});
      }
    }
    c.depth = static_cast<int>(s.count("depth", static_cast<std::size_t>(c.depth), 1, 64));
    c.alpha = s.number("alpha", c.alpha, 0.0, 1e6);
    c.anchors = s.choice("anchors", c.anchors, {"fixed", "shrinking"});
    c.v1 = expr_field(s, "v1", "");
    c.dv1 = expr_field(s, "dv1", "");
    if(c.v1.empty() != c.dv1.empty())
      throw ConfigError("series", "v1 and dv1 go together");
    if(auto r = s.has("closed_form") ? s.numbers("closed_form", {}, 0.0, 1e12) : std::vector<double>{}; !r.empty())
    {
      if(r.size() != 2)
        throw ConfigError("series.closed_form", "expected [c1, c2]");
      c.closed_form = std::pair{r[0], r[1]};
    }
    c.tol = s.number("tol", c.tol, 1e-15, 1.0);
    c.nodes = s.count("nodes", c.nodes, 64, 1'000'000);
    s.finish();
  }

  if(root.has("nd"))
  {
    auto s = root.sub("nd");
    auto& c = cfg.nd;
    c.n = static_cast<int>(s.count("n", 3, 3, 12));
    c.phi = expr_field(s, "phi", c.phi);
    c.R_phi = s.number("R_phi", c.R_phi, 1e-9, 1e9);
    c.u = expr_field(s, "u", c.u);
    c.a = s.opt_number("a", 1e-300, inf);
    c.a_rel = s.number("a_rel", c.a_rel, 1e-9, 0.99);
    c.psi_count = s.count("psi_count", c.psi_count, 0, 100000);
    c.seed = s.count("seed", c.seed, 0, std::numeric_limits<std::size_t>::max());
    if(auto r = s.range("psi_range"))
    {
      if(!(r->first >= 1.0))
        throw ConfigError("nd.psi_range", "test functions must live outside supp phi (lo >= 1)");
      c.psi_range = *r;
    }
    s.finish();
  }

  if(root.has("certify"))
  {
    auto s = root.sub("certify");
    auto& c = cfg.certify;
    c.cutoffs = s.range("cutoffs");
    c.windows = s.count("windows", c.windows, 5, 64);
    c.ratio = s.number("ratio", c.ratio, 1e-3, 0.9);
    c.nodes = s.count("nodes", c.nodes, 64, 1'000'000);
    c.mesh = s.count("mesh", c.mesh, 16, 1'000'000);
    c.lambda0 = s.boolean("lambda0", c.lambda0);
    c.lambda0_cutoffs = s.range("lambda0_cutoffs");
    c.residual_tol = s.number("residual_tol", c.residual_tol, 1e-15, 1.0);
    c.xis = s.numbers("xis", c.xis, 0.0, 1e3);
    s.finish();
  }

  if(root.has("output"))
  {
    auto s = root.sub("output");
    cfg.output.dir = s.string("dir", cfg.output.dir);
    cfg.output.report = s.string("report", cfg.output.report);
    cfg.output.csv = s.boolean("csv", cfg.output.csv);
    s.finish();
    if(cfg.output.report.empty() || cfg.output.report.find('/') != std::string::npos)
      throw ConfigError("output.report", "must be a plain file name");
  }
  root.finish();
  return cfg;
}

void apply_override(Json& doc, std::string_view assignment)
{
  const auto eq = assignment.find('=');
  if(eq == std::string_view::npos || eq == 0)
    throw ConfigError(std::string(assignment), "override must look like key.path=value");
  const std::string path(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  Json value = Json::parse(text, nullptr, false);
  if(value.is_discarded())
    value = text;

  Json* node = &doc;
  std::size_t start = 0;
  while(true)
  {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if(part.empty())
      throw ConfigError(path, "empty key in override path");
    if(!node->is_object())
      throw ConfigError(path, "override descends into a non-object");
    if(dot == std::string::npos)
    {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if(node->is_null())
      *node = Json::object();
    start = dot + 1;
  }
}

namespace
{

// gradings towards every non-regular end
Grading auto_grading(const Interval& iv)
{
  const bool gl = iv.left != EndpointKind::regular, gr = iv.right != EndpointKind::regular;
  return gl && gr ? Grading::log_both : gl ? Grading::log_left : gr ? Grading::log_right : Grading::uniform;
}

std::pair<double, double> default_cutoffs(const Interval& iv)
{
  const double c = iv.reference_point();
  auto end = [&](Side s) {
    const double e = iv.endpoint(s);
    if(iv.kind(s) == EndpointKind::regular)
      return e;
    if(std::isfinite(e))
      return e + (c - e) * 1e-8;
    const double span = std::max(1.0, std::fabs(c)) * 1e8;
    return s == Side::left ? c - span : c + span;
  };
  return {end(Side::left), end(Side::right)};
}

class Artifacts
{
public:
  explicit Artifacts(const JobConfig& cfg) : dir_(cfg.output.dir), csv_(cfg.output.csv)
  {
    std::filesystem::create_directories(dir_);
  }

  void csv(const std::string& name, const GridFunction& f, const std::string& x = "t")
  {
    if(!csv_)
      return;
    write_csv(dir_ / name, f, x);
    names_.push_back(name);
  }

  void csv(const std::string& name, const std::vector<CsvColumn>& cols)
  {
    if(!csv_)
      return;
    write_csv(dir_ / name, cols);
    names_.push_back(name);
  }

  std::vector<std::string> names() const
  {
    auto n = names_;
    std::sort(n.begin(), n.end());
    return n;
  }

  const std::filesystem::path& dir() const { return dir_; }

private:
  std::filesystem::path dir_;
  bool csv_;
  std::vector<std::string> names_;
};

CertifyOptions certify_options(const CertifyConfig& c)
{
  CertifyOptions o;
  o.classify.windows = c.windows;
  o.classify.ratio = c.ratio;
  o.xis = c.xis;
  o.residual_tol = c.residual_tol;
  o.lambda0 = c.lambda0;
  o.lambda0_cutoffs = c.lambda0_cutoffs;
  o.lambda0_mesh = c.mesh;
  return o;
}

GridFunction sample_pair(const std::vector<double>& x, const std::string& f, const std::string& df)
{
  const auto fn = expr_fn(f), dfn = expr_fn(df);
  return GridFunction::sample(x, fn, &dfn);
}

struct Outcome
{
  std::string verdict;
  Json body = Json::object();
};

std::pair<double, double> checked_cutoffs(const JobConfig& cfg, const Interval& iv)
{
  const auto cut = cfg.certify.cutoffs.value_or(default_cutoffs(iv));
  const bool lo_ok = cut.first > iv.a || (cut.first == iv.a && iv.left == EndpointKind::regular);
  const bool hi_ok = cut.second < iv.b || (cut.second == iv.b && iv.right == EndpointKind::regular);
  if(!lo_ok || !hi_ok)
    throw ConfigError("certify.cutoffs", "must lie inside the interval");
  return cut;
}

Outcome certify_outcome(const SLProblem& prob, const WeightFamily1D& fam, const JobConfig& cfg, Artifacts& art)
{
  spdlog::info("certifying {} family on ({}, {})", to_string(fam.provenance), prob.iv.a, prob.iv.b);
  const auto rep = certify_optimality_1d(prob, fam, certify_options(cfg.certify));
  spdlog::info("verdict {}", to_string(rep.verdict));
  art.csv("f_w.csv", fam.f_w);
  std::vector<double> wv(fam.f_w.size());
  for(std::size_t i = 0; i < wv.size(); ++i)
    wv[i] = fam.w(fam.f_w.nodes()[i]);
  art.csv("w.csv", {{"t", fam.f_w.nodes()}, {"value", wv}});

  Outcome out;
  out.verdict = std::string(report_verdict(rep.verdict));
  out.body["family"] = to_json(fam);
  out.body["certification"] = to_json(rep);
  return out;
}

Outcome run_verify(const JobConfig& cfg, Artifacts& art)
{
  const auto& fc = cfg.family;
  const std::string kind = cfg.mode == "ep-family" ? "ep" : fc.kind;
  if(kind == "a-family")
  {
    if(cfg.problem.interval)
      throw ConfigError("problem.interval", "the a-family lives on (0, 2/a); leave the interval out");
    const double a = fc.a;
    const SLProblem prob{expr_fn(cfg.problem.p), expr_fn(cfg.problem.q),
                         Interval(0.0, 2.0 / a, EndpointKind::singular, EndpointKind::singular)};
    return certify_outcome(prob, a_family(a, cfg.certify.nodes), cfg, art);
  }

  Interval iv = cfg.problem.interval.value_or(Interval(0.0, inf, EndpointKind::singular, EndpointKind::infinite));
  if(!cfg.problem.interval && kind != "classical")
    throw ConfigError("problem.interval", "required for family kind '" + kind + "'");
  const SLProblem prob{expr_fn(cfg.problem.p), expr_fn(cfg.problem.q), iv};
  const auto cut = checked_cutoffs(cfg, iv);
  const auto x = make_grid(iv, cut, cfg.certify.nodes, auto_grading(iv));

  WeightFamily1D fam;
  if(kind == "classical")
    fam = classical_family(iv, cut, cfg.certify.nodes);
  else if(kind == "expr")
  {
    fam.w = expr_fn(fc.w);
    fam.f_w = sample_pair(x, fc.f, fc.df);
    fam.f_closed = std::pair{expr_fn(fc.f), expr_fn(fc.df)};
    for(double t : x)
      fam.w_positive = fam.w_positive && fam.w(t) > 0.0;
  }
  else
  {
    if(fc.v1.empty())
      throw ConfigError("family.v1", "the EP construction needs v1 and dv1");
    const GridFunction v1 = sample_pair(x, fc.v1, fc.dv1);
    const GridFunction v2 = fc.v2.empty() ? reduction_of_order(prob, v1, fc.anchor.value_or(iv.reference_point()))
                                          : sample_pair(x, fc.v2, fc.dv2);
    const EPFamily ep{make_solution_pair(prob, v1, v2), fc.c1, fc.c2, fc.c3, fc.k};
    fam = ep_weight(ep_solution(prob, ep), fc.k, prob.p);
    fam.provenance = Provenance::ep;
  }
  return certify_outcome(prob, fam, cfg, art);
}

Outcome run_a_family(const JobConfig& cfg, Artifacts& art)
{
  if(cfg.problem.interval)
    throw ConfigError("problem.interval", "the a-family lives on (0, 2/a); leave the interval out");
  const double a = cfg.family.a, M = cfg.family.M;
  if(!(M > a))
    throw ConfigError("family.M", "must exceed a");
  const SLProblem prob{1.0, 0.0, Interval(0.0, 2.0 / a, EndpointKind::singular, EndpointKind::singular)};
  Outcome out = certify_outcome(prob, a_family(a, cfg.certify.nodes), cfg, art);

  Json checks = Json::array();
  bool ok = true;
  double prev = inf;
  auto xis = cfg.family.xis;
  std::sort(xis.begin(), xis.end(), std::greater<>());
  for(double xi : xis)
  {
    const UXi u = u_xi(a, M, xi, cfg.certify.nodes);
    const bool pass = u.residual <= 1e-7 && u.bc_left <= 1e-9 && u.bc_right <= 1e-9 && u.excess <= 1e-12 &&
                      u.dist_to_fw < prev;
    ok = ok && pass;
    prev = u.dist_to_fw;
    checks.push_back({{"xi", xi},
                      {"residual", u.residual},
                      {"bc_left", u.bc_left},
                      {"bc_right", u.bc_right},
                      {"excess", u.excess},
                      {"dist_to_fw", u.dist_to_fw},
                      {"pass", pass}});
    char name[64];
    std::snprintf(name, sizeof name, "u_xi_%g.csv", xi);
    art.csv(name, u.u);
  }
  out.body["u_xi"] = checks;
  if(!ok && out.verdict == "optimal")
    out.verdict = "fail";
  return out;
}

Outcome run_series(const JobConfig& cfg, Artifacts& art)
{
  const auto& sc = cfg.series;
  const double L = sc.m + 1.0;
  const Interval iv = cfg.problem.interval.value_or(Interval(0.0, L, EndpointKind::regular, EndpointKind::regular));
  if(iv.a != 0.0 || iv.b != L)
    throw ConfigError("problem.interval", "the series lives on (0, m + 1)");
  const SLProblem prob{expr_fn(cfg.problem.p), expr_fn(cfg.problem.q), iv};

  SeriesOptions o;
  o.alpha = sc.alpha;
  o.anchors = sc.anchors == "fixed" ? AnchorPolicy::fixed : AnchorPolicy::shrinking;
  o.nodes = sc.nodes;
  if(!sc.v1.empty())
    o.v1_initial = sample_pair(make_grid(iv, {L * o.rel_cut, L}, sc.nodes, Grading::log_left), sc.v1, sc.dv1);
  spdlog::info("weight series on (0, {}) to depth {}", L, sc.depth);
  const SeriesResult r = weight_series(prob, sc.m, sc.coeffs, sc.depth, o);

  bool positive = true, increasing = true;
  for(const auto& term : r.terms)
    for(double v : term.f_w.nodes())
      positive = positive && term.w(v) > 0.0;
  for(std::size_t k = 1; k < r.partial_sums.size(); ++k)
  {
    const auto& lo = r.partial_sums[k - 1];
    const auto& hi = r.partial_sums[k];
    for(std::size_t i = 0; i < hi.size(); ++i)
      increasing = increasing && hi.values()[i] > lo(hi.nodes()[i]);
  }

  Json s;
  s["L"] = L;
  s["depth"] = sc.depth;
  s["terms_positive"] = positive;
  s["partial_sums_increasing"] = increasing;
  s["windows"] = r.windows;
  s["anchors"] = r.anchors;
  s["alphas"] = r.alphas;
  s["betas"] = r.betas;
  s["terms"] = Json::array();
  for(const auto& t : r.terms)
    s["terms"].push_back(to_json(t));

  bool closed_ok = true;
  if(sc.closed_form)
  {
    const auto [c1, c2] = *sc.closed_form;
    const auto closed = series_weight_closed_form(L, c1, c2, sc.depth);
    const auto& ps = r.partial_sums.back();
    double worst = 0.0;
    for(std::size_t i = 0; i < ps.size(); ++i)
    {
      const double t = ps.nodes()[i];
      if(t > 0.999 * L)
        continue;
      worst = std::max(worst, std::fabs(ps.values()[i] - closed(t)) / closed(t));
    }
    closed_ok = worst <= sc.tol;
    s["closed_form"] = {{"c1", c1}, {"c2", c2}, {"max_rel_diff", worst}, {"tol", sc.tol}, {"pass", closed_ok}};
  }
  for(std::size_t k = 0; k < r.partial_sums.size(); ++k)
    art.csv("partial_sum_" + std::to_string(k + 1) + ".csv", r.partial_sums[k]);
  art.csv("y.csv", r.y);

  Outcome out;
  out.body["series"] = s;
  out.verdict = positive && increasing && closed_ok ? "pass" : "fail";
  return out;
}

RadialProblem radial_problem(const NdConfig& c)
{
  const auto phi_e = Expr::parse(c.phi);
  const auto u_e = Expr::parse(c.u);
  if(!phi_e.is_constant() && phi_e.variable() != 'r')
    throw ConfigError("nd.phi", "write phi in the radial variable r");
  if(!u_e.is_constant() && u_e.variable() != 'r')
    throw ConfigError("nd.u", "write u in the radial variable r");
  return make_radial_problem(c.n, CoefficientFn(phi_e), c.R_phi, CoefficientFn(u_e));
}

double improved_a(const NdConfig& c, const RadialProblem& rp)
{
  if(c.a)
  {
    if(!(*c.a * rp.sup_t <= 0.99))
      throw ConfigError("nd.a", "need a * sup(G/u) <= 0.99, sup(G/u) = " + std::to_string(rp.sup_t));
    return *c.a;
  }
  return c.a_rel / rp.sup_t;
}

Json radial_json(const RadialProblem& rp)
{
  return {{"n", rp.n},
          {"R_phi", rp.R_phi},
          {"C", rp.C},
          {"mass", rp.mass},
          {"sup_t", rp.sup_t},
          {"poisson_residual", rp.poisson_residual},
          {"u_residual", rp.u_residual}};
}

void weight_csv(Artifacts& art, const std::string& tag, const NDWeight& w)
{
  art.csv("W_" + tag + ".csv", w.W_grid, "r");
  art.csv("ground_state_" + tag + ".csv", w.ground_state, "r");
}

Outcome run_nd(const JobConfig& cfg, Artifacts& art)
{
  const RadialProblem rp = radial_problem(cfg.nd);
  spdlog::info("radial problem n={} C={} sup G/u={}", rp.n, rp.C, rp.sup_t);
  const double a = improved_a(cfg.nd, rp);
  const NDWeight cl = classical_weight_nd(rp), im = improved_weight_nd(rp, a);
  ClassifyOptions co;
  co.windows = cfg.certify.windows;
  co.ratio = cfg.certify.ratio;
  const auto ncl = null_criticality_integral_nd(rp, cl, co);
  const auto nim = null_criticality_integral_nd(rp, im, co);

  // off the support the improved weight must dominate the classical one
  bool dominates = true;
  for(double r : cl.W_grid.nodes())
    if(rp.off_support(r))
      dominates = dominates && im.W(r) > cl.W(r);

  Json nd = radial_json(rp);
  nd["a"] = a;
  nd["weights"] = {{"classical", to_json(cl)}, {"improved", to_json(im)}};
  nd["null_criticality"] = {
    {"classical", {{"infinity", to_json(ncl.first)}, {"origin", to_json(ncl.second)}}},
    {"improved", {{"infinity", to_json(nim.first)}, {"origin", to_json(nim.second)}}}};
  nd["improved_dominates"] = dominates;

  art.csv("green.csv", rp.G, "r");
  weight_csv(art, "classical", cl);
  weight_csv(art, "improved", im);

  Outcome out;
  out.body["nd"] = nd;
  const bool hyp = cl.hypothesis_ok && im.hypothesis_ok && dominates;
  const bool div = ncl.first.kind == VerdictKind::divergent && nim.first.kind == VerdictKind::divergent;
  const bool conv = ncl.first.kind == VerdictKind::convergent || nim.first.kind == VerdictKind::convergent;
  out.verdict = !hyp || conv ? "fail" : div ? "pass" : "inconclusive";
  return out;
}

Outcome run_rellich(const JobConfig& cfg, Artifacts& art)
{
  const RadialProblem rp = radial_problem(cfg.nd);
  const double a = improved_a(cfg.nd, rp);
  const auto [lo, hi] = cfg.nd.psi_range;
  const auto psis = random_annular_bumps(lo * rp.R_phi, hi * rp.R_phi, cfg.nd.psi_count, cfg.nd.seed);
  spdlog::info("Rellich check with {} test functions, seed {}", psis.size(), cfg.nd.seed);
  const auto res = rellich_check(rp, a, psis);

  Json nd = radial_json(rp);
  nd["a"] = a;
  nd["seed"] = cfg.nd.seed;
  nd["rellich"] = Json::array();
  bool ok = true;
  std::vector<double> r1, r2, amp, lhs, rhs, margin;
  for(std::size_t i = 0; i < res.size(); ++i)
  {
    Json j = to_json(res[i]);
    j["r1"] = psis[i].r1;
    j["r2"] = psis[i].r2;
    j["amplitude"] = psis[i].amplitude;
    nd["rellich"].push_back(j);
    ok = ok && res[i].pass;
    r1.push_back(psis[i].r1);
    r2.push_back(psis[i].r2);
    amp.push_back(psis[i].amplitude);
    lhs.push_back(res[i].lhs);
    rhs.push_back(res[i].rhs);
    margin.push_back(res[i].margin);
  }
  if(!res.empty())
    art.csv("rellich.csv", {{"r1", r1}, {"r2", r2}, {"amplitude", amp}, {"lhs", lhs}, {"rhs", rhs}, {"margin", margin}});

  Outcome out;
  out.body["nd"] = nd;
  out.verdict = ok ? "pass" : "fail";
  return out;
}

} // namespace

JobResult run_job(const JobConfig& cfg)
{
  Artifacts art(cfg);
  Outcome out;
  if(cfg.mode == "verify-1d" || cfg.mode == "ep-family")
    out = run_verify(cfg, art);
  else if(cfg.mode == "a-family")
    out = run_a_family(cfg, art);
  else if(cfg.mode == "series")
    out = run_series(cfg, art);
  else if(cfg.mode == "nd-example")
    out = run_nd(cfg, art);
  else
    out = run_rellich(cfg, art);

  JobResult res;
  res.exit_status = exit_status(out.verdict);
  res.artifacts = art.names();
  res.report = std::move(out.body);
  res.report["schema"] = report_schema;
  res.report["mode"] = cfg.mode;
  res.report["verdict"] = out.verdict;
  res.report["exit_status"] = res.exit_status;
  res.report["config"] = cfg.source;
  res.report["artifacts"] = res.artifacts;
  validate_report(res.report);

  const auto path = art.dir() / cfg.output.report;
  std::ofstream f(path, std::ios::binary);
  if(!f)
    throw ModuleError("cli", "cannot open '" + path.string() + "' for writing");
  f << dump_json(res.report);
  if(!f)
    throw ModuleError("cli", "write to '" + path.string() + "' failed");
  spdlog::info("wrote {} ({} artifacts)", path.string(), res.artifacts.size());
  return res;
}

} // namespace hardy
