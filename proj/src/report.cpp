#include "hardy/report.hpp"

#include "hardy/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace hardy
{

namespace
{

void fail(const std::string& msg) { throw ModuleError("cli", msg); }

std::string number(double x)
{
  if(!std::isfinite(x))
    return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void dump(const Json& j, std::string& out, int indent)
{
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch(j.type())
  {
  case Json::value_t::object:
  {
    if(j.empty())
    {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for(auto it = j.begin(); it != j.end(); ++it)
    {
      if(!first)
        out += ",\n";
      first = false;
      out += inner + Json(it.key()).dump() + ": ";
      dump(it.value(), out, indent + 1);
    }
    out += "\n" + pad + "}";
    return;
  }
  case Json::value_t::array:
  {
    if(j.empty())
    {
      out += "[]";
      return;
    }
    out += "[\n";
    for(std::size_t i = 0; i < j.size(); ++i)
    {
      if(i)
        out += ",\n";
      out += inner;
      dump(j[i], out, indent + 1);
    }
    out += "\n" + pad + "]";
    return;
  }
  case Json::value_t::number_float: out += number(j.get<double>()); return;
  default: out += j.dump(); return;
  }
}

Json pairs(const std::vector<std::pair<double, double>>& v)
{
  Json a = Json::array();
  for(auto [x, y] : v)
    a.push_back({x, y});
  return a;
}

const Json& need(const Json& j, const std::string& path, const char* key, Json::value_t type)
{
  if(!j.is_object() || !j.contains(key))
    fail("report: missing key '" + path + key + "'");
  const Json& v = j.at(key);
  bool ok = v.type() == type;
  if(type == Json::value_t::number_float)
    ok = v.is_number() || v.is_null();
  else if(type == Json::value_t::number_integer)
    ok = v.is_number_integer();
  if(!ok)
    fail("report: key '" + path + key + "' has the wrong type");
  return v;
}

void validate_verdict(const Json& v, const std::string& path)
{
  need(v, path, "kind", Json::value_t::string);
  need(v, path, "model", Json::value_t::string);
  need(v, path, "exponent", Json::value_t::number_float);
  need(v, path, "fit_residual", Json::value_t::number_float);
  need(v, path, "endpoint", Json::value_t::string);
  for(const auto& w : need(v, path, "windows", Json::value_t::array))
    if(!w.is_array() || w.size() != 2)
      fail("report: '" + path + "windows' entries must be pairs");
  const auto k = v.at("kind").get<std::string>();
  if(k != "divergent" && k != "convergent" && k != "inconclusive")
    fail("report: '" + path + "kind' has an unknown value '" + k + "'");
}

} // namespace

std::string dump_json(const Json& j)
{
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

Json to_json(const DivergenceVerdict& v)
{
  return {{"kind", std::string(to_string(v.kind))},
          {"endpoint", std::string(to_string(v.endpoint))},
          {"windows", pairs(v.windows)},
          {"model", std::string(to_string(v.model))},
          {"exponent", v.exponent},
          {"fit_residual", v.fit_residual}};
}

Json to_json(const Lambda0& l)
{
  return {{"estimate", l.estimate}, {"bracket", {l.lower, l.upper}}, {"mesh", l.mesh}};
}

Json to_json(const OscillationRecord& r)
{
  Json counts = Json::array();
  for(auto [e, n] : r.counts)
    counts.push_back({e, n});
  return {{"xi", r.xi}, {"endpoint", std::string(to_string(r.endpoint))}, {"counts", counts}, {"growing", r.growing}};
}

Json to_json(const OptimalityReport& r)
{
  Json osc = Json::array();
  for(const auto& o : r.oscillation)
    osc.push_back(to_json(o));
  Json j{{"integrals",
          {{"ground_left", to_json(r.ground_left)},
           {"ground_right", to_json(r.ground_right)},
           {"weight_left", to_json(r.weight_left)},
           {"weight_right", to_json(r.weight_right)}}},
         {"oscillation", osc},
         {"residual", r.residual},
         {"verdict", std::string(to_string(r.verdict))},
         {"assumptions", r.assumptions}};
  j["lambda0"] = r.lambda0 ? to_json(*r.lambda0) : Json(nullptr);
  return j;
}

Json to_json(const WeightFamily1D& fam)
{
  return {{"provenance", std::string(to_string(fam.provenance))},
          {"depth", fam.depth},
          {"w", fam.w.label()},
          {"w_positive", fam.w_positive},
          {"closed_form", fam.f_closed.has_value()},
          {"window", {fam.f_w.nodes().front(), fam.f_w.nodes().back()}}};
}

Json to_json(const NDWeight& w)
{
  return {{"kind", std::string(to_string(w.kind))},
          {"a", w.a},
          {"min_W", w.min_W},
          {"hypothesis_ok", w.hypothesis_ok},
          {"flags", w.flags}};
}

Json to_json(const RellichResult& r)
{
  return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}, {"tol", r.tol}, {"pass", r.pass}};
}

std::string_view report_verdict(Verdict v) { return to_string(v); }

int exit_status(std::string_view verdict)
{
  if(verdict == "optimal" || verdict == "pass")
    return 0;
  if(verdict == "not-optimal" || verdict == "fail" || verdict == "not-critical" ||
     verdict == "critical-but-positive-critical-suspected")
    return 2;
  if(verdict == "inconclusive")
    return 3;
  return 1;
}

void validate_report(const Json& r)
{
  if(!r.is_object())
    fail("report: top level must be an object");
  if(need(r, "", "schema", Json::value_t::string).get<std::string>() != report_schema)
    fail("report: unsupported schema '" + r.at("schema").get<std::string>() + "'");
  const auto mode = need(r, "", "mode", Json::value_t::string).get<std::string>();
  const auto verdict = need(r, "", "verdict", Json::value_t::string).get<std::string>();
  if(exit_status(verdict) == 1)
    fail("report: unknown verdict '" + verdict + "'");
  const Json& es = need(r, "", "exit_status", Json::value_t::number_integer);
  if(es.get<int>() != exit_status(verdict))
    fail("report: exit_status does not match the verdict");
  need(r, "", "config", Json::value_t::object);

  if(r.contains("certification"))
  {
    const Json& c = need(r, "", "certification", Json::value_t::object);
    const Json& ints = need(c, "certification.", "integrals", Json::value_t::object);
    for(const char* k : {"ground_left", "ground_right", "weight_left", "weight_right"})
      validate_verdict(need(ints, "certification.integrals.", k, Json::value_t::object),
                       std::string("certification.integrals.") + k + ".");
    need(c, "certification.", "residual", Json::value_t::number_float);
    need(c, "certification.", "verdict", Json::value_t::string);
    need(c, "certification.", "assumptions", Json::value_t::array);
    need(c, "certification.", "oscillation", Json::value_t::array);
    if(!c.contains("lambda0"))
      fail("report: missing key 'certification.lambda0'");
    if(!c.at("lambda0").is_null())
    {
      need(c.at("lambda0"), "certification.lambda0.", "estimate", Json::value_t::number_float);
      need(c.at("lambda0"), "certification.lambda0.", "bracket", Json::value_t::array);
    }
  }
  if(mode == "verify-1d" || mode == "ep-family" || mode == "a-family")
  {
    if(!r.contains("certification"))
      fail("report: mode '" + mode + "' requires 'certification'");
    need(r, "", "family", Json::value_t::object);
  }
  if(mode == "nd-example" || mode == "rellich")
    need(r, "", "nd", Json::value_t::object);
  if(mode == "series")
    need(r, "", "series", Json::value_t::object);
  need(r, "", "artifacts", Json::value_t::array);
}

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns)
{
  if(columns.empty())
    fail("csv: no columns");
  const std::size_t n = columns.front().values.size();
  for(const auto& c : columns)
    if(c.values.size() != n)
      fail("csv: column '" + c.name + "' has a different length");
  std::ofstream out(path);
  if(!out)
    fail("cannot open '" + path.string() + "' for writing");
  for(std::size_t k = 0; k < columns.size(); ++k)
    out << (k ? "," : "") << columns[k].name;
  out << "\n";
  for(std::size_t i = 0; i < n; ++i)
  {
    for(std::size_t k = 0; k < columns.size(); ++k)
      out << (k ? "," : "") << number(columns[k].values[i]);
    out << "\n";
  }
  if(!out)
    fail("write to '" + path.string() + "' failed");
}

void write_csv(const std::filesystem::path& path, const GridFunction& f, const std::string& x_name)
{
  std::vector<CsvColumn> cols{{x_name, f.nodes()}, {"value", f.values()}};
  if(!f.derivatives().empty())
    cols.push_back({"derivative", f.derivatives()});
  write_csv(path, cols);
}

} // namespace hardy
