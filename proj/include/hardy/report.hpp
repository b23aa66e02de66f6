#ifndef HARDY_REPORT_HPP
#define HARDY_REPORT_HPP

#include "hardy/certify.hpp"
#include "hardy/grid.hpp"
#include "hardy/hardy1d.hpp"
#include "hardy/radial.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hardy
{

//! objects keep their keys sorted, which the serializer relies on
using Json = nlohmann::json;

inline constexpr std::string_view report_schema = "hardy-report/1";

//! 2-space indented JSON, sorted keys, floats with 17 significant digits, non-finite as null
std::string dump_json(const Json& j);

Json to_json(const DivergenceVerdict& v);
Json to_json(const Lambda0& l);
Json to_json(const OscillationRecord& r);
Json to_json(const OptimalityReport& r);
Json to_json(const WeightFamily1D& fam);
Json to_json(const NDWeight& w);
Json to_json(const RellichResult& r);

//! throws ModuleError("cli", ...) naming the offending key path
void validate_report(const Json& report);

//! 0 for optimal / pass, 2 for not-optimal / fail, 3 for inconclusive, 1 otherwise
int exit_status(std::string_view verdict);

//! verdict string written to reports for a 1D certification
std::string_view report_verdict(Verdict v);

struct CsvColumn
{
  std::string name;
  std::vector<double> values;
};

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns);

//! columns `x_name`, value, derivative (when present)
void write_csv(const std::filesystem::path& path, const GridFunction& f, const std::string& x_name = "t");

} // namespace hardy

#endif // HARDY_REPORT_HPP
