#include "hardy/error.hpp"
#include "hardy/job.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

void setup_logging()
{
  auto logger = spdlog::stderr_color_mt("hardy");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if(const char* env = std::getenv("HARDY_LOG"))
  {
    const std::string lvl(env);
    if(lvl == "error")
      spdlog::set_level(spdlog::level::err);
    else if(lvl == "warn")
      spdlog::set_level(spdlog::level::warn);
    else if(lvl == "info")
      spdlog::set_level(spdlog::level::info);
    else if(lvl == "debug")
      spdlog::set_level(spdlog::level::debug);
    else
      spdlog::warn("ignoring HARDY_LOG='{}' (expected error, warn, info or debug)", lvl);
  }
}

hardy::Json load(const std::string& path)
{
  std::ifstream in(path);
  if(!in)
    throw hardy::ConfigError("--config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try
  {
    return hardy::Json::parse(ss.str(), nullptr, true, true);
  }
  catch(const hardy::Json::parse_error& e)
  {
    throw hardy::ConfigError(path, e.what());
  }
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Numerical certification of optimal Hardy weights"};
  std::string mode, config, out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  app.add_option("mode", mode, "verify-1d | ep-family | a-family | series | nd-example | rellich")->required();
  app.add_option("--config", config, "JSON job file")->required();
  app.add_option("--out", out, "output directory (overrides output.dir)");
  app.add_option("--seed", seed, "seed for random test functions (overrides nd.seed)");
  app.add_option("--override", overrides, "key.path=value, applied after the file");
  CLI11_PARSE(app, argc, argv);

  setup_logging();
  try
  {
    hardy::Json doc = load(config);
    if(doc.contains("mode") && doc["mode"] != mode)
      throw hardy::ConfigError("mode", "config says '" + doc["mode"].dump() + "' but '" + mode + "' was requested");
    doc["mode"] = mode;
    for(const auto& o : overrides)
      hardy::apply_override(doc, o);
    if(!out.empty())
      doc["output"]["dir"] = out;
    if(seed)
      doc["nd"]["seed"] = *seed;
    const auto cfg = hardy::parse_config(doc);
    const auto res = hardy::run_job(cfg);
    std::cout << res.report.at("verdict").get<std::string>() << "\n";
    return res.exit_status;
  }
  catch(const hardy::Error& e)
  {
    std::cerr << "error [" << e.origin() << "]: " << e.what() << "\n";
  }
  catch(const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}
