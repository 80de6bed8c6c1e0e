#include "config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "wavelink/error.hpp"
#include "wavelink/modwt.hpp"
#include "wavelink/panel.hpp"

namespace wavelink::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void check(bool ok, const std::string& message) { require(ok, ErrorCode::InvalidArgument, message); }

bool is_one_of(const std::string& v, std::initializer_list<const char*> options) {
  return std::any_of(options.begin(), options.end(), [&](const char* o) { return v == o; });
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open config file " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::Parse,
            path.string() + " line " + std::to_string(number) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    require(!key.empty(), ErrorCode::Parse, path.string() + " line " + std::to_string(number) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

void validate(const RunConfig& c) {
  const bool generator = c.command == "synth-fgn";
  check(generator || !c.inputs.empty(), c.command + " needs at least one --input file");
  check(!generator || c.inputs.empty(), "synth-fgn takes no input files");
  check(is_one_of(c.layout, {"wide", "long"}), "--layout must be wide or long");
  check(is_one_of(c.transform, {"none", "returns", "abs-returns", "abs"}),
        "--transform must be none, returns, abs-returns or abs");
  build_filter(c.filter);
  if (c.boundary) parse_boundary(*c.boundary);
  if (c.levels) check(*c.levels >= 1 && *c.levels <= 16, "--levels must be in 1..16");
  if (c.window) check(*c.window >= 1, "--window must be positive");
  if (c.step) check(*c.step >= 1, "--step must be positive");
  check(c.confidence > 0.0 && c.confidence < 1.0, "--confidence must lie in (0, 1)");
  check(c.max_lag >= 0, "--max-lag must be non-negative");
  check(c.surrogates >= 0 && c.surrogates <= 100000, "--surrogates must be in 0..100000");
  check(c.s0 > 0.0 && c.dj > 0.0, "--s0 and --dj must be positive");
  check(c.n_scales >= 0, "--n-scales must be non-negative");
  check(c.arrow_step >= 1, "--arrow-step must be at least 1");
  check(c.pre >= 2 && c.post >= 2, "--pre and --post must be at least 2");
  if (c.j1) check(*c.j1 >= 1, "--j1 must be at least 1");
  if (c.j2) check(*c.j2 >= 1, "--j2 must be at least 1");
  if (c.j1 && c.j2) check(*c.j2 > *c.j1, "--j2 must exceed --j1");
  check(c.tolerance > 0.0, "--tolerance must be positive");
  check(c.clusters >= 1, "--clusters must be at least 1");
  check(c.hurst > 0.0 && c.hurst < 1.0, "--H must lie in (0, 1)");
  check(c.n >= 64, "--n must be at least 64");
  parse_date(c.start_date);
  check(!c.name.empty() && c.name.find_first_of(",\"\n") == std::string::npos, "--name must be a plain identifier");
  check(c.command != "contagion-test" || !c.event.empty(), "contagion-test needs --event (date or index)");
  check(std::all_of(c.tag.begin(), c.tag.end(),
                    [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.'; }),
        "--tag may only contain letters, digits, '-', '_' and '.'");
  for (const auto& p : c.inputs)
    require(std::filesystem::is_regular_file(p), ErrorCode::Io, "input file not found: " + p);
  if (!c.events.empty())
    require(std::filesystem::is_regular_file(c.events), ErrorCode::Io, "events file not found: " + c.events);
}

std::filesystem::path resolve_out_dir(const RunConfig& c) {
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv("WAVELINK_OUT_DIR"); env && *env) return env;
  return std::filesystem::current_path();
}

}  // namespace wavelink::cli
