#include "app.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "wavelink/error.hpp"

namespace wavelink::cli {

namespace {

enum Group : unsigned {
  kInput = 1u << 0,
  kModwt = 1u << 1,
  kFilter = 1u << 2,
  kConfidence = 1u << 3,
  kRolling = 1u << 4,
  kLag = 1u << 5,
  kCoherence = 1u << 6,
  kEvent = 1u << 7,
  kOctaves = 1u << 8,
  kCluster = 1u << 9,
  kSynth = 1u << 10,
  kReference = 1u << 11,
  kBoundary = 1u << 12,
};

struct CommandSpec {
  const char* name;
  const char* help;
  unsigned groups;
};

constexpr CommandSpec kCommands[] = {
    {"stats", "Descriptive statistics per series", kInput},
    {"decompose", "MODWT coefficients and wavelet variance", kInput | kModwt | kFilter | kConfidence},
    {"wcor", "Wavelet correlation against a reference series",
     kInput | kModwt | kFilter | kConfidence | kReference},
    {"wccor", "Wavelet cross-correlation by lag", kInput | kModwt | kFilter | kConfidence | kLag | kReference},
    {"wmc", "Wavelet multiple correlation", kInput | kModwt | kFilter | kConfidence},
    {"wmcc", "Wavelet multiple cross-correlation", kInput | kModwt | kFilter | kConfidence | kLag},
    {"leaders", "Leading series per horizon", kInput | kModwt | kFilter | kConfidence},
    {"coherence", "Morlet wavelet coherence with red-noise significance",
     kInput | kConfidence | kCoherence | kReference},
    {"rolling-cor", "Rolling-window wavelet correlation", kInput | kModwt | kFilter | kRolling | kReference},
    {"contagion-test", "Before/after test of rolling wavelet correlation",
     kInput | kModwt | kFilter | kRolling | kEvent | kReference},
    {"logscale", "Logscale diagram", kInput | kFilter | kConfidence | kOctaves},
    {"hurst", "Hurst exponent and scaling parameters", kInput | kFilter | kConfidence | kOctaves},
    {"rolling-hurst", "Rolling-window Hurst exponent", kInput | kFilter | kRolling | kOctaves},
    {"connectivity", "Fractal connectivity matrix and clustering", kInput | kBoundary | kFilter | kOctaves | kCluster},
    {"synth-fgn", "Generate fractional Gaussian noise", kSynth},
};

void add_options(CLI::App& sub, RunConfig& c, unsigned groups) {
  if (groups & kInput) {
    sub.add_option("-i,--input", c.inputs, "CSV file(s) with a date column")->delimiter(',');
    sub.add_option("--columns", c.columns, "Series to keep, in order")->delimiter(',');
    sub.add_option("--layout", c.layout, "wide | long");
    sub.add_option("--date-column", c.date_column, "Name of the date column");
    sub.add_flag("--forward-fill", c.forward_fill, "Forward-fill gaps instead of intersecting dates");
    sub.add_option("--transform", c.transform, "none | returns | abs-returns | abs");
  }
  if (groups & kReference) sub.add_option("--reference", c.reference, "Reference series (default: first)");
  if (groups & kFilter) sub.add_option("--filter", c.filter, "Wavelet filter: la8 | haar");
  if (groups & (kModwt | kBoundary)) sub.add_option("--boundary", c.boundary, "brickwall | reflection | periodic");
  if (groups & kModwt) sub.add_option("--levels", c.levels, "Decomposition depth");
  if (groups & kConfidence) sub.add_option("--confidence", c.confidence, "Confidence level");
  if (groups & kRolling) {
    sub.add_option("--window", c.window, "Window length in observations");
    sub.add_option("--step", c.step, "Step between windows");
  }
  if (groups & kLag) sub.add_option("--max-lag", c.max_lag, "Largest lag in observations");
  if (groups & kCoherence) {
    sub.add_option("--surrogates", c.surrogates, "Monte Carlo surrogates (0 skips the test)");
    sub.add_option("--seed", c.seed, "Surrogate seed");
    sub.add_option("--s0", c.s0, "Smallest scale");
    sub.add_option("--dj", c.dj, "Scale spacing in octaves");
    sub.add_option("--n-scales", c.n_scales, "Number of scales (0: automatic)");
    sub.add_option("--threads", c.threads, "Worker threads (0: all cores)");
    sub.add_flag("--per-cell", c.per_cell, "Per-cell instead of per-scale thresholds");
    sub.add_option("--arrow-step", c.arrow_step, "Draw a phase arrow every k-th cell");
  }
  if (groups & kEvent) {
    sub.add_option("--event", c.event, "Event date (YYYY-MM-DD) or observation index");
    sub.add_option("--pre", c.pre, "Observations before the event");
    sub.add_option("--post", c.post, "Observations from the event on");
  }
  if (groups & kOctaves) {
    sub.add_option("--j1", c.j1, "First octave of the fit");
    sub.add_option("--j2", c.j2, "Last octave of the fit");
  }
  if (groups & kCluster) {
    sub.add_option("--tolerance", c.tolerance, "Convergence tolerance");
    sub.add_option("--clusters", c.clusters, "Number of clusters to cut");
  }
  if (groups & kSynth) {
    sub.add_option("--H,--hurst", c.hurst, "Hurst exponent");
    sub.add_option("--n", c.n, "Length");
    sub.add_option("--seed", c.seed, "Generator seed");
    sub.add_option("--start-date", c.start_date, "First date");
    sub.add_option("--name", c.name, "Column name");
  }
  sub.add_option("--events", c.events, "date,label file for chart annotations");
  sub.add_option("--out", c.out_dir, "Output directory (default: $WAVELINK_OUT_DIR or .)");
  sub.add_option("--tag", c.tag, "Output file tag (default: UTC timestamp)");
  sub.add_option("--config", "Flat key = value file; flags take precedence");
}

bool mentions(const std::vector<std::string>& args, const CLI::Option& opt) {
  for (const auto& name : opt.get_lnames()) {
    const std::string flag = "--" + name;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  for (const auto& name : opt.get_snames()) {
    const std::string flag = "-" + name;
    if (std::find(args.begin(), args.end(), flag) != args.end()) return true;
  }
  return false;
}

bool truthy(std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  require(v == "false" || v == "0" || v == "no" || v == "off", ErrorCode::Parse, "expected a boolean, got '" + v + "'");
  return false;
}

// Appends config-file settings the command line did not set.
void merge_config(CLI::App& app, std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;
  CLI::App* sub = nullptr;
  for (const auto& a : args)
    if ((sub = app.get_subcommand_no_throw(a)) != nullptr) break;
  if (sub == nullptr) return;
  for (const auto& [key, value] : read_config_file(path)) {
    require(key != "config", ErrorCode::Parse, "config files cannot include other config files");
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      bool known = false;
      for (const auto* other : app.get_subcommands({}))
        known = known || other->get_option_no_throw("--" + key) != nullptr;
      require(known, ErrorCode::Parse, "unknown config key '" + key + "'");
      continue;  // belongs to another command
    }
    if (mentions(args, *opt)) continue;
    if (opt->get_type_size() == 0) {
      if (truthy(value)) args.push_back("--" + key);
    } else {
      args.push_back("--" + key);
      args.push_back(value);
    }
  }
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return 3;
    case ErrorCode::Io: return 4;
    case ErrorCode::Parse: return 5;
    case ErrorCode::InsufficientData: return 6;
    case ErrorCode::Numerical: return 7;
    case ErrorCode::Unsupported: return 8;
  }
  return 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Wavelet analysis of co-movement and long memory in financial time series", "wavelink"};
  app.require_subcommand(1);
  std::map<const CLI::App*, std::string> names;
  for (const auto& spec : kCommands) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    add_options(*sub, config, spec.groups);
    names[sub] = spec.name;
  }
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    merge_config(app, args);
    std::vector<const char*> ptrs{argc > 0 ? argv[0] : "wavelink"};
    for (const auto& a : args) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    config.command = names.at(app.get_subcommands().front());
    if (config.tag.empty()) config.tag = timestamp_tag();
    validate(config);
    const Artifacts artifacts = execute(config);
    for (const auto& p : artifacts.commit(resolve_out_dir(config))) out << p.string() << '\n';
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // Subcommand help.
      for (auto* sub : app.get_subcommands()) out << sub->help();
      return 0;
    }
    err << "error code=usage msg=" << one_line(e.what()) << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error code=" << to_string(e.code()) << " msg=" << one_line(e.what()) << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error code=internal msg=" << one_line(e.what()) << '\n';
    return 70;
  }
}

}  // namespace wavelink::cli
