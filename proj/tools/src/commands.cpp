#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <functional>
#include <limits>

#include <json.hpp>

#include "svg.hpp"
#include "wavelink/coherence.hpp"
#include "wavelink/connectivity.hpp"
#include "wavelink/contagion.hpp"
#include "wavelink/dependence.hpp"
#include "wavelink/error.hpp"
#include "wavelink/longmemory.hpp"
#include "wavelink/modwt.hpp"
#include "wavelink/panel.hpp"
#include "wavelink/stats.hpp"

namespace wavelink::cli {

namespace {

using json = nlohmann::ordered_json;
using Events = std::vector<std::pair<Date, std::string>>;

struct Context {
  const RunConfig& cfg;
  Artifacts& out;
  Events events;
};

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

void add_json(Context& ctx, json body) {
  json doc;
  doc["command"] = ctx.cfg.command;
  doc.update(body);
  ctx.out.add("json", doc.dump(2) + "\n");
}

Events load_events(const std::string& path) {
  Events events;
  if (path.empty()) return events;
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open events file " + path);
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const std::string date = line.substr(0, comma);
    const std::string label = comma == std::string::npos ? std::string() : line.substr(comma + 1);
    try {
      events.emplace_back(parse_date(date), label);
    } catch (const Error&) {
      require(number == 1, ErrorCode::Parse, "events file line " + std::to_string(number) + ": bad date '" + date + "'");
    }
  }
  return events;
}

Panel load_input(const RunConfig& c) {
  CsvFormat format;
  format.layout = c.layout == "long" ? CsvLayout::Long : CsvLayout::Wide;
  format.date_column = c.date_column;
  if (format.layout == CsvLayout::Wide) format.value_columns = c.columns;
  format.missing = c.forward_fill ? MissingPolicy::ForwardFill : MissingPolicy::Intersect;
  std::vector<std::filesystem::path> paths(c.inputs.begin(), c.inputs.end());
  Panel panel = load_panels(paths, format);
  if (!c.columns.empty()) panel = select_series(panel, c.columns);
  if (c.transform == "returns") panel = log_returns(panel);
  else if (c.transform == "abs-returns") panel = absolute_values(log_returns(panel));
  else if (c.transform == "abs") panel = absolute_values(panel);
  return panel;
}

void require_series(const Panel& p, std::size_t at_least, const std::string& command) {
  require(p.n_series() >= at_least, ErrorCode::InvalidArgument,
          command + " needs at least " + std::to_string(at_least) + " series, got " + std::to_string(p.n_series()));
}

std::vector<Decomposition> decompose_all(const Panel& p, int levels, const std::string& filter, BoundaryMode mode) {
  const auto f = build_filter(filter);
  std::vector<Decomposition> out;
  for (std::size_t i = 0; i < p.n_series(); ++i) out.push_back(modwt(p.series(i), levels, f, mode));
  return out;
}

std::vector<svg::Tick> date_ticks(const std::vector<Date>& dates, std::size_t count = 6) {
  return svg::index_ticks(dates.size(), count, [&](std::size_t i) { return format_date(dates[i]); });
}

std::vector<svg::Marker> event_markers(const Events& events, const std::vector<Date>& dates) {
  std::vector<svg::Marker> out;
  for (const auto& [date, label] : events) {
    const auto it = std::lower_bound(dates.begin(), dates.end(), date);
    if (it == dates.end()) continue;
    out.push_back({static_cast<double>(it - dates.begin()), label});
  }
  return out;
}

std::vector<svg::Tick> level_ticks(int levels) {
  std::vector<svg::Tick> t;
  for (int j = 1; j <= levels; ++j) t.push_back({static_cast<double>(j), horizon_label(j)});
  return t;
}

json base_config(const RunConfig& c) {
  json j;
  j["inputs"] = c.inputs;
  j["transform"] = c.transform;
  return j;
}

std::size_t reference_index(const Panel& p, const RunConfig& c) {
  return c.reference.empty() ? 0 : p.index_of(c.reference);
}

std::vector<double> to_index_axis(std::size_t n) {
  std::vector<double> x(n);
  std::iota(x.begin(), x.end(), 0.0);
  return x;
}

// ---------------------------------------------------------------- stats

void cmd_stats(Context& ctx) {
  const Panel p = load_input(ctx.cfg);
  const auto stats = descriptive_stats(p);
  CsvTable csv({"series", "count", "mean", "median", "min", "max", "std_dev", "skewness", "excess_kurtosis",
                "jarque_bera"});
  json rows = json::array();
  for (const auto& s : stats) {
    csv.row({s.name, num(s.count), num(s.mean), num(s.median), num(s.min), num(s.max), num(s.std_dev),
             format_optional(s.skewness), format_optional(s.excess_kurtosis), format_optional(s.jarque_bera)});
    json r;
    r["series"] = s.name;
    r["count"] = s.count;
    r["mean"] = s.mean;
    r["median"] = s.median;
    r["min"] = s.min;
    r["max"] = s.max;
    r["std_dev"] = s.std_dev;
    r["skewness"] = s.skewness ? json(*s.skewness) : json(nullptr);
    r["excess_kurtosis"] = s.excess_kurtosis ? json(*s.excess_kurtosis) : json(nullptr);
    r["jarque_bera"] = s.jarque_bera ? json(*s.jarque_bera) : json(nullptr);
    rows.push_back(r);
  }
  ctx.out.add("csv", csv.str());
  add_json(ctx, {{"config", base_config(ctx.cfg)}, {"first_date", format_date(p.dates.front())},
                 {"last_date", format_date(p.dates.back())}, {"series", rows}});
  svg::LineChart chart{.title = "Input series", .x_label = "date", .y_label = "value"};
  for (std::size_t i = 0; i < p.n_series(); ++i)
    chart.lines.push_back({p.names[i], to_index_axis(p.n_obs()), p.values[i]});
  chart.x_ticks = date_ticks(p.dates);
  chart.markers = event_markers(ctx.events, p.dates);
  ctx.out.add("svg", svg::render(chart, ctx.out.tag()));
}

// ------------------------------------------------------------ decompose

void cmd_decompose(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  const int levels = c.levels.value_or(6);
  const auto mode = parse_boundary(c.boundary.value_or("brickwall"));
  const auto decs = decompose_all(p, levels, c.filter, mode);
  CsvTable csv({"series", "level", "index", "coefficient", "is_boundary"});
  json per_series = json::array();
  svg::IntervalChart chart{.title = "Wavelet variance by horizon", .x_label = "horizon", .y_label = "variance"};
  chart.x_ticks = level_ticks(levels);
  for (std::size_t s = 0; s < decs.size(); ++s) {
    const auto& d = decs[s];
    for (int j = 1; j <= levels; ++j) {
      const auto w = d.detail(j);
      const auto m = d.mask(j);
      const std::string level = "d" + std::to_string(j);
      for (std::size_t k = 0; k < w.size(); ++k) csv.row({p.names[s], level, num(k), num(w[k]), m[k] ? "0" : "1"});
    }
    const std::string smooth = "s" + std::to_string(levels);
    for (std::size_t k = 0; k < d.smooth.size(); ++k) csv.row({p.names[s], smooth, num(k), num(d.smooth[k]), "0"});
    const auto var = wavelet_variance(d, c.confidence);
    double total = 0.0;
    for (double v : var.estimate) total += v;
    json levels_json = json::array();
    for (std::size_t j = 0; j < var.size(); ++j)
      levels_json.push_back({{"level", var.levels[j]}, {"horizon", var.horizon_labels[j]},
                             {"variance", var.estimate[j]}, {"ci_low", var.ci_low[j]}, {"ci_high", var.ci_high[j]},
                             {"kept", var.effective_n[j]},
                             {"share", total > 0.0 ? var.estimate[j] / total : 0.0}});
    per_series.push_back({{"series", p.names[s]}, {"levels", levels_json}});
    std::vector<double> x(var.levels.begin(), var.levels.end());
    chart.series.push_back({p.names[s], x, var.estimate, var.ci_low, var.ci_high});
  }
  ctx.out.add("csv", csv.str());
  json cfg = base_config(c);
  cfg["filter"] = c.filter;
  cfg["boundary"] = std::string(to_string(mode));
  cfg["levels"] = levels;
  cfg["confidence"] = c.confidence;
  add_json(ctx, {{"config", cfg}, {"n_obs", p.n_obs()}, {"series", per_series}});
  ctx.out.add("svg", svg::render(chart, ctx.out.tag()));
}

// ------------------------------------------------------------------ wcor

void cmd_wcor(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  require_series(p, 2, c.command);
  const int levels = c.levels.value_or(6);
  const auto mode = parse_boundary(c.boundary.value_or("brickwall"));
  const auto decs = decompose_all(p, levels, c.filter, mode);
  const std::size_t ref = reference_index(p, c);
  std::vector<std::string> header{"level", "horizon"};
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < p.n_series(); ++i) {
    if (i == ref) continue;
    others.push_back(i);
    header.push_back(p.names[i]);
    header.push_back(p.names[i] + "_ci_low");
    header.push_back(p.names[i] + "_ci_high");
  }
  std::vector<ScaleProfile> profiles;
  for (std::size_t i : others) profiles.push_back(wavelet_correlation(decs[ref], decs[i], c.confidence));
  CsvTable csv(header);
  for (int j = 0; j < levels; ++j) {
    std::vector<std::string> row{num(j + 1), horizon_label(j + 1)};
    for (const auto& pr : profiles) {
      row.push_back(num(pr.estimate[j]));
      row.push_back(num(pr.ci_low[j]));
      row.push_back(num(pr.ci_high[j]));
    }
    csv.row(row);
  }
  ctx.out.add("csv", csv.str());
  json pairs = json::array();
  svg::IntervalChart chart{.title = "Wavelet correlation with " + p.names[ref], .x_label = "horizon",
                           .y_label = "correlation"};
  chart.x_ticks = level_ticks(levels);
  chart.reference_y = 0.0;
  for (std::size_t k = 0; k < others.size(); ++k) {
    const auto& pr = profiles[k];
    json rows = json::array();
    for (std::size_t j = 0; j < pr.size(); ++j)
      rows.push_back({{"level", pr.levels[j]}, {"horizon", pr.horizon_labels[j]}, {"rho", pr.estimate[j]},
                      {"ci_low", pr.ci_low[j]}, {"ci_high", pr.ci_high[j]}, {"n", pr.effective_n[j]}});
    pairs.push_back({{"reference", p.names[ref]}, {"counterpart", p.names[others[k]]}, {"levels", rows}});
    std::vector<double> x(pr.levels.begin(), pr.levels.end());
    chart.series.push_back({p.names[others[k]], x, pr.estimate, pr.ci_low, pr.ci_high});
  }
  json cfg = base_config(c);
  cfg["filter"] = c.filter;
  cfg["boundary"] = std::string(to_string(mode));
  cfg["levels"] = levels;
  cfg["confidence"] = c.confidence;
  add_json(ctx, {{"config", cfg}, {"pairs", pairs}});
  ctx.out.add("svg", svg::render(chart, ctx.out.tag()));
}

// ----------------------------------------------------------------- wccor

void cmd_wccor(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  require_series(p, 2, c.command);
  const int levels = c.levels.value_or(6);
  const auto mode = parse_boundary(c.boundary.value_or("brickwall"));
  const auto decs = decompose_all(p, levels, c.filter, mode);
  const std::size_t ref = reference_index(p, c);
  CsvTable csv({"reference", "counterpart", "level", "horizon", "lag", "rho", "ci_low", "ci_high"});
  json pairs = json::array();
  std::optional<svg::Heatmap> map;
  for (std::size_t i = 0; i < p.n_series(); ++i) {
    if (i == ref) continue;
    const auto profiles = wavelet_cross_correlation(decs[ref], decs[i], c.max_lag, c.confidence);
    json rows = json::array();
    for (const auto& pr : profiles) {
      for (std::size_t k = 0; k < pr.lags.size(); ++k)
        csv.row({p.names[ref], p.names[i], num(pr.level), horizon_label(pr.level), num(pr.lags[k]), num(pr.rho[k]),
                 num(pr.ci_low[k]), num(pr.ci_high[k])});
      rows.push_back({{"level", pr.level}, {"horizon", horizon_label(pr.level)}, {"peak_lag", pr.peak_lag()},
                      {"peak_rho", pr.at(pr.peak_lag())}, {"rho_at_zero", pr.at(0)}});
    }
    pairs.push_back({{"reference", p.names[ref]}, {"counterpart", p.names[i]}, {"levels", rows}});
    if (!map) {
      svg::Heatmap m{.title = "Wavelet cross-correlation " + p.names[ref] + " vs " + p.names[i], .x_label = "lag",
                     .y_label = "horizon"};
      m.rows = profiles.size();
      m.cols = profiles.front().lags.size();
      m.vmin = -1.0;
      m.vmax = 1.0;
      for (const auto& pr : profiles) m.values.insert(m.values.end(), pr.rho.begin(), pr.rho.end());
      const auto& lags = profiles.front().lags;
      m.x_ticks = svg::index_ticks(lags.size(), 11, [&](std::size_t k) { return std::to_string(lags[k]); });
      for (std::size_t j = 0; j < profiles.size(); ++j) m.y_ticks.push_back({static_cast<double>(j), horizon_label(profiles[j].level)});
      map = std::move(m);
    }
  }
  ctx.out.add("csv", csv.str());
  json cfg = base_config(c);
  cfg["filter"] = c.filter;
  cfg["boundary"] = std::string(to_string(mode));
  cfg["levels"] = levels;
  cfg["max_lag"] = c.max_lag;
  cfg["confidence"] = c.confidence;
  add_json(ctx, {{"config", cfg}, {"pairs", pairs}});
  ctx.out.add("svg", svg::render(*map, ctx.out.tag()));
}

// ------------------------------------------------------ wmc, wmcc, leaders

json wmc_config(const RunConfig& c, int levels, BoundaryMode mode) {
  json cfg = base_config(c);
  cfg["filter"] = c.filter;
  cfg["boundary"] = std::string(to_string(mode));
  cfg["levels"] = levels;
  cfg["confidence"] = c.confidence;
  return cfg;
}

void cmd_wmc(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  require_series(p, 2, c.command);
  const int levels = c.levels.value_or(8);
  const auto mode = parse_boundary(c.boundary.value_or("brickwall"));
  const auto decs = decompose_all(p, levels, c.filter, mode);
  const auto w = wmc(decs, c.confidence);
  CsvTable csv({"level", "horizon", "phi", "ci_low", "ci_high", "leader"});
  json rows = json::array();
  for (std::size_t j = 0; j < w.levels.size(); ++j) {
    const std::string leader = p.names[w.leader_index[j]];
    csv.row({num(w.levels[j]), w.horizon_labels[j], num(w.phi[j]), num(w.ci_low[j]), num(w.ci_high[j]), leader});
    rows.push_back({{"level", w.levels[j]}, {"horizon", w.horizon_labels[j]}, {"phi", w.phi[j]},
                    {"ci_low", w.ci_low[j]}, {"ci_high", w.ci_high[j]}, {"leader", leader}});
  }
  ctx.out.add("csv", csv.str());
  add_json(ctx, {{"config", wmc_config(c, levels, mode)}, {"series", p.names}, {"levels", rows}});
  svg::IntervalChart chart{.title = "Wavelet multiple correlation", .x_label = "horizon", .y_label = "phi"};
  chart.x_ticks = level_ticks(levels);
  std::vector<double> x(w.levels.begin(), w.levels.end());
  chart.series.push_back({"WMC", x, w.phi, w.ci_low, w.ci_high});
  ctx.out.add("svg", svg::render(chart, ctx.out.tag()));
}

void cmd_wmcc(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  require_series(p, 2, c.command);
  const int levels = c.levels.value_or(8);
  const auto mode = parse_boundary(c.boundary.value_or("brickwall"));
  const auto decs = decompose_all(p, levels, c.filter, mode);
  const auto w = wmcc(decs, c.max_lag, c.confidence);
  CsvTable csv({"level", "horizon", "lag", "phi", "ci_low", "ci_high"});
  json rows = json::array();
  svg::Heatmap map{.title = "Wavelet multiple cross-correlation", .x_label = "lag", .y_label = "horizon"};
  map.rows = w.levels.size();
  map.cols = w.lags.size();
  map.vmin = 0.0;
  map.vmax = 1.0;
  for (std::size_t j = 0; j < w.levels.size(); ++j) {
    for (std::size_t k = 0; k < w.lags.size(); ++k)
      csv.row({num(w.levels[j]), w.horizon_labels[j], num(w.lags[k]), num(w.phi_by_lag[j][k]),
               num(w.ci_low_by_lag[j][k]), num(w.ci_high_by_lag[j][k])});
    map.values.insert(map.values.end(), w.phi_by_lag[j].begin(), w.phi_by_lag[j].end());
    map.y_ticks.push_back({static_cast<double>(j), w.horizon_labels[j]});
    rows.push_back({{"level", w.levels[j]}, {"horizon", w.horizon_labels[j]}, {"leader", p.names[w.leader_index[j]]},
                    {"best_lag", w.best_lag[j]}, {"phi_at_zero", w.phi[j]}});
  }
  map.x_ticks = svg::index_ticks(w.lags.size(), 11, [&](std::size_t k) { return std::to_string(w.lags[k]); });
  ctx.out.add("csv", csv.str());
  json cfg = wmc_config(c, levels, mode);
  cfg["max_lag"] = c.max_lag;
  add_json(ctx, {{"config", cfg}, {"series", p.names}, {"levels", rows}});
  ctx.out.add("svg", svg::render(map, ctx.out.tag()));
}

void cmd_leaders(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  require_series(p, 2, c.command);
  const int levels = c.levels.value_or(8);
  const auto mode = parse_boundary(c.boundary.value_or("brickwall"));
  const auto decs = decompose_all(p, levels, c.filter, mode);
  const auto table = scale_leader_table(decs, p.names, c.confidence);
  CsvTable csv({"level", "horizon", "leader", "phi", "ci_low", "ci_high", "low_confidence"});
  json rows = json::array();
  svg::IntervalChart chart{.title = "Scale leaders", .x_label = "horizon: leader", .y_label = "phi"};
  svg::IntervalSeries s{.name = "WMC"};
  for (const auto& r : table) {
    csv.row({num(r.level), r.horizon, r.leader, num(r.phi), num(r.ci_low), num(r.ci_high),
             r.low_confidence ? "1" : "0"});
    rows.push_back({{"level", r.level}, {"horizon", r.horizon}, {"leader", r.leader}, {"phi", r.phi},
                    {"ci_low", r.ci_low}, {"ci_high", r.ci_high}, {"low_confidence", r.low_confidence}});
    chart.x_ticks.push_back({static_cast<double>(r.level), r.horizon + ": " + r.leader});
    s.x.push_back(r.level);
    s.y.push_back(r.phi);
    s.low.push_back(r.ci_low);
    s.high.push_back(r.ci_high);
  }
  chart.series.push_back(std::move(s));
  ctx.out.add("csv", csv.str());
  add_json(ctx, {{"config", wmc_config(c, levels, mode)}, {"series", p.names}, {"leaders", rows}});
  ctx.out.add("svg", svg::render(chart, ctx.out.tag()));
}

// ------------------------------------------------------------- coherence

void cmd_coherence(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  require_series(p, 2, c.command);
  const std::size_t ref = reference_index(p, c);
  const std::size_t other = ref == 0 ? 1 : 0;
  MorletParams params;
  params.s0 = c.s0;
  params.dj = c.dj;
  params.n_scales = c.n_scales;
  params.validate();
  const auto x = p.series(ref);
  const auto y = p.series(other);
  SmoothingSpec smoothing;
  auto field = wavelet_coherence(x, y, params, smoothing);
  if (c.surrogates > 0) {
    SignificanceOptions opt;
    opt.n_surrogates = c.surrogates;
    opt.quantile = c.confidence;
    opt.seed = c.seed;
    opt.per_cell = c.per_cell;
    opt.threads = c.threads;
    apply_significance(field, significance_montecarlo(x, y, params, smoothing, field, opt));
  }
  const bool tested = !field.sig_mask.empty();
  CsvTable csv({"time", "date", "scale", "period", "r2", "phase", "in_coi", "significant"});
  for (std::size_t t = 0; t < field.n_times; ++t)
    for (std::size_t s = 0; s < field.n_scales(); ++s) {
      const std::size_t i = field.index(s, t);
      csv.row({num(t), format_date(p.dates[t]), num(field.scales[s]), num(field.periods[s]), num(field.r2[i]),
               num(field.phase[i]), field.in_coi(s, t) ? "1" : "0", tested ? (field.sig_mask[i] ? "1" : "0") : "NA"});
    }
  ctx.out.add("csv", csv.str());

  json scales = json::array();
  for (std::size_t s = 0; s < field.n_scales(); ++s) {
    double sum = 0.0;
    std::size_t inside = 0, sig = 0;
    std::map<std::string, std::size_t> classes;
    for (std::size_t t = 0; t < field.n_times; ++t) {
      if (!field.in_coi(s, t)) continue;
      const std::size_t i = field.index(s, t);
      sum += field.r2[i];
      ++inside;
      if (tested && field.sig_mask[i]) {
        ++sig;
        ++classes[std::string(to_string(phase_classify(field.phase[i]).relation))];
      }
    }
    json row{{"scale", field.scales[s]}, {"period", field.periods[s]}, {"cells_in_coi", inside},
             {"mean_r2_in_coi", inside ? json(sum / static_cast<double>(inside)) : json(nullptr)}};
    if (tested) {
      row["threshold"] = field.thresholds[s];
      row["significant_fraction_in_coi"] = inside ? json(static_cast<double>(sig) / static_cast<double>(inside)) : json(nullptr);
      row["significant_phase_classes"] = classes;
    }
    scales.push_back(row);
  }
  json cfg = base_config(c);
  cfg["x"] = p.names[ref];
  cfg["y"] = p.names[other];
  cfg["omega0"] = params.omega0;
  cfg["s0"] = params.s0;
  cfg["dj"] = params.dj;
  cfg["surrogates"] = c.surrogates;
  cfg["quantile"] = c.confidence;
  cfg["seed"] = c.seed;
  cfg["per_cell"] = c.per_cell;
  add_json(ctx, {{"config", cfg}, {"n_times", field.n_times}, {"coi", field.coi}, {"scales", scales}});

  svg::Heatmap map{.title = "Wavelet coherence " + p.names[ref] + " vs " + p.names[other], .x_label = "date",
                   .y_label = "period"};
  map.rows = field.n_scales();
  map.cols = field.n_times;
  map.values = field.r2;
  map.vmin = 0.0;
  map.vmax = 1.0;
  map.x_ticks = date_ticks(p.dates);
  map.y_ticks = svg::index_ticks(field.n_scales(), 8, [&](std::size_t s) { return format_number(std::round(field.periods[s] * 10) / 10); });
  map.markers = event_markers(ctx.events, p.dates);
  map.shade_from_row.resize(field.n_times);
  for (std::size_t t = 0; t < field.n_times; ++t) {
    std::size_t r = 0;
    while (r < field.n_scales() && field.in_coi(r, t)) ++r;
    map.shade_from_row[t] = static_cast<double>(r);
  }
  if (tested) map.highlight = field.sig_mask;
  // Arrows on a roughly square lattice: every k-th scale and the matching
  // stride in time.
  const std::size_t ks = static_cast<std::size_t>(c.arrow_step);
  const std::size_t kt = ks * std::max<std::size_t>(1, field.n_times / std::max<std::size_t>(1, field.n_scales()) * 2);
  map.arrows.assign(field.r2.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t s = ks / 2; s < field.n_scales(); s += ks)
    for (std::size_t t = kt / 2; t < field.n_times; t += kt) {
      const std::size_t i = field.index(s, t);
      if (field.in_coi(s, t) && (!tested || field.sig_mask[i])) map.arrows[i] = field.phase[i];
    }
  ctx.out.add("svg", svg::render(map, ctx.out.tag()));
}

// --------------------------------------------------- rolling correlation

RollingOptions rolling_options(const RunConfig& c) {
  RollingOptions o;
  o.levels = c.levels.value_or(6);
  o.window = c.window.value_or(256);
  o.step = c.step.value_or(1);
  o.filter = c.filter;
  o.boundary = parse_boundary(c.boundary.value_or("reflection"));
  return o;
}

json rolling_config(const RunConfig& c, const RollingOptions& o) {
  json cfg = base_config(c);
  cfg["filter"] = c.filter;
  cfg["boundary"] = std::string(to_string(o.boundary));
  cfg["levels"] = o.levels;
  cfg["window"] = o.window;
  cfg["step"] = o.step;
  return cfg;
}

svg::LineChart rolling_chart(const std::vector<RollingCorrSeries>& r, const Panel& p, const Events& events,
                             std::string title) {
  svg::LineChart chart{.title = std::move(title), .x_label = "window end", .y_label = "correlation"};
  chart.y_range = std::make_pair(-1.0, 1.0);
  chart.reference_y = 0.0;
  for (const auto& s : r) {
    std::vector<double> x(s.anchors.begin(), s.anchors.end());
    chart.lines.push_back({s.horizon, x, s.rho});
  }
  chart.x_ticks = date_ticks(p.dates);
  chart.markers = event_markers(events, p.dates);
  return chart;
}

void cmd_rolling_cor(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  require_series(p, 2, c.command);
  const std::size_t ref = reference_index(p, c);
  const std::size_t other = ref == 0 ? 1 : 0;
  const auto o = rolling_options(c);
  const auto r = rolling_wavelet_correlation(p.series(ref), p.series(other), o, p.dates);
  std::vector<std::string> header{"anchor", "date"};
  for (const auto& s : r) header.push_back("d" + std::to_string(s.level));
  CsvTable csv(header);
  for (std::size_t w = 0; w < r.front().anchors.size(); ++w) {
    std::vector<std::string> row{num(r.front().anchors[w]), format_date(r.front().anchor_dates[w])};
    for (const auto& s : r) row.push_back(num(s.rho[w]));
    csv.row(row);
  }
  ctx.out.add("csv", csv.str());
  json levels = json::array();
  for (const auto& s : r) {
    double m = 0.0;
    for (double v : s.rho) m += v / static_cast<double>(s.rho.size());
    levels.push_back({{"level", s.level}, {"horizon", s.horizon}, {"windows", s.rho.size()}, {"mean_rho", m}});
  }
  json cfg = rolling_config(c, o);
  cfg["x"] = p.names[ref];
  cfg["y"] = p.names[other];
  add_json(ctx, {{"config", cfg}, {"levels", levels}});
  ctx.out.add("svg", svg::render(rolling_chart(r, p, ctx.events, "Rolling wavelet correlation " + p.names[ref] +
                                                                   " vs " + p.names[other]),
                                 ctx.out.tag()));
}

std::size_t resolve_event(const std::string& text, const Panel& p) {
  if (text.size() == 10 && text[4] == '-') {
    const Date d = parse_date(text);
    const auto it = std::lower_bound(p.dates.begin(), p.dates.end(), d);
    require(it != p.dates.end(), ErrorCode::InvalidArgument, "event date " + text + " is after the sample");
    return static_cast<std::size_t>(it - p.dates.begin());
  }
  std::size_t idx = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), idx);
  require(res.ec == std::errc() && res.ptr == text.data() + text.size(), ErrorCode::InvalidArgument,
          "--event must be YYYY-MM-DD or an observation index, got '" + text + "'");
  require(idx < p.n_obs(), ErrorCode::InvalidArgument, "event index " + text + " is outside the sample");
  return idx;
}

void cmd_contagion(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  require_series(p, 2, c.command);
  const std::size_t ref = reference_index(p, c);
  const std::size_t other = ref == 0 ? 1 : 0;
  const std::size_t event = resolve_event(c.event, p);
  const auto o = rolling_options(c);
  const auto r = rolling_wavelet_correlation(p.series(ref), p.series(other), o, p.dates);
  CsvTable csv({"level", "horizon", "before", "after", "t_stat", "dof", "p_value", "stars", "n_before", "n_after"});
  json rows = json::array();
  for (const auto& s : r) {
    const auto t = event_ttest(s, event, c.pre, c.post);
    const std::string stars = t.significant_1pct ? "**" : t.significant_5pct ? "*" : "";
    csv.row({num(t.level), t.horizon, num(t.mean_before), num(t.mean_after), num(t.t_stat), num(t.dof),
             num(t.p_value), stars, num(t.n_before), num(t.n_after)});
    rows.push_back({{"level", t.level}, {"horizon", t.horizon}, {"before", t.mean_before}, {"after", t.mean_after},
                    {"t_stat", t.t_stat}, {"dof", t.dof}, {"p_value", t.p_value},
                    {"significant_1pct", t.significant_1pct}, {"significant_5pct", t.significant_5pct},
                    {"n_before", t.n_before}, {"n_after", t.n_after}});
  }
  ctx.out.add("csv", csv.str());
  json cfg = rolling_config(c, o);
  cfg["x"] = p.names[ref];
  cfg["y"] = p.names[other];
  cfg["event_index"] = event;
  cfg["event_date"] = format_date(p.dates[event]);
  cfg["pre"] = c.pre;
  cfg["post"] = c.post;
  add_json(ctx, {{"config", cfg}, {"levels", rows}});
  auto chart = rolling_chart(r, p, ctx.events, "Correlation around " + format_date(p.dates[event]));
  chart.markers.push_back({static_cast<double>(event), "event"});
  ctx.out.add("svg", svg::render(chart, ctx.out.tag()));
}

// ----------------------------------------------------------- long memory

OctaveRange octave_range(const RunConfig& c, std::size_t n) {
  return clip_octaves(n, {c.j1.value_or(2), c.j2.value_or(8)});
}

json fit_json(const HurstFit& f, const ScalingParams& sp) {
  return {{"hurst", f.H}, {"std_err", f.std_err}, {"t_value", f.t_value}, {"p_value", f.p_value},
          {"j1", f.j1}, {"j2", f.j2}, {"slope", f.slope}, {"intercept", f.intercept},
          {"alpha", {sp.alpha, sp.alpha_low, sp.alpha_high}}, {"H_lrd", {sp.H_lrd, sp.H_low, sp.H_high}},
          {"h_ss", {sp.h_ss, sp.h_low, sp.h_high}}, {"D", {sp.D, sp.D_low, sp.D_high}},
          {"cf", {sp.cf, sp.cf_low, sp.cf_high}}};
}

json longmemory_config(const RunConfig& c, OctaveRange r) {
  json cfg = base_config(c);
  cfg["filter"] = c.filter;
  cfg["j1"] = r.j1;
  cfg["j2"] = r.j2;
  cfg["confidence"] = c.confidence;
  return cfg;
}

void cmd_logscale(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  const auto range = octave_range(c, p.n_obs());
  CsvTable csv({"series", "j", "eta", "ci_low", "ci_high", "n_j"});
  json per_series = json::array();
  svg::IntervalChart chart{.title = "Logscale diagram", .x_label = "octave j", .y_label = "log2 variance"};
  for (std::size_t s = 0; s < p.n_series(); ++s) {
    const auto d = logscale_diagram(p.series(s), range.j1, range.j2, c.filter, c.confidence);
    for (std::size_t k = 0; k < d.octaves.size(); ++k)
      csv.row({p.names[s], num(d.octaves[k]), num(d.eta[k]), num(d.ci_low[k]), num(d.ci_high[k]), num(d.n_j[k])});
    per_series.push_back({{"series", p.names[s]}, {"fit", fit_json(d.fit, scaling_parameters(d.fit, c.confidence))}});
    std::vector<double> x(d.octaves.begin(), d.octaves.end());
    chart.series.push_back({p.names[s], x, d.eta, d.ci_low, d.ci_high});
    if (s == 0) chart.fit = svg::FitLine{d.fit_slope, d.fit_intercept, static_cast<double>(d.j1), static_cast<double>(d.j2)};
  }
  ctx.out.add("csv", csv.str());
  add_json(ctx, {{"config", longmemory_config(c, range)}, {"series", per_series}});
  ctx.out.add("svg", svg::render(chart, ctx.out.tag()));
}

void cmd_hurst(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  const auto range = octave_range(c, p.n_obs());
  CsvTable csv({"series", "hurst", "std_err", "t_value", "p_value", "j1", "j2", "alpha", "H_lrd", "H_low", "H_high",
                "h_ss", "D", "D_low", "D_high", "cf"});
  json rows = json::array();
  svg::IntervalChart chart{.title = "Hurst exponents", .x_label = "series", .y_label = "H"};
  chart.reference_y = 0.5;
  svg::IntervalSeries pts{.name = "H"};
  for (std::size_t s = 0; s < p.n_series(); ++s) {
    const auto fit = logscale_diagram(p.series(s), range.j1, range.j2, c.filter, c.confidence).fit;
    const auto sp = scaling_parameters(fit, c.confidence);
    csv.row({p.names[s], num(fit.H), num(fit.std_err), num(fit.t_value), num(fit.p_value), num(fit.j1), num(fit.j2),
             num(sp.alpha), num(sp.H_lrd), num(sp.H_low), num(sp.H_high), num(sp.h_ss), num(sp.D), num(sp.D_low),
             num(sp.D_high), num(sp.cf)});
    json r = fit_json(fit, sp);
    r["series"] = p.names[s];
    rows.push_back(r);
    chart.x_ticks.push_back({static_cast<double>(s), p.names[s]});
    pts.x.push_back(static_cast<double>(s));
    pts.y.push_back(fit.H);
    pts.low.push_back(sp.H_low);
    pts.high.push_back(sp.H_high);
  }
  chart.series.push_back(std::move(pts));
  ctx.out.add("csv", csv.str());
  add_json(ctx, {{"config", longmemory_config(c, range)}, {"series", rows}});
  ctx.out.add("svg", svg::render(chart, ctx.out.tag()));
}

void cmd_rolling_hurst(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  RollingHurstOptions o;
  o.window = c.window.value_or(260);
  o.step = c.step.value_or(24);
  o.j1 = c.j1.value_or(2);
  o.j2 = c.j2.value_or(0);
  o.filter = c.filter;
  CsvTable csv({"series", "anchor", "date", "hurst", "std_err"});
  json per_series = json::array();
  svg::LineChart chart{.title = "Rolling Hurst exponent", .x_label = "window end", .y_label = "H"};
  chart.reference_y = 0.5;
  for (std::size_t s = 0; s < p.n_series(); ++s) {
    const auto pts = rolling_hurst(p.series(s), o, p.dates);
    svg::Line line{.name = p.names[s]};
    double mean = 0.0;
    for (const auto& pt : pts) {
      csv.row({p.names[s], num(pt.anchor), format_date(pt.date), num(pt.fit.H), num(pt.fit.std_err)});
      line.x.push_back(static_cast<double>(pt.anchor));
      line.y.push_back(pt.fit.H);
      mean += pt.fit.H / static_cast<double>(pts.size());
    }
    per_series.push_back({{"series", p.names[s]}, {"windows", pts.size()}, {"mean_hurst", mean},
                          {"j1", pts.front().fit.j1}, {"j2", pts.front().fit.j2}});
    chart.lines.push_back(std::move(line));
  }
  chart.x_ticks = date_ticks(p.dates);
  chart.markers = event_markers(ctx.events, p.dates);
  ctx.out.add("csv", csv.str());
  json cfg = base_config(c);
  cfg["filter"] = c.filter;
  cfg["window"] = o.window;
  cfg["step"] = o.step;
  add_json(ctx, {{"config", cfg}, {"series", per_series}});
  ctx.out.add("svg", svg::render(chart, ctx.out.tag()));
}

// ---------------------------------------------------------- connectivity

void cmd_connectivity(Context& ctx) {
  const auto& c = ctx.cfg;
  const Panel p = load_input(c);
  require_series(p, 2, c.command);
  int j2 = c.j2.value_or(0);
  if (j2 == 0) {
    // Deepest level keeping at least 8 coefficients, capped at 8.
    j2 = 1;
    while (j2 < 8 && (p.n_obs() >> (j2 + 1)) >= 8) ++j2;
  }
  const int j1 = c.j1.value_or(std::max(1, j2 - 3));
  const auto mode = parse_boundary(c.boundary.value_or("periodic"));
  const auto decs = decompose_all(p, j2, c.filter, mode);
  const auto r = fractal_connectivity(decs, j1, j2, c.tolerance);
  const auto tree = cluster_markets(r.F);
  const auto labels = cut_tree_k(tree, c.clusters);
  const auto order = tree.leaf_order();

  std::vector<std::string> header{"series"};
  header.insert(header.end(), p.names.begin(), p.names.end());
  CsvTable csv(header);
  for (std::size_t i = 0; i < r.F.n; ++i) {
    std::vector<std::string> row{p.names[i]};
    for (std::size_t j = 0; j < r.F.n; ++j) row.push_back(num(r.F(i, j)));
    csv.row(row);
  }
  ctx.out.add("csv", csv.str());

  json F = json::array(), conv = json::array(), merges = json::array();
  for (std::size_t i = 0; i < r.F.n; ++i) {
    F.push_back(std::vector<double>(r.F.data.begin() + static_cast<std::ptrdiff_t>(i * r.F.n),
                                    r.F.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * r.F.n)));
    conv.push_back(std::vector<int>(r.converged[i].begin(), r.converged[i].end()));
  }
  for (const auto& m : tree.merges) merges.push_back({{"a", m.a}, {"b", m.b}, {"height", m.height}, {"size", m.size}});
  json clusters = json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) clusters[p.names[i]] = labels[i];
  std::vector<std::string> ordered;
  for (std::size_t i : order) ordered.push_back(p.names[i]);
  json cfg = base_config(c);
  cfg["filter"] = c.filter;
  cfg["boundary"] = std::string(to_string(mode));
  cfg["j1"] = j1;
  cfg["j2"] = j2;
  cfg["tolerance"] = c.tolerance;
  cfg["clusters"] = c.clusters;
  add_json(ctx, {{"config", cfg}, {"series", p.names}, {"F", F}, {"converged", conv}, {"merges", merges},
                 {"leaf_order", ordered}, {"clusters", clusters}});

  svg::Heatmap map{.title = "Fractal connectivity (clustered order)", .x_label = "series", .y_label = "series"};
  map.rows = map.cols = r.F.n;
  double lo = 0.0;
  for (double v : r.F.data) lo = std::min(lo, v);
  map.vmin = lo;
  map.vmax = 1.0;
  for (std::size_t a : order)
    for (std::size_t b : order) map.values.push_back(r.F(a, b));
  for (std::size_t k = 0; k < order.size(); ++k) {
    map.x_ticks.push_back({static_cast<double>(k), p.names[order[k]]});
    map.y_ticks.push_back({static_cast<double>(k), p.names[order[k]]});
  }
  ctx.out.add("svg", svg::render(map, ctx.out.tag()));
}

// ------------------------------------------------------------- synth-fgn

void cmd_synth_fgn(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto x = synth_fgn(c.hurst, c.n, c.seed);
  const Date start = parse_date(c.start_date);
  std::vector<Date> dates(c.n);
  for (std::size_t t = 0; t < c.n; ++t) dates[t] = start + std::chrono::days(static_cast<long>(t));
  CsvTable csv({"date", c.name});
  for (std::size_t t = 0; t < c.n; ++t) csv.row({format_date(dates[t]), num(x[t])});
  ctx.out.add("csv", csv.str());
  add_json(ctx, {{"config", {{"H", c.hurst}, {"n", c.n}, {"seed", c.seed}, {"start_date", c.start_date},
                             {"name", c.name}}},
                 {"mean", mean(x)}, {"std_dev", std::sqrt(sample_variance(x))},
                 {"lag1_autocorrelation", autocorrelation(x, 1)},
                 {"lag1_theoretical", fgn_autocovariance(c.hurst, 1)}});
  svg::LineChart chart{.title = "Fractional Gaussian noise, H = " + format_number(c.hurst), .x_label = "date",
                       .y_label = "value"};
  chart.lines.push_back({c.name, to_index_axis(c.n), x});
  chart.x_ticks = date_ticks(dates);
  chart.markers = event_markers(ctx.events, dates);
  ctx.out.add("svg", svg::render(chart, ctx.out.tag()));
}

const std::map<std::string_view, std::function<void(Context&)>>& dispatch() {
  static const std::map<std::string_view, std::function<void(Context&)>> table{
      {"stats", cmd_stats},
      {"decompose", cmd_decompose},
      {"wcor", cmd_wcor},
      {"wccor", cmd_wccor},
      {"wmc", cmd_wmc},
      {"wmcc", cmd_wmcc},
      {"leaders", cmd_leaders},
      {"coherence", cmd_coherence},
      {"rolling-cor", cmd_rolling_cor},
      {"contagion-test", cmd_contagion},
      {"logscale", cmd_logscale},
      {"hurst", cmd_hurst},
      {"rolling-hurst", cmd_rolling_hurst},
      {"connectivity", cmd_connectivity},
      {"synth-fgn", cmd_synth_fgn},
  };
  return table;
}

}  // namespace

const std::vector<std::string_view>& command_names() {
  static const std::vector<std::string_view> names{"stats",       "decompose",      "wcor",     "wccor",
                                                   "wmc",         "wmcc",           "leaders",  "coherence",
                                                   "rolling-cor", "contagion-test", "logscale", "hurst",
                                                   "rolling-hurst", "connectivity", "synth-fgn"};
  return names;
}

Artifacts execute(const RunConfig& config) {
  const auto it = dispatch().find(config.command);
  require(it != dispatch().end(), ErrorCode::InvalidArgument, "unknown command '" + config.command + "'");
  Artifacts out(config.command, config.tag);
  Context ctx{config, out, load_events(config.events)};
  it->second(ctx);
  return out;
}

}  // namespace wavelink::cli
