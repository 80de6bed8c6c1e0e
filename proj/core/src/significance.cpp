#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>

#include "coherence_engine.hpp"
#include "wavelink/coherence.hpp"
#include "wavelink/error.hpp"

namespace wavelink {
namespace {

constexpr std::size_t kBins = 4096;

std::size_t bin_of(double r) {
  const auto b = static_cast<std::size_t>(r * static_cast<double>(kBins));
  return std::min(b, kBins - 1);
}

// Quantile of a [0, 1] histogram, linear within the bin that holds the rank.
double histogram_quantile(std::span<const std::uint64_t> counts, double q) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 1.0;
  const double target = q * static_cast<double>(total);
  double cum = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const double next = cum + static_cast<double>(counts[b]);
    if (next >= target && counts[b] > 0) {
      const double frac = (target - cum) / static_cast<double>(counts[b]);
      return (static_cast<double>(b) + frac) / static_cast<double>(kBins);
    }
    cum = next;
  }
  return 1.0;
}

double sorted_quantile(std::vector<float>& v, double q) {
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

SignificanceResult significance_montecarlo(std::span<const double> x, std::span<const double> y,
                                           const MorletParams& params, const SmoothingSpec& smoothing,
                                           const CoherenceField& observed, const SignificanceOptions& options) {
  require(options.n_surrogates >= 100, ErrorCode::InvalidArgument, "at least 100 surrogates are required");
  require(options.quantile > 0.0 && options.quantile < 1.0, ErrorCode::InvalidArgument,
          "significance quantile must lie in (0, 1)");
  require(x.size() == y.size() && x.size() == observed.n_times, ErrorCode::InvalidArgument,
          "observed coherence does not match the series");
  const Ar1Params ax = ar1_fit(x), ay = ar1_fit(y);
  const detail::CoherenceEngine engine(x.size(), params, smoothing);
  const std::size_t n = x.size();
  const std::size_t m = engine.scales().size();
  require(m == observed.n_scales(), ErrorCode::InvalidArgument, "observed coherence uses a different scale grid");
  const auto n_surr = static_cast<std::size_t>(options.n_surrogates);

  // Cells pooled for each scale's threshold.
  std::vector<std::uint8_t> pooled(m * n, 0);
  for (std::size_t j = 0; j < m; ++j) {
    bool any = false;
    for (std::size_t b = 0; b < n; ++b) any = any || observed.in_coi(j, b);
    for (std::size_t b = 0; b < n; ++b) pooled[j * n + b] = !any || observed.in_coi(j, b);
  }

  std::vector<float> cells;
  if (options.per_cell) {
    const std::size_t bytes = n_surr * m * n * sizeof(float);
    require(bytes <= options.per_cell_memory_limit, ErrorCode::InvalidArgument,
            "per-cell significance needs " + std::to_string(bytes >> 20) + " MiB, above the configured limit");
    cells.resize(n_surr * m * n);
  }

  unsigned workers = options.threads ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_surr));
  std::vector<std::vector<std::uint64_t>> hist(workers, std::vector<std::uint64_t>(m * kBins, 0));
  std::vector<std::exception_ptr> errors(workers);

  auto run = [&](unsigned w) {
    try {
      std::vector<double> r2;
      for (std::size_t i = w; i < n_surr; i += workers) {
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(i)};
        std::mt19937_64 rng(seq);
        const auto sx = ar1_simulate(ax, n, rng);
        const auto sy = ar1_simulate(ay, n, rng);
        engine.compute(sx, sy, r2, nullptr);
        auto& h = hist[w];
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t b = 0; b < n; ++b)
            if (pooled[j * n + b]) ++h[j * kBins + bin_of(r2[j * n + b])];
        if (options.per_cell)
          for (std::size_t c = 0; c < m * n; ++c) cells[c * n_surr + i] = static_cast<float>(r2[c]);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<std::uint64_t> merged(m * kBins, 0);
  for (const auto& h : hist)
    for (std::size_t i = 0; i < merged.size(); ++i) merged[i] += h[i];

  SignificanceResult result;
  result.n_surrogates = options.n_surrogates;
  for (std::size_t j = 0; j < m; ++j)
    result.thresholds.push_back(
        histogram_quantile(std::span(merged).subspan(j * kBins, kBins), options.quantile));

  result.sig_mask.assign(m * n, 0);
  if (options.per_cell) {
    result.cell_thresholds.resize(m * n);
    std::vector<float> column(n_surr);
    for (std::size_t c = 0; c < m * n; ++c) {
      std::copy_n(cells.begin() + static_cast<std::ptrdiff_t>(c * n_surr), n_surr, column.begin());
      result.cell_thresholds[c] = sorted_quantile(column, options.quantile);
      result.sig_mask[c] = observed.r2[c] > result.cell_thresholds[c];
    }
  } else {
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t b = 0; b < n; ++b) result.sig_mask[j * n + b] = observed.r2[j * n + b] > result.thresholds[j];
  }
  return result;
}

void apply_significance(CoherenceField& field, const SignificanceResult& result) {
  require(result.sig_mask.size() == field.r2.size(), ErrorCode::InvalidArgument,
          "significance mask does not match the coherence grid");
  field.sig_mask = result.sig_mask;
  field.thresholds = result.thresholds;
  field.n_surrogates = result.n_surrogates;
}

}  // namespace wavelink
