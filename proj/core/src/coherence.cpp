#include "wavelink/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coherence_engine.hpp"
#include "fft.hpp"
#include "wavelink/error.hpp"
#include "wavelink/stats.hpp"

namespace wavelink {
namespace detail {

CoherenceEngine::CoherenceEngine(std::size_t n, const MorletParams& params, const SmoothingSpec& smoothing)
    : plan_(n, params), smoothing_(smoothing) {
  if (!smoothing.enabled) return;
  require(smoothing.time_factor > 0.0 && smoothing.scale_width > 0.0, ErrorCode::InvalidArgument,
          "smoothing widths must be positive");
  padded_ = next_pow2(2 * n);
  const auto& scales = plan_.scales();
  const long reach = static_cast<long>(n) - 1;
  for (double s : scales) {
    const double sd = smoothing.time_factor * s / params.dt;
    std::vector<double> g(static_cast<std::size_t>(2 * reach + 1));
    for (long k = -reach; k <= reach; ++k) {
      const double u = static_cast<double>(k) / sd;
      g[static_cast<std::size_t>(k + reach)] = std::exp(-0.5 * u * u);
    }
    cvec spec(padded_, 0.0);
    for (long k = -reach; k <= reach; ++k)
      spec[static_cast<std::size_t>((k + static_cast<long>(padded_)) % static_cast<long>(padded_))] =
          g[static_cast<std::size_t>(k + reach)];
    fft_forward(spec);
    std::vector<double> re(padded_);
    for (std::size_t i = 0; i < padded_; ++i) re[i] = spec[i].real();
    kernel_spectrum_.push_back(std::move(re));

    // Kernel mass that falls inside the record at each time.
    std::vector<double> cum(g.size() + 1, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) cum[i + 1] = cum[i] + g[i];
    std::vector<double> norm(n);
    // Offsets b - t, t in [0, n - 1], map to g indices [b, b + n - 1].
    for (std::size_t b = 0; b < n; ++b) norm[b] = cum[b + n] - cum[b];
    normalizer_.push_back(std::move(norm));
  }

  // Boxcar over scale index, exact overlap weights, renormalized at the ends.
  const double width = smoothing.scale_width / params.dj;
  const long m = static_cast<long>(scales.size());
  for (long j = 0; j < m; ++j) {
    const double lo = static_cast<double>(j) - width / 2.0, hi = static_cast<double>(j) + width / 2.0;
    ScaleWeights sw{0, {}};
    double total = 0.0;
    bool started = false;
    for (long i = std::max(0L, static_cast<long>(std::floor(lo)) - 1);
         i <= std::min(m - 1, static_cast<long>(std::ceil(hi)) + 1); ++i) {
      const double overlap = std::min(hi, i + 0.5) - std::max(lo, i - 0.5);
      if (overlap <= 0.0) {
        if (started) sw.w.push_back(0.0);
        continue;
      }
      if (!started) {
        sw.first = static_cast<std::size_t>(i);
        started = true;
      }
      sw.w.push_back(overlap);
      total += overlap;
    }
    while (!sw.w.empty() && sw.w.back() == 0.0) sw.w.pop_back();
    for (auto& v : sw.w) v /= total;
    scale_weights_.push_back(std::move(sw));
  }
}

void CoherenceEngine::smooth_time(std::size_t j, std::vector<std::complex<double>>& row) const {
  const std::size_t n = plan_.n();
  cvec buf(padded_, 0.0);
  std::copy(row.begin(), row.end(), buf.begin());
  fft_forward(buf);
  const auto& k = kernel_spectrum_[j];
  for (std::size_t i = 0; i < padded_; ++i) buf[i] *= k[i];
  fft_inverse(buf);
  const double inv = 1.0 / static_cast<double>(padded_);
  const auto& norm = normalizer_[j];
  for (std::size_t b = 0; b < n; ++b) row[b] = buf[b] * (inv / norm[b]);
}

void CoherenceEngine::compute(std::span<const double> x, std::span<const double> y, std::vector<double>& r2,
                              std::vector<double>* phase) const {
  const std::size_t n = plan_.n();
  const std::size_t m = plan_.scales().size();
  std::vector<std::complex<double>> wx, wy;
  plan_.transform(x, wx);
  plan_.transform(y, wy);

  r2.assign(m * n, 0.0);
  if (phase) phase->assign(m * n, 0.0);

  if (!smoothing_.enabled) {
    for (std::size_t i = 0; i < m * n; ++i) {
      const auto cross = wx[i] * std::conj(wy[i]);
      const double denom = std::norm(wx[i]) * std::norm(wy[i]);
      r2[i] = denom > 0.0 ? std::clamp(std::norm(cross) / denom, 0.0, 1.0) : 0.0;
      if (phase) (*phase)[i] = std::arg(cross);
    }
    return;
  }

  // Cross term in one buffer; both auto terms packed as real + i imag.
  std::vector<std::complex<double>> sxy(m * n), sauto(m * n);
  std::vector<std::complex<double>> row(n);
  for (std::size_t j = 0; j < m; ++j) {
    const double inv_s = 1.0 / plan_.scales()[j];
    for (std::size_t b = 0; b < n; ++b) row[b] = wx[j * n + b] * std::conj(wy[j * n + b]) * inv_s;
    smooth_time(j, row);
    std::copy(row.begin(), row.end(), sxy.begin() + static_cast<std::ptrdiff_t>(j * n));
    for (std::size_t b = 0; b < n; ++b)
      row[b] = {std::norm(wx[j * n + b]) * inv_s, std::norm(wy[j * n + b]) * inv_s};
    smooth_time(j, row);
    std::copy(row.begin(), row.end(), sauto.begin() + static_cast<std::ptrdiff_t>(j * n));
  }

  for (std::size_t j = 0; j < m; ++j) {
    const auto& sw = scale_weights_[j];
    for (std::size_t b = 0; b < n; ++b) {
      std::complex<double> c = 0.0;
      double px = 0.0, py = 0.0;
      for (std::size_t i = 0; i < sw.w.size(); ++i) {
        const std::size_t idx = (sw.first + i) * n + b;
        c += sw.w[i] * sxy[idx];
        px += sw.w[i] * sauto[idx].real();
        py += sw.w[i] * sauto[idx].imag();
      }
      const double denom = px * py;
      r2[j * n + b] = denom > 0.0 ? std::clamp(std::norm(c) / denom, 0.0, 1.0) : 0.0;
      if (phase) (*phase)[j * n + b] = std::arg(c);
    }
  }
}

}  // namespace detail

namespace {

void require_pair(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorCode::InvalidArgument,
          "coherence needs equal-length series (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
              ")");
  require(x.size() >= 16, ErrorCode::InsufficientData, "coherence needs at least 16 observations");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
  };
  require(!constant(x) && !constant(y), ErrorCode::InvalidArgument, "coherence of a constant series is undefined");
}

}  // namespace

CoherenceField wavelet_coherence(std::span<const double> x, std::span<const double> y, const MorletParams& params,
                                 const SmoothingSpec& smoothing) {
  require_pair(x, y);
  detail::CoherenceEngine engine(x.size(), params, smoothing);
  CoherenceField field;
  field.scales = engine.scales();
  field.n_times = x.size();
  for (double s : field.scales) field.periods.push_back(s * params.fourier_factor());
  field.coi = cone_of_influence(x.size(), params);
  engine.compute(x, y, field.r2, &field.phase);
  return field;
}

double unsmoothed_coherence_gap(std::span<const double> x, std::span<const double> y, const MorletParams& params) {
  SmoothingSpec off;
  off.enabled = false;
  const auto field = wavelet_coherence(x, y, params, off);
  double gap = 0.0;
  for (double r : field.r2) gap = std::max(gap, std::abs(r - 1.0));
  return gap;
}

PhaseClass phase_classify(double phi) {
  constexpr double pi = std::numbers::pi;
  require(phi >= -pi && phi <= pi, ErrorCode::InvalidArgument, "phase angle outside [-pi, pi]");
  const bool edge = phi == 0.0 || std::abs(phi) == pi / 2.0 || std::abs(phi) == pi;
  PhaseRelation rel;
  if (phi >= 0.0 && phi < pi / 2.0)
    rel = PhaseRelation::InPhaseXLeads;
  else if (phi >= pi / 2.0)
    rel = PhaseRelation::AntiPhaseYLeads;
  else if (phi >= -pi / 2.0)
    rel = PhaseRelation::InPhaseYLeads;
  else
    rel = PhaseRelation::AntiPhaseXLeads;
  return {rel, edge};
}

std::string_view to_string(PhaseRelation relation) {
  switch (relation) {
    case PhaseRelation::InPhaseXLeads: return "in-phase, X leads";
    case PhaseRelation::InPhaseYLeads: return "in-phase, Y leads";
    case PhaseRelation::AntiPhaseYLeads: return "anti-phase, Y leads";
    case PhaseRelation::AntiPhaseXLeads: return "anti-phase, X leads";
  }
  return "";
}

Ar1Params ar1_fit(std::span<const double> x) {
  require(x.size() >= 8, ErrorCode::InsufficientData, "AR(1) fit needs at least 8 observations");
  const double var = sample_variance(x);
  require(var > 0.0, ErrorCode::InvalidArgument, "AR(1) fit of a constant series");
  Ar1Params p;
  p.phi = std::clamp(autocorrelation(x, 1), 0.0, 0.999);
  p.sigma = std::sqrt(var * (1.0 - p.phi * p.phi));
  return p;
}

std::vector<double> ar1_simulate(const Ar1Params& params, std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  if (n == 0) return out;
  // Start from the stationary distribution so there is no burn-in.
  double prev = normal(rng) * params.sigma / std::sqrt(1.0 - params.phi * params.phi);
  out[0] = prev;
  for (std::size_t t = 1; t < n; ++t) {
    prev = params.phi * prev + params.sigma * normal(rng);
    out[t] = prev;
  }
  return out;
}

}  // namespace wavelink
