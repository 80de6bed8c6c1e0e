#include "wavelink/modwt.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "wavelink/error.hpp"

namespace wavelink {
namespace {

// One pyramid stage: circular filtering with the filter upsampled by `step`.
void analysis_step(const std::vector<double>& v, const std::vector<double>& h, const std::vector<double>& g,
                   std::size_t step, std::vector<double>& w_out, std::vector<double>& v_out) {
  const std::size_t n = v.size();
  const std::size_t L = h.size();
  w_out.assign(n, 0.0);
  v_out.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double w = 0.0, s = 0.0;
    std::size_t idx = t;
    for (std::size_t l = 0; l < L; ++l) {
      w += h[l] * v[idx];
      s += g[l] * v[idx];
      idx = (idx + n - step % n) % n;
    }
    w_out[t] = w;
    v_out[t] = s;
  }
}

// Adjoint of one branch of `analysis_step`.
std::vector<double> synthesis_branch(const std::vector<double>& c, const std::vector<double>& f, std::size_t step) {
  const std::size_t n = c.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    std::size_t idx = t;
    for (std::size_t l = 0; l < f.size(); ++l) {
      acc += f[l] * c[idx];
      idx = (idx + step) % n;
    }
    out[t] = acc;
  }
  return out;
}

std::vector<double> rescaled(const std::vector<double>& f) {
  std::vector<double> out(f);
  for (auto& v : out) v /= std::numbers::sqrt2;
  return out;
}

void require_periodic(const Decomposition& dec, const char* what) {
  require(dec.boundary == BoundaryMode::Periodic, ErrorCode::InvalidArgument,
          std::string(what) + " requires a periodic decomposition (got " +
              std::string(to_string(dec.boundary)) + ")");
}

}  // namespace

std::string_view to_string(BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::Periodic: return "periodic";
    case BoundaryMode::Brickwall: return "brickwall";
    case BoundaryMode::Reflection: return "reflection";
  }
  return "periodic";
}

BoundaryMode parse_boundary(std::string_view text) {
  std::string key(text);
  for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (key == "periodic") return BoundaryMode::Periodic;
  if (key == "brickwall") return BoundaryMode::Brickwall;
  if (key == "reflection") return BoundaryMode::Reflection;
  fail(ErrorCode::InvalidArgument, "unknown boundary mode '" + std::string(text) + "'");
}

int max_level(std::size_t n) {
  int j = 0;
  while ((std::size_t{2} << j) <= n) ++j;
  return j;
}

std::size_t boundary_width(int level, std::size_t filter_length) {
  return ((std::size_t{1} << level) - 1) * (filter_length - 1) + 1;
}

Decomposition modwt(std::span<const double> x, int levels, const FilterPair& filter, BoundaryMode boundary) {
  const std::size_t n = x.size();
  require(n >= filter.length(), ErrorCode::InsufficientData,
          "series of length " + std::to_string(n) + " is shorter than the " + filter.name + " filter");
  require(levels >= 1 && levels <= max_level(n), ErrorCode::InvalidArgument,
          "level " + std::to_string(levels) + " outside [1, " + std::to_string(max_level(n)) +
              "] for n = " + std::to_string(n));

  std::vector<double> v(x.begin(), x.end());
  if (boundary == BoundaryMode::Reflection) v.insert(v.end(), x.rbegin(), x.rend());

  const auto h = rescaled(filter.wavelet);
  const auto g = rescaled(filter.scaling);

  Decomposition dec;
  dec.levels = levels;
  dec.boundary = boundary;
  dec.filter = filter;
  std::vector<double> w, next;
  for (int j = 1; j <= levels; ++j) {
    analysis_step(v, h, g, std::size_t{1} << (j - 1), w, next);
    w.resize(n);
    dec.details.push_back(w);
    v.swap(next);
  }
  v.resize(n);
  dec.smooth = std::move(v);

  for (int j = 1; j <= levels; ++j) {
    std::vector<std::uint8_t> mask(n, 1);
    if (boundary == BoundaryMode::Brickwall) {
      const std::size_t masked = std::min(boundary_width(j, filter.length()) - 1, n);
      std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(masked), 0);
    }
    dec.nonboundary.push_back(std::move(mask));
  }
  return dec;
}

Mra mra(const Decomposition& dec) {
  require_periodic(dec, "MRA reconstruction");
  const auto h = rescaled(dec.filter.wavelet);
  const auto g = rescaled(dec.filter.scaling);
  auto lift = [&](std::vector<double> v, int from_level) {
    for (int k = from_level; k >= 1; --k) v = synthesis_branch(v, g, std::size_t{1} << (k - 1));
    return v;
  };
  Mra out;
  for (int j = 1; j <= dec.levels; ++j) {
    auto v = synthesis_branch(dec.details[static_cast<std::size_t>(j - 1)], h, std::size_t{1} << (j - 1));
    out.details.push_back(lift(std::move(v), j - 1));
  }
  out.smooth = lift(dec.smooth, dec.levels);
  return out;
}

std::vector<double> mra_reconstruct(const Decomposition& dec) {
  auto parts = mra(dec);
  std::vector<double> x = parts.smooth;
  for (const auto& d : parts.details)
    for (std::size_t t = 0; t < x.size(); ++t) x[t] += d[t];
  return x;
}

std::vector<std::size_t> nonboundary_counts(const Decomposition& dec) {
  std::vector<std::size_t> counts;
  for (const auto& m : dec.nonboundary)
    counts.push_back(static_cast<std::size_t>(std::count(m.begin(), m.end(), std::uint8_t{1})));
  return counts;
}

std::vector<double> dyadic_coefficients(const Decomposition& dec, int level) {
  require_periodic(dec, "dyadic coefficient extraction");
  require(level >= 1 && level <= dec.levels, ErrorCode::InvalidArgument, "level out of range");
  const auto d = dec.detail(level);
  const std::size_t stride = std::size_t{1} << level;
  const std::size_t count = d.size() / stride;
  const double scale = std::pow(2.0, 0.5 * level);
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = scale * d[stride * (k + 1) - 1];
  return out;
}

}  // namespace wavelink
