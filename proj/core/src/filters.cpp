#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <numbers>

#include "wavelink/error.hpp"
#include "wavelink/modwt.hpp"

namespace wavelink {
namespace {

using cd = std::complex<double>;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Roots of sum_k c[k] y^k via the companion matrix.
std::vector<cd> polynomial_roots(const std::vector<double>& c) {
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<cd> roots;
  for (int i = 0; i < deg; ++i) roots.push_back(solver.eigenvalues()(i));
  return roots;
}

// Maximum deviation of the unwrapped phase of G(f) from the best linear fit
// through the origin, over 0 < f < 1/2.
double phase_nonlinearity(const std::vector<double>& g) {
  constexpr int kGrid = 512;
  std::vector<double> f(kGrid), theta(kGrid);
  double prev = 0.0, offset = 0.0;
  for (int k = 0; k < kGrid; ++k) {
    f[k] = 0.5 * (k + 0.5) / kGrid;
    cd sum = 0.0;
    for (std::size_t l = 0; l < g.size(); ++l)
      sum += g[l] * std::polar(1.0, -2.0 * std::numbers::pi * f[k] * static_cast<double>(l));
    double raw = std::arg(sum);
    if (k > 0) {
      double d = raw + offset - prev;
      while (d > std::numbers::pi) { offset -= 2.0 * std::numbers::pi; d -= 2.0 * std::numbers::pi; }
      while (d < -std::numbers::pi) { offset += 2.0 * std::numbers::pi; d += 2.0 * std::numbers::pi; }
    }
    theta[k] = raw + offset;
    prev = theta[k];
  }
  double sff = 0.0, sft = 0.0;
  for (int k = 0; k < kGrid; ++k) {
    sff += f[k] * f[k];
    sft += f[k] * theta[k];
  }
  const double slope = sft / sff;
  double worst = 0.0;
  for (int k = 0; k < kGrid; ++k) worst = std::max(worst, std::abs(theta[k] - slope * f[k]));
  return worst;
}

std::vector<double> wavelet_from_scaling(const std::vector<double>& g) {
  const std::size_t L = g.size();
  std::vector<double> h(L);
  for (std::size_t l = 0; l < L; ++l) h[l] = (l % 2 == 0 ? 1.0 : -1.0) * g[L - 1 - l];
  return h;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<double> least_asymmetric_scaling(int vanishing_moments) {
  const int N = vanishing_moments;
  require(N >= 1 && N <= 10, ErrorCode::Unsupported, "least-asymmetric construction supports 1..10 moments");

  // |Q|^2 = P(sin^2(w/2)) with P(y) = sum_{k<N} C(N-1+k, k) y^k.
  std::vector<double> p(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) p[static_cast<std::size_t>(k)] = binomial(N - 1 + k, k);
  const auto yroots = polynomial_roots(p);

  // Each y-root maps to a reciprocal pair {z, 1/z}; conjugate y-roots are
  // grouped so the chosen filter stays real.
  struct Group {
    std::vector<cd> inside;
  };
  std::vector<Group> groups;
  for (const auto& y : yroots) {
    if (y.imag() < -1e-12) continue;
    const cd a = 1.0 - 2.0 * y;
    cd z = a + std::sqrt(a * a - 1.0);
    if (std::abs(z) > 1.0) z = 1.0 / z;
    Group grp;
    grp.inside.push_back(z);
    if (std::abs(y.imag()) > 1e-12) grp.inside.push_back(std::conj(z));
    groups.push_back(grp);
  }

  struct Candidate {
    std::vector<double> g;
    double nonlinearity;
  };
  std::vector<Candidate> candidates;
  const std::size_t n_choices = std::size_t{1} << groups.size();
  for (std::size_t mask = 0; mask < n_choices; ++mask) {
    std::vector<cd> poly{1.0};
    auto multiply = [&](cd c0, cd c1) {  // poly *= (c0 + c1 w)
      std::vector<cd> next(poly.size() + 1, 0.0);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i] += poly[i] * c0;
        next[i + 1] += poly[i] * c1;
      }
      poly = std::move(next);
    };
    for (int k = 0; k < N; ++k) multiply(1.0, 1.0);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const bool outside = (mask >> gi) & 1U;
      for (cd z : groups[gi].inside) {
        const cd zero = outside ? 1.0 / z : z;
        multiply(1.0, -zero);
      }
    }
    std::vector<double> g(poly.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      g[i] = poly[i].real();
      sum += g[i];
    }
    for (auto& v : g) v *= std::numbers::sqrt2 / sum;
    candidates.push_back({g, phase_nonlinearity(g)});
  }

  double best = candidates.front().nonlinearity;
  for (const auto& c : candidates) best = std::min(best, c.nonlinearity);
  // Each least-asymmetric filter and its time reverse tie (up to the phase
  // grid resolution); keep the one whose dominant tap sits in the first half.
  const Candidate* chosen = nullptr;
  for (const auto& c : candidates) {
    if (c.nonlinearity > best * (1.0 + 1e-3)) continue;
    auto peak = std::max_element(c.g.begin(), c.g.end(),
                                 [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (static_cast<std::size_t>(peak - c.g.begin()) < c.g.size() / 2) {
      chosen = &c;
      break;
    }
    if (!chosen) chosen = &c;
  }
  return chosen->g;
}

void validate_filter(const FilterPair& f, double tol) {
  const std::size_t L = f.length();
  require(L >= 2 && L % 2 == 0 && f.wavelet.size() == L, ErrorCode::Numerical,
          "filter '" + f.name + "': length must be even and shared");
  double sum_g = 0.0, sum_h = 0.0, eg = 0.0, eh = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    sum_g += f.scaling[l];
    sum_h += f.wavelet[l];
    eg += f.scaling[l] * f.scaling[l];
    eh += f.wavelet[l] * f.wavelet[l];
    const double mirror = (l % 2 == 0 ? 1.0 : -1.0) * f.scaling[L - 1 - l];
    require(std::abs(f.wavelet[l] - mirror) <= tol, ErrorCode::Numerical,
            "filter '" + f.name + "': quadrature-mirror relation violated");
  }
  require(std::abs(sum_h) <= tol, ErrorCode::Numerical, "filter '" + f.name + "': wavelet sum is not zero");
  require(std::abs(sum_g - std::numbers::sqrt2) <= tol, ErrorCode::Numerical,
          "filter '" + f.name + "': scaling sum is not sqrt(2)");
  require(std::abs(eg - 1.0) <= tol && std::abs(eh - 1.0) <= tol, ErrorCode::Numerical,
          "filter '" + f.name + "': filters are not unit energy");
  // Orthogonality to even shifts, which makes the one-level DWT orthonormal.
  for (std::size_t shift = 2; shift < L; shift += 2) {
    double acc = 0.0;
    for (std::size_t l = 0; l + shift < L; ++l) acc += f.scaling[l] * f.scaling[l + shift];
    require(std::abs(acc) <= tol, ErrorCode::Numerical,
            "filter '" + f.name + "': scaling filter not orthogonal to even shifts");
  }
}

FilterPair build_filter(std::string_view name) {
  const std::string key = upper(name);
  FilterPair f;
  if (key == "HAAR") {
    f.name = "HAAR";
    f.scaling = {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
  } else if (key == "LA8") {
    f.name = "LA8";
    f.scaling = least_asymmetric_scaling(4);
  } else {
    fail(ErrorCode::Unsupported, "unsupported filter '" + std::string(name) + "' (expected LA8 or HAAR)");
  }
  f.wavelet = wavelet_from_scaling(f.scaling);
  validate_filter(f);
  return f;
}

}  // namespace wavelink
