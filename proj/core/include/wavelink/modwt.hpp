#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavelink {

/// Orthonormal two-channel filter bank in DWT normalization.
///
/// `scaling` is the low-pass (father) filter g, `wavelet` the high-pass
/// (mother) filter h, related by h_l = (-1)^l g_{L-1-l}.
struct FilterPair {
  std::string name;
  std::vector<double> scaling;
  std::vector<double> wavelet;

  std::size_t length() const { return scaling.size(); }
};

/// Supported names: "LA8" and "HAAR" (case-insensitive).
FilterPair build_filter(std::string_view name);

/// Daubechies least-asymmetric scaling filter with `vanishing_moments` zero
/// moments (length 2 * vanishing_moments), built by spectral factorization
/// and choosing the root set with the smallest deviation from linear phase.
std::vector<double> least_asymmetric_scaling(int vanishing_moments);

/// Throws Error(Numerical) if the filter breaks any orthonormality identity
/// by more than `tol`.
void validate_filter(const FilterPair& filter, double tol = 1e-12);

enum class BoundaryMode { Periodic, Brickwall, Reflection };

std::string_view to_string(BoundaryMode mode);
BoundaryMode parse_boundary(std::string_view text);

/// MODWT coefficients of one series.
///
/// `details[j-1]` holds the level-j wavelet coefficients and `smooth` the
/// level-J scaling coefficients, all of the input length. `nonboundary[j-1][k]`
/// is 1 where the coefficient is kept by downstream statistics.
struct Decomposition {
  int levels = 0;
  std::vector<std::vector<double>> details;
  std::vector<double> smooth;
  BoundaryMode boundary = BoundaryMode::Periodic;
  std::vector<std::vector<std::uint8_t>> nonboundary;
  FilterPair filter;

  std::size_t length() const { return smooth.size(); }
  std::span<const double> detail(int level) const { return details.at(static_cast<std::size_t>(level - 1)); }
  std::span<const std::uint8_t> mask(int level) const {
    return nonboundary.at(static_cast<std::size_t>(level - 1));
  }
};

/// floor(log2(n)), the deepest admissible level.
int max_level(std::size_t n);

/// Number of level-j MODWT coefficients touched by the circular wrap,
/// L_j = (2^j - 1)(L - 1) + 1.
std::size_t boundary_width(int level, std::size_t filter_length);

/// Maximal-overlap DWT by the pyramid algorithm.
///
/// Reflection extends the series symmetrically to 2n, transforms it
/// periodically and keeps the first n coefficients. Brickwall is the periodic
/// transform with the first L_j - 1 coefficients of each level masked out.
Decomposition modwt(std::span<const double> x, int levels, const FilterPair& filter,
                    BoundaryMode boundary = BoundaryMode::Periodic);

/// Additive multiresolution components: `details[j-1]` is D_j and `smooth`
/// is S_J, with sum_j D_j + S_J == x. Periodic decompositions only.
struct Mra {
  std::vector<std::vector<double>> details;
  std::vector<double> smooth;
};

Mra mra(const Decomposition& dec);

/// Sum of the MRA components, i.e. the inverse MODWT.
std::vector<double> mra_reconstruct(const Decomposition& dec);

/// Count of kept coefficients per level.
std::vector<std::size_t> nonboundary_counts(const Decomposition& dec);

/// Decimated DWT-normalized level-j coefficients, 2^{j/2} W_j(2^j (k+1) - 1)
/// for k < floor(n / 2^j). Periodic decompositions only.
std::vector<double> dyadic_coefficients(const Decomposition& dec, int level);

}  // namespace wavelink
