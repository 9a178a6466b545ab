#pragma once

#include <bbmlab/errors.hpp>
#include <bbmlab/fft.hpp>
#include <bbmlab/grid.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bbm {

using complex = std::complex<double>;

struct Entry {
  std::int64_t index;
  complex value;
};

/// Fourier data of one function on a FrequencyGrid.
///
/// Storage is sparse: a sorted list of grid indices with their coefficients.
/// Every index not listed has coefficient exactly zero, so [front, back] of
/// the index list is a sound support bound. Values are immutable once built.
class SpectralFunction {
 public:
  explicit SpectralFunction(FrequencyGrid grid) : grid_(grid) {}

  /// Duplicate indices are summed; exact zeros are dropped.
  static SpectralFunction from_entries(FrequencyGrid grid, std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    SpectralFunction f(grid);
    f.index_.reserve(entries.size());
    f.coeff_.reserve(entries.size());
    for (const auto& e : entries) {
      if (!grid.contains(e.index)) {
        std::ostringstream os;
        os << "index " << e.index << " lies outside " << grid.describe();
        throw SupportOverflow(os.str());
      }
      if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag()))
        throw std::invalid_argument("non-finite spectral coefficient");
      if (!f.index_.empty() && f.index_.back() == e.index)
        f.coeff_.back() += e.value;
      else {
        f.index_.push_back(e.index);
        f.coeff_.push_back(e.value);
      }
    }
    f.drop_zeros();
    return f;
  }

  /// values[j] is the coefficient of index j - grid.max_index().
  static SpectralFunction from_dense(FrequencyGrid grid, std::span<const complex> values) {
    if (static_cast<std::int64_t>(values.size()) != grid.size())
      throw std::invalid_argument("dense coefficient array does not match grid size");
    std::vector<Entry> entries;
    for (std::size_t j = 0; j < values.size(); ++j)
      if (values[j] != complex{})
        entries.push_back({static_cast<std::int64_t>(j) - grid.max_index(), values[j]});
    return from_entries(grid, std::move(entries));
  }

  static SpectralFunction delta(FrequencyGrid grid, std::int64_t index, complex value = 1.0) {
    return from_entries(grid, {{index, value}});
  }

  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::size_t nnz() const noexcept { return index_.size(); }
  bool empty() const noexcept { return index_.empty(); }
  std::span<const std::int64_t> indices() const noexcept { return index_; }
  std::span<const complex> values() const noexcept { return coeff_; }

  complex coeff(std::int64_t index) const {
    auto it = std::lower_bound(index_.begin(), index_.end(), index);
    if (it == index_.end() || *it != index) return {};
    return coeff_[static_cast<std::size_t>(it - index_.begin())];
  }

  /// Closed index range outside which all coefficients vanish.
  std::optional<std::pair<std::int64_t, std::int64_t>> support() const {
    if (empty()) return std::nullopt;
    return std::pair{index_.front(), index_.back()};
  }

  /// Largest |index| carrying a nonzero coefficient (0 for the zero function).
  std::int64_t max_abs_index() const noexcept {
    if (empty()) return 0;
    return std::max(-index_.front(), index_.back());
  }

  std::vector<complex> to_dense() const {
    std::vector<complex> out(static_cast<std::size_t>(grid_.size()));
    for (std::size_t j = 0; j < nnz(); ++j)
      out[static_cast<std::size_t>(index_[j] + grid_.max_index())] = coeff_[j];
    return out;
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& c : coeff_) m = std::max(m, std::abs(c));
    return m;
  }

  /// coeff(-i) == conj(coeff(i)) up to tol * max|coeff|.
  bool is_hermitian(double tol = 1e-12) const {
    const double scale = std::max(1.0, max_abs());
    for (std::size_t j = 0; j < nnz(); ++j)
      if (std::abs(coeff(-index_[j]) - std::conj(coeff_[j])) > tol * scale) return false;
    return true;
  }

  SpectralFunction restricted_to(std::int64_t max_abs_index) const {
    SpectralFunction out(grid_);
    for (std::size_t j = 0; j < nnz(); ++j)
      if (std::abs(index_[j]) <= max_abs_index) {
        out.index_.push_back(index_[j]);
        out.coeff_.push_back(coeff_[j]);
      }
    return out;
  }

  /// Same coefficients on a grid with a different cutoff (must still fit).
  SpectralFunction regridded(const FrequencyGrid& grid) const {
    if (grid.subdivisions() != grid_.subdivisions() || grid.kind() != grid_.kind())
      throw GridMismatch();
    SpectralFunction out(grid);
    if (!empty() && (!grid.contains(index_.front()) || !grid.contains(index_.back())))
      throw SupportOverflow("support does not fit the target grid");
    out.index_ = index_;
    out.coeff_ = coeff_;
    return out;
  }

  friend SpectralFunction operator*(complex a, const SpectralFunction& f) {
    SpectralFunction out(f.grid_);
    if (a == complex{}) return out;
    out.index_ = f.index_;
    out.coeff_.reserve(f.nnz());
    for (const auto& c : f.coeff_) out.coeff_.push_back(a * c);
    out.drop_zeros();
    return out;
  }

  friend SpectralFunction operator+(const SpectralFunction& f, const SpectralFunction& g) {
    return combine(f, g, 1.0);
  }
  friend SpectralFunction operator-(const SpectralFunction& f, const SpectralFunction& g) {
    return combine(f, g, -1.0);
  }

 private:
  void drop_zeros() {
    std::size_t w = 0;
    for (std::size_t j = 0; j < index_.size(); ++j)
      if (coeff_[j] != complex{}) {
        index_[w] = index_[j];
        coeff_[w] = coeff_[j];
        ++w;
      }
    index_.resize(w);
    coeff_.resize(w);
  }

  static SpectralFunction combine(const SpectralFunction& f, const SpectralFunction& g, double sign) {
    if (!(f.grid_ == g.grid_)) throw GridMismatch();
    SpectralFunction out(f.grid_);
    out.index_.reserve(f.nnz() + g.nnz());
    out.coeff_.reserve(f.nnz() + g.nnz());
    std::size_t a = 0, b = 0;
    while (a < f.nnz() || b < g.nnz()) {
      if (b == g.nnz() || (a < f.nnz() && f.index_[a] < g.index_[b])) {
        out.index_.push_back(f.index_[a]);
        out.coeff_.push_back(f.coeff_[a++]);
      } else if (a == f.nnz() || g.index_[b] < f.index_[a]) {
        out.index_.push_back(g.index_[b]);
        out.coeff_.push_back(sign * g.coeff_[b++]);
      } else {
        out.index_.push_back(f.index_[a]);
        out.coeff_.push_back(f.coeff_[a++] + sign * g.coeff_[b++]);
      }
    }
    out.drop_zeros();
    return out;
  }

  FrequencyGrid grid_;
  std::vector<std::int64_t> index_;
  std::vector<complex> coeff_;
};

inline void require_same_grid(const SpectralFunction& f, const SpectralFunction& g) {
  if (!(f.grid() == g.grid())) throw GridMismatch();
}

/// Wiener-algebra norm: sum |f(xi)| times the Riemann weight.
inline double fl1_norm(const SpectralFunction& f) {
  double s = 0.0;
  for (const auto& c : f.values()) s += std::abs(c);
  return s * f.grid().weight();
}

/// Plain l2 norm of the coefficients with the Riemann weight.
inline double l2_norm(const SpectralFunction& f) {
  double s = 0.0;
  for (const auto& c : f.values()) s += std::norm(c);
  return std::sqrt(s * f.grid().weight());
}

struct ConvolutionResult {
  SpectralFunction value;
  /// Upper bound on the weighted l1 mass of products that fell past the cutoff.
  double truncated_l1 = 0.0;
};

namespace detail {

inline ConvolutionResult convolve_impl(const SpectralFunction& f, const SpectralFunction& g,
                                       bool allow_truncation) {
  require_same_grid(f, g);
  const FrequencyGrid& grid = f.grid();
  if (f.empty() || g.empty()) return {SpectralFunction(grid), 0.0};
  const std::int64_t lo = f.indices().front() + g.indices().front();
  const std::int64_t hi = f.indices().back() + g.indices().back();
  const std::int64_t m = grid.max_index();
  if (!allow_truncation && (lo < -m || hi > m)) {
    std::ostringstream os;
    os << "convolution support [" << grid.frequency(lo) << ", " << grid.frequency(hi)
       << "] exceeds " << grid.describe();
    throw SupportOverflow(os.str());
  }
  const double w = grid.weight();
  const std::int64_t lo_c = std::max(lo, -m);
  const std::int64_t hi_c = std::min(hi, m);
  const auto fi = f.indices();
  const auto fv = f.values();
  const auto gi = g.indices();
  const auto gv = g.values();
  double dropped = 0.0;
  std::vector<Entry> out;

  const auto products = static_cast<std::int64_t>(f.nnz() * g.nnz());
  const std::int64_t width = hi_c - lo_c + 1;
  if (width > 0 && width <= 4 * products + 64) {
    std::vector<complex> acc(static_cast<std::size_t>(width));
    for (std::size_t a = 0; a < fi.size(); ++a)
      for (std::size_t b = 0; b < gi.size(); ++b) {
        const std::int64_t k = fi[a] + gi[b];
        if (k < lo_c || k > hi_c) {
          dropped += std::abs(fv[a]) * std::abs(gv[b]) * w;
          continue;
        }
        acc[static_cast<std::size_t>(k - lo_c)] += fv[a] * gv[b];
      }
    out.reserve(acc.size());
    for (std::int64_t k = 0; k < width; ++k)
      if (acc[static_cast<std::size_t>(k)] != complex{})
        out.push_back({k + lo_c, acc[static_cast<std::size_t>(k)] * w});
  } else {
    std::vector<Entry> pairs;
    pairs.reserve(static_cast<std::size_t>(products));
    for (std::size_t a = 0; a < fi.size(); ++a)
      for (std::size_t b = 0; b < gi.size(); ++b) {
        const std::int64_t k = fi[a] + gi[b];
        if (k < -m || k > m) {
          dropped += std::abs(fv[a]) * std::abs(gv[b]) * w;
          continue;
        }
        pairs.push_back({k, fv[a] * gv[b]});
      }
    std::sort(pairs.begin(), pairs.end(),
              [](const Entry& x, const Entry& y) { return x.index < y.index; });
    for (const auto& p : pairs) {
      if (!out.empty() && out.back().index == p.index)
        out.back().value += p.value;
      else
        out.push_back(p);
    }
    for (auto& e : out) e.value *= w;
  }
  return {SpectralFunction::from_entries(grid, std::move(out)), dropped};
}

}  // namespace detail

/// (f*g)(xi) = sum_eta f(eta) g(xi - eta), times h on line grids.
/// Throws SupportOverflow when the sumset of the supports leaves the grid.
inline SpectralFunction convolve(const SpectralFunction& f, const SpectralFunction& g) {
  return detail::convolve_impl(f, g, false).value;
}

/// As convolve, but products past the cutoff are discarded and their mass reported.
inline ConvolutionResult convolve_truncating(const SpectralFunction& f, const SpectralFunction& g) {
  return detail::convolve_impl(f, g, true);
}

/// Dense route through a zero-padded FFT; output truncated to the grid.
inline ConvolutionResult convolve_fft(const SpectralFunction& f, const SpectralFunction& g) {
  require_same_grid(f, g);
  const FrequencyGrid& grid = f.grid();
  const auto a = f.to_dense();
  const auto b = g.to_dense();
  const auto c = detail::linear_convolution(a, b);
  const std::int64_t m = grid.max_index();
  const double w = grid.weight();
  std::vector<complex> dense(static_cast<std::size_t>(grid.size()));
  double dropped = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const std::int64_t idx = static_cast<std::int64_t>(k) - 2 * m;
    if (idx < -m || idx > m)
      dropped += std::abs(c[k]) * w;
    else
      dense[static_cast<std::size_t>(idx + m)] = c[k] * w;
  }
  return {SpectralFunction::from_dense(grid, dense), dropped};
}

/// Pointwise product with a Fourier multiplier m(frequency).
template <class Multiplier>
SpectralFunction apply_multiplier(const SpectralFunction& f, Multiplier&& m) {
  std::vector<Entry> out;
  out.reserve(f.nnz());
  const auto idx = f.indices();
  const auto val = f.values();
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const complex c = complex(m(f.grid().frequency(idx[j]))) * val[j];
    if (c != complex{}) out.push_back({idx[j], c});
  }
  return SpectralFunction::from_entries(f.grid(), std::move(out));
}

/// Frequency measure of {xi : |f(xi)| > threshold}: a count on the torus,
/// count times h on the line.
inline double support_measure(const SpectralFunction& f, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("support threshold must be nonnegative");
  std::size_t count = 0;
  for (const auto& c : f.values())
    if (std::abs(c) > threshold) ++count;
  return static_cast<double>(count) * f.grid().weight();
}

/// Equispaced physical samples of a spectral function over one period.
struct PhysicalSamples {
  std::vector<complex> values;
  /// Quadrature weight per sample for the normalized measure dx/(2 pi).
  double weight = 0.0;

  double l2_norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return std::sqrt(s * weight);
  }
};

inline std::size_t min_alias_free_samples(const FrequencyGrid& grid) {
  return 2 * static_cast<std::size_t>(grid.size());
}

/// Synthesis g(x_j) = sum_xi f(xi) e^{i xi x_j} (times h on the line) at
/// x_j = 2 pi j / (h n). With the weight 1/(h n) the sample L2 norm matches
/// l2_norm(f) exactly for alias-free n.
inline PhysicalSamples to_physical(const SpectralFunction& f, std::size_t n_samples) {
  const FrequencyGrid& grid = f.grid();
  if (n_samples < min_alias_free_samples(grid)) {
    std::ostringstream os;
    os << "n_samples = " << n_samples << " aliases on " << grid.describe() << " (need >= "
       << min_alias_free_samples(grid) << ")";
    throw Undersampling(os.str());
  }
  const auto n = static_cast<std::int64_t>(n_samples);
  std::vector<complex> data(n_samples);
  const double scale = grid.weight();
  const auto idx = f.indices();
  const auto val = f.values();
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const std::int64_t slot = ((idx[j] % n) + n) % n;
    data[static_cast<std::size_t>(slot)] += val[j] * scale;
  }
  detail::dft_inplace(data, +1);
  return {std::move(data), 1.0 / (grid.spacing() * static_cast<double>(n))};
}

}  // namespace bbm
