#pragma once

#include <bbmlab/errors.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bbm {

enum class GridKind { Torus, Line };

/// Floor division for signed integers.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

/// Uniform frequency lattice h*Z intersected with [-cutoff, cutoff].
///
/// Grid points are addressed by integer index i, frequency i*h. The spacing
/// is always 1/L for a positive integer L (L = 1 on the torus) so that the
/// unit blocks n + (-1/2, 1/2] are unions of whole grid cells.
class FrequencyGrid {
 public:
  static FrequencyGrid torus(std::int64_t cutoff) {
    if (cutoff < 1) throw std::invalid_argument("grid cutoff must be a positive integer");
    return FrequencyGrid(GridKind::Torus, cutoff, 1);
  }

  static FrequencyGrid line(std::int64_t cutoff, double spacing = 0.125) {
    if (cutoff < 1) throw std::invalid_argument("grid cutoff must be a positive integer");
    if (!(spacing > 0.0) || spacing > 1.0)
      throw std::invalid_argument("line grid spacing must lie in (0, 1]");
    const double inv = 1.0 / spacing;
    const auto subdiv = static_cast<std::int64_t>(std::llround(inv));
    if (std::abs(inv - static_cast<double>(subdiv)) > 1e-9 * inv)
      throw std::invalid_argument("line grid spacing must be 1/L for an integer L");
    return FrequencyGrid(GridKind::Line, cutoff, subdiv);
  }

  GridKind kind() const noexcept { return kind_; }
  bool is_torus() const noexcept { return kind_ == GridKind::Torus; }
  std::int64_t cutoff() const noexcept { return cutoff_; }
  /// Grid points per unit of frequency.
  std::int64_t subdivisions() const noexcept { return subdiv_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(subdiv_); }
  /// Riemann weight attached to one grid point (1 on the torus).
  double weight() const noexcept { return spacing(); }
  std::int64_t max_index() const noexcept { return cutoff_ * subdiv_; }
  std::int64_t size() const noexcept { return 2 * max_index() + 1; }

  bool contains(std::int64_t index) const noexcept {
    return index >= -max_index() && index <= max_index();
  }
  double frequency(std::int64_t index) const noexcept {
    return static_cast<double>(index) / static_cast<double>(subdiv_);
  }
  std::int64_t index_of_integer(std::int64_t n) const noexcept { return n * subdiv_; }

  /// The n with frequency(index) in n + (-1/2, 1/2].
  std::int64_t block_of(std::int64_t index) const noexcept {
    return ceil_div(2 * index - subdiv_, 2 * subdiv_);
  }

  FrequencyGrid with_cutoff(std::int64_t cutoff) const {
    return is_torus() ? torus(cutoff) : line(cutoff, spacing());
  }

  std::string describe() const {
    std::ostringstream os;
    if (is_torus())
      os << "torus(cutoff=" << cutoff_ << ")";
    else
      os << "line(cutoff=" << cutoff_ << ", h=1/" << subdiv_ << ")";
    return os.str();
  }

  bool operator==(const FrequencyGrid&) const = default;

 private:
  FrequencyGrid(GridKind kind, std::int64_t cutoff, std::int64_t subdiv)
      : kind_(kind), cutoff_(cutoff), subdiv_(subdiv) {}

  GridKind kind_;
  std::int64_t cutoff_;
  std::int64_t subdiv_;
};

}  // namespace bbm
