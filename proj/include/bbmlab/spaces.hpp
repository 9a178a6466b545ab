#pragma once

#include <bbmlab/spectral_function.hpp>
#include <bbmlab/spectrum_io.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bbm {

enum class Family { FourierLebesgue, FourierAmalgam, Modulation, WienerAmalgam };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One of FL^q_s, w^{p,q}_s (Fourier amalgam), M^{2,q}_s, W^{2,q}_s, optionally
/// with homogeneous weights |n|^s in place of <n>^s.
///
/// Text form is `family:p:q:s[:hom]` with family in {fl, fa, mo, wa} and
/// `inf` accepted for p and q, e.g. `fa:2:1:-0.5` or `wa:2:4:-1:hom`.
struct SpaceSpec {
  Family family = Family::FourierAmalgam;
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;
  bool homogeneous = false;

  static SpaceSpec fourier_lebesgue(double q, double s, bool hom = false) {
    return {Family::FourierLebesgue, q, q, s, hom};
  }
  static SpaceSpec fourier_amalgam(double p, double q, double s, bool hom = false) {
    return {Family::FourierAmalgam, p, q, s, hom};
  }
  static SpaceSpec modulation(double q, double s, bool hom = false) {
    return {Family::Modulation, 2.0, q, s, hom};
  }
  static SpaceSpec wiener_amalgam(double q, double s, bool hom = false) {
    return {Family::WienerAmalgam, 2.0, q, s, hom};
  }

  SpaceSpec with_s(double new_s) const {
    SpaceSpec out = *this;
    out.s = new_s;
    return out;
  }

  void validate() const {
    auto exponent_ok = [](double e) { return e >= 1.0 && !std::isnan(e); };
    if (!exponent_ok(p) || !exponent_ok(q)) throw std::invalid_argument("exponents must lie in [1, inf]");
    if (!std::isfinite(s)) throw std::invalid_argument("regularity s must be finite");
    if ((family == Family::Modulation || family == Family::WienerAmalgam) && p != 2.0)
      throw std::invalid_argument("modulation and Wiener amalgam norms are implemented for p = 2 only");
  }

  /// <n>^s, or |n|^s for homogeneous spaces (0 at n = 0: that band is dropped).
  double weight(double n) const {
    if (homogeneous) return n == 0.0 ? 0.0 : std::pow(std::abs(n), s);
    return std::pow(1.0 + n * n, 0.5 * s);
  }

  static SpaceSpec parse(std::string_view text) {
    const auto parts = detail::split(text, ':');
    if (parts.size() != 4 && parts.size() != 5)
      throw std::invalid_argument("space spec must read family:p:q:s[:hom]");
    SpaceSpec spec;
    const auto fam = detail::trim(parts[0]);
    if (fam == "fl")
      spec.family = Family::FourierLebesgue;
    else if (fam == "fa")
      spec.family = Family::FourierAmalgam;
    else if (fam == "mo")
      spec.family = Family::Modulation;
    else if (fam == "wa")
      spec.family = Family::WienerAmalgam;
    else
      throw std::invalid_argument("unknown space family '" + std::string(fam) + "'");
    const auto p = detail::parse_double(parts[1]);
    const auto q = detail::parse_double(parts[2]);
    const auto s = detail::parse_double(parts[3]);
    if (!p || !q || !s) throw std::invalid_argument("malformed number in space spec");
    spec.p = *p;
    spec.q = *q;
    spec.s = *s;
    if (parts.size() == 5) {
      if (detail::trim(parts[4]) != "hom") throw std::invalid_argument("space spec suffix must be 'hom'");
      spec.homogeneous = true;
    }
    spec.validate();
    return spec;
  }

  std::string to_string() const {
    static constexpr std::array<const char*, 4> names{"fl", "fa", "mo", "wa"};
    auto num = [](double v) {
      if (std::isinf(v)) return std::string("inf");
      std::ostringstream os;
      os << v;
      return os.str();
    };
    std::string out = names[static_cast<std::size_t>(family)];
    out += ":" + num(p) + ":" + num(q) + ":" + num(s);
    if (homogeneous) out += ":hom";
    return out;
  }

  bool operator==(const SpaceSpec&) const = default;
};

/// Running l^p (or sup) accumulator.
class LpAccumulator {
 public:
  explicit LpAccumulator(double p) : p_(p) {}
  void add(double v) {
    if (std::isinf(p_))
      acc_ = std::max(acc_, v);
    else
      acc_ += std::pow(v, p_);
  }
  double result() const { return std::isinf(p_) ? acc_ : std::pow(acc_, 1.0 / p_); }

 private:
  double p_;
  double acc_ = 0.0;
};

enum class PartitionKind { Sharp, Triangle };

struct BandWeight {
  std::int64_t band;
  double weight;
};

/// Frequency-uniform partition sigma_n(xi) = sigma_0(xi - n), sum_n sigma_n = 1.
/// Sharp: indicator of n + (-1/2, 1/2]. Triangle: hat max(0, 1 - |xi - n|).
class PartitionOfUnity {
 public:
  explicit PartitionOfUnity(PartitionKind kind = PartitionKind::Triangle) : kind_(kind) {}

  static PartitionOfUnity build(PartitionKind kind) { return PartitionOfUnity(kind); }

  PartitionKind kind() const noexcept { return kind_; }

  double operator()(std::int64_t n, double xi) const {
    const double d = xi - static_cast<double>(n);
    if (kind_ == PartitionKind::Sharp) return (d > -0.5 && d <= 0.5) ? 1.0 : 0.0;
    return std::max(0.0, 1.0 - std::abs(d));
  }

  /// The (at most two) bands whose weight is nonzero at a grid point.
  template <class Visitor>
  void for_each_band(const FrequencyGrid& grid, std::int64_t index, Visitor&& visit) const {
    const std::int64_t l = grid.subdivisions();
    if (kind_ == PartitionKind::Sharp) {
      visit(BandWeight{grid.block_of(index), 1.0});
      return;
    }
    const std::int64_t n0 = floor_div(index, l);
    const std::int64_t rem = index - n0 * l;
    if (rem == 0) {
      visit(BandWeight{n0, 1.0});
      return;
    }
    const double frac = static_cast<double>(rem) / static_cast<double>(l);
    visit(BandWeight{n0, 1.0 - frac});
    visit(BandWeight{n0 + 1, frac});
  }

 private:
  PartitionKind kind_;
};

inline std::size_t default_wiener_samples(const FrequencyGrid& grid) {
  return 8 * static_cast<std::size_t>(grid.size());
}

/// sigma_n(D) f for every band n that carries nonzero data, ordered by n.
inline std::map<std::int64_t, SpectralFunction> band_pieces(const SpectralFunction& f,
                                                            const PartitionOfUnity& partition) {
  std::map<std::int64_t, std::vector<Entry>> raw;
  const auto idx = f.indices();
  const auto val = f.values();
  for (std::size_t j = 0; j < idx.size(); ++j)
    partition.for_each_band(f.grid(), idx[j], [&](BandWeight b) {
      raw[b.band].push_back({idx[j], b.weight * val[j]});
    });
  std::map<std::int64_t, SpectralFunction> out;
  for (auto& [n, entries] : raw) out.emplace(n, SpectralFunction::from_entries(f.grid(), std::move(entries)));
  return out;
}

/// || || chi_{n+Q1} f ||_{L^p} w(n) ||_{l^q_n}.
inline double fourier_amalgam_norm(const SpectralFunction& f, const SpaceSpec& spec) {
  spec.validate();
  const auto& grid = f.grid();
  const double h = grid.weight();
  std::map<std::int64_t, LpAccumulator> blocks;
  const auto idx = f.indices();
  const auto val = f.values();
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const auto n = grid.block_of(idx[j]);
    auto it = blocks.try_emplace(n, spec.p).first;
    it->second.add(std::abs(val[j]));
  }
  LpAccumulator outer(spec.q);
  for (const auto& [n, block] : blocks) {
    if (spec.homogeneous && n == 0) continue;
    const double inner = std::isinf(spec.p) ? block.result() : block.result() * std::pow(h, 1.0 / spec.p);
    outer.add(inner * spec.weight(static_cast<double>(n)));
  }
  return outer.result();
}

/// || f(xi) w(xi) ||_{L^q}, weights evaluated at the frequency itself.
inline double fourier_lebesgue_norm(const SpectralFunction& f, const SpaceSpec& spec) {
  spec.validate();
  const auto& grid = f.grid();
  LpAccumulator acc(spec.q);
  const auto idx = f.indices();
  const auto val = f.values();
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (spec.homogeneous && idx[j] == 0) continue;
    acc.add(std::abs(val[j]) * spec.weight(grid.frequency(idx[j])));
  }
  const double r = acc.result();
  return std::isinf(spec.q) ? r : r * std::pow(grid.weight(), 1.0 / spec.q);
}

/// || ||box_n f||_{L^2} w(n) ||_{l^q_n}; the L^2 norm is taken on the
/// Fourier side (Plancherel).
inline double modulation_norm(const SpectralFunction& f, const SpaceSpec& spec,
                              const PartitionOfUnity& partition = PartitionOfUnity{}) {
  spec.validate();
  LpAccumulator outer(spec.q);
  for (const auto& [n, piece] : band_pieces(f, partition)) {
    if (spec.homogeneous && n == 0) continue;
    outer.add(l2_norm(piece) * spec.weight(static_cast<double>(n)));
  }
  return outer.result();
}

/// || || box_n f(x) w(n) ||_{l^q_n} ||_{L^2_x}, with each band piece
/// synthesized at n_samples equispaced points.
inline double wiener_amalgam_norm(const SpectralFunction& f, const SpaceSpec& spec,
                                  const PartitionOfUnity& partition, std::size_t n_samples) {
  spec.validate();
  if (n_samples < min_alias_free_samples(f.grid()))
    throw Undersampling("Wiener amalgam norm needs at least " +
                        std::to_string(min_alias_free_samples(f.grid())) + " samples");
  const auto pieces = band_pieces(f, partition);
  std::vector<double> acc(n_samples, 0.0);
  const double weight = 1.0 / (f.grid().spacing() * static_cast<double>(n_samples));
  const bool sup = std::isinf(spec.q);
  for (const auto& [n, piece] : pieces) {
    if (spec.homogeneous && n == 0) continue;
    const double w = spec.weight(static_cast<double>(n));
    const auto samples = to_physical(piece, n_samples);
    for (std::size_t j = 0; j < n_samples; ++j) {
      const double v = std::abs(samples.values[j]) * w;
      if (sup)
        acc[j] = std::max(acc[j], v);
      else
        acc[j] += std::pow(v, spec.q);
    }
  }
  double total = 0.0;
  for (double a : acc) {
    const double fx = sup ? a : std::pow(a, 1.0 / spec.q);
    total += fx * fx;
  }
  return std::sqrt(total * weight);
}

inline double wiener_amalgam_norm(const SpectralFunction& f, const SpaceSpec& spec,
                                  const PartitionOfUnity& partition = PartitionOfUnity{}) {
  return wiener_amalgam_norm(f, spec, partition, default_wiener_samples(f.grid()));
}

/// (sum <xi>^{2s} |f(xi)|^2 h)^{1/2}.
inline double sobolev_norm(const SpectralFunction& f, double s) {
  return fourier_lebesgue_norm(f, SpaceSpec::fourier_lebesgue(2.0, s));
}

/// Dispatches on spec.family with the default Triangle partition.
inline double space_norm(const SpectralFunction& f, const SpaceSpec& spec,
                         const PartitionOfUnity& partition = PartitionOfUnity{}) {
  spec.validate();
  switch (spec.family) {
    case Family::FourierLebesgue:
      if (spec.p != spec.q) throw std::invalid_argument("Fourier-Lebesgue spec needs p == q");
      return fourier_lebesgue_norm(f, spec);
    case Family::FourierAmalgam:
      return fourier_amalgam_norm(f, spec);
    case Family::Modulation:
      return modulation_norm(f, spec, partition);
    case Family::WienerAmalgam:
      return wiener_amalgam_norm(f, spec, partition);
  }
  throw std::invalid_argument("unknown space family");
}

/// The l^q sum of `spec` restricted to the single band n0.
inline double band_restricted_norm(const SpectralFunction& f, const SpaceSpec& spec, std::int64_t n0,
                                   const PartitionOfUnity& partition = PartitionOfUnity{}) {
  spec.validate();
  if (spec.homogeneous && n0 == 0) return 0.0;
  const auto& grid = f.grid();
  const auto idx = f.indices();
  const auto val = f.values();
  switch (spec.family) {
    case Family::FourierAmalgam: {
      LpAccumulator inner(spec.p);
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (grid.block_of(idx[j]) == n0) inner.add(std::abs(val[j]));
      const double r = std::isinf(spec.p) ? inner.result() : inner.result() * std::pow(grid.weight(), 1.0 / spec.p);
      return r * spec.weight(static_cast<double>(n0));
    }
    case Family::FourierLebesgue: {
      LpAccumulator inner(spec.q);
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (grid.block_of(idx[j]) == n0 && !(spec.homogeneous && idx[j] == 0))
          inner.add(std::abs(val[j]) * spec.weight(grid.frequency(idx[j])));
      return std::isinf(spec.q) ? inner.result() : inner.result() * std::pow(grid.weight(), 1.0 / spec.q);
    }
    case Family::Modulation:
    case Family::WienerAmalgam: {
      // For a single band the l^q sum is trivial and L^2_x is Plancherel.
      double s = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j)
        partition.for_each_band(grid, idx[j], [&](BandWeight b) {
          if (b.band == n0) s += std::norm(b.weight * val[j]);
        });
      return std::sqrt(s * grid.weight()) * spec.weight(static_cast<double>(n0));
    }
  }
  throw std::invalid_argument("unknown space family");
}

}  // namespace bbm
