#pragma once

#include <bbmlab/errors.hpp>
#include <bbmlab/spectral_function.hpp>

#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

// Spectrum CSV: header "xi,re,im", one row per nonzero frequency, strictly
// increasing xi. Frequencies that do not appear are zero.

namespace bbm {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    if (s == "inf" || s == "Inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    return std::nullopt;
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  return out;
}

}  // namespace detail

struct SpectrumRow {
  double xi;
  complex value;
  std::size_t line;
};

/// Parses the rows of a spectrum file without committing to a grid.
inline std::vector<SpectrumRow> read_spectrum_rows(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<SpectrumRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    if (!header) {
      if (t != "xi,re,im") throw ParseError(lineno, "expected header 'xi,re,im'");
      header = true;
      continue;
    }
    const auto fields = detail::split(t, ',');
    if (fields.size() != 3) throw ParseError(lineno, "expected 3 comma-separated fields");
    const auto xi = detail::parse_double(fields[0]);
    const auto re = detail::parse_double(fields[1]);
    const auto im = detail::parse_double(fields[2]);
    if (!xi || !re || !im) throw ParseError(lineno, "malformed number");
    if (!std::isfinite(*xi) || !std::isfinite(*re) || !std::isfinite(*im))
      throw ParseError(lineno, "non-finite value");
    if (!rows.empty() && !(*xi > rows.back().xi))
      throw ParseError(lineno, "frequencies must be strictly increasing");
    rows.push_back({*xi, complex(*re, *im), lineno});
  }
  if (!header) throw ParseError(lineno + 1, "missing header 'xi,re,im'");
  return rows;
}

/// Loads a spectrum onto `grid`, or onto an inferred grid when none is given:
/// a torus if every frequency is an integer, otherwise a line with spacing 1/8.
/// The inferred cutoff is the smallest integer covering all rows.
inline SpectralFunction read_spectrum(std::istream& in, std::optional<FrequencyGrid> grid = std::nullopt) {
  const auto rows = read_spectrum_rows(in);
  if (!grid) {
    bool integral = true;
    double max_abs = 1.0;
    for (const auto& r : rows) {
      integral = integral && r.xi == std::round(r.xi);
      max_abs = std::max(max_abs, std::abs(r.xi));
    }
    const auto cutoff = static_cast<std::int64_t>(std::ceil(max_abs));
    grid = integral ? FrequencyGrid::torus(cutoff) : FrequencyGrid::line(cutoff);
  }
  std::vector<Entry> entries;
  entries.reserve(rows.size());
  const double l = static_cast<double>(grid->subdivisions());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const double scaled = rows[j].xi * l;
    const auto idx = static_cast<std::int64_t>(std::llround(scaled));
    if (std::abs(scaled - static_cast<double>(idx)) > 1e-9 * std::max(1.0, std::abs(scaled)))
      throw ParseError(rows[j].line, "frequency is not a grid point of " + grid->describe());
    if (!grid->contains(idx)) throw ParseError(rows[j].line, "frequency outside " + grid->describe());
    entries.push_back({idx, rows[j].value});
  }
  return SpectralFunction::from_entries(*grid, std::move(entries));
}

inline void write_spectrum(std::ostream& out, const SpectralFunction& f) {
  const auto old = out.precision();
  out << "xi,re,im\n" << std::setprecision(17);
  const auto idx = f.indices();
  const auto val = f.values();
  for (std::size_t j = 0; j < idx.size(); ++j)
    out << f.grid().frequency(idx[j]) << ',' << val[j].real() << ',' << val[j].imag() << '\n';
  out.precision(old);
}

}  // namespace bbm
