#pragma once

#include <bbmlab/errors.hpp>
#include <bbmlab/spectral_function.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bbm {

/// Picard constant c in |U_k[u0](t)|_X <= (c t)^{k-1} |u0|_{FL1}^{k-1} |u0|_X,
/// calibrated once as the smallest constant valid on the training set
/// (phi_{0,N} data for N = 16..1024 on the inflation schedule, plus random
/// band-limited data) and rounded up. The proven worst case is 1/4.
inline constexpr double kPicardConstant = 0.09;
inline constexpr double kPicardConstantProven = 0.25;

/// Support-growth constant: |supp U_k[phi_{0,N}]| <= C^k on the torus.
inline constexpr double kSupportConstant = 6.0;

/// Data of the inflation construction: R on I_N = [-N-1, -N+1] U [N-1, N+1].
inline SpectralFunction make_phi0N(std::int64_t N, double R, const FrequencyGrid& grid) {
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (N + 1 > grid.cutoff()) {
    std::ostringstream os;
    os << "I_N with N = " << N << " does not fit " << grid.describe();
    throw SupportOverflow(os.str());
  }
  if (R == 0.0) return SpectralFunction(grid);
  std::vector<Entry> entries;
  const std::int64_t l = grid.subdivisions();
  for (std::int64_t i = (N - 1) * l; i <= (N + 1) * l; ++i) {
    entries.push_back({i, R});
    // For N = 1 the two intervals meet at 0; the indicator is still 1 there.
    if (-i < (N - 1) * l) entries.push_back({-i, R});
  }
  return SpectralFunction::from_entries(grid, std::move(entries));
}

/// R = N^r, T = N^{-eps}.
struct Schedule {
  double s = 0.0;
  double r = 0.0;
  double eps = 0.0;
  double R = 0.0;
  double T = 0.0;
  /// Exponent of |u_{0,N} - u0|_{X_s} ~ R N^s.
  double distance_slope() const { return r + s; }
  /// Exponent of the second-iterate lower bound R^2 T.
  double inflation_slope() const { return 2.0 * r - eps; }
};

/// Rejects exponents that violate r + s < 0, r < eps, eps < 2r, eps > 0.
inline void validate_exponents(double s, double r, double eps) {
  if (!(s < 0.0)) throw InfeasibleSchedule("s < 0 is required (got s = " + std::to_string(s) + ")");
  if (!(r + s < 0.0)) throw InfeasibleSchedule("condition r + s < 0 violated");
  if (!(eps > 0.0)) throw InfeasibleSchedule("condition eps > 0 violated");
  if (!(r < eps)) throw InfeasibleSchedule("condition -eps + r < 0 violated");
  if (!(eps < 2.0 * r)) throw InfeasibleSchedule("condition -eps + 2r > 0 violated");
}

inline Schedule schedule(double s, std::int64_t N, std::optional<double> r = std::nullopt,
                         std::optional<double> eps = std::nullopt) {
  const double rr = r.value_or(-s / 3.0);
  const double ee = eps.value_or(-s / 2.0);
  validate_exponents(s, rr, ee);
  if (N < 1) throw std::invalid_argument("N must be positive");
  const double n = static_cast<double>(N);
  return {s, rr, ee, std::pow(n, rr), std::pow(n, -ee)};
}

/// The five sufficient conditions for inflation by factor m at one N, with
/// "<<" and ">>" read as a factor-2 margin and T << 1 as T <= 0.1.
struct ConditionFlags {
  double distance_bound = 0.0;  ///< C R N^s, must be < 1/m
  double tr = 0.0;              ///< T R
  double tr2 = 0.0;             ///< T R^2
  double t = 0.0;
  bool i = false;    ///< C R N^s < 1/m
  bool ii = false;   ///< T R << 1
  bool iii = false;  ///< T R^2 >> m
  bool iv = false;   ///< T R^2 >> T^2 R^3, equivalent to (ii)
  bool v = false;    ///< 0 < T << 1

  bool all() const { return i && ii && iii && iv && v; }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    if (!i) out.emplace_back("i");
    if (!ii) out.emplace_back("ii");
    if (!iii) out.emplace_back("iii");
    if (!iv) out.emplace_back("iv");
    if (!v) out.emplace_back("v");
    return out;
  }
};

inline constexpr double kMuchLessMargin = 2.0;
inline constexpr double kSmallTime = 0.1;

inline ConditionFlags check_conditions(double s, double r, double eps, std::int64_t N, double m, double C) {
  validate_exponents(s, r, eps);
  const double n = static_cast<double>(N);
  const double R = std::pow(n, r);
  const double T = std::pow(n, -eps);
  ConditionFlags f;
  f.distance_bound = C * R * std::pow(n, s);
  f.tr = T * R;
  f.tr2 = T * R * R;
  f.t = T;
  f.i = f.distance_bound < 1.0 / m;
  f.ii = kMuchLessMargin * f.tr <= 1.0;
  f.iii = f.tr2 >= kMuchLessMargin * m;
  f.iv = f.ii;
  f.v = T > 0.0 && T <= kSmallTime;
  return f;
}

}  // namespace bbm
