#pragma once

#include <bbmlab/errors.hpp>
#include <bbmlab/fft.hpp>
#include <bbmlab/quadrature.hpp>
#include <bbmlab/spectral_function.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

// BBM in multiplier form. The free group is U(t) = exp(i t phi(D)) and the
// mild solution is
//
//   u(t) = U(t) u0 - (i/2) int_0^t U(t - tau) phi(D) u(tau)^2 dtau,
//
// i.e. u_t = i phi(D) (u - u^2/2). This is the BBM flow after the symmetry
// u(x, t) -> -u(-x, t); both conserve E(u) = sum (1 + xi^2) |u^(xi)|^2.

namespace bbm {

inline constexpr complex kImag{0.0, 1.0};

/// phi(xi) = xi / (1 + xi^2). Odd, |phi| <= 1/2.
constexpr double phi(double xi) noexcept { return xi / (1.0 + xi * xi); }

/// exp(i t phi(D)) f.
inline SpectralFunction linear_propagate(const SpectralFunction& f, double t) {
  return apply_multiplier(f, [t](double xi) { return std::polar(1.0, t * phi(xi)); });
}

/// exp(i t phi(D)) phi(D) f.
inline SpectralFunction propagate_phi(const SpectralFunction& f, double t) {
  return apply_multiplier(f, [t](double xi) { return phi(xi) * std::polar(1.0, t * phi(xi)); });
}

/// E(u) = sum (1 + xi^2) |u^(xi)|^2 h, conserved by the flow for real data.
inline double energy(const SpectralFunction& f) {
  double e = 0.0;
  const auto idx = f.indices();
  const auto val = f.values();
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const double xi = f.grid().frequency(idx[j]);
    e += (1.0 + xi * xi) * std::norm(val[j]);
  }
  return e * f.grid().weight();
}

using TimeFunction = std::function<SpectralFunction(double)>;

struct DuhamelResult {
  SpectralFunction value;
  /// FL1 change between the last two node doublings.
  double quad_error = 0.0;
  std::size_t panels = 1;
};

namespace detail {

inline bool quad_converged(double change, const SpectralFunction& value, double tol) {
  return change <= tol * std::max(1.0, fl1_norm(value));
}

}  // namespace detail

/// N(u, v)(t) = int_0^t U(t - tau) phi(D) (u v)(tau) dtau by composite
/// Gauss-Legendre, doubling the panel count until the FL1 change is below tol.
inline DuhamelResult duhamel(const TimeFunction& u, const TimeFunction& v, double t,
                             const QuadratureSpec& quad = {}) {
  if (!(t >= 0.0)) throw std::invalid_argument("duhamel needs t >= 0");
  const GaussLegendre rule(quad.base_nodes);
  auto evaluate = [&](std::size_t panels) {
    const auto first = u(0.0);
    SpectralFunction acc(first.grid());
    if (t == 0.0) return acc;
    for (const auto& node : composite_nodes(0.0, t, panels, rule)) {
      const auto product = convolve(u(node.t), v(node.t));
      acc = acc + complex(node.w) * propagate_phi(product, t - node.t);
    }
    return acc;
  };
  std::size_t panels = 1;
  auto coarse = evaluate(panels);
  for (std::size_t level = 0; level < quad.max_doublings; ++level) {
    panels *= 2;
    auto fine = evaluate(panels);
    const double change = fl1_norm(fine - coarse);
    if (detail::quad_converged(change, fine, quad.tol)) return {std::move(fine), change, panels};
    coarse = std::move(fine);
  }
  std::ostringstream os;
  os << "Duhamel quadrature did not converge after " << panels << " panels";
  throw QuadratureNonConvergence(os.str());
}

/// Evaluates Picard iterates U_k[u0](t) with one fixed composite rule. Inner
/// iterates needed at quadrature nodes are memoized per engine, so an engine
/// is confined to one evaluation and never shared between threads.
class PicardEngine {
 public:
  PicardEngine(SpectralFunction u0, std::size_t panels, const GaussLegendre& rule)
      : u0_(std::move(u0)), panels_(panels), rule_(rule) {}

  const SpectralFunction& initial() const noexcept { return u0_; }

  SpectralFunction iterate(std::size_t k, double t) {
    if (k == 0) throw std::invalid_argument("Picard index starts at 1");
    if (k == 1) return linear_propagate(u0_, t);
    const auto key = std::pair{k, t};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    SpectralFunction acc(u0_.grid());
    if (t > 0.0) {
      for (const auto& node : composite_nodes(0.0, t, panels_, rule_)) {
        SpectralFunction products(u0_.grid());
        // Ordered pairs (k1, k2) and (k2, k1) contribute the same product.
        for (std::size_t k1 = 1; 2 * k1 <= k; ++k1) {
          const std::size_t k2 = k - k1;
          const auto term = convolve(iterate(k1, node.t), iterate(k2, node.t));
          products = products + (k1 == k2 ? term : complex(2.0) * term);
        }
        acc = acc + complex(node.w) * propagate_phi(products, t - node.t);
      }
      acc = complex(0.0, -0.5) * acc;
    }
    return memo_.emplace(key, std::move(acc)).first->second;
  }

 private:
  SpectralFunction u0_;
  std::size_t panels_;
  const GaussLegendre& rule_;
  std::map<std::pair<std::size_t, double>, SpectralFunction> memo_;
};

struct PicardResult {
  std::size_t k = 1;
  double t = 0.0;
  SpectralFunction value;
  double quad_error = 0.0;
  /// Only meaningful for series sums.
  double tail_bound = 0.0;
};

namespace detail {

inline void require_iterate_fits(const SpectralFunction& u0, std::size_t k) {
  const auto need = static_cast<std::int64_t>(k) * u0.max_abs_index();
  if (need > u0.grid().max_index()) {
    std::ostringstream os;
    os << "U_" << k << " needs frequencies up to " << u0.grid().frequency(need) << " but "
       << u0.grid().describe() << " stops at " << u0.grid().cutoff();
    throw SupportOverflow(os.str());
  }
}

}  // namespace detail

/// U_1, ..., U_K at time t. Every term is computed with panel counts 1, 2, 4, ...
/// until all K terms change by less than quad.tol in FL1.
inline std::vector<PicardResult> picard_terms(const SpectralFunction& u0, std::size_t kmax, double t,
                                              const QuadratureSpec& quad = {}) {
  if (kmax == 0) throw std::invalid_argument("Picard index starts at 1");
  if (!(t >= 0.0)) throw std::invalid_argument("Picard iterates need t >= 0");
  detail::require_iterate_fits(u0, kmax);
  const GaussLegendre rule(quad.base_nodes);
  auto evaluate = [&](std::size_t panels) {
    PicardEngine engine(u0, panels, rule);
    std::vector<SpectralFunction> out;
    for (std::size_t k = 1; k <= kmax; ++k) out.push_back(engine.iterate(k, t));
    return out;
  };
  std::size_t panels = 1;
  auto coarse = evaluate(panels);
  if (kmax == 1 || t == 0.0) {
    std::vector<PicardResult> out;
    for (std::size_t k = 1; k <= kmax; ++k) out.push_back({k, t, coarse[k - 1], 0.0, 0.0});
    return out;
  }
  for (std::size_t level = 0; level < quad.max_doublings; ++level) {
    panels *= 2;
    auto fine = evaluate(panels);
    std::vector<PicardResult> out;
    bool converged = true;
    for (std::size_t k = 1; k <= kmax; ++k) {
      const double change = k == 1 ? 0.0 : fl1_norm(fine[k - 1] - coarse[k - 1]);
      converged = converged && detail::quad_converged(change, fine[k - 1], quad.tol);
      out.push_back({k, t, fine[k - 1], change, 0.0});
    }
    if (converged) return out;
    coarse = std::move(fine);
  }
  std::ostringstream os;
  os << "Picard quadrature did not converge after " << panels << " panels";
  throw QuadratureNonConvergence(os.str());
}

/// U_k[u0](t) = -(i/2) sum_{k1+k2=k} N(U_k1, U_k2)(t), U_1 = U(t) u0.
inline PicardResult picard_iterate(const SpectralFunction& u0, std::size_t k, double t,
                                   const QuadratureSpec& quad = {}) {
  auto terms = picard_terms(u0, k, t, quad);
  return std::move(terms.back());
}

struct SeriesResult {
  SpectralFunction sum;
  std::vector<PicardResult> terms;
  /// FL1 bound on sum_{k>K} U_k: M x^K / (1 - x), x = c T M, M = |u0|_{FL1}.
  double tail_bound = 0.0;
  double quad_error = 0.0;
  double regime = 0.0;  ///< x = c T M
};

/// Geometric tail sum_{k>K} x^{k-1} M for the FL1 norms of the Picard terms.
inline double picard_tail_bound(double m, double x, std::size_t kmax) {
  if (m == 0.0) return 0.0;
  return m * std::pow(x, static_cast<double>(kmax)) / (1.0 - x);
}

/// Partial sum U_1 + ... + U_K at time t with its tail certificate.
/// `c_hat` is the constant in |U_k(t)|_{FL1} <= (c t)^{k-1} |u0|^k.
inline SeriesResult picard_series(const SpectralFunction& u0, std::size_t kmax, double t, double c_hat,
                                  const QuadratureSpec& quad = {}) {
  const double m = fl1_norm(u0);
  const double x = c_hat * t * m;
  if (x >= 1.0) {
    std::ostringstream os;
    os << "Picard series outside its convergence regime: c*T*|u0|_FL1 = " << x << " >= 1";
    throw ConvergenceRegimeError(os.str());
  }
  SeriesResult out{SpectralFunction(u0.grid()), {}, picard_tail_bound(m, x, kmax), 0.0, x};
  out.terms = picard_terms(u0, kmax, t, quad);
  for (const auto& term : out.terms) {
    out.sum = out.sum + term.value;
    out.quad_error += term.quad_error;
  }
  return out;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralFunction> states;
  double dt = 0.0;

  const SpectralFunction& final_state() const { return states.back(); }
};

struct Rk4Options {
  /// Keep every n-th state (the final state is always kept).
  std::size_t store_every = 1;
  double blowup_threshold = 1e100;
};

/// Classical RK4 on the Galerkin system u_t = i phi(D)(u - u^2/2). Products
/// are exact zero-padded convolutions truncated to the grid.
inline Trajectory integrate_rk4(const SpectralFunction& u0, double T, double dt, const Rk4Options& opts = {}) {
  if (!(T >= 0.0)) throw std::invalid_argument("integration time must be nonnegative");
  if (!(dt > 0.0) || dt > 0.1) throw std::invalid_argument("rk4 step must lie in (0, 0.1]");
  const FrequencyGrid& grid = u0.grid();
  const std::int64_t m = grid.max_index();
  const auto n = static_cast<std::size_t>(grid.size());
  const double h = grid.weight();
  std::vector<double> symbol(n);
  for (std::size_t j = 0; j < n; ++j) symbol[j] = phi(grid.frequency(static_cast<std::int64_t>(j) - m));

  using Vec = std::vector<complex>;
  auto rhs = [&](const Vec& a) {
    const auto sq = detail::linear_convolution(a, a);
    Vec out(n);
    for (std::size_t j = 0; j < n; ++j)
      out[j] = kImag * symbol[j] * (a[j] - 0.5 * h * sq[j + static_cast<std::size_t>(m)]);
    return out;
  };
  auto axpy = [](const Vec& y, double s, const Vec& k) {
    Vec out(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) out[j] = y[j] + s * k[j];
    return out;
  };

  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
  const double step = steps == 0 ? 0.0 : T / static_cast<double>(steps);
  Trajectory traj;
  traj.dt = step;
  Vec y = u0.to_dense();
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  for (std::size_t s = 1; s <= steps; ++s) {
    const auto k1 = rhs(y);
    const auto k2 = rhs(axpy(y, 0.5 * step, k1));
    const auto k3 = rhs(axpy(y, 0.5 * step, k2));
    const auto k4 = rhs(axpy(y, step, k3));
    double peak = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      y[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      peak = std::max(peak, std::abs(y[j]));
    }
    const double t = step * static_cast<double>(s);
    if (!std::isfinite(peak) || peak > opts.blowup_threshold) {
      std::ostringstream os;
      os << "rk4 blow-up at step " << s << " (t = " << t << "): max |coeff| = " << peak;
      throw BlowUp(os.str());
    }
    if (s % opts.store_every == 0 || s == steps) {
      traj.times.push_back(t);
      traj.states.push_back(SpectralFunction::from_dense(grid, y));
    }
  }
  return traj;
}

struct FixedPointOptions {
  std::size_t panels = 8;
  std::size_t nodes = 8;  ///< per panel; 8 x 8 = 64 time nodes by default
  double tol = 1e-12;
  std::size_t max_iter = 200;
};

struct FixedPointResult {
  SpectralFunction value;
  std::size_t iterations = 0;
  /// Successive FL1 changes d_j and the ratios d_{j+1}/d_j.
  std::vector<double> changes;
  std::vector<double> ratios;
  /// Largest FL1 mass discarded at the grid cutoff in any product.
  double truncated_l1 = 0.0;

  double contraction_ratio() const { return ratios.empty() ? 0.0 : ratios.back(); }
};

/// Iterates Psi(u)(t) = U(t) u0 - (i/2) N(u, u)(t) on a composite Gauss mesh,
/// starting from the free solution. Time integrals use the exact collocation
/// integration matrix of each panel.
inline FixedPointResult fixed_point_solve(const SpectralFunction& u0, double T, const FixedPointOptions& opts = {}) {
  if (!(T >= 0.0)) throw std::invalid_argument("fixed_point_solve needs T >= 0");
  const GaussLegendre rule(opts.nodes);
  const auto smat = integration_matrix(rule);
  const std::size_t p = rule.size();
  const double width = T / static_cast<double>(opts.panels);
  std::vector<double> times;
  for (const auto& node : composite_nodes(0.0, T, opts.panels, rule)) times.push_back(node.t);
  const std::size_t total = times.size();

  std::vector<SpectralFunction> u;
  u.reserve(total + 1);
  for (double t : times) u.push_back(linear_propagate(u0, t));
  u.push_back(linear_propagate(u0, T));

  FixedPointResult result{SpectralFunction(u0.grid()), 0, {}, {}, 0.0};
  const SpectralFunction zero(u0.grid());
  for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
    std::vector<SpectralFunction> g;
    g.reserve(total);
    for (std::size_t j = 0; j < total; ++j) {
      auto sq = convolve_truncating(u[j], u[j]);
      result.truncated_l1 = std::max(result.truncated_l1, sq.truncated_l1);
      g.push_back(propagate_phi(sq.value, -times[j]));
    }
    std::vector<SpectralFunction> next;
    next.reserve(total + 1);
    SpectralFunction running = zero;  // int_0^{panel start} g
    for (std::size_t panel = 0; panel < opts.panels; ++panel) {
      const std::size_t base = panel * p;
      for (std::size_t j = 0; j < p; ++j) {
        SpectralFunction partial = running;
        for (std::size_t l = 0; l < p; ++l)
          partial = partial + complex(0.5 * width * smat[j][l]) * g[base + l];
        next.push_back(linear_propagate(u0 + complex(0.0, -0.5) * partial, times[base + j]));
      }
      for (std::size_t l = 0; l < p; ++l) running = running + complex(0.5 * width * rule.weights[l]) * g[base + l];
    }
    next.push_back(linear_propagate(u0 + complex(0.0, -0.5) * running, T));

    double change = 0.0;
    for (std::size_t j = 0; j <= total; ++j) change = std::max(change, fl1_norm(next[j] - u[j]));
    u = std::move(next);
    result.iterations = iter;
    if (!result.changes.empty() && result.changes.back() > 0.0) {
      const double ratio = change / result.changes.back();
      result.ratios.push_back(ratio);
      if (ratio >= 1.0 && result.changes.back() > 100.0 * opts.tol) {
        std::ostringstream os;
        os << "fixed-point map is not contracting: ratio " << ratio << " at iteration " << iter;
        throw NonContraction(ratio, os.str());
      }
    }
    result.changes.push_back(change);
    if (change < opts.tol) break;
  }
  if (result.changes.back() >= opts.tol) {
    std::ostringstream os;
    os << "fixed-point iteration stalled at change " << result.changes.back();
    throw NonContraction(result.contraction_ratio(), os.str());
  }
  result.value = u.back();
  return result;
}

}  // namespace bbm
