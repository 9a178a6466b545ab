#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bbm {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(std::size_t n) : nodes(n), weights(n) {
    if (n == 0) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
      // Chebyshev-like initial guess, then Newton on P_n.
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = pk;
        }
        // p1 = P_n(x), p0 = P_{n-1}(x)
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }

  std::size_t size() const noexcept { return nodes.size(); }
};

struct QuadratureNode {
  double t;
  double w;
};

/// Composite rule: `panels` equal panels on [a, b], one GL rule per panel.
inline std::vector<QuadratureNode> composite_nodes(double a, double b, std::size_t panels,
                                                   const GaussLegendre& rule) {
  std::vector<QuadratureNode> out;
  out.reserve(panels * rule.size());
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t m = 0; m < panels; ++m) {
    const double left = a + width * static_cast<double>(m);
    for (std::size_t j = 0; j < rule.size(); ++j)
      out.push_back({left + 0.5 * width * (rule.nodes[j] + 1.0), 0.5 * width * rule.weights[j]});
  }
  return out;
}

/// S[j][l] = integral from -1 to nodes[j] of the l-th Lagrange basis polynomial
/// on the rule's nodes. Exact: the basis has degree n-1 and the mapped rule
/// integrates degree 2n-1.
inline std::vector<std::vector<double>> integration_matrix(const GaussLegendre& rule) {
  const std::size_t n = rule.size();
  auto lagrange = [&](std::size_t l, double x) {
    double v = 1.0;
    for (std::size_t m = 0; m < n; ++m)
      if (m != l) v *= (x - rule.nodes[m]) / (rule.nodes[l] - rule.nodes[m]);
    return v;
  };
  std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    const double half = 0.5 * (rule.nodes[j] + 1.0);
    for (std::size_t l = 0; l < n; ++l) {
      double acc = 0.0;
      for (std::size_t m = 0; m < n; ++m) acc += rule.weights[m] * lagrange(l, -1.0 + half * (rule.nodes[m] + 1.0));
      s[j][l] = half * acc;
    }
  }
  return s;
}

/// Composite Gauss-Legendre settings for every time integral in the library.
/// Config keys: quad.base_nodes, quad.tol.
struct QuadratureSpec {
  std::size_t base_nodes = 8;
  /// Stop doubling once the FL1 change is below tol * max(1, |result|_{FL1}).
  double tol = 1e-10;
  std::size_t max_doublings = 6;
};

}  // namespace bbm
