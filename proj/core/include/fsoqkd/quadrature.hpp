#pragma once

#include <memory>
#include <string_view>
#include <vector>

namespace fsoqkd::quadrature {

enum class QuadratureKind { Hermite, Legendre };

std::string_view to_string(QuadratureKind kind) noexcept;

inline constexpr int kMaxOrder = 2000;
inline constexpr int kDefaultHermiteOrder = 300;
inline constexpr int kDefaultLegendreOrder = 110;

/// An n-point Gaussian rule with nodes in ascending order.
///
/// Hermite rules integrate against e^{-x^2} on the real line, Legendre rules
/// against 1 on [-1, 1]. For large Hermite orders the outermost weights fall
/// below the smallest subnormal double and are stored as 0; `log_weights`
/// always carries the exact logarithm.
struct QuadratureRule {
  QuadratureKind kind;
  int order;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;
};

QuadratureRule gauss_hermite(int n);
QuadratureRule gauss_legendre(int n);

/// Returns a shared, immutable rule, building it on first use. Safe to call
/// from multiple threads.
std::shared_ptr<const QuadratureRule> cached_rule(QuadratureKind kind, int n);

}  // namespace fsoqkd::quadrature
