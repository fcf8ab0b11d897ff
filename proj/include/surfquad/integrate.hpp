#pragma once

#include "surfquad/curved.hpp"
#include "surfquad/quad_rules.hpp"

#include <functional>
#include <span>
#include <string_view>

namespace surfquad {

using ScalarField = std::function<double(const Vec3&)>;

/// exact_f evaluates f at the chart images of the quadrature points;
/// interp_f samples f at the projected nodes and integrates its degree-k
/// interpolant.
enum class IntegrandMode { exact_f, interp_f };

IntegrandMode parse_mode(std::string_view name);  // "exact" | "interp"
std::string_view to_string(IntegrandMode mode);

struct IntegralResult {
  double value = 0.0;
  std::size_t n_elements = 0;
  IntegrandMode mode = IntegrandMode::interp_f;
  int k = 1;
};

double integrate_element(const CurvedElement& elem, const ScalarField& f,
                         const QuadratureRule& rule, IntegrandMode mode);

struct IntegrateOptions {
  ProjectOptions projection;
  int threads = 1;
};

/// Integral over an already built curved mesh. Element contributions are
/// reduced pairwise in face order, so the value does not depend on `threads`.
IntegralResult integrate_curved(const CurvedMesh& curved, const ScalarField& f,
                                const QuadratureRule& rule, IntegrandMode mode,
                                int threads = 1);

/// Builds the degree-k curved mesh over `mesh` and integrates f over it.
/// Per-element failures are collected into one IntegrationError.
IntegralResult integrate_surface(const FlatMesh& mesh, const ImplicitSurface& surface,
                                 const ScalarField& f, int k,
                                 const QuadratureRule& rule, IntegrandMode mode,
                                 const IntegrateOptions& options = {});

/// Recursive pairwise summation in index order.
double pairwise_sum(std::span<const double> values);

}  // namespace surfquad
