#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nullest {

using RealFunction = std::function<double(double)>;

// Adaptive Simpson on [a, b] to absolute tolerance tol. Throws
// QuadratureError naming the offending subinterval if max_depth is reached.
double adaptive_simpson(const RealFunction& f, double a, double b, double tol, int max_depth = 60);

// Composite 15-point Gauss-Legendre with `panels` equal panels.
double gauss_legendre(const RealFunction& f, double a, double b, std::size_t panels);

// Composite Gauss-Legendre over [breaks.front(), breaks.back()], each piece
// split into panels no wider than max_width. `breaks` must be increasing.
double gauss_legendre_piecewise(const RealFunction& f, const std::vector<double>& breaks, double max_width);

}  // namespace nullest
