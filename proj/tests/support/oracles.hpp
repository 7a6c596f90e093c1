#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Slow, independent reference implementations used by the unit and
// acceptance tests.
namespace oracle {

using Complex = std::complex<double>;

// inf over |ζ| <= 1 of |a − (n−k)/n − (k/n)ζ|: `angles` rays, each minimised
// exactly along its radius.
double disk_residual(Complex a, std::size_t k, std::size_t n, std::size_t angles = 4000);

// Direct-sum objective: sup over omegas of the distance from
// (1/n)Σe^{iω(X−μ)}/cf(ω) − (n−k)/n to the disk of radius k/n.
double objective(std::span<const double> x, double mu, std::size_t k, std::span<const double> omegas,
                 const std::function<Complex(double)>& cf);

// ψ̂(ω) and its exact derivative (1/n)Σ iX e^{iωX}.
Complex ecf(std::span<const double> x, double omega);
Complex ecf_derivative(std::span<const double> x, double omega);

// Cai–Jin functionals with the exact ECF derivative.
double caijin_location(std::span<const double> x, double omega);
double caijin_variance(std::span<const double> x, double omega);

struct DenseMode {
    double t = 0.0;
    std::size_t count = 0;
};

// Box-kernel count maximised over a uniform t grid with `points` points
// spanning the data ± h (leftmost maximiser).
DenseMode dense_grid_mode(std::span<const double> x, double h, std::size_t points);
std::size_t window_count(std::span<const double> x, double t, double h);

// ½∫|N(μ1,σ1²) − N(μ2,σ2²)| by trapezoid on the union of μ ± 10σ, 1e5 points.
double tv_gaussians(double mu1, double sigma1, double mu2, double sigma2);

// Cumulative trapezoid of a density on [lo, hi] with `points` points.
struct TabulatedCdf {
    double lo = 0.0;
    double step = 1.0;
    std::vector<double> cdf;
    double operator()(double x) const;
};
TabulatedCdf tabulate_cdf(const std::function<double(double)>& density, double lo, double hi, std::size_t points);

// sup |F_n − F| for sample values (unsorted) against a CDF.
double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf);

double median(std::vector<double> v);

}  // namespace oracle
