#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nullest {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument or violated precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// k >= n/2: the null location is not identifiable.
class NotIdentifiable : public Error {
public:
    using Error::Error;
};

// Empirical characteristic function modulus too small to invert.
class EcfDegenerate : public Error {
public:
    using Error::Error;
};

// Overflow of an inverse characteristic function on the frequency grid.
class NumericalOverflow : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

// z-scores X_1..X_n. Values are finite; the order is the caller's.
class Sample {
public:
    explicit Sample(std::vector<double> values);

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    Sample shifted(double c) const;
    Sample scaled(double c) const;

private:
    std::vector<double> values_;
};

struct NullParams {
    double theta = 0.0;
    double sigma2 = 1.0;

    void validate() const;
    double sigma() const;
};

enum class ContaminationKind { zero, constant_shift, pi_over_omega, two_sided_blocks, prior_g0, prior_g1, custom };

std::string to_string(ContaminationKind kind);
ContaminationKind contamination_kind_from_string(const std::string& name);

// A rule for the mean shifts gamma. `param` is the shift value, the frequency
// omega (pi_over_omega) or psi (two_sided_blocks). For the prior kinds, param
// is the contamination fraction used to build the prior construction.
struct ContaminationSpec {
    std::size_t k = 0;
    ContaminationKind kind = ContaminationKind::zero;
    double param = 0.0;
    std::vector<double> custom;
};

/*
 * Every constant the estimators leave symbolic. Defaults are documented in
 * README.md; all are overridable by name through set().
 */
struct Hyperparams {
    double c_tau = 0.5;                   // tau constant for the Fourier location estimators
    double c_a = 0.1;                     // variance frequency window constant
    double C1_pilot = 1.5;                // pilot subset count m = ceil(n^C1)
    double C2_pilot = 2.8;                // pilot subset size ell = ceil(C2 ln n)
    double R = 4.0;                       // width of the [sigma-^2, sigma+^2] interval
    double c0 = 1.0 / 24.0;               // amplitude of the lower-bound perturbation
    double Bc = 3.0;                      // tau constant of the lower-bound mixture pair
    double L_delta = 1.0;                 // kernel-mode bandwidth constant inside the log
    double mode_C1 = 1.0;                 // kernel-mode bandwidth multiplier
    double mu_grid_halfwidth_mult = 3.0;  // mu grid half-width, units of sigma sqrt(log n)
    double mu_grid_step_mult = 0.25;      // mu grid spacing, units of sigma eps(k, n)
    double omega_grid_step_mult = 1.0;    // omega grid spacing, units of 1/(sigma sqrt(n log n))
    double ecf_floor_mult = 5.0;          // variance log guard excludes N(w) <= this / sqrt(n)
    double lepski_loc_mult = 12.0;        // location halfwidth = this * sigma_pilot * eps(k, n)
    double lepski_var_mult = 12.0;        // variance halfwidth = this * sigma2_pilot * eps_var(k, n)
    double lepski_c_delta = 2.0;          // location k grid stops at n/2 - c_delta sqrt(n)
    double lepski_ratio = 1.25;           // geometric thinning ratio of the k grid
    double laplace_tau_const = 1.0;       // tau^2 = const * k (n - 2k) / n^1.5 for Laplace noise
    double caijin_omega = 1.0;            // evaluation frequency of the Cai-Jin functionals
    double caijin_fd_step = 1e-4;         // finite-difference step of the Cai-Jin functionals
    std::size_t m_cap = 200000;           // cap on pilot subset count
    std::size_t v_grid_points = 33;       // variance candidates in the unknown-variance estimator
    std::size_t variance_grid_points = 512;

    void validate() const;
    // Sets a field by name from its decimal text; throws InvalidArgument.
    void set(const std::string& key, const std::string& value);
    std::vector<std::string> keys() const;
    std::string get(const std::string& key) const;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// Parses a full string as a double; throws InvalidArgument otherwise.
double parse_double(const std::string& text);

}  // namespace nullest
