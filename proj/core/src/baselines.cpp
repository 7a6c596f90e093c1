#include "nullest/baselines.hpp"

#include <cmath>

namespace nullest {

namespace {

void guard_modulus(double modulus, std::size_t n) {
    if (!(modulus > 1.0 / static_cast<double>(n)))
        throw EcfDegenerate("|ecf(omega*)| = " + format_double(modulus) + " is below 1/n");
}

}  // namespace

void CaiJinConfig::validate() const {
    if (!(fd_step > 0.0)) throw InvalidArgument("fd_step must be positive");
    if (!(std::abs(omega_star) >= 10.0 * fd_step))
        throw InvalidArgument("|omega_star| must be at least 10 fd_step");
}

DifferentiableCf null_cf(double theta, double sigma2) {
    auto value = [theta, sigma2](double t) { return std::exp(Complex(-0.5 * sigma2 * t * t, theta * t)); };
    auto derivative = [theta, sigma2, value](double t) { return Complex(-sigma2 * t, theta) * value(t); };
    return {value, derivative};
}

double caijin_mu(const DifferentiableCf& xi, double t) {
    const Complex v = xi.value(t);
    const Complex d = xi.derivative(t);
    return (std::conj(v) * d).imag() / std::norm(v);
}

double caijin_v(const DifferentiableCf& xi, double t) {
    if (t == 0.0) throw InvalidArgument("v(t; xi) is undefined at t = 0");
    const Complex v = xi.value(t);
    const Complex d = xi.derivative(t);
    return -(std::conj(v) * d).real() / (t * std::norm(v));
}

double caijin_location(const Sample& sample, const CaiJinConfig& cfg) {
    cfg.validate();
    const Complex v = ecf_eval(sample, cfg.omega_star);
    guard_modulus(std::abs(v), sample.size());
    const Complex d = ecf_derivative(sample, cfg.omega_star, cfg.fd_step);
    return (std::conj(v) * d).imag() / std::norm(v);
}

double caijin_variance(const Sample& sample, const CaiJinConfig& cfg) {
    cfg.validate();
    const double t = cfg.omega_star;
    const double h = cfg.fd_step;
    const double modulus = ecf_norm(sample, t);
    guard_modulus(modulus, sample.size());
    const double slope = (ecf_norm(sample, t + h) - ecf_norm(sample, t - h)) / (2.0 * h);
    return -slope / (t * modulus);
}

}  // namespace nullest
