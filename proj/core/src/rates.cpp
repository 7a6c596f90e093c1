#include "nullest/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nullest {

void require_identifiable(std::size_t k, std::size_t n) {
    if (2 * k >= n)
        throw NotIdentifiable("k = " + std::to_string(k) + " must be below n/2 = " + format_double(static_cast<double>(n) / 2.0) +
                              "; theta is not identifiable");
}

namespace {

void require_rate_args(std::size_t k, std::size_t n) {
    if (k < 1) throw InvalidArgument("rates require k >= 1");
    require_identifiable(k, n);
}

}  // namespace

double tau_log_term(std::size_t k, std::size_t n) {
    const double nd = static_cast<double>(n);
    const double r = static_cast<double>(k) * (nd - 2.0 * static_cast<double>(k)) / nd;
    return std::log1p(r * r / nd);
}

double rate_location_sq(std::size_t k, std::size_t n, double sigma2) {
    require_rate_args(k, n);
    if (!(sigma2 > 0.0)) throw InvalidArgument("sigma2 must be positive");
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    const double root = std::sqrt(nd);
    const double gap = nd - 2.0 * kd;
    if (kd <= root) return sigma2 / nd;
    if (kd <= nd / 4.0) return sigma2 * (kd * kd) / (nd * nd) / std::log(std::exp(1.0) * kd * kd / nd);
    if (kd <= nd / 2.0 - root) return sigma2 / std::log(std::exp(1.0) * gap * gap / nd);
    return sigma2 * std::log(std::exp(1.0) * nd / (gap * gap));
}

double rate_variance(std::size_t k, std::size_t n) {
    require_rate_args(k, n);
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    const double root = std::sqrt(nd);
    if (kd <= root) return 1.0 / nd;
    const double l = std::log1p(kd / root);
    return (kd * kd) / (nd * nd) / (l * l);
}

double rate_tv(std::size_t k, std::size_t n) {
    require_rate_args(k, n);
    const double l = tau_log_term(k, n);
    if (l <= 0.0) return 1.0;
    return std::min(1.0, static_cast<double>(k) / (static_cast<double>(n) * std::sqrt(l)));
}

double huber_rate(std::size_t k, std::size_t n) {
    if (n == 0) throw InvalidArgument("n must be positive");
    require_identifiable(k, n);
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    if (kd <= nd / 5.0) return 1.0 / nd + (kd * kd) / (nd * nd);
    return std::log(std::exp(1.0) * nd / (nd - 2.0 * kd));
}

double huber_modulus(double eps) {
    if (!(eps >= 0.0)) throw InvalidArgument("eps must be nonnegative");
    if (eps >= 0.5) throw InvalidArgument("eps must be below 1/2");
    // (1-ε)/2 > 1-2ε  <=>  3ε > 1; decided exactly so that ε = 1/3 gives 0.
    if (3.0 * eps <= 1.0) return 0.0;
    return std::sqrt(2.0 * std::log(((1.0 - eps) / 2.0) / (1.0 - 2.0 * eps)));
}

double eps_location(std::size_t k, std::size_t n) {
    require_identifiable(k, n);
    if (k == 0) return 0.0;
    const double l = tau_log_term(k, n);
    return static_cast<double>(k) / (static_cast<double>(n) * std::sqrt(l));
}

double eps_variance(std::size_t k, std::size_t n) {
    if (n == 0) throw InvalidArgument("n must be positive");
    if (k == 0) return 0.0;
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    return kd / (nd * std::log1p(kd / std::sqrt(nd)));
}

RatePoint rate_point(std::size_t k, std::size_t n, double sigma2) {
    return {k, n, rate_location_sq(k, n, sigma2), rate_variance(k, n), rate_tv(k, n)};
}

double tv_gaussian_surrogate(const NullParams& p, const NullParams& q) {
    p.validate();
    q.validate();
    const double var_gap = std::abs(p.sigma2 - q.sigma2) / std::max(p.sigma2, q.sigma2);
    const double mean_gap = std::abs(p.theta - q.theta) / std::max(p.sigma(), q.sigma());
    return std::min(1.0, std::max(var_gap, mean_gap));
}

}  // namespace nullest
