#include "nullest/location.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nullest/mode.hpp"
#include "nullest/parallel.hpp"
#include "nullest/rates.hpp"
#include "nullest/variance.hpp"

namespace nullest {

namespace {

constexpr double kMaxLogMultiplier = 700.0;
constexpr std::size_t kMaxMuHalf = 2'000'000;
constexpr std::size_t kBoundStride = 8;

inline double modulus(double x, double y) { return std::sqrt(x * x + y * y); }

// Squared distance from a·p to the disk centre; plain arithmetic avoids the
// NaN-recovery path of std::complex multiplication.
inline double rotated_dist2(Complex a, Complex p, double center) {
    const double re = a.real() * p.real() - a.imag() * p.imag() - center;
    const double im = a.real() * p.imag() + a.imag() * p.real();
    return re * re + im * im;
}

inline double residual_from_dist2(double d2, double radius) {
    const double d = std::sqrt(d2) - radius;
    return d > 0.0 ? d : 0.0;
}

inline Complex rotation(double omega, double mu) {
    const double arg = omega * mu;
    return {std::cos(arg), -std::sin(arg)};
}

/*
 * Exact minimiser of max_i residual(b[v][i] · e^{-iω_i μ_j}) over the (μ_j, v)
 * grid. A lower bound from every kBoundStride-th frequency orders candidates;
 * full evaluations proceed in that order and stop once the bound exceeds the
 * best full value, so the result equals the exhaustive search, including the
 * tie-break (closest to the median, then smaller v, then smaller μ).
 */
struct GridSearch {
    std::vector<double> omegas;
    std::vector<std::vector<Complex>> b;
    double center = 0.0;
    double radius = 0.0;
    double mu_center = 0.0;
    double mu_step = 0.0;
    std::size_t half = 0;
    mutable std::vector<std::vector<Complex>> phase_cache;

    double mu_at(std::size_t j) const {
        return mu_center + (static_cast<double>(j) - static_cast<double>(half)) * mu_step;
    }

    struct Result {
        std::size_t j = 0;
        std::size_t v = 0;
        double value = 0.0;
    };

    // e^{-iω_i μ_j} for every frequency, computed once per μ index.
    const std::vector<Complex>& phases_at(std::size_t j) const {
        auto& p = phase_cache[j];
        if (p.empty()) {
            const double mu = mu_at(j);
            p.resize(omegas.size());
            for (std::size_t i = 0; i < omegas.size(); ++i) p[i] = rotation(omegas[i], mu);
        }
        return p;
    }

    // Full objective at (j, v); returns +inf once it exceeds `bound`.
    double full(std::size_t j, std::size_t v, double bound) const {
        const auto& bv = b[v];
        const auto& ph = phases_at(j);
        const double limit = bound + radius;
        const double limit2 = std::isfinite(limit) ? limit * limit : std::numeric_limits<double>::infinity();
        double worst = 0.0;
        for (std::size_t i = omegas.size(); i-- > 0;) {
            const double d2 = rotated_dist2(bv[i], ph[i], center);
            if (d2 > worst) {
                worst = d2;
                if (worst > limit2 && residual_from_dist2(worst, radius) > bound)
                    return std::numeric_limits<double>::infinity();
            }
        }
        return residual_from_dist2(worst, radius);
    }

    Result run() const {
        const std::size_t count_mu = 2 * half + 1;
        const std::size_t count_v = b.size();
        phase_cache.assign(count_mu, {});
        const std::size_t last = omegas.size() - 1;
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i <= last; ++i)
            if ((last - i) % kBoundStride == 0) subset.push_back(i);

        std::vector<double> lower(count_mu * count_v);
        constexpr std::size_t chunk = 64;
        const std::size_t chunks = (count_mu + chunk - 1) / chunk;
        parallel_for(chunks, [&](std::size_t c) {
            std::vector<Complex> phases(subset.size());
            const std::size_t end = std::min(count_mu, (c + 1) * chunk);
            for (std::size_t j = c * chunk; j < end; ++j) {
                const double mu = mu_at(j);
                for (std::size_t s = 0; s < subset.size(); ++s) phases[s] = rotation(omegas[subset[s]], mu);
                for (std::size_t v = 0; v < count_v; ++v) {
                    double worst = 0.0;
                    for (std::size_t s = 0; s < subset.size(); ++s)
                        worst = std::max(worst, rotated_dist2(b[v][subset[s]], phases[s], center));
                    lower[j * count_v + v] = residual_from_dist2(worst, radius);
                }
            }
        });

        auto key = [&](std::size_t idx) {
            const std::size_t j = idx / count_v;
            const std::size_t v = idx % count_v;
            const std::size_t dist = j > half ? j - half : half - j;
            return std::tuple(dist, v, j);
        };
        // The result is the (value, key) argmin, so the order of evaluation only
        // affects speed: seed the incumbent with the smallest lower bound and
        // sort only the candidates that can still beat it.
        auto before = [&](std::size_t x, std::size_t y) {
            if (lower[x] != lower[y]) return lower[x] < lower[y];
            return key(x) < key(y);
        };
        std::size_t seed = 0;
        for (std::size_t idx = 1; idx < lower.size(); ++idx)
            if (before(idx, seed)) seed = idx;
        const double seed_value = full(seed / count_v, seed % count_v, std::numeric_limits<double>::infinity());
        std::vector<std::size_t> order;
        for (std::size_t idx = 0; idx < lower.size(); ++idx)
            if (lower[idx] <= seed_value) order.push_back(idx);
        std::sort(order.begin(), order.end(), before);

        Result best{0, 0, std::numeric_limits<double>::infinity()};
        bool found = false;
        for (std::size_t idx : order) {
            if (lower[idx] > best.value) break;
            const std::size_t j = idx / count_v;
            const std::size_t v = idx % count_v;
            const double value = full(j, v, best.value);
            if (!found || value < best.value || (value == best.value && key(idx) < key(best.j * count_v + best.v))) {
                if (value == std::numeric_limits<double>::infinity()) continue;
                best = {j, v, value};
                found = true;
            }
        }
        return best;
    }
};

LocationEstimate run_location(const Sample& sample, std::size_t k, double scale, double tau,
                              const std::vector<double>& vs, const NoiseModel& noise, const Hyperparams& hp) {
    const std::size_t n = sample.size();
    const double nd = static_cast<double>(n);
    const double log_n = std::log(nd);

    const double omega_step = hp.omega_grid_step_mult / (scale * std::sqrt(nd * log_n));
    const FrequencyGrid grid = FrequencyGrid::symmetric(tau, omega_step);

    GridSearch search;
    for (double w : grid.points)
        if (!noise.real_even() || w >= 0.0) search.omegas.push_back(w);
    const std::vector<Complex> psi = ecf_on_grid(sample, search.omegas);
    search.b.assign(vs.size(), std::vector<Complex>(search.omegas.size()));
    for (std::size_t v = 0; v < vs.size(); ++v)
        for (std::size_t i = 0; i < search.omegas.size(); ++i)
            search.b[v][i] = psi[i] * noise.inverse_cf(search.omegas[i], vs[v]);

    search.center = static_cast<double>(n - k) / nd;
    search.radius = static_cast<double>(k) / nd;
    search.mu_center = sample_median(sample);
    search.mu_step = hp.mu_grid_step_mult * scale * eps_location(std::max<std::size_t>(k, 1), n);
    const double halfwidth = hp.mu_grid_halfwidth_mult * scale * std::sqrt(log_n);
    const double half = std::floor(halfwidth / search.mu_step);
    if (!(half <= static_cast<double>(kMaxMuHalf)))
        throw InvalidArgument("mu grid too fine: " + format_double(2 * half + 1) + " points");
    search.half = static_cast<std::size_t>(half);

    const auto best = search.run();
    LocationEstimate est;
    est.theta_hat = search.mu_at(best.j);
    est.objective_value = best.value;
    est.mu_grid_used = {search.mu_at(0), search.mu_at(2 * search.half), search.mu_step, 2 * search.half + 1};
    est.tau_used = tau;
    if (vs.size() > 1) est.v_hat = vs[best.v];
    return est;
}

void require_estimation_args(std::size_t k, std::size_t n) {
    if (n < 4) throw InvalidArgument("location estimation needs n >= 4");
    require_identifiable(k, n);
}

}  // namespace

DiskFitResult inner_disk_fit(Complex a, std::size_t k, std::size_t n) {
    if (k >= n) throw InvalidArgument("disk fit needs k < n");
    const double nd = static_cast<double>(n);
    if (k == 0) {
        const double r = modulus(a.real() - 1.0, a.imag());
        return {r, Complex(0.0, 0.0), r > 0.0};
    }
    const double center = static_cast<double>(n - k) / nd;
    const double radius = static_cast<double>(k) / nd;
    const Complex d(a.real() - center, a.imag());
    const double m = modulus(d.real(), d.imag());
    if (m <= radius) return {0.0, d / radius, false};
    return {m - radius, d / m, true};
}

NoiseModel NoiseModel::gaussian() { return NoiseModel(); }

NoiseModel NoiseModel::laplace() {
    NoiseModel m;
    m.kind_ = Kind::laplace;
    return m;
}

NoiseModel NoiseModel::custom(std::function<Complex(double)> cf) {
    if (!cf) throw InvalidArgument("custom noise model needs a characteristic function");
    NoiseModel m;
    m.kind_ = Kind::custom;
    m.custom_ = std::move(cf);
    return m;
}

Complex NoiseModel::cf(double omega, double v) const {
    switch (kind_) {
        case Kind::gaussian: return {std::exp(-0.5 * v * omega * omega), 0.0};
        case Kind::laplace: return {1.0 / (1.0 + v * omega * omega), 0.0};
        case Kind::custom: return custom_(omega);
    }
    return {};
}

Complex NoiseModel::inverse_cf(double omega, double v) const {
    switch (kind_) {
        case Kind::gaussian: {
            const double e = 0.5 * v * omega * omega;
            if (e > kMaxLogMultiplier)
                throw NumericalOverflow("inverse Gaussian cf overflows at omega = " + format_double(omega) +
                                        " (v = " + format_double(v) + "); tau is mis-set");
            return {std::exp(e), 0.0};
        }
        case Kind::laplace: return {1.0 + v * omega * omega, 0.0};
        case Kind::custom: {
            const Complex c = custom_(omega);
            if (!(std::abs(c) >= 1e-300))
                throw EcfDegenerate("noise characteristic function vanishes at omega = " + format_double(omega));
            return 1.0 / c;
        }
    }
    return {};
}

double tau_known_var(std::size_t k, std::size_t n, const Hyperparams& hp) {
    return std::max(1.0, hp.c_tau * std::sqrt(tau_log_term(k, n)));
}

double laplace_tau(std::size_t k, std::size_t n, double constant) {
    require_identifiable(k, n);
    const double nd = static_cast<double>(n);
    return std::sqrt(constant * static_cast<double>(k) * (nd - 2.0 * static_cast<double>(k)) / std::pow(nd, 1.5));
}

double objective(const Sample& sample, double mu, double v, std::size_t k, const FrequencyGrid& grid,
                 const NoiseModel& noise) {
    if (!(v >= 0.0)) throw InvalidArgument("v must be nonnegative");
    const std::size_t n = sample.size();
    if (k >= n) throw InvalidArgument("objective needs k < n");
    const double nd = static_cast<double>(n);
    double sup = 0.0;
    for (double w : grid.points) {
        const Complex a = ecf_sum(sample, w, mu) / nd * noise.inverse_cf(w, v);
        sup = std::max(sup, inner_disk_fit(a, k, n).residual);
    }
    return sup;
}

LocationEstimate estimate_location_known_var(const Sample& sample, std::size_t k, double sigma2,
                                             const Hyperparams& hp) {
    require_estimation_args(k, sample.size());
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw InvalidArgument("sigma2 must be positive");
    const double sigma = std::sqrt(sigma2);
    const double tau = tau_known_var(k, sample.size(), hp) / sigma;
    return run_location(sample, k, sigma, tau, {sigma2}, NoiseModel::gaussian(), hp);
}

std::pair<double, double> sigma_interval(double sigma2_hat, std::size_t k, std::size_t n, const Hyperparams& hp) {
    if (!(sigma2_hat > 0.0)) throw InvalidArgument("sigma2_hat must be positive");
    const double width = hp.R * eps_variance(k, n);
    const double lo = std::max(sigma2_hat * (1.0 - width), 1e-12 * sigma2_hat);
    return {lo, sigma2_hat * (1.0 + width)};
}

double tau_unknown_var(std::size_t k, std::size_t n, double sigma2_hat, const Hyperparams& hp) {
    return tau_known_var(k, n, hp) / std::sqrt(sigma2_hat);
}

LocationEstimate estimate_location_unknown_var_from(const Sample& sample, std::size_t k, double sigma2_hat,
                                                    const Hyperparams& hp) {
    require_estimation_args(k, sample.size());
    const std::size_t n = sample.size();
    const auto [lo, hi] = sigma_interval(sigma2_hat, k, n, hp);
    std::vector<double> vs;
    if (lo == hi) {
        vs.push_back(lo);
    } else {
        const std::size_t count = hp.v_grid_points;
        for (std::size_t i = 0; i < count; ++i)
            vs.push_back(i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    const double scale = std::sqrt(sigma2_hat);
    LocationEstimate est =
        run_location(sample, k, scale, tau_unknown_var(k, n, sigma2_hat, hp), vs, NoiseModel::gaussian(), hp);
    if (!est.v_hat) est.v_hat = vs.front();
    est.sigma2_hat = sigma2_hat;
    return est;
}

LocationEstimate estimate_location_unknown_var(const Sample& sample, std::size_t k, const Hyperparams& hp,
                                               std::uint64_t seed) {
    require_estimation_args(k, sample.size());
    const VarianceEstimate var = estimate_variance(sample, k, hp, seed);
    LocationEstimate est = estimate_location_unknown_var_from(sample, k, var.sigma2_hat, hp);
    est.pilot_sigma2 = var.pilot_sigma2;
    return est;
}

LocationEstimate estimate_location_general(const Sample& sample, std::size_t k, const NoiseModel& noise, double tau,
                                           const Hyperparams& hp) {
    require_estimation_args(k, sample.size());
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("tau must be positive");
    return run_location(sample, k, 1.0, tau, {1.0}, noise, hp);
}

}  // namespace nullest
