#include "nullest/variance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nullest/ecf.hpp"
#include "nullest/parallel.hpp"
#include "nullest/rates.hpp"
#include "nullest/rng.hpp"

namespace nullest {

PilotConfig PilotConfig::defaults(std::size_t n, const Hyperparams& hp, std::uint64_t seed) {
    if (n < 3) throw InvalidArgument("pilot variance needs n >= 3");
    const double nd = static_cast<double>(n);
    const double m = std::min(std::ceil(std::pow(nd, hp.C1_pilot)), static_cast<double>(hp.m_cap));
    const double ell = std::ceil(hp.C2_pilot * std::log(nd));
    PilotConfig cfg;
    cfg.m = static_cast<std::size_t>(std::max(1.0, m));
    cfg.ell = std::min(n, static_cast<std::size_t>(std::max(3.0, ell)));
    cfg.seed = seed;
    return cfg;
}

double pilot_variance(const Sample& sample, const PilotConfig& cfg) {
    const std::size_t n = sample.size();
    if (cfg.m < 1) throw InvalidArgument("pilot needs m >= 1");
    if (cfg.ell < 2 || cfg.ell > n) throw InvalidArgument("pilot subset size must be in [2, n]");
    const auto x = sample.values();

    constexpr std::size_t chunk = 4096;
    const std::size_t chunks = (cfg.m + chunk - 1) / chunk;
    std::vector<double> chunk_min(chunks, std::numeric_limits<double>::infinity());
    parallel_for(chunks, [&](std::size_t c) {
        std::vector<std::size_t> idx(cfg.ell);
        double best = std::numeric_limits<double>::infinity();
        const std::size_t end = std::min(cfg.m, (c + 1) * chunk);
        for (std::size_t r = c * chunk; r < end; ++r) {
            // Floyd's algorithm: a uniform ell-subset of {0..n-1}.
            Stream rng = Stream::keyed({cfg.seed, r});
            std::size_t filled = 0;
            for (std::size_t j = n - cfg.ell; j < n; ++j) {
                const std::size_t t = static_cast<std::size_t>(rng.below(j + 1));
                const bool seen = std::find(idx.begin(), idx.begin() + filled, t) != idx.begin() + filled;
                idx[filled++] = seen ? j : t;
            }
            double mean = 0.0;
            for (std::size_t i : idx) mean += x[i];
            mean /= static_cast<double>(cfg.ell);
            double ss = 0.0;
            for (std::size_t i : idx) ss += (x[i] - mean) * (x[i] - mean);
            const double var = ss / static_cast<double>(cfg.ell - 1);
            if (var > 0.0) best = std::min(best, var);
        }
        chunk_min[c] = best;
    });
    const double out = *std::min_element(chunk_min.begin(), chunk_min.end());
    if (!std::isfinite(out)) throw InvalidArgument("every pilot subset is constant; the data look degenerate");
    return out;
}

std::pair<double, double> variance_frequency_window(double sigma_tilde, std::size_t k, std::size_t n,
                                                    const Hyperparams& hp) {
    if (!(sigma_tilde > 0.0)) throw InvalidArgument("sigma_tilde must be positive");
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    const double l = k == 0 ? 1.0 : std::max(1.0, std::log(std::exp(1.0) * kd * kd / nd));
    const double a = hp.c_a / sigma_tilde * std::sqrt(l);
    return {a, 100.0 * a};
}

double ecf_floor(std::size_t n, const Hyperparams& hp) {
    const double nd = static_cast<double>(n);
    return std::max(1.0 / (nd * nd), std::min(0.5, hp.ecf_floor_mult / std::sqrt(nd)));
}

VarianceWindowCache::VarianceWindowCache(const Sample& sample, double pilot_sigma2, const Hyperparams& hp)
    : sample_(&sample), hp_(&hp), pilot_sigma2_(pilot_sigma2) {
    if (!(pilot_sigma2 > 0.0)) throw InvalidArgument("pilot variance must be positive");
    if (hp.variance_grid_points < 2) throw InvalidArgument("variance grid needs at least two points");
    base_ = variance_frequency_window(std::sqrt(pilot_sigma2), 0, sample.size(), hp).first;
    log_ratio_ = std::log(100.0) / static_cast<double>(hp.variance_grid_points - 1);
}

double VarianceWindowCache::lattice(long j) const { return base_ * std::exp(static_cast<double>(j) * log_ratio_); }

double VarianceWindowCache::norm_at(long j) const {
    const long i = j - first_;
    if (i >= 0 && i < static_cast<long>(norms_.size())) return norms_[static_cast<std::size_t>(i)];
    return ecf_norm(*sample_, lattice(j));
}

void VarianceWindowCache::prepare(std::span<const std::size_t> ks) {
    if (ks.empty()) return;
    const double sigma_tilde = std::sqrt(pilot_sigma2_);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t k : ks) {
        const auto [a, b] = variance_frequency_window(sigma_tilde, k, sample_->size(), *hp_);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    first_ = static_cast<long>(std::floor(std::log(lo / base_) / log_ratio_));
    const long last = static_cast<long>(std::ceil(std::log(hi / base_) / log_ratio_));
    std::vector<double> omegas(static_cast<std::size_t>(last - first_ + 1));
    for (std::size_t i = 0; i < omegas.size(); ++i) omegas[i] = lattice(first_ + static_cast<long>(i));
    const std::vector<Complex> psi = ecf_on_grid(*sample_, omegas);
    norms_.resize(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) norms_[i] = std::abs(psi[i]);
}

VarianceEstimate VarianceWindowCache::estimate(std::size_t k) const {
    const std::size_t n = sample_->size();
    if (n < 8) throw InvalidArgument("variance estimation needs n >= 8");
    require_identifiable(k, n);
    const auto [a, b] = variance_frequency_window(std::sqrt(pilot_sigma2_), k, n, *hp_);
    const double floor = ecf_floor(n, *hp_);

    VarianceEstimate est;
    est.a_used = a;
    est.b_used = b;
    est.pilot_sigma2 = pilot_sigma2_;
    bool any = false;
    auto consider = [&](double omega, double norm) {
        if (norm <= floor) return;
        const double value = std::max(0.0, -2.0 * std::log(norm) / (omega * omega));
        if (!any || value < est.sigma2_hat) {
            est.sigma2_hat = value;
            est.omega_argmin = omega;
            any = true;
        }
    };
    consider(a, ecf_norm(*sample_, a));
    // Lattice points strictly inside (a, b); the rounding guards keep a and b
    // from being scanned twice.
    long j = static_cast<long>(std::floor(std::log(a / base_) / log_ratio_));
    while (lattice(j) <= a * (1.0 + 1e-12)) ++j;
    for (; lattice(j) < b * (1.0 - 1e-12); ++j) consider(lattice(j), norm_at(j));
    consider(b, ecf_norm(*sample_, b));
    if (!any)
        throw EcfDegenerate("ecf-degenerate: |ecf| <= " + format_double(floor) + " on the whole window [" +
                            format_double(a) + ", " + format_double(b) + "]");
    return est;
}

VarianceEstimate estimate_variance_with_pilot(const Sample& sample, std::size_t k, double pilot_sigma2,
                                              const Hyperparams& hp) {
    if (sample.size() < 8) throw InvalidArgument("variance estimation needs n >= 8");
    require_identifiable(k, sample.size());
    VarianceWindowCache cache(sample, pilot_sigma2, hp);
    const std::size_t ks[] = {k};
    cache.prepare(ks);
    return cache.estimate(k);
}

VarianceEstimate estimate_variance(const Sample& sample, std::size_t k, const Hyperparams& hp, std::uint64_t seed) {
    if (sample.size() < 8) throw InvalidArgument("variance estimation needs n >= 8");
    require_identifiable(k, sample.size());
    const double pilot = pilot_variance(sample, PilotConfig::defaults(sample.size(), hp, seed));
    return estimate_variance_with_pilot(sample, k, pilot, hp);
}

double single_frequency_variance(const Sample& sample, double omega) {
    if (omega == 0.0) throw InvalidArgument("single-frequency variance needs omega != 0");
    const double norm = ecf_norm(sample, omega);
    if (!(norm > 0.0)) throw EcfDegenerate("|ecf| vanishes at omega = " + format_double(omega));
    return -2.0 * std::log(norm) / (omega * omega);
}

double cosine_supremum(std::span<const double> gammas, double alpha, std::size_t grid_points) {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    if (gammas.empty()) throw InvalidArgument("need at least one gamma");
    if (grid_points < 2) throw InvalidArgument("need at least two grid points");
    const double kd = static_cast<double>(gammas.size());
    const double step = 99.0 * alpha / static_cast<double>(grid_points - 1);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double w = i + 1 == grid_points ? 100.0 * alpha : alpha + static_cast<double>(i) * step;
        double s = 0.0;
        for (double g : gammas) s += std::cos(w * g);
        best = std::max(best, s / kd);
    }
    return best;
}

}  // namespace nullest
