#include "nullest/ecf.hpp"

#include <algorithm>
#include <cmath>

#include "nullest/parallel.hpp"

namespace nullest {

namespace {

constexpr std::size_t kLeaf = 32;

// Pairwise sum of (cos, sin)(ω(x_j − shift)) over [begin, end).
Complex trig_sum(const double* x, std::size_t begin, std::size_t end, double omega, double shift) {
    if (end - begin <= kLeaf) {
        double c = 0.0;
        double s = 0.0;
        for (std::size_t j = begin; j < end; ++j) {
            const double arg = omega * (x[j] - shift);
            c += std::cos(arg);
            s += std::sin(arg);
        }
        return {c, s};
    }
    const std::size_t mid = begin + (end - begin) / 2;
    return trig_sum(x, begin, mid, omega, shift) + trig_sum(x, mid, end, omega, shift);
}

}  // namespace

FrequencyGrid FrequencyGrid::uniform(double lo, double hi, double step) {
    if (!(lo <= hi) || !(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
        throw InvalidArgument("frequency grid needs lo <= hi and step > 0");
    FrequencyGrid g{lo, hi, step, {}};
    const double tol = 1e-9 * step;
    for (std::size_t j = 0;; ++j) {
        const double w = lo + static_cast<double>(j) * step;
        if (w >= hi - tol) break;
        g.points.push_back(w);
    }
    g.points.push_back(hi);
    if (lo < 0.0 && hi > 0.0 && !std::binary_search(g.points.begin(), g.points.end(), 0.0)) {
        g.points.insert(std::upper_bound(g.points.begin(), g.points.end(), 0.0), 0.0);
    }
    return g;
}

FrequencyGrid FrequencyGrid::symmetric(double tau, double step) {
    if (!(tau > 0.0) || !(step > 0.0) || !std::isfinite(tau)) throw InvalidArgument("symmetric grid needs tau > 0 and step > 0");
    std::vector<double> positive;
    const double tol = 1e-9 * step;
    for (std::size_t j = 1;; ++j) {
        const double w = static_cast<double>(j) * step;
        if (w >= tau - tol) break;
        positive.push_back(w);
    }
    positive.push_back(tau);
    FrequencyGrid g{-tau, tau, step, {}};
    g.points.reserve(2 * positive.size() + 1);
    for (auto it = positive.rbegin(); it != positive.rend(); ++it) g.points.push_back(-*it);
    g.points.push_back(0.0);
    for (double w : positive) g.points.push_back(w);
    return g;
}

Complex ecf_sum(const Sample& sample, double omega, double shift) {
    const auto x = sample.values();
    return trig_sum(x.data(), 0, x.size(), omega, shift);
}

Complex ecf_eval(const Sample& sample, double omega) {
    return ecf_sum(sample, omega) / static_cast<double>(sample.size());
}

double ecf_norm(const Sample& sample, double omega) { return std::abs(ecf_eval(sample, omega)); }

Complex ecf_derivative(const Sample& sample, double omega, double h) {
    if (!(h > 0.0)) throw InvalidArgument("derivative step must be positive");
    return (ecf_eval(sample, omega + h) - ecf_eval(sample, omega - h)) / (2.0 * h);
}

double default_fd_step(double omega) { return 1e-4 * std::max(1.0, std::abs(omega)); }

std::vector<Complex> ecf_on_grid(const Sample& sample, std::span<const double> omegas) {
    std::vector<Complex> out(omegas.size());
    parallel_for(omegas.size(), [&](std::size_t i) { out[i] = ecf_eval(sample, omegas[i]); });
    return out;
}

}  // namespace nullest
