#include "nullest/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "nullest/parallel.hpp"
#include "nullest/quadrature.hpp"

namespace nullest {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConvolutionWindow = 10.0;  // φ(10) ≈ 8e-23
constexpr double kPanelWidth = 0.25;
constexpr std::size_t kGridPoints = (1u << 14) + 1;
constexpr std::size_t kCfPoints = 256;
constexpr int kMaxRejections = 10000;

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

void require_arm(int arm) {
    if (arm != 0 && arm != 1) throw InvalidArgument("arm must be 0 or 1");
}

// ∫ p(y) φ(z − y) dy over the window where φ is non-negligible.
double convolve(const RealFunction& p, double z, double tau, bool kinks) {
    std::vector<double> breaks{z - kConvolutionWindow};
    if (kinks) {
        for (double b : {-1.0 / tau, 1.0 / tau})
            if (b > breaks.back() && b < z + kConvolutionWindow) breaks.push_back(b);
    }
    breaks.push_back(z + kConvolutionWindow);
    return gauss_legendre_piecewise([&](double y) { return p(y) * phi(z - y); }, breaks, kPanelWidth);
}

}  // namespace

PriorConstruction PriorConstruction::make(double eps, std::size_t n, double c0, double Bc) {
    if (!(eps > 0.0 && eps <= 0.5)) throw InvalidArgument("eps must lie in (0, 1/2]");
    if (n < 1) throw InvalidArgument("n must be positive");
    if (!(c0 > 0.0) || !(Bc > 0.0)) throw InvalidArgument("c0 and Bc must be positive");
    PriorConstruction pc;
    pc.eps = eps;
    pc.n = n;
    pc.c0 = c0;
    pc.Bc = Bc;
    pc.lambda = eps / (1.0 + 2.0 * eps);
    const double arg = std::exp(1.0) * static_cast<double>(n) * eps * eps * (1.0 - 2.0 * eps) * (1.0 - 2.0 * eps);
    pc.tau = arg > 1.0 ? std::max(1.0, Bc * std::sqrt(std::log(arg))) : 1.0;
    pc.mu = c0 * pc.lambda / pc.tau;
    return pc;
}

double PriorConstruction::amplitude() const { return (1.0 - lambda) / lambda; }

double PriorConstruction::arm_theta(int arm) const {
    require_arm(arm);
    return arm == 0 ? 0.0 : 2.0 * mu;
}

DensityGrid DensityGrid::uniform(double lo, double hi, std::size_t count, GridRule rule) {
    if (!(lo < hi) || count < 3) throw InvalidArgument("density grid needs lo < hi and at least 3 points");
    if (rule == GridRule::simpson && count % 2 == 0) throw InvalidArgument("Simpson grid needs an odd point count");
    DensityGrid g;
    g.quadrature = rule;
    g.xs.resize(count);
    const double h = (hi - lo) / static_cast<double>(count - 1);
    const std::size_t mid = (count - 1) / 2;
    for (std::size_t i = 0; i < count; ++i) g.xs[i] = lo + static_cast<double>(i) * h;
    // Exact symmetry about 0 for symmetric ranges keeps odd integrands at 0.
    if (lo == -hi) {
        for (std::size_t i = 0; i < mid; ++i) g.xs[count - 1 - i] = -g.xs[i];
        if (count % 2 == 1) g.xs[mid] = 0.0;
    }
    g.values.assign(count, 0.0);
    return g;
}

double DensityGrid::step() const { return (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1); }

double DensityGrid::integrate() const { return integrate(values); }

double DensityGrid::integrate(const std::vector<double>& ys) const {
    if (ys.size() != xs.size()) throw InvalidArgument("values do not match the grid");
    const double h = step();
    const std::size_t m = ys.size();
    if (quadrature == GridRule::trapezoid) {
        double s = 0.5 * (ys.front() + ys.back());
        for (std::size_t i = 1; i + 1 < m; ++i) s += ys[i];
        return s * h;
    }
    double s = ys.front() + ys.back();
    for (std::size_t i = 1; i + 1 < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * ys[i];
    return s * h / 3.0;
}

DensityGrid verification_grid(const PriorConstruction& pc) {
    const double M = 20.0 + 100.0 / pc.tau;
    return DensityGrid::uniform(-M, M, kGridPoints, GridRule::trapezoid);
}

double p0_density(double x, double tau) {
    if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
    const double ax = std::abs(x);
    if (ax <= 1.0 / tau) return tau / 4.0;
    return 1.0 / (4.0 * tau * x * x);
}

double delta_eval(double x, const PriorConstruction& pc, double quad_tol) {
    if (!(quad_tol > 0.0 && quad_tol <= 1e-8)) throw InvalidArgument("quad_tol must lie in (0, 1e-8]");
    const double two_a = 2.0 * pc.amplitude();
    const double tau = pc.tau;
    const double mu = pc.mu;
    const double taper = two_a * std::sin(tau * mu) / tau;
    const double inner =
        adaptive_simpson([&](double t) { return two_a * std::sin(t * mu) * std::sin(t * x); }, 0.0, tau, quad_tol / 2.0);
    const double outer = adaptive_simpson([&](double t) { return taper * (2.0 * tau - t) * std::sin(t * x); }, tau,
                                          2.0 * tau, quad_tol / 2.0);
    return -(inner + outer) / kPi;
}

double delta_closed_form(double x, const PriorConstruction& pc) {
    const double tau = pc.tau;
    const double mu = pc.mu;
    const double coef = -2.0 * pc.amplitude() / kPi;
    const double taper = std::sin(tau * mu) / tau;
    if (std::abs(x) * tau < 0.5) {
        // The closed form cancels badly near 0; the integrands are benign there.
        const double inner = gauss_legendre([&](double t) { return std::sin(t * mu) * std::sin(t * x); }, 0.0, tau, 2);
        const double outer = gauss_legendre([&](double t) { return (2.0 * tau - t) * std::sin(t * x); }, tau, 2.0 * tau, 2);
        return coef * (inner + taper * outer);
    }
    auto S = [tau](double w) {
        const double tw = tau * w;
        if (std::abs(tw) < 1e-4) return tau * (1.0 - tw * tw / 6.0);
        return std::sin(tw) / w;
    };
    const double inner = 0.5 * (S(x - mu) - S(x + mu));
    const double outer = tau * std::cos(tau * x) / x - (std::sin(2.0 * tau * x) - std::sin(tau * x)) / (x * x);
    return coef * (inner + taper * outer);
}

P1Report verify_p1(const PriorConstruction& pc, const DensityGrid& grid) {
    P1Report r;
    r.c0_within_contract = pc.c0 <= 1.0 / 24.0;
    const std::size_t m = grid.xs.size();
    std::vector<double> delta(m);
    std::vector<double> p1(m);
    parallel_for(m, [&](std::size_t i) {
        delta[i] = delta_closed_form(grid.xs[i], pc);
        p1[i] = p0_density(grid.xs[i], pc.tau) + delta[i];
    });
    r.min_p1 = *std::min_element(p1.begin(), p1.end());
    r.integral_delta = grid.integrate(delta);

    const double M = std::min(-grid.xs.front(), grid.xs.back());
    const double k = 1.0 / pc.tau;
    std::vector<double> breaks{-M};
    if (k < M) {
        breaks.push_back(-k);
        breaks.push_back(k);
    }
    breaks.push_back(M);
    const double body = gauss_legendre_piecewise(
        [&](double x) { return p0_density(x, pc.tau) + delta_closed_form(x, pc); }, breaks, 0.1);
    const double tail = M > k ? 1.0 / (2.0 * pc.tau * M) : 0.0;
    r.integral_p1 = body + tail;

    r.min_ok = r.min_p1 >= -1e-8;
    r.integral_ok = std::abs(r.integral_p1 - 1.0) <= 1e-4;
    r.delta_ok = std::abs(r.integral_delta) <= 1e-5;
    return r;
}

double convolved_prior(double z, const PriorConstruction& pc, int arm) {
    require_arm(arm);
    const double tau = pc.tau;
    if (arm == 0) return convolve([tau](double y) { return p0_density(y, tau); }, z, tau, true);
    return convolve([&pc, tau](double y) { return p0_density(y, tau) + delta_closed_form(y, pc); }, z, tau, true);
}

MixtureDensity::MixtureDensity(const PriorConstruction& pc, int arm) : pc_(pc), arm_(arm) { require_arm(arm); }

double MixtureDensity::operator()(double x) const {
    const double eps = pc_.eps;
    const double mu = pc_.mu;
    const double null_at = arm_ == 0 ? 0.0 : 2.0 * mu;
    const double point_at = arm_ == 0 ? 2.0 * mu : 0.0;
    double f = (1.0 - eps) * phi(x - null_at) + 2.0 * eps * eps * phi(x - point_at);
    const double smooth = eps * (1.0 - 2.0 * eps);
    if (smooth > 0.0) f += smooth * convolved_prior(x - mu, pc_, arm_);
    return f;
}

double mixture_difference(double x, const PriorConstruction& pc) {
    const double eps = pc.eps;
    const double mu = pc.mu;
    double d = (1.0 - eps - 2.0 * eps * eps) * (phi(x - 2.0 * mu) - phi(x));
    const double smooth = eps * (1.0 - 2.0 * eps);
    if (smooth > 0.0)
        d += smooth * convolve([&pc](double y) { return delta_closed_form(y, pc); }, x - mu, pc.tau, false);
    return d;
}

MixturePair build_mixture_pair(const PriorConstruction& pc) { return {MixtureDensity(pc, 0), MixtureDensity(pc, 1)}; }

MixtureReport verify_mixture(const PriorConstruction& pc, const DensityGrid& grid) {
    const std::size_t m = grid.xs.size();
    const MixtureDensity f0(pc, 0);
    std::vector<double> v0(m), v1(m), diff(m);
    parallel_for(m, [&](std::size_t i) {
        v0[i] = f0(grid.xs[i]);
        diff[i] = mixture_difference(grid.xs[i], pc);
        v1[i] = v0[i] + diff[i];
    });

    MixtureReport r;
    // Heavy p₀ tails beyond the grid, shifted by μ.
    const double lo = -grid.xs.front();
    const double hi = grid.xs.back();
    const double tail = pc.eps * (1.0 - 2.0 * pc.eps) * (1.0 / (4.0 * pc.tau * (hi - pc.mu)) + 1.0 / (4.0 * pc.tau * (lo + pc.mu)));
    r.integral_f0 = grid.integrate(v0) + tail;
    r.integral_f1 = grid.integrate(v1) + tail;

    const double h = grid.step();
    std::vector<double> weights(m, h);
    if (grid.quadrature == GridRule::trapezoid) {
        weights.front() = weights.back() = h / 2.0;
    } else {
        for (std::size_t i = 0; i < m; ++i)
            weights[i] = h / 3.0 * (i == 0 || i + 1 == m ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0));
    }
    std::vector<double> cf(kCfPoints);
    const double t_max = 0.99 * pc.tau;
    parallel_for(kCfPoints, [&](std::size_t j) {
        const double t = -t_max + 2.0 * t_max * static_cast<double>(j) / static_cast<double>(kCfPoints - 1);
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double w = weights[i] * diff[i];
            re += w * std::cos(t * grid.xs[i]);
            im -= w * std::sin(t * grid.xs[i]);
        }
        cf[j] = std::hypot(re, im);
    });
    r.cf_match_max = *std::max_element(cf.begin(), cf.end());

    std::vector<double> ratio(m);
    for (std::size_t i = 0; i < m; ++i) ratio[i] = v0[i] > 0.0 ? diff[i] * diff[i] / v0[i] : 0.0;
    r.chi2_estimate = grid.integrate(ratio);

    r.integrals_ok = std::abs(r.integral_f0 - 1.0) <= 1e-4 && std::abs(r.integral_f1 - 1.0) <= 1e-4;
    r.cf_ok = r.cf_match_max <= 1e-6;
    r.chi2_ok = r.chi2_estimate <= 1.0 / static_cast<double>(pc.n);
    return r;
}

double sample_p0(Stream& rng, double tau) {
    const bool inner = rng.uniform() < 0.5;
    const double u = rng.uniform_open();
    if (inner) return (2.0 * u - 1.0) / tau;
    const double magnitude = 1.0 / (tau * u);
    return rng.uniform() < 0.5 ? -magnitude : magnitude;
}

double sample_p1(Stream& rng, const PriorConstruction& pc) {
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        const double y = sample_p0(rng, pc.tau);
        const double q = p0_density(y, pc.tau);
        const double p = q + delta_closed_form(y, pc);
        if (p > 2.0 * q * (1.0 + 1e-12))
            throw Error("rejection envelope 2 p0 violated at y = " + format_double(y) + "; c0 is out of contract");
        if (rng.uniform() * 2.0 * q < p) return y;
    }
    throw Error("rejection sampler for p1 fell below its efficiency floor");
}

double sample_prior_shift(Stream& rng, const PriorConstruction& pc, int arm) {
    require_arm(arm);
    const bool point = rng.uniform() < 2.0 * pc.eps;
    if (arm == 0) return point ? 2.0 * pc.mu : pc.mu + sample_p0(rng, pc.tau);
    return point ? -2.0 * pc.mu : sample_p1(rng, pc) - pc.mu;
}

Sample sample_mixture(const PriorConstruction& pc, int arm, std::size_t n, std::uint64_t seed) {
    require_arm(arm);
    if (n < 1) throw InvalidArgument("n must be positive");
    Stream rng = Stream::keyed({seed, 0x6d6978ULL});
    const double theta = pc.arm_theta(arm);
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        const bool contaminated = rng.uniform() < pc.eps;
        const double shift = contaminated ? sample_prior_shift(rng, pc, arm) : 0.0;
        x[j] = theta + shift + rng.normal();
    }
    return Sample(std::move(x));
}

double two_block_psi(std::size_t k, std::size_t n) {
    const double nd = static_cast<double>(n);
    const double gap = nd - 2.0 * static_cast<double>(k);
    return std::sqrt(std::log1p(nd / (gap * gap)));
}

TwoBlockDraw two_block_prior_sample(std::size_t k, std::size_t n, double C, int arm, std::uint64_t seed) {
    require_arm(arm);
    if (n < 2 || n % 2 != 0) throw InvalidArgument("two-block prior needs an even n");
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    if (!(kd > nd / 2.0 - std::sqrt(nd) && 2 * k < n))
        throw InvalidArgument("two-block prior needs n/2 - sqrt(n) < k < n/2");
    const double psi = two_block_psi(k, n);
    const double theta = arm == 0 ? C * psi : -C * psi;
    const double shift = arm == 0 ? -2.0 * C * psi : 2.0 * C * psi;

    const std::size_t half = n / 2;
    std::vector<std::size_t> idx(half);
    std::iota(idx.begin(), idx.end(), arm == 0 ? std::size_t{0} : half);
    Stream pick = Stream::keyed({seed, 1});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(pick.below(half - i));
        std::swap(idx[i], idx[j]);
    }
    std::vector<double> gamma(n, 0.0);
    for (std::size_t i = 0; i < k; ++i) gamma[idx[i]] = shift;

    Stream noise = Stream::keyed({seed, 2});
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = theta + gamma[j] + noise.normal();
    return {Sample(std::move(x)), NullParams{theta, 1.0}, std::move(gamma)};
}

}  // namespace nullest
