#include "nullest/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "nullest/types.hpp"

namespace nullest {

namespace {

struct SimpsonState {
    const RealFunction& f;
    int max_depth;
};

double simpson_step(const SimpsonState& s, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
    const double m = a + (b - a) / 2.0;
    const double lm = a + (m - a) / 2.0;
    const double rm = m + (b - m) / 2.0;
    const double flm = s.f(lm);
    const double frm = s.f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= s.max_depth)
        throw QuadratureError("adaptive Simpson did not converge on [" + format_double(a) + ", " + format_double(b) +
                              "] (error estimate " + format_double(std::abs(delta) / 15.0) + ")");
    return simpson_step(s, a, m, fa, flm, fm, left, tol / 2.0, depth + 1) +
           simpson_step(s, m, b, fm, frm, fb, right, tol / 2.0, depth + 1);
}

}  // namespace

double adaptive_simpson(const RealFunction& f, double a, double b, double tol, int max_depth) {
    if (!(tol > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
    if (a == b) return 0.0;
    const SimpsonState s{f, max_depth};
    // Start from a few fixed panels so oscillatory integrands are not
    // mistaken for converged on the first coarse estimate.
    constexpr int kInitial = 16;
    double total = 0.0;
    const double h = (b - a) / kInitial;
    for (int i = 0; i < kInitial; ++i) {
        const double lo = a + i * h;
        const double hi = i + 1 == kInitial ? b : a + (i + 1) * h;
        const double flo = f(lo);
        const double fhi = f(hi);
        const double fm = f(lo + (hi - lo) / 2.0);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
        total += simpson_step(s, lo, hi, flo, fm, fhi, whole, tol / kInitial, 0);
    }
    return total;
}

double gauss_legendre(const RealFunction& f, double a, double b, std::size_t panels) {
    if (panels == 0) throw InvalidArgument("need at least one panel");
    const double h = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + static_cast<double>(p) * h;
        const double hi = p + 1 == panels ? b : lo + h;
        total += boost::math::quadrature::gauss<double, 15>::integrate(f, lo, hi);
    }
    return total;
}

double gauss_legendre_piecewise(const RealFunction& f, const std::vector<double>& breaks, double max_width) {
    if (breaks.size() < 2) throw InvalidArgument("need at least two breakpoints");
    if (!(max_width > 0.0)) throw InvalidArgument("panel width must be positive");
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        if (!(a <= b)) throw InvalidArgument("breakpoints must be increasing");
        if (a == b) continue;
        const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_width));
        total += gauss_legendre(f, a, b, panels);
    }
    return total;
}

}  // namespace nullest
