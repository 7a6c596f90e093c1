#include "nullest/mode.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nullest/rates.hpp"

namespace nullest {

ModeEstimate kernel_mode(const Sample& sample, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("bandwidth must be positive");
    std::vector<double> x(sample.values().begin(), sample.values().end());
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    std::size_t best_count = 0;
    std::size_t best_first = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        j = std::max(j, i);
        while (j + 1 < n && x[j + 1] - x[i] <= 2.0 * h) ++j;
        const std::size_t count = j - i + 1;
        if (count > best_count) {
            best_count = count;
            best_first = i;
        }
    }
    const double lo = x[best_first];
    const double hi = x[best_first + best_count - 1];
    return {lo + (hi - lo) / 2.0, h, best_count};
}

double mode_bandwidth(std::size_t k, std::size_t n, const Hyperparams& hp) {
    require_identifiable(k, n);
    const double nd = static_cast<double>(n);
    const double gap = nd - 2.0 * static_cast<double>(k);
    return hp.mode_C1 * std::sqrt(std::max(1.0, std::log(hp.L_delta * nd / (gap * gap))));
}

double sample_median(const Sample& sample) {
    std::vector<double> x(sample.values().begin(), sample.values().end());
    const std::size_t mid = (x.size() + 1) / 2 - 1;
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
    return x[mid];
}

}  // namespace nullest
