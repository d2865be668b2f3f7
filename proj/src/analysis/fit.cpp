#include "tamed/analysis/fit.hpp"

#include <cmath>
#include <sstream>

#include "tamed/core/errors.hpp"

namespace tamed {

OrderFit fit_order(const std::vector<std::pair<double, double>>& table)
{
    OrderFit fit;
    std::vector<double> xs, ys;
    for (const auto& [n, e] : table) {
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw FitError("fit_order: resolution must be positive");
        }
        if (!(e > 0.0) || !std::isfinite(e)) {
            std::ostringstream msg;
            msg << "excluded n = " << n << " with error " << e;
            fit.warnings.push_back(msg.str());
            continue;
        }
        xs.push_back(std::log(n));
        ys.push_back(std::log(e));
    }
    const std::size_t m = xs.size();
    if (m < 3) {
        throw FitError("fit_order: need at least 3 positive errors, have " +
                       std::to_string(m));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw FitError("fit_order: resolutions must not all be equal");
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        rss += r * r;
    }
    fit.order = -slope;
    fit.intercept = intercept;
    fit.residual = std::sqrt(rss);
    fit.order_se = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
    fit.points_used = m;
    return fit;
}

} // namespace tamed
