#include "pdc/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pdc {

GaussRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        // Chebyshev-based initial guess for the i-th root of P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

MappedRule map_to_interval(const GaussRule& base, double a, double b) {
    MappedRule out;
    const std::size_t n = base.size();
    out.x.resize(n);
    out.w.resize(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < n; ++i) {
        out.x[i] = mid + half * base.nodes[i];
        out.w[i] = half * base.weights[i];
    }
    return out;
}

}  // namespace pdc
