#pragma once

#include <cstddef>
#include <vector>

namespace pdc {

// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

// Computes the n-point Gauss-Legendre rule by Newton iteration on P_n.
// Accurate to ~1 ulp for n up to a few thousand.
GaussRule gauss_legendre(std::size_t n);

// Rule mapped onto [a, b].
struct MappedRule {
    std::vector<double> x;
    std::vector<double> w;
};

MappedRule map_to_interval(const GaussRule& base, double a, double b);

// Compensated (Kahan) accumulator. Keeps sums deterministic and accurate
// independent of magnitude spread across quadrature nodes.
class KahanSum {
  public:
    void add(double term) {
        double y = term - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace pdc
