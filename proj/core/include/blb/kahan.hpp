#pragma once

#include <cmath>
#include <vector>

namespace blb {

// Neumaier-compensated accumulator.  All "exact" step-function integrals go
// through this so that piece counts in the thousands (rescaled profiles) do
// not show up as O(n·eps) drift in equality assertions.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_total(const std::vector<double>& xs) {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

}  // namespace blb
