#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace tamed {

// Neumaier-compensated running sum. Once an infinite term arrives the sum
// stays infinite instead of turning into NaN through the compensation.
class CompensatedSum
{
  public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (!std::isfinite(t)) {
            sum_ = t;
            comp_ = 0.0;
            return;
        }
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept
    {
        return std::isfinite(sum_) ? sum_ + comp_ : sum_;
    }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Sum and sum of squares of a sample, for a mean and its standard error.
struct RunningMoments
{
    CompensatedSum sum;
    CompensatedSum sum_sq;
    std::size_t count = 0;

    void add(double x) noexcept
    {
        sum.add(x);
        sum_sq.add(x * x);
        ++count;
    }
    void add_partial(double s, double s2, std::size_t n) noexcept
    {
        sum.add(s);
        sum_sq.add(s2);
        count += n;
    }

    double mean() const noexcept
    {
        return count ? sum.value() / static_cast<double>(count)
                     : std::numeric_limits<double>::quiet_NaN();
    }
    // Standard error of the mean (unbiased variance); NaN below 2 samples.
    double standard_error() const noexcept
    {
        if (count < 2) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        const double n = static_cast<double>(count);
        const double m = sum.value() / n;
        if (!std::isfinite(m)) {
            return std::numeric_limits<double>::infinity();
        }
        const double var = std::max(0.0, (sum_sq.value() - n * m * m) / (n - 1));
        return std::sqrt(var / n);
    }
};

inline double compensated_sum(std::span<const double> values) noexcept
{
    CompensatedSum s;
    for (double v : values) {
        s.add(v);
    }
    return s.value();
}

} // namespace tamed
