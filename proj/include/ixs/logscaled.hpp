#pragma once

#include <cmath>
#include <limits>

namespace ixs {

struct LogScaled {
    int sign = 0;
    double log_mag = -std::numeric_limits<double>::infinity();

    LogScaled() = default;
    LogScaled(int s, double lm) : sign(s), log_mag(s == 0 ? -std::numeric_limits<double>::infinity() : lm) {}

    static LogScaled from(double v)
    {
        if (v == 0.0 || std::isnan(v)) return {};
        return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
    }
    static LogScaled exp_of(double lm) { return {1, lm}; }

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }
    double scaled_value(double shift) const { return sign == 0 ? 0.0 : sign * std::exp(log_mag + shift); }
    bool is_zero() const { return sign == 0; }
    bool finite() const { return sign == 0 || std::isfinite(log_mag); }

    LogScaled operator*(const LogScaled& o) const
    {
        if (sign == 0 || o.sign == 0) return {};
        return {sign * o.sign, log_mag + o.log_mag};
    }
    LogScaled operator/(const LogScaled& o) const { return {sign * o.sign, log_mag - o.log_mag}; }
    LogScaled& operator*=(const LogScaled& o) { return *this = *this * o; }
    LogScaled scale_exp(double s) const { return sign == 0 ? LogScaled{} : LogScaled{sign, log_mag + s}; }

    LogScaled operator+(const LogScaled& o) const
    {
        if (sign == 0) return o;
        if (o.sign == 0) return *this;
        const LogScaled& big = log_mag >= o.log_mag ? *this : o;
        const LogScaled& small = log_mag >= o.log_mag ? o : *this;
        double r = std::exp(small.log_mag - big.log_mag);
        double m = big.sign == small.sign ? 1.0 + r : 1.0 - r;
        if (m == 0.0) return {};
        return {big.sign, big.log_mag + std::log(m)};
    }
    LogScaled operator-() const { return {-sign, log_mag}; }
};

}
