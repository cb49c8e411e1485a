#pragma once

// Ridders' extrapolated central difference. Copes with large function values
// where a single small step drowns in rounding.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fd {

/// Extrapolates D(h) -> D(0) for a difference quotient with an even error expansion.
/// `h0` is the initial step; it is halved while D throws.
template <class D>
double extrapolate(D&& diff, double h0, double* err_out = nullptr) {
    constexpr int kTab = 12;
    constexpr double kCon = 1.4;
    constexpr double kCon2 = kCon * kCon;
    constexpr double kSafe = 2.0;

    double h = h0;
    double first = 0.0;
    for (int tries = 0;; ++tries) {
        try {
            first = diff(h);
            break;
        } catch (const std::exception&) {
            if (tries > 40) throw;
            h *= 0.5;
        }
    }

    double a[kTab][kTab];
    a[0][0] = first;
    double err = std::numeric_limits<double>::max();
    double ans = first;
    for (int i = 1; i < kTab; ++i) {
        h /= kCon;
        a[0][i] = diff(h);
        double fac = kCon2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= kCon2;
            const double e = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
            if (e <= err) {
                err = e;
                ans = a[j][i];
            }
        }
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= kSafe * err) break;
    }
    if (err_out) *err_out = err;
    return ans;
}

/// f'(x)
template <class F>
double ridders(F&& f, double x, double h0, double* err_out = nullptr) {
    return extrapolate([&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }, h0, err_out);
}

/// f''(x)
template <class F>
double ridders2(F&& f, double x, double h0, double* err_out = nullptr) {
    const double fx = f(x);
    return extrapolate([&](double h) { return (f(x + h) - 2.0 * fx + f(x - h)) / (h * h); }, h0, err_out);
}

}  // namespace fd
