#pragma once

// Forward-mode dual numbers with a runtime-sized gradient.
//
// Dual<T> nests: Dual<Dual<double>> carries second-order information, which
// is what the backstepping recursion needs when a stage law itself contains
// partials of the previous virtual control. An empty gradient means "all
// zeros" so constants never allocate.

#include <cmath>
#include <cstddef>
#include <vector>

namespace ppc {

template <class T>
struct Dual {
    T v{};
    std::vector<T> d;

    Dual() = default;
    Dual(double c) : v(c) {}  // NOLINT(google-explicit-constructor)
    Dual(T value, std::vector<T> grad) : v(std::move(value)), d(std::move(grad)) {}

    /// Independent variable number `index` out of `size`.
    static Dual variable(T value, std::size_t index, std::size_t size) {
        std::vector<T> g(size, T(0.0));
        g[index] = T(1.0);
        return Dual(std::move(value), std::move(g));
    }

    T grad(std::size_t i) const { return d.empty() ? T(0.0) : d[i]; }
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

template <class T>
    requires(!is_dual<T>::value)
double value_of(const T& x) {
    return static_cast<double>(x);
}
template <class T>
double value_of(const Dual<T>& x) {
    return value_of(x.v);
}

namespace dual_detail {

// out = a*sa + b*sb, treating empty vectors as zero.
template <class T, class S>
std::vector<T> axpby(const std::vector<T>& a, const S& sa, const std::vector<T>& b, const S& sb) {
    if (a.empty() && b.empty()) return {};
    if (a.empty()) {
        std::vector<T> out(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i] * sb;
        return out;
    }
    if (b.empty()) {
        std::vector<T> out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * sa;
        return out;
    }
    std::vector<T> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * sa + b[i] * sb;
    return out;
}

template <class T, class S>
std::vector<T> scale(const std::vector<T>& a, const S& s) {
    std::vector<T> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
    return out;
}

}  // namespace dual_detail

template <class T>
Dual<T> operator-(const Dual<T>& a) {
    return Dual<T>(-a.v, dual_detail::scale(a.d, -1.0));
}

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
    if (a.d.empty()) return Dual<T>(a.v + b.v, b.d);
    if (b.d.empty()) return Dual<T>(a.v + b.v, a.d);
    return Dual<T>(a.v + b.v, dual_detail::axpby(a.d, 1.0, b.d, 1.0));
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
    return Dual<T>(a.v - b.v, dual_detail::axpby(a.d, 1.0, b.d, -1.0));
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    return Dual<T>(a.v * b.v, dual_detail::axpby(a.d, b.v, b.d, a.v));
}
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    T q = a.v / b.v;
    T inv = T(1.0) / b.v;
    return Dual<T>(q, dual_detail::axpby(a.d, inv, b.d, -q * inv));
}

template <class T>
Dual<T> operator+(const Dual<T>& a, double b) { return Dual<T>(a.v + b, a.d); }
template <class T>
Dual<T> operator+(double a, const Dual<T>& b) { return Dual<T>(a + b.v, b.d); }
template <class T>
Dual<T> operator-(const Dual<T>& a, double b) { return Dual<T>(a.v - b, a.d); }
template <class T>
Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a - b.v, dual_detail::scale(b.d, -1.0)); }
template <class T>
Dual<T> operator*(const Dual<T>& a, double b) { return Dual<T>(a.v * b, dual_detail::scale(a.d, b)); }
template <class T>
Dual<T> operator*(double a, const Dual<T>& b) { return Dual<T>(a * b.v, dual_detail::scale(b.d, a)); }
template <class T>
Dual<T> operator/(const Dual<T>& a, double b) { return Dual<T>(a.v / b, dual_detail::scale(a.d, 1.0 / b)); }
template <class T>
Dual<T> operator/(double a, const Dual<T>& b) {
    T q = a / b.v;
    return Dual<T>(q, dual_detail::scale(b.d, -q / b.v));
}

template <class T, class U>
Dual<T>& operator+=(Dual<T>& a, const U& b) { return a = a + b; }
template <class T, class U>
Dual<T>& operator-=(Dual<T>& a, const U& b) { return a = a - b; }
template <class T, class U>
Dual<T>& operator*=(Dual<T>& a, const U& b) { return a = a * b; }

using std::sqrt;
using std::exp;
using std::log;
using std::tanh;

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
    T s = sqrt(a.v);
    return Dual<T>(s, dual_detail::scale(a.d, T(0.5) / s));
}
template <class T>
Dual<T> exp(const Dual<T>& a) {
    T e = exp(a.v);
    return Dual<T>(e, dual_detail::scale(a.d, e));
}
template <class T>
Dual<T> log(const Dual<T>& a) {
    return Dual<T>(log(a.v), dual_detail::scale(a.d, T(1.0) / a.v));
}
template <class T>
Dual<T> tanh(const Dual<T>& a) {
    T th = tanh(a.v);
    return Dual<T>(th, dual_detail::scale(a.d, T(1.0) - th * th));
}

/// Integer power by repeated multiplication (exact for duals).
template <class T>
T ipow(const T& x, int p) {
    T out(1.0);
    for (int i = 0; i < p; ++i) out = out * x;
    return out;
}

}  // namespace ppc
