#pragma once

#include <string>

#include "nilforge/rational.hpp"

namespace nilforge {

namespace detail {
inline bool squarefree(long d) {
    if (d <= 1) return d == 1;
    for (long p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}
}  // namespace detail

/// Element a + b*sqrt(d) of a real quadratic extension of the rationals.
///
/// The radicand d is carried per value and normalized to 0 whenever b = 0,
/// so plain rationals embed with no field tag and mix freely with any d.
/// Combining two values with distinct nonzero radicands is an error.
class QuadExt {
public:
    QuadExt() = default;
    QuadExt(long n) : a_(n) {}  // NOLINT: implicit by design
    QuadExt(Rational a) : a_(std::move(a)) {}  // NOLINT: rationals embed implicitly
    QuadExt(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
        if (b_.is_zero()) {
            d_ = 0;
        } else {
            check_radicand(d_);
        }
    }

    static QuadExt sqrt_of(long d) { return QuadExt(Rational(0), Rational(1), d); }

    const Rational& rational_part() const { return a_; }
    const Rational& radical_part() const { return b_; }
    long radicand() const { return d_; }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_rational() const { return b_.is_zero(); }

    QuadExt operator-() const { return raw(-a_, -b_, d_); }

    friend QuadExt operator+(const QuadExt& x, const QuadExt& y) {
        long d = merge_radicand(x, y);
        return QuadExt(x.a_ + y.a_, x.b_ + y.b_, d);
    }
    friend QuadExt operator-(const QuadExt& x, const QuadExt& y) { return x + (-y); }
    friend QuadExt operator*(const QuadExt& x, const QuadExt& y) {
        long d = merge_radicand(x, y);
        return QuadExt(x.a_ * y.a_ + Rational(d) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_, d);
    }
    friend QuadExt operator/(const QuadExt& x, const QuadExt& y) { return x * y.inverse(); }

    QuadExt& operator+=(const QuadExt& o) { return *this = *this + o; }
    QuadExt& operator-=(const QuadExt& o) { return *this = *this - o; }
    QuadExt& operator*=(const QuadExt& o) { return *this = *this * o; }
    QuadExt& operator/=(const QuadExt& o) { return *this = *this / o; }

    /// Conjugate inverse: 1/(a+b√d) = (a−b√d)/(a²−d·b²). The norm cannot
    /// vanish for a nonzero element since d is squarefree.
    QuadExt inverse() const {
        if (is_zero()) throw ArithmeticError("inverse of zero");
        if (b_.is_zero()) return QuadExt(a_.inverse());
        Rational norm = a_ * a_ - Rational(d_) * b_ * b_;
        if (norm.is_zero()) throw ArithmeticError("zero norm in quadratic extension");
        return QuadExt(a_ / norm, -b_ / norm, d_);
    }

    friend bool operator==(const QuadExt& x, const QuadExt& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.d_ == y.d_;
    }
    friend bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }

    std::string str() const {
        if (b_.is_zero()) return a_.str();
        std::string rad = "sqrt(" + std::to_string(d_) + ")";
        std::string right = b_.is_one() ? rad : (b_ == Rational(-1) ? "-" + rad : b_.str() + " " + rad);
        if (a_.is_zero()) return right;
        if (right[0] == '-') return a_.str() + " - " + right.substr(1);
        return a_.str() + " + " + right;
    }

private:
    static QuadExt raw(Rational a, Rational b, long d) { return QuadExt(std::move(a), std::move(b), d); }

    static void check_radicand(long d) {
        if (d <= 1 || !detail::squarefree(d))
            throw ArithmeticError("radicand must be a squarefree integer > 1, got " + std::to_string(d));
    }

    static long merge_radicand(const QuadExt& x, const QuadExt& y) {
        if (x.d_ == 0) return y.d_;
        if (y.d_ == 0 || x.d_ == y.d_) return x.d_;
        throw ArithmeticError("mixed radicands sqrt(" + std::to_string(x.d_) + ") and sqrt(" +
                              std::to_string(y.d_) + ")");
    }

    Rational a_;
    Rational b_;
    long d_ = 0;  // 0 means the value is plain rational
};

/// Field concept the algebra layer is templated on.
template <class S>
concept ScalarField = requires(S a, S b) {
    S();
    S(1L);
    { a + b } -> std::convertible_to<S>;
    { a - b } -> std::convertible_to<S>;
    { a* b } -> std::convertible_to<S>;
    { a / b } -> std::convertible_to<S>;
    { -a } -> std::convertible_to<S>;
    { a == b } -> std::convertible_to<bool>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.str() } -> std::convertible_to<std::string>;
};

static_assert(ScalarField<Rational>);
static_assert(ScalarField<QuadExt>);

}  // namespace nilforge
