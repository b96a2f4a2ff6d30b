#pragma once

/**
 * @file polyring.hpp
 * @brief Dense univariate polynomials over Z_n.
 *
 * A Poly is a little-endian coefficient vector with every coefficient in
 * [0, n) and no trailing zeros; the zero polynomial has no coefficients.
 * All operations return canonical values, so `==` is ring equality.
 */

#include <climits>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "idem/modarith.hpp"

namespace idem {

/// Degree of the zero polynomial; compares below every real degree.
inline constexpr int kZeroDegree = INT_MIN;

class Poly {
public:
    /// The zero polynomial over Z_n.
    explicit Poly(u64 n);
    /// Coefficients are reduced mod n and trailing zeros dropped.
    Poly(u64 n, std::vector<u64> coeffs);

    static Poly constant(u64 n, u64 c);
    static Poly constant(const Residue& c);
    /// c * x^k
    static Poly monomial(u64 n, u64 c, std::size_t k);

    u64 modulus() const noexcept { return n_; }
    const std::vector<u64>& coeffs() const noexcept { return coeffs_; }
    /// Coefficient of x^i (zero past the degree).
    u64 coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }
    int degree() const noexcept;
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_constant() const noexcept { return coeffs_.size() <= 1; }

    bool operator==(const Poly&) const = default;

private:
    void normalize();

    u64 n_;
    std::vector<u64> coeffs_;
};

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(u64 c, const Poly& a);
Poly poly_scale(const Residue& c, const Poly& a);
Poly poly_neg(const Poly& a);

inline Poly operator+(const Poly& a, const Poly& b) { return poly_add(a, b); }
inline Poly operator-(const Poly& a, const Poly& b) { return poly_sub(a, b); }
inline Poly operator*(const Poly& a, const Poly& b) { return poly_mul(a, b); }
inline Poly operator-(const Poly& a) { return poly_neg(a); }

/// Constant term of a degree <= 0 polynomial; throws NotConstant otherwise.
Residue const_value(const Poly& a);

/// True when every coefficient is a multiple of d (d divides n).
bool coeffs_divisible_by(const Poly& a, u64 d);

/**
 * Coefficientwise exact quotient by a divisor d of n, with each quotient
 * coefficient in [0, n/d). The result is returned over Z_n, so
 * poly_scale(d, result) == a. Throws InvalidArgument if d does not divide n
 * or some coefficient is not a multiple of d.
 */
Poly coeffs_exact_div(const Poly& a, u64 d);

/// Reduce every coefficient modulo a divisor m of n, keeping the ring Z_n.
Poly coeffs_mod(const Poly& a, u64 m);

/// "c0 + c1*x + c2*x^2 + ..." with zero terms omitted; "0" for zero.
std::string to_string(const Poly& a);
std::ostream& operator<<(std::ostream& os, const Poly& a);

/**
 * Parse the rendering grammar: terms joined by '+' or '-', each of the form
 * `c`, `c*x`, `c*x^k`, `x` or `x^k`, arbitrary whitespace. Coefficients are
 * reduced mod n. Throws MalformedInput.
 */
Poly parse_poly(std::string_view text, u64 n);

}  // namespace idem
