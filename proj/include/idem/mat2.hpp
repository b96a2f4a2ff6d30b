#pragma once

/**
 * @file mat2.hpp
 * @brief 2x2 matrices over Z_n[x].
 *
 * Entries are named in reading order, G = [[e, f], [g, h]]. Constant
 * matrices are ordinary Mat2Poly values with degree <= 0 entries.
 *
 * File format (JSON):
 *
 *     {"n": 385, "entries": [[[0, 1], [0, 1, 384]], [[1], [1, 384]]]}
 *
 * `entries` is row-major; each entry is its coefficient array in ascending
 * degree, every coefficient canonical in [0, n), no trailing zeros, and the
 * zero polynomial written as [].
 */

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "idem/polyring.hpp"

namespace idem {

struct Mat2Poly {
    Poly e;
    Poly f;
    Poly g;
    Poly h;

    /// Checks that all four entries share one modulus.
    Mat2Poly(Poly e, Poly f, Poly g, Poly h);

    u64 modulus() const noexcept { return e.modulus(); }
    int max_degree() const noexcept;
    bool is_constant() const noexcept;

    static Mat2Poly zero(u64 n);
    static Mat2Poly identity(u64 n);
    static Mat2Poly constant(u64 n, u64 e, u64 f, u64 g, u64 h);
    /// d * Identity.
    static Mat2Poly scalar(u64 n, u64 d);

    bool operator==(const Mat2Poly&) const = default;
};

Mat2Poly mat_add(const Mat2Poly& a, const Mat2Poly& b);
Mat2Poly mat_sub(const Mat2Poly& a, const Mat2Poly& b);
Mat2Poly mat_mul(const Mat2Poly& a, const Mat2Poly& b);
Mat2Poly mat_scale(u64 c, const Mat2Poly& a);

Poly mat_det(const Mat2Poly& a);
Poly mat_trace(const Mat2Poly& a);

/// A*A == A, entrywise in canonical form.
bool is_idempotent(const Mat2Poly& a);

/**
 * The same property through the four scalar equations
 * e^2 + fg = e, f(e+h) = f, g(e+h) = g, fg + h^2 = h.
 */
bool idempotent_equations_hold(const Mat2Poly& a);

std::string to_string(const Mat2Poly& a);
std::ostream& operator<<(std::ostream& os, const Mat2Poly& a);

nlohmann::json to_json(const Mat2Poly& a);
/// Strict reader for the file format; throws MalformedInput.
Mat2Poly matrix_from_json(const nlohmann::json& doc);
Mat2Poly read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Mat2Poly& a);

}  // namespace idem
