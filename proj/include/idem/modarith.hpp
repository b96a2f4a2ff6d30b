#pragma once

/**
 * @file modarith.hpp
 * @brief Exact modular arithmetic on 64-bit moduli.
 *
 * Products are formed in 128 bits and reduced immediately, so every
 * operation is exact for moduli below 2^63. Residues are always kept in
 * their least non-negative form.
 */

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace idem {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline constexpr u64 kDefaultFactorBound = 1'000'000;

/// A squarefree integer n >= 2 together with its verified prime factorization.
class Modulus {
public:
    u64 n() const noexcept { return n_; }
    /// Distinct primes, ascending; their product is n.
    const std::vector<u64>& primes() const noexcept { return primes_; }
    std::size_t prime_count() const noexcept { return primes_.size(); }

    bool operator==(const Modulus&) const = default;

private:
    friend Modulus factor_squarefree(u64 n, u64 bound);
    Modulus(u64 n, std::vector<u64> primes) : n_(n), primes_(std::move(primes)) {}

    u64 n_;
    std::vector<u64> primes_;
};

/// Canonical element of Z_n: 0 <= value < modulus.
class Residue {
public:
    Residue(i64 value, u64 modulus);
    static Residue from_unsigned(u64 value, u64 modulus);

    u64 value() const noexcept { return value_; }
    u64 modulus() const noexcept { return modulus_; }

    Residue operator+(const Residue& other) const;
    Residue operator-(const Residue& other) const;
    Residue operator*(const Residue& other) const;
    Residue operator-() const;

    bool operator==(const Residue&) const = default;
    auto operator<=>(const Residue&) const = default;

private:
    u64 value_;
    u64 modulus_;
};

std::ostream& operator<<(std::ostream& os, const Residue& r);

/// Least non-negative representative of a mod n.
u64 reduce(i64 a, u64 n) noexcept;
u64 add_mod(u64 a, u64 b, u64 n) noexcept;
u64 sub_mod(u64 a, u64 b, u64 n) noexcept;
u64 mul_mod(u64 a, u64 b, u64 n) noexcept;

/// Trial-division primality; intended for desk-scale inputs.
bool is_prime(u64 n) noexcept;

/**
 * Factor n by trial division up to `bound`.
 *
 * Throws NotSquarefree if some prime divides n twice, NotFactorable when a
 * cofactor above bound^2 is left over, InvalidArgument for n < 2.
 */
Modulus factor_squarefree(u64 n, u64 bound = kDefaultFactorBound);

/// a^k mod n by square-and-multiply; a^0 = 1 mod n.
u64 mod_pow(u64 a, u64 k, u64 n) noexcept;
Residue mod_pow(const Residue& a, u64 k);

struct ExtGcd {
    i64 g;
    i64 s;
    i64 t;
};

/// g = gcd(a, b) >= 0 with a*s + b*t = g.
ExtGcd ext_gcd(i64 a, i64 b) noexcept;

/// Inverse of a modulo n; throws NotCoprime when gcd(a, n) > 1.
u64 mod_inverse(u64 a, u64 n);
Residue mod_inverse(const Residue& a);

struct Congruence {
    u64 residue;
    u64 modulus;
};

/**
 * Unique x in [0, prod m_i) with x = r_i (mod m_i) for every congruence.
 * Throws ModuliNotCoprime for a non-coprime pair, InvalidArgument for an
 * empty system or a modulus below 2.
 */
Residue crt_combine(std::span<const Congruence> system);

u64 gcd(u64 a, u64 b) noexcept;

}  // namespace idem
