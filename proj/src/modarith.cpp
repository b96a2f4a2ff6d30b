#include "idem/modarith.hpp"

#include <limits>
#include <ostream>
#include <string>

#include "idem/error.hpp"

namespace idem {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr u64 kMaxModulus = u64{1} << 63;

void require_modulus(u64 n) {
    if (n < 2 || n >= kMaxModulus) {
        throw Error(ErrorCode::InvalidArgument,
                    "modulus must lie in [2, 2^63), got " + std::to_string(n));
    }
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NotSquarefree: return "NotSquarefree";
        case ErrorCode::NotFactorable: return "NotFactorable";
        case ErrorCode::NotCoprime: return "NotCoprime";
        case ErrorCode::ModuliNotCoprime: return "ModuliNotCoprime";
        case ErrorCode::WrongPrimeCount: return "WrongPrimeCount";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::ModulusMismatch: return "ModulusMismatch";
        case ErrorCode::NotConstant: return "NotConstant";
        case ErrorCode::NotIdempotentDet: return "NotIdempotentDet";
        case ErrorCode::PrimesOutOfScope: return "PrimesOutOfScope";
        case ErrorCode::InternalTheoremViolation: return "InternalTheoremViolation";
        case ErrorCode::UnsatisfiableParams: return "UnsatisfiableParams";
        case ErrorCode::InvalidLabel: return "InvalidLabel";
        case ErrorCode::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

u64 reduce(i64 a, u64 n) noexcept {
    const i64 m = static_cast<i64>(n);
    i64 r = a % m;
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

u64 add_mod(u64 a, u64 b, u64 n) noexcept {
    // a, b < n < 2^63, so the sum fits.
    const u64 s = a + b;
    return s >= n ? s - n : s;
}

u64 sub_mod(u64 a, u64 b, u64 n) noexcept { return a >= b ? a - b : a + (n - b); }

u64 mul_mod(u64 a, u64 b, u64 n) noexcept {
    return static_cast<u64>((static_cast<u128>(a) * b) % n);
}

Residue::Residue(i64 value, u64 modulus) : modulus_(modulus) {
    require_modulus(modulus);
    value_ = reduce(value, modulus);
}

Residue Residue::from_unsigned(u64 value, u64 modulus) {
    require_modulus(modulus);
    Residue r(0, modulus);
    r.value_ = value % modulus;
    return r;
}

namespace {

void same_modulus(const Residue& a, const Residue& b) {
    if (a.modulus() != b.modulus()) {
        throw Error(ErrorCode::ModulusMismatch, "residues mod " + std::to_string(a.modulus()) +
                                                    " and mod " + std::to_string(b.modulus()));
    }
}

}  // namespace

Residue Residue::operator+(const Residue& other) const {
    same_modulus(*this, other);
    return from_unsigned(add_mod(value_, other.value_, modulus_), modulus_);
}

Residue Residue::operator-(const Residue& other) const {
    same_modulus(*this, other);
    return from_unsigned(sub_mod(value_, other.value_, modulus_), modulus_);
}

Residue Residue::operator*(const Residue& other) const {
    same_modulus(*this, other);
    return from_unsigned(mul_mod(value_, other.value_, modulus_), modulus_);
}

Residue Residue::operator-() const { return from_unsigned(sub_mod(0, value_, modulus_), modulus_); }

std::ostream& operator<<(std::ostream& os, const Residue& r) { return os << r.value(); }

u64 gcd(u64 a, u64 b) noexcept {
    while (b != 0) {
        const u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool is_prime(u64 n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (u64 d = 3; d <= n / d; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

Modulus factor_squarefree(u64 n, u64 bound) {
    require_modulus(n);
    std::vector<u64> primes;
    u64 rest = n;
    u64 d = 2;
    for (; d <= bound && d <= rest / d; d += (d == 2 ? 1 : 2)) {
        if (rest % d != 0) continue;
        rest /= d;
        if (rest % d == 0) {
            throw Error(ErrorCode::NotSquarefree,
                        std::to_string(d) + "^2 divides " + std::to_string(n));
        }
        primes.push_back(d);
    }
    if (rest > 1) {
        // Either the scan passed sqrt(rest), or every prime up to the bound is
        // gone and rest <= bound^2 cannot hold two further factors.
        const bool past_root = d > rest / d;
        const u128 limit = static_cast<u128>(bound) * bound;
        if (!past_root && static_cast<u128>(rest) > limit) {
            throw Error(ErrorCode::NotFactorable,
                        "cofactor " + std::to_string(rest) + " of " + std::to_string(n) +
                            " exceeds trial-division bound " + std::to_string(bound) + "^2");
        }
        primes.push_back(rest);
    }
    return Modulus(n, std::move(primes));
}

u64 mod_pow(u64 a, u64 k, u64 n) noexcept {
    u64 result = 1 % n;
    u64 base = a % n;
    while (k > 0) {
        if (k & 1) result = mul_mod(result, base, n);
        base = mul_mod(base, base, n);
        k >>= 1;
    }
    return result;
}

Residue mod_pow(const Residue& a, u64 k) {
    return Residue::from_unsigned(mod_pow(a.value(), k, a.modulus()), a.modulus());
}

ExtGcd ext_gcd(i64 a, i64 b) noexcept {
    i128 old_r = a, r = b;
    i128 old_s = 1, s = 0;
    i128 old_t = 0, t = 1;
    while (r != 0) {
        const i128 q = old_r / r;
        i128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {static_cast<i64>(old_r), static_cast<i64>(old_s), static_cast<i64>(old_t)};
}

u64 mod_inverse(u64 a, u64 n) {
    require_modulus(n);
    const auto [g, s, t] = ext_gcd(static_cast<i64>(a % n), static_cast<i64>(n));
    (void)t;
    if (g != 1) {
        throw Error(ErrorCode::NotCoprime, "gcd(" + std::to_string(a) + ", " + std::to_string(n) +
                                               ") = " + std::to_string(g));
    }
    return reduce(s, n);
}

Residue mod_inverse(const Residue& a) {
    return Residue::from_unsigned(mod_inverse(a.value(), a.modulus()), a.modulus());
}

Residue crt_combine(std::span<const Congruence> system) {
    if (system.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty congruence system");
    }
    u64 x = 0;
    u64 m = 1;
    for (const auto& [residue, modulus] : system) {
        require_modulus(modulus);
        if (gcd(m, modulus) != 1) {
            throw Error(ErrorCode::ModuliNotCoprime,
                        "modulus " + std::to_string(modulus) + " shares a factor with " +
                            std::to_string(m));
        }
        const u128 next = static_cast<u128>(m) * modulus;
        if (next >= kMaxModulus) {
            throw Error(ErrorCode::InvalidArgument, "combined modulus exceeds 2^63");
        }
        const u64 big = static_cast<u64>(next);
        // x' = x + m * ((r - x) * m^{-1} mod modulus)
        const u64 r = residue % modulus;
        const u64 step = mul_mod(sub_mod(r, x % modulus, modulus),
                                 mod_inverse(m % modulus, modulus), modulus);
        x = static_cast<u64>((static_cast<u128>(m) * step + x) % big);
        m = big;
    }
    return Residue::from_unsigned(x, m);
}

}  // namespace idem
