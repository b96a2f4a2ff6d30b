#include "idem/znring.hpp"

#include <algorithm>
#include <sstream>

#include "idem/error.hpp"

namespace idem {

namespace {

void require_three_primes(const Modulus& m) {
    if (m.prime_count() != 3) {
        throw Error(ErrorCode::WrongPrimeCount,
                    "closed forms need exactly 3 primes, " + std::to_string(m.n()) + " has " +
                        std::to_string(m.prime_count()));
    }
}

void require_pattern_size(const Modulus& m, const IdempotentPattern& pattern) {
    if (pattern.bits.size() != m.prime_count()) {
        throw Error(ErrorCode::InvalidArgument, "pattern length does not match prime count");
    }
    for (auto b : pattern.bits) {
        if (b > 1) throw Error(ErrorCode::InvalidArgument, "pattern bits must be 0 or 1");
    }
}

}  // namespace

Residue pattern_residue(const Modulus& m, const IdempotentPattern& pattern) {
    require_pattern_size(m, pattern);
    std::vector<Congruence> system;
    system.reserve(m.prime_count());
    for (std::size_t i = 0; i < m.prime_count(); ++i) {
        system.push_back({pattern.bits[i], m.primes()[i]});
    }
    return crt_combine(system);
}

IdempotentPattern pattern_of(const Modulus& m, u64 y) {
    IdempotentPattern pattern;
    for (u64 p : m.primes()) {
        const u64 bit = y % p;
        if (bit > 1) {
            throw Error(ErrorCode::InvalidArgument,
                        std::to_string(y) + " is not idempotent mod " + std::to_string(m.n()));
        }
        pattern.bits.push_back(static_cast<std::uint8_t>(bit));
    }
    return pattern;
}

std::vector<Residue> enumerate_idempotents(const Modulus& m) {
    const std::size_t k = m.prime_count();
    std::vector<Residue> out;
    out.reserve(std::size_t{1} << k);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        IdempotentPattern pattern;
        for (std::size_t i = 0; i < k; ++i) {
            pattern.bits.push_back(static_cast<std::uint8_t>((mask >> i) & 1U));
        }
        out.push_back(pattern_residue(m, pattern));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_idempotent(const Residue& y) noexcept {
    return mul_mod(y.value(), y.value(), y.modulus()) == y.value();
}

namespace {

struct ClosedForm {
    u64 base;
    u64 exponent;
    std::string text;
};

// Base and exponent of the closed form for a pattern of three primes.
ClosedForm closed_form(const Modulus& m, const IdempotentPattern& pattern, ExponentForm form) {
    const u64 p = m.primes()[0], q = m.primes()[1], r = m.primes()[2];
    const auto s = [](u64 v) { return std::to_string(v); };
    const int ones = pattern.bits[0] + pattern.bits[1] + pattern.bits[2];
    if (ones == 0) return {0, 1, "0"};
    if (ones == 3) return {1, 1, "1"};
    if (ones == 1) {
        // One prime carries the 1; the product of the other two is the base.
        const bool shared = form == ExponentForm::SharedExponent;
        if (pattern.bits[2]) return {p * q, r - 1, "(" + s(p) + "*" + s(q) + ")^(" + s(r) + "-1)"};
        if (pattern.bits[1]) {
            const u64 e = shared ? r - 1 : q - 1;
            return {p * r, e, "(" + s(p) + "*" + s(r) + ")^(" + s(shared ? r : q) + "-1)"};
        }
        const u64 e = shared ? r - 1 : p - 1;
        return {q * r, e, "(" + s(q) + "*" + s(r) + ")^(" + s(shared ? r : p) + "-1)"};
    }
    // Two ones: the single zero prime raised to the product of the others' (x-1).
    if (!pattern.bits[0]) {
        return {p, (q - 1) * (r - 1), s(p) + "^((" + s(q) + "-1)*(" + s(r) + "-1))"};
    }
    if (!pattern.bits[1]) {
        return {q, (p - 1) * (r - 1), s(q) + "^((" + s(p) + "-1)*(" + s(r) + "-1))"};
    }
    return {r, (p - 1) * (q - 1), s(r) + "^((" + s(p) + "-1)*(" + s(q) + "-1))"};
}

}  // namespace

Residue euler_idempotent(const Modulus& m, const IdempotentPattern& pattern, ExponentForm form) {
    require_three_primes(m);
    require_pattern_size(m, pattern);
    const auto cf = closed_form(m, pattern, form);
    return Residue::from_unsigned(mod_pow(cf.base % m.n(), cf.exponent, m.n()), m.n());
}

std::string euler_expression(const Modulus& m, const IdempotentPattern& pattern,
                             ExponentForm form) {
    require_three_primes(m);
    require_pattern_size(m, pattern);
    return closed_form(m, pattern, form).text;
}

std::vector<EulerCheckRow> euler_crosscheck(const Modulus& m) {
    require_three_primes(m);
    std::vector<EulerCheckRow> rows;
    for (unsigned mask = 0; mask < 8; ++mask) {
        // Enumerate patterns with the first prime as the most significant bit.
        IdempotentPattern pattern{{static_cast<std::uint8_t>((mask >> 2) & 1U),
                                   static_cast<std::uint8_t>((mask >> 1) & 1U),
                                   static_cast<std::uint8_t>(mask & 1U)}};
        rows.push_back({pattern, pattern_residue(m, pattern),
                        euler_idempotent(m, pattern, ExponentForm::Canonical),
                        euler_idempotent(m, pattern, ExponentForm::SharedExponent),
                        euler_expression(m, pattern)});
    }
    return rows;
}

bool is_reduced(u64 n, u64 bound) {
    try {
        (void)factor_squarefree(n, bound);
        return true;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotSquarefree) return false;
        throw;
    }
}

std::vector<Poly> poly_idempotents_bruteforce(const Modulus& m, unsigned max_degree, u64 budget) {
    const u64 n = m.n();
    const std::size_t len = max_degree + 1;
    u64 states = 1;
    for (std::size_t i = 0; i < len; ++i) {
        if (states > budget / n) {
            throw Error(ErrorCode::BudgetExceeded,
                        std::to_string(n) + "^" + std::to_string(len) +
                            " polynomials exceed the search budget " + std::to_string(budget));
        }
        states *= n;
    }

    std::vector<Poly> found;
    std::vector<u64> c(len, 0);
    std::vector<u64> sq(2 * len - 1, 0);
    for (u64 s = 0; s < states; ++s) {
        std::fill(sq.begin(), sq.end(), 0);
        for (std::size_t i = 0; i < len; ++i) {
            if (c[i] == 0) continue;
            for (std::size_t j = 0; j < len; ++j) {
                sq[i + j] = add_mod(sq[i + j], mul_mod(c[i], c[j], n), n);
            }
        }
        bool fixed = true;
        for (std::size_t i = 0; i < sq.size() && fixed; ++i) {
            fixed = sq[i] == (i < len ? c[i] : 0);
        }
        if (fixed) found.emplace_back(n, c);
        // Odometer step, constant term fastest.
        for (std::size_t i = 0; i < len; ++i) {
            if (++c[i] < n) break;
            c[i] = 0;
        }
    }
    std::sort(found.begin(), found.end(), [](const Poly& a, const Poly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.coeffs() < b.coeffs();
    });
    return found;
}

}  // namespace idem
