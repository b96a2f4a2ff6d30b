#include "idem/polyring.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ostream>
#include <sstream>

#include "idem/error.hpp"

namespace idem {

namespace {

void same_modulus(const Poly& a, const Poly& b) {
    if (a.modulus() != b.modulus()) {
        throw Error(ErrorCode::ModulusMismatch, "polynomials over Z_" +
                                                    std::to_string(a.modulus()) + " and Z_" +
                                                    std::to_string(b.modulus()));
    }
}

}  // namespace

Poly::Poly(u64 n) : n_(n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "polynomial modulus must be >= 2");
}

Poly::Poly(u64 n, std::vector<u64> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "polynomial modulus must be >= 2");
    for (auto& c : coeffs_) c %= n_;
    normalize();
}

Poly Poly::constant(u64 n, u64 c) { return Poly(n, {c}); }

Poly Poly::constant(const Residue& c) { return Poly(c.modulus(), {c.value()}); }

Poly Poly::monomial(u64 n, u64 c, std::size_t k) {
    std::vector<u64> coeffs(k + 1, 0);
    coeffs[k] = c;
    return Poly(n, std::move(coeffs));
}

int Poly::degree() const noexcept {
    return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1;
}

void Poly::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly poly_add(const Poly& a, const Poly& b) {
    same_modulus(a, b);
    const u64 n = a.modulus();
    std::vector<u64> out(std::max(a.coeffs().size(), b.coeffs().size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = add_mod(a.coeff(i), b.coeff(i), n);
    return Poly(n, std::move(out));
}

Poly poly_sub(const Poly& a, const Poly& b) {
    same_modulus(a, b);
    const u64 n = a.modulus();
    std::vector<u64> out(std::max(a.coeffs().size(), b.coeffs().size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sub_mod(a.coeff(i), b.coeff(i), n);
    return Poly(n, std::move(out));
}

Poly poly_mul(const Poly& a, const Poly& b) {
    same_modulus(a, b);
    const u64 n = a.modulus();
    if (a.is_zero() || b.is_zero()) return Poly(n);
    const auto& x = a.coeffs();
    const auto& y = b.coeffs();
    std::vector<u64> out(x.size() + y.size() - 1, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j) {
            out[i + j] = add_mod(out[i + j], mul_mod(x[i], y[j], n), n);
        }
    }
    return Poly(n, std::move(out));
}

Poly poly_scale(u64 c, const Poly& a) {
    const u64 n = a.modulus();
    std::vector<u64> out = a.coeffs();
    const u64 cr = c % n;
    for (auto& v : out) v = mul_mod(cr, v, n);
    return Poly(n, std::move(out));
}

Poly poly_scale(const Residue& c, const Poly& a) {
    if (c.modulus() != a.modulus()) {
        throw Error(ErrorCode::ModulusMismatch, "scalar and polynomial moduli differ");
    }
    return poly_scale(c.value(), a);
}

Poly poly_neg(const Poly& a) { return poly_sub(Poly(a.modulus()), a); }

Residue const_value(const Poly& a) {
    if (!a.is_constant()) {
        throw Error(ErrorCode::NotConstant,
                    "expected a constant polynomial, got " + to_string(a));
    }
    return Residue::from_unsigned(a.coeff(0), a.modulus());
}

bool coeffs_divisible_by(const Poly& a, u64 d) {
    return std::all_of(a.coeffs().begin(), a.coeffs().end(), [d](u64 c) { return c % d == 0; });
}

Poly coeffs_exact_div(const Poly& a, u64 d) {
    if (d == 0 || a.modulus() % d != 0) {
        throw Error(ErrorCode::InvalidArgument,
                    std::to_string(d) + " does not divide " + std::to_string(a.modulus()));
    }
    std::vector<u64> out = a.coeffs();
    for (auto& c : out) {
        if (c % d != 0) {
            throw Error(ErrorCode::InvalidArgument,
                        "coefficient " + std::to_string(c) + " is not a multiple of " +
                            std::to_string(d));
        }
        c /= d;
    }
    return Poly(a.modulus(), std::move(out));
}

Poly coeffs_mod(const Poly& a, u64 m) {
    std::vector<u64> out = a.coeffs();
    for (auto& c : out) c %= m;
    return Poly(a.modulus(), std::move(out));
}

std::string to_string(const Poly& a) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        const u64 c = a.coeffs()[i];
        if (c == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << c;
        if (i >= 1) os << "*x";
        if (i >= 2) os << '^' << i;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& a) { return os << to_string(a); }

namespace {

class PolyParser {
public:
    PolyParser(std::string_view text, u64 n) : text_(text), n_(n) {}

    Poly parse() {
        std::vector<u64> coeffs;
        skip_ws();
        if (at_end()) fail("empty polynomial");
        bool negate = false;
        if (peek() == '-' || peek() == '+') {
            negate = take() == '-';
        }
        for (;;) {
            auto [c, k] = term();
            if (coeffs.size() <= k) coeffs.resize(k + 1, 0);
            const u64 v = negate ? sub_mod(0, c, n_) : c;
            coeffs[k] = add_mod(coeffs[k], v, n_);
            skip_ws();
            if (at_end()) break;
            const char op = take();
            if (op != '+' && op != '-') fail(std::string("unexpected '") + op + "'");
            negate = op == '-';
        }
        return Poly(n_, std::move(coeffs));
    }

private:
    std::pair<u64, std::size_t> term() {
        skip_ws();
        u64 c = 1;
        bool have_coeff = false;
        if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            c = number() % n_;
            have_coeff = true;
            skip_ws();
            if (at_end() || peek() != '*') return {c, 0};
            take();
            skip_ws();
        }
        if (at_end() || peek() != 'x') fail(have_coeff ? "expected 'x' after '*'" : "expected a term");
        take();
        skip_ws();
        std::size_t k = 1;
        if (!at_end() && peek() == '^') {
            take();
            skip_ws();
            const u64 e = number();
            if (e > 1'000'000) fail("exponent too large");
            k = static_cast<std::size_t>(e);
        }
        return {c, k};
    }

    u64 number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        u64 value = 0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return value;
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char take() { return text_[pos_++]; }

    [[noreturn]] void fail(const std::string& why) const {
        throw Error(ErrorCode::MalformedInput, "cannot parse polynomial \"" + std::string(text_) +
                                                   "\" at offset " + std::to_string(pos_) + ": " +
                                                   why);
    }

    std::string_view text_;
    u64 n_;
    std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, u64 n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "polynomial modulus must be >= 2");
    return PolyParser(text, n).parse();
}

}  // namespace idem
