#include "idem/mat2.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "idem/error.hpp"

namespace idem {

Mat2Poly::Mat2Poly(Poly e_, Poly f_, Poly g_, Poly h_)
    : e(std::move(e_)), f(std::move(f_)), g(std::move(g_)), h(std::move(h_)) {
    const u64 n = e.modulus();
    if (f.modulus() != n || g.modulus() != n || h.modulus() != n) {
        throw Error(ErrorCode::ModulusMismatch, "matrix entries over different moduli");
    }
}

int Mat2Poly::max_degree() const noexcept {
    return std::max({e.degree(), f.degree(), g.degree(), h.degree()});
}

bool Mat2Poly::is_constant() const noexcept {
    return e.is_constant() && f.is_constant() && g.is_constant() && h.is_constant();
}

Mat2Poly Mat2Poly::zero(u64 n) { return constant(n, 0, 0, 0, 0); }

Mat2Poly Mat2Poly::identity(u64 n) { return constant(n, 1, 0, 0, 1); }

Mat2Poly Mat2Poly::constant(u64 n, u64 e, u64 f, u64 g, u64 h) {
    return {Poly::constant(n, e), Poly::constant(n, f), Poly::constant(n, g),
            Poly::constant(n, h)};
}

Mat2Poly Mat2Poly::scalar(u64 n, u64 d) { return constant(n, d, 0, 0, d); }

Mat2Poly mat_add(const Mat2Poly& a, const Mat2Poly& b) {
    return {a.e + b.e, a.f + b.f, a.g + b.g, a.h + b.h};
}

Mat2Poly mat_sub(const Mat2Poly& a, const Mat2Poly& b) {
    return {a.e - b.e, a.f - b.f, a.g - b.g, a.h - b.h};
}

Mat2Poly mat_mul(const Mat2Poly& a, const Mat2Poly& b) {
    return {a.e * b.e + a.f * b.g, a.e * b.f + a.f * b.h,
            a.g * b.e + a.h * b.g, a.g * b.f + a.h * b.h};
}

Mat2Poly mat_scale(u64 c, const Mat2Poly& a) {
    return {poly_scale(c, a.e), poly_scale(c, a.f), poly_scale(c, a.g), poly_scale(c, a.h)};
}

Poly mat_det(const Mat2Poly& a) { return a.e * a.h - a.f * a.g; }

Poly mat_trace(const Mat2Poly& a) { return a.e + a.h; }

bool is_idempotent(const Mat2Poly& a) { return mat_mul(a, a) == a; }

bool idempotent_equations_hold(const Mat2Poly& a) {
    const Poly fg = a.f * a.g;
    const Poly tr = a.e + a.h;
    return a.e * a.e + fg == a.e && a.f * tr == a.f && a.g * tr == a.g && fg + a.h * a.h == a.h;
}

std::string to_string(const Mat2Poly& a) {
    return "[[" + to_string(a.e) + ", " + to_string(a.f) + "], [" + to_string(a.g) + ", " +
           to_string(a.h) + "]]";
}

std::ostream& operator<<(std::ostream& os, const Mat2Poly& a) { return os << to_string(a); }

nlohmann::json to_json(const Mat2Poly& a) {
    const auto c = [](const Poly& p) { return nlohmann::json(p.coeffs()); };
    return {{"n", a.modulus()},
            {"entries", nlohmann::json::array({nlohmann::json::array({c(a.e), c(a.f)}),
                                               nlohmann::json::array({c(a.g), c(a.h)})})}};
}

namespace {

[[noreturn]] void malformed(const std::string& why) {
    throw Error(ErrorCode::MalformedInput, "matrix file: " + why);
}

Poly entry_from_json(const nlohmann::json& j, u64 n) {
    if (!j.is_array()) malformed("entry is not a coefficient array");
    std::vector<u64> coeffs;
    for (const auto& c : j) {
        if (!c.is_number_unsigned()) malformed("coefficient is not a non-negative integer");
        const u64 v = c.get<u64>();
        if (v >= n) malformed("coefficient " + std::to_string(v) + " is not reduced mod n");
        coeffs.push_back(v);
    }
    if (!coeffs.empty() && coeffs.back() == 0) malformed("trailing zero coefficient");
    return Poly(n, std::move(coeffs));
}

}  // namespace

Mat2Poly matrix_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries")) {
        malformed("expected an object with fields n and entries");
    }
    if (!doc["n"].is_number_unsigned() || doc["n"].get<u64>() < 2) malformed("n must be >= 2");
    const u64 n = doc["n"].get<u64>();
    const auto& rows = doc["entries"];
    if (!rows.is_array() || rows.size() != 2 || !rows[0].is_array() || rows[0].size() != 2 ||
        !rows[1].is_array() || rows[1].size() != 2) {
        malformed("entries must be a 2x2 array");
    }
    return {entry_from_json(rows[0][0], n), entry_from_json(rows[0][1], n),
            entry_from_json(rows[1][0], n), entry_from_json(rows[1][1], n)};
}

Mat2Poly read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) malformed("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        malformed(std::string("invalid JSON: ") + e.what());
    }
    return matrix_from_json(doc);
}

void write_matrix_file(const std::string& path, const Mat2Poly& a) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << to_json(a).dump() << '\n';
}

}  // namespace idem
