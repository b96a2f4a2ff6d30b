#include "idem/classify.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <tuple>

#include "idem/error.hpp"
#include "idem/znring.hpp"

namespace idem {

namespace {

using u128 = unsigned __int128;

Residue res(u64 v, u64 n) { return Residue::from_unsigned(v, n); }

u64 pw(u64 base, u64 k, u64 n) { return mod_pow(base % n, k, n); }

u64 pair_det(u64 n, const PrimeRoles& roles) { return pw(roles[0] * roles[1], roles[2] - 1, n); }

u64 single_det(u64 n, const PrimeRoles& roles) {
    return pw(roles[0], (roles[1] - 1) * (roles[2] - 1), n);
}

void check_permutation(const Modulus& m, const PrimeRoles& roles) {
    PrimeRoles sorted = roles;
    std::sort(sorted.begin(), sorted.end());
    if (m.prime_count() != 3 || !std::equal(sorted.begin(), sorted.end(), m.primes().begin())) {
        throw Error(ErrorCode::InvalidLabel, "roles are not a permutation of the primes of " +
                                                 std::to_string(m.n()));
    }
}

PrimeRoles sorted_roles(const Modulus& m) { return {m.primes()[0], m.primes()[1], m.primes()[2]}; }

// The two primes other than `pivot`, ascending.
std::pair<u64, u64> others(const Modulus& m, u64 pivot) {
    std::vector<u64> rest;
    for (u64 p : m.primes()) {
        if (p != pivot) rest.push_back(p);
    }
    return {rest[0], rest[1]};
}

}  // namespace

std::string to_string(ClassFamily family) {
    switch (family) {
        case ClassFamily::Det0_General: return "Det0_General";
        case ClassFamily::Det0_Scaled: return "Det0_Scaled";
        case ClassFamily::DetPair_Scalar: return "DetPair_Scalar";
        case ClassFamily::DetPair_Shift: return "DetPair_Shift";
        case ClassFamily::DetPair_Mixed: return "DetPair_Mixed";
        case ClassFamily::DetSingle_Scalar: return "DetSingle_Scalar";
        case ClassFamily::DetSingle_Shift: return "DetSingle_Shift";
    }
    return "Unknown";
}

ClassFamily family_from_string(std::string_view name) {
    for (ClassFamily f : kAllFamilies) {
        if (to_string(f) == name) return f;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown family " + std::string(name));
}

std::string to_string(const ClassLabel& label) {
    std::ostringstream os;
    os << to_string(label.family) << "(p=" << label.roles[0] << ",q=" << label.roles[1]
       << ",r=" << label.roles[2] << ";det=" << label.det << ",trace=" << label.trace;
    if (label.scale) os << ",I=" << *label.scale;
    if (label.annihilator) os << ",J=" << *label.annihilator;
    if (label.u) os << ",u=" << *label.u;
    os << ')';
    return os.str();
}

nlohmann::json to_json(const ClassLabel& label) {
    nlohmann::json j = {{"family", to_string(label.family)},
                        {"roles", {{"p", label.roles[0]}, {"q", label.roles[1]}, {"r", label.roles[2]}}},
                        {"det", label.det.value()},
                        {"trace", label.trace.value()}};
    if (label.scale) j["I"] = label.scale->value();
    if (label.annihilator) j["J"] = *label.annihilator;
    if (label.u) j["u"] = *label.u;
    return j;
}

void require_classification_scope(const Modulus& m) {
    if (m.prime_count() != 3) {
        throw Error(ErrorCode::PrimesOutOfScope,
                    std::to_string(m.n()) + " must have exactly 3 prime factors, has " +
                        std::to_string(m.prime_count()));
    }
    if (m.primes()[0] <= 3) {
        throw Error(ErrorCode::PrimesOutOfScope,
                    "all primes must exceed 3, " + std::to_string(m.n()) + " has " +
                        std::to_string(m.primes()[0]));
    }
}

ClassLabel make_label(const Modulus& m, ClassFamily family, const PrimeRoles& roles_in) {
    check_permutation(m, roles_in);
    const u64 n = m.n();
    ClassLabel label;
    label.family = family;
    label.roles = roles_in;
    switch (family) {
        case ClassFamily::Det0_General:
            label.roles = sorted_roles(m);
            label.det = res(0, n);
            label.trace = res(1, n);
            break;
        case ClassFamily::Det0_Scaled:
            throw Error(ErrorCode::InvalidLabel, "Det0_Scaled labels need a scale position");
        case ClassFamily::DetPair_Scalar:
        case ClassFamily::DetPair_Shift: {
            if (label.roles[0] > label.roles[1]) std::swap(label.roles[0], label.roles[1]);
            const u64 d = pair_det(n, label.roles);
            label.det = res(d, n);
            label.trace = family == ClassFamily::DetPair_Scalar ? res(2 * d, n) : res(d + 1, n);
            break;
        }
        case ClassFamily::DetPair_Mixed: {
            const u64 p = label.roles[0], q = label.roles[1], r = label.roles[2];
            const u64 d = pair_det(n, label.roles);
            const Residue big_d = res(d, n);
            const Residue p_q = res(pw(p, q - 1, n), n);
            label.det = big_d;
            label.trace = (Residue(2, n) - p_q) * big_d + p_q;
            const std::array<Congruence, 2> sys{{{0, p}, {1, r}}};
            label.u = crt_combine(sys).value();
            break;
        }
        case ClassFamily::DetSingle_Scalar:
        case ClassFamily::DetSingle_Shift: {
            if (label.roles[1] > label.roles[2]) std::swap(label.roles[1], label.roles[2]);
            const u64 d = single_det(n, label.roles);
            label.det = res(d, n);
            label.trace = family == ClassFamily::DetSingle_Scalar ? res(2 * d, n) : res(d + 1, n);
            break;
        }
    }
    return label;
}

ClassLabel make_scaled_label(const Modulus& m, std::size_t position) {
    if (m.prime_count() != 3) {
        throw Error(ErrorCode::InvalidLabel, "scaled labels need exactly 3 primes");
    }
    if (position >= 6) throw Error(ErrorCode::InvalidLabel, "scale position must be 0..5");
    const u64 n = m.n();
    const u64 p = m.primes()[0], q = m.primes()[1], r = m.primes()[2];
    const std::array<u64, 6> scales{pw(p * q, r - 1, n),         pw(p * r, q - 1, n),
                                    pw(q * r, p - 1, n),         pw(p, (q - 1) * (r - 1), n),
                                    pw(q, (p - 1) * (r - 1), n), pw(r, (p - 1) * (q - 1), n)};
    const std::array<u64, 6> annihilators{r, q, p, q * r, p * r, p * q};
    ClassLabel label;
    label.family = ClassFamily::Det0_Scaled;
    label.roles = sorted_roles(m);
    label.scale = res(scales[position], n);
    label.annihilator = annihilators[position];
    label.det = res(0, n);
    label.trace = *label.scale;
    return label;
}

ClassLabel make_scaled_label_for(const Modulus& m, u64 scale) {
    for (std::size_t i = 0; i < 6; ++i) {
        ClassLabel label = make_scaled_label(m, i);
        if (label.scale->value() == scale % m.n()) return label;
    }
    throw Error(ErrorCode::InvalidLabel,
                std::to_string(scale) + " is not a non-trivial idempotent of Z_" +
                    std::to_string(m.n()));
}

ClassLabel default_label(const Modulus& m, ClassFamily family) {
    if (family == ClassFamily::Det0_Scaled) return make_scaled_label(m, 0);
    return make_label(m, family, sorted_roles(m));
}

std::vector<ClassLabel> all_labels(const Modulus& m) {
    std::vector<ClassLabel> out;
    out.push_back(make_label(m, ClassFamily::Det0_General, sorted_roles(m)));
    for (std::size_t i = 0; i < 6; ++i) out.push_back(make_scaled_label(m, i));
    for (u64 r : m.primes()) {
        const auto [p, q] = others(m, r);
        out.push_back(make_label(m, ClassFamily::DetPair_Scalar, {p, q, r}));
        out.push_back(make_label(m, ClassFamily::DetPair_Shift, {p, q, r}));
        out.push_back(make_label(m, ClassFamily::DetPair_Mixed, {p, q, r}));
        out.push_back(make_label(m, ClassFamily::DetPair_Mixed, {q, p, r}));
    }
    for (u64 p : m.primes()) {
        const auto [q, r] = others(m, p);
        out.push_back(make_label(m, ClassFamily::DetSingle_Scalar, {p, q, r}));
        out.push_back(make_label(m, ClassFamily::DetSingle_Shift, {p, q, r}));
    }
    return out;
}

void validate_label(const Modulus& m, const ClassLabel& label) {
    ClassLabel expected;
    if (label.family == ClassFamily::Det0_Scaled) {
        if (!label.scale) throw Error(ErrorCode::InvalidLabel, "Det0_Scaled label without I");
        expected = make_scaled_label_for(m, label.scale->value());
    } else {
        expected = make_label(m, label.family, label.roles);
    }
    if (!(expected == label)) {
        throw Error(ErrorCode::InvalidLabel, "inconsistent label " + to_string(label) +
                                                 ", expected " + to_string(expected));
    }
}

// ---------------------------------------------------------------------------
// Template matching

namespace {

Poly cst(u64 n, u64 v) { return Poly::constant(n, v); }

std::optional<Witness> match_general(const Mat2Poly& g) {
    const u64 n = g.modulus();
    const Poly one = cst(n, 1);
    if (g.h != one - g.e) return std::nullopt;
    if (!(g.e * (one - g.e) - g.g * g.f).is_zero()) return std::nullopt;
    return Witness{{{"e", g.e}, {"f", g.f}, {"g", g.g}, {"k", Poly(n)}}, {}};
}

std::optional<Witness> match_scaled(const Mat2Poly& g, u64 scale, u64 annihilator) {
    const u64 n = g.modulus();
    for (const Poly* x : {&g.e, &g.f, &g.g, &g.h}) {
        if (poly_scale(scale, *x) != *x) return std::nullopt;
    }
    const Poly one = cst(n, 1);
    if (g.h != poly_scale(scale, one - g.e)) return std::nullopt;
    const Poly side = g.e * (one - g.e) - g.g * g.f;
    if (!coeffs_divisible_by(side, annihilator)) return std::nullopt;
    return Witness{{{"e", g.e}, {"f", g.f}, {"g", g.g}, {"k", coeffs_exact_div(side, annihilator)}},
                   {}};
}

std::optional<Witness> match_scalar(const Mat2Poly& g, u64 d) {
    if (g != Mat2Poly::scalar(g.modulus(), d)) return std::nullopt;
    return Witness{};
}

// G = [[1 + s e, s f], [s g, d - s e]] with e(1 + s e) + s f g = c k.
std::optional<Witness> match_shift(const Mat2Poly& g, u64 shift, u64 d) {
    const u64 n = g.modulus();
    const u64 cofactor = n / shift;
    const Poly one = cst(n, 1);
    const Poly e_minus_one = g.e - one;
    if (!coeffs_divisible_by(e_minus_one, shift) || !coeffs_divisible_by(g.f, shift) ||
        !coeffs_divisible_by(g.g, shift)) {
        return std::nullopt;
    }
    const Poly e = coeffs_exact_div(e_minus_one, shift);
    const Poly f = coeffs_exact_div(g.f, shift);
    const Poly gg = coeffs_exact_div(g.g, shift);
    if (g.h != cst(n, d) - poly_scale(shift, e)) return std::nullopt;
    const Poly side = e * (one + poly_scale(shift, e)) + poly_scale(shift, f * gg);
    if (!coeffs_divisible_by(side, cofactor)) return std::nullopt;
    return Witness{{{"e", e}, {"f", f}, {"g", gg}, {"k", coeffs_exact_div(side, cofactor)}}, {}};
}

std::optional<Witness> match_mixed(const Mat2Poly& g, const ClassLabel& label) {
    const u64 n = g.modulus();
    const u64 p = label.roles[0], q = label.roles[1], r = label.roles[2];
    const u64 pr = p * r;
    const u64 u = *label.u;
    const Poly diag_offset = g.e - cst(n, u);
    if (!coeffs_divisible_by(diag_offset, pr) || !coeffs_divisible_by(g.f, pr) ||
        !coeffs_divisible_by(g.g, pr)) {
        return std::nullopt;
    }
    if (g.h != Poly::constant(label.trace) - g.e) return std::nullopt;
    if (mat_det(g) != Poly::constant(label.det)) return std::nullopt;
    return Witness{{{"e", coeffs_exact_div(diag_offset, pr)},
                    {"f", coeffs_exact_div(g.f, pr)},
                    {"g", coeffs_exact_div(g.g, pr)}},
                   {{"u", u}, {"diag_mod_q", g.e.coeff(0) % q}}};
}

std::optional<Witness> match_structure(const Mat2Poly& g, const ClassLabel& label) {
    const u64 n = g.modulus();
    switch (label.family) {
        case ClassFamily::Det0_General: return match_general(g);
        case ClassFamily::Det0_Scaled:
            return match_scaled(g, label.scale->value(), *label.annihilator);
        case ClassFamily::DetPair_Scalar:
        case ClassFamily::DetSingle_Scalar: return match_scalar(g, label.det.value());
        case ClassFamily::DetPair_Shift: return match_shift(g, label.roles[2], label.det.value());
        case ClassFamily::DetSingle_Shift:
            return match_shift(g, label.roles[1] * label.roles[2], label.det.value());
        case ClassFamily::DetPair_Mixed: return match_mixed(g, label);
    }
    (void)n;
    return std::nullopt;
}

class Classifier {
public:
    explicit Classifier(const Modulus& m) : m_(m), labels_(all_labels(m)) {
        for (const Residue& d : enumerate_idempotents(m)) {
            candidates_.emplace(d.value(), trace_candidates(m, d));
        }
    }

    ClassificationReport run(const Mat2Poly& g) const {
        const u64 n = m_.n();
        if (g.modulus() != n) {
            throw Error(ErrorCode::ModulusMismatch, "matrix is over Z_" +
                                                        std::to_string(g.modulus()) +
                                                        ", modulus is " + std::to_string(n));
        }
        ClassificationReport report;
        report.n = n;
        report.idempotent = is_idempotent(g);
        if (!report.idempotent) return report;

        const Poly det_poly = mat_det(g);
        const Poly trace_poly = mat_trace(g);
        if (!det_poly.is_constant() || !trace_poly.is_constant()) {
            throw Error(ErrorCode::InternalTheoremViolation,
                        "idempotent " + to_string(g) + " has non-constant det " +
                            to_string(det_poly) + " or trace " + to_string(trace_poly));
        }
        const Residue det = const_value(det_poly);
        const Residue trace = const_value(trace_poly);
        report.det = det;
        report.trace = trace;

        const auto it = candidates_.find(det.value());
        if (it == candidates_.end()) {
            throw Error(ErrorCode::InternalTheoremViolation,
                        "idempotent " + to_string(g) + " has non-idempotent det " +
                            std::to_string(det.value()));
        }
        if (!it->second.contains(trace)) {
            throw Error(ErrorCode::InternalTheoremViolation,
                        "trace " + std::to_string(trace.value()) +
                            " is not a root of t^2 = t + 2*" + std::to_string(det.value()));
        }

        if (g == Mat2Poly::zero(n) || g == Mat2Poly::identity(n)) {
            report.trivial = true;
            return report;
        }
        if (det.value() == 1) {
            report.trivial = true;
            report.anomalies.push_back("det is 1 but the matrix is not the identity");
            return report;
        }

        for (const ClassLabel& label : labels_) {
            if (label.det != det || label.trace != trace) continue;
            if (auto w = match_structure(g, label)) {
                report.matches.push_back({label, std::move(*w)});
            }
        }
        return report;
    }

private:
    Modulus m_;
    std::vector<ClassLabel> labels_;
    std::map<u64, TraceCandidateSet> candidates_;
};

}  // namespace

ClassificationReport classify(const Mat2Poly& g, const Modulus& m) {
    require_classification_scope(m);
    return Classifier(m).run(g);
}

std::optional<Witness> match_template(const Mat2Poly& g, const Modulus& m,
                                      const ClassLabel& label) {
    require_classification_scope(m);
    validate_label(m, label);
    if (g.modulus() != m.n()) throw Error(ErrorCode::ModulusMismatch, "matrix modulus differs");
    const Poly det = mat_det(g);
    const Poly trace = mat_trace(g);
    if (det != Poly::constant(label.det) || trace != Poly::constant(label.trace)) {
        return std::nullopt;
    }
    if (!is_idempotent(g)) return std::nullopt;
    return match_structure(g, label);
}

std::string to_text(const ClassificationReport& report) {
    std::ostringstream os;
    os << "idempotent: " << (report.idempotent ? "yes" : "no") << '\n';
    if (!report.idempotent) return os.str();
    os << "det: " << *report.det << '\n';
    os << "trace: " << *report.trace << '\n';
    os << "trivial: " << (report.trivial ? "yes" : "no") << '\n';
    for (const auto& a : report.anomalies) os << "anomaly: " << a << '\n';
    if (report.trivial) return os.str();
    os << "matches: " << report.matches.size() << '\n';
    for (const auto& match : report.matches) {
        os << "  " << to_string(match.label) << '\n';
        for (const auto& [name, poly] : match.witness.polys) {
            os << "    " << name << "(x) = " << poly << '\n';
        }
        for (const auto& [name, value] : match.witness.values) {
            os << "    " << name << " = " << value << '\n';
        }
    }
    if (report.matches.empty()) os << "UNMATCHED: no family template fits this idempotent\n";
    return os.str();
}

nlohmann::json to_json(const ClassificationReport& report) {
    nlohmann::json j = {{"n", report.n},
                        {"idempotent", report.idempotent},
                        {"trivial", report.trivial}};
    if (report.det) j["det"] = report.det->value();
    if (report.trace) j["trace"] = report.trace->value();
    j["anomalies"] = report.anomalies;
    auto matches = nlohmann::json::array();
    for (const auto& match : report.matches) {
        nlohmann::json w = nlohmann::json::object();
        for (const auto& [name, poly] : match.witness.polys) w[name] = poly.coeffs();
        for (const auto& [name, value] : match.witness.values) w[name] = value;
        matches.push_back({{"label", to_json(match.label)}, {"witness", w}});
    }
    j["matches"] = matches;
    return j;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

Poly random_poly(u64 n, int max_degree, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> deg_dist(0, std::max(0, max_degree));
    std::uniform_int_distribution<u64> coeff_dist(0, n - 1);
    std::vector<u64> coeffs(static_cast<std::size_t>(deg_dist(rng)) + 1);
    for (auto& c : coeffs) c = coeff_dist(rng);
    return Poly(n, std::move(coeffs));
}

u64 random_unit(u64 modulus, std::mt19937_64& rng) {
    std::uniform_int_distribution<u64> dist(1, modulus - 1);
    for (;;) {
        const u64 x = dist(rng);
        if (gcd(x, modulus) == 1) return x;
    }
}

// f with w * f = rhs (mod c) coefficientwise; coefficients lifted to [0, c).
Poly solve_linear(u64 w, const Poly& rhs, u64 c) {
    const u64 g = gcd(w % c, c);
    const u64 reduced_c = c / g;
    const u64 inv = reduced_c == 1 ? 0 : mod_inverse((w % c) / g, reduced_c);
    std::vector<u64> out;
    for (u64 coeff : rhs.coeffs()) {
        const u64 v = coeff % c;
        if (v % g != 0) {
            throw Error(ErrorCode::UnsatisfiableParams,
                        "cannot solve " + std::to_string(w) + " * f = " + std::to_string(v) +
                            " (mod " + std::to_string(c) + ")");
        }
        out.push_back(reduced_c == 1 ? 0 : mul_mod((v / g) % reduced_c, inv, reduced_c));
    }
    return Poly(rhs.modulus(), std::move(out));
}

// E G E^-1 for a random product E of two elementary matrices.
Mat2Poly conjugate_randomly(const Mat2Poly& g, std::mt19937_64& rng) {
    const u64 n = g.modulus();
    std::uniform_int_distribution<u64> dist(0, n - 1);
    const u64 a = dist(rng), b = dist(rng);
    const Mat2Poly upper = Mat2Poly::constant(n, 1, a, 0, 1);
    const Mat2Poly upper_inv = Mat2Poly::constant(n, 1, n - a, 0, 1);
    const Mat2Poly lower = Mat2Poly::constant(n, 1, 0, b, 1);
    const Mat2Poly lower_inv = Mat2Poly::constant(n, 1, 0, n - b, 1);
    return mat_mul(mat_mul(lower, mat_mul(mat_mul(upper, g), upper_inv)), lower_inv);
}

// Random split f * g = a * b given a and b: (c a, c^-1 b) or (c b, c^-1 a), c a unit mod `mod`.
std::pair<Poly, Poly> random_split(const Poly& a, const Poly& b, u64 mod, std::mt19937_64& rng) {
    const u64 c = random_unit(mod, rng);
    const u64 c_inv = mod_inverse(c, mod);
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
        return {poly_scale(c, a), poly_scale(c_inv, b)};
    }
    return {poly_scale(c, b), poly_scale(c_inv, a)};
}

Mat2Poly generate_general(u64 n, const GenerateParams& params, std::mt19937_64& rng) {
    const Poly one = cst(n, 1);
    if (params.e) {
        const Poly& e = *params.e;
        return {e, e * (one - e), one, one - e};
    }
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
        const Poly e = random_poly(n, params.max_degree / 2, rng);
        return {e, e * (one - e), one, one - e};
    }
    const Poly e = random_poly(n, params.max_degree, rng);
    auto [f, g] = random_split(e, one - e, n, rng);
    return {e, f, g, one - e};
}

Mat2Poly generate_scaled(u64 n, const ClassLabel& label, const GenerateParams& params,
                         std::mt19937_64& rng) {
    const Poly one = cst(n, 1);
    const u64 scale = label.scale->value();
    const u64 j = *label.annihilator;
    Mat2Poly base = Mat2Poly::zero(n);
    if (params.e) {
        const Poly& e = *params.e;
        const Poly m = params.m.value_or(Poly(n));
        base = {e, e * (one - e) - poly_scale(j, m), one, one - e};
    } else if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
        const Poly e = random_poly(n, params.max_degree / 2, rng);
        const Poly m = params.m.value_or(random_poly(n, params.max_degree, rng));
        base = {e, e * (one - e) - poly_scale(j, m), one, one - e};
    } else {
        const Poly e = random_poly(n, params.max_degree, rng);
        const Poly m = params.m.value_or(random_poly(n, params.max_degree, rng));
        auto [f, g] = random_split(e, one - e, n, rng);
        base = {e, f + poly_scale(j, m), g, one - e};
    }
    return mat_scale(scale, base);
}

// Shift families: G = [[1 + s e, s f], [s g, d - s e]] with
// e(1 + s e) + s f g = 0 (mod c), c = n / s.
Mat2Poly generate_shift(u64 n, u64 shift, u64 d, const GenerateParams& params,
                        std::mt19937_64& rng) {
    const u64 c = n / shift;
    const Poly one = cst(n, 1);
    Poly e(n), f(n), g(n);
    const int variant = params.e ? 0 : std::uniform_int_distribution<int>(0, 2)(rng);
    if (variant == 0 || params.g) {
        e = params.e.value_or(random_poly(n, params.max_degree / 2, rng));
        const u64 g_const = params.g.value_or(params.e ? 1 : random_unit(c, rng));
        g = cst(n, g_const);
        const Poly rhs = -(e * (one + poly_scale(shift, e)));
        f = solve_linear(mul_mod(shift % c, g_const % c, c), coeffs_mod(rhs, c), c);
    } else {
        e = random_poly(n, params.max_degree, rng);
        // s f g = -e (1 + s e): split the right side, then absorb 1/s into g.
        auto [a, b] = random_split(-e, one + poly_scale(shift, e), c, rng);
        f = coeffs_mod(a, c);
        g = coeffs_mod(poly_scale(mod_inverse(shift % c, c), b), c);
    }
    return {one + poly_scale(shift, e), poly_scale(shift, f), poly_scale(shift, g),
            cst(n, d) - poly_scale(shift, e)};
}

// Mixed family: G = [[a, pr f], [pr g, t - a]], a = u + pr e, and modulo q
// the block must satisfy a(1 - a) = (pr f)(pr g).
Mat2Poly generate_mixed(u64 n, const ClassLabel& label, const GenerateParams& params,
                        std::mt19937_64& rng) {
    const u64 p = label.roles[0], q = label.roles[1], r = label.roles[2];
    const u64 pr = p * r;
    const u64 pr_inv = mod_inverse(pr % q, q);
    const Poly one = cst(n, 1);
    const int variant = params.e ? 0 : std::uniform_int_distribution<int>(0, 2)(rng);
    const int e_degree = variant == 0 ? params.max_degree / 2 : params.max_degree;
    const Poly e = params.e.value_or(random_poly(n, e_degree, rng));
    const Poly a = cst(n, *label.u) + poly_scale(pr, e);
    const Poly block = coeffs_mod(a * (one - a), q);

    Poly upper(n), lower(n);  // values of pr f and pr g modulo q
    if (variant == 0 || params.g) {
        const u64 g_const = params.g.value_or(params.e ? pr_inv : random_unit(q, rng));
        lower = cst(n, mul_mod(pr % q, g_const % q, q));
        upper = solve_linear(lower.coeff(0), block, q);
    } else {
        auto split = random_split(coeffs_mod(a, q), coeffs_mod(one - a, q), q, rng);
        upper = coeffs_mod(split.first, q);
        lower = coeffs_mod(split.second, q);
    }
    const Poly f = coeffs_mod(poly_scale(pr_inv, upper), q);
    const Poly g = coeffs_mod(poly_scale(pr_inv, lower), q);
    return {a, poly_scale(pr, f), poly_scale(pr, g), Poly::constant(label.trace) - a};
}

}  // namespace

Mat2Poly generate(const Modulus& m, const ClassLabel& label, const GenerateParams& params,
                  std::mt19937_64& rng) {
    require_classification_scope(m);
    validate_label(m, label);
    const u64 n = m.n();
    for (const auto* poly : {params.e ? &*params.e : nullptr, params.m ? &*params.m : nullptr}) {
        if (poly && poly->modulus() != n) {
            throw Error(ErrorCode::ModulusMismatch, "free parameter is not over Z_" + std::to_string(n));
        }
    }

    Mat2Poly g = Mat2Poly::zero(n);
    switch (label.family) {
        case ClassFamily::Det0_General: g = generate_general(n, params, rng); break;
        case ClassFamily::Det0_Scaled: g = generate_scaled(n, label, params, rng); break;
        case ClassFamily::DetPair_Scalar:
        case ClassFamily::DetSingle_Scalar: g = Mat2Poly::scalar(n, label.det.value()); break;
        case ClassFamily::DetPair_Shift:
            g = generate_shift(n, label.roles[2], label.det.value(), params, rng);
            break;
        case ClassFamily::DetSingle_Shift:
            g = generate_shift(n, label.roles[1] * label.roles[2], label.det.value(), params, rng);
            break;
        case ClassFamily::DetPair_Mixed: g = generate_mixed(n, label, params, rng); break;
    }
    if (!params.e) g = conjugate_randomly(g, rng);
    if (!is_idempotent(g)) {
        throw Error(ErrorCode::InternalTheoremViolation,
                    "generated " + to_string(label) + " member is not idempotent: " + to_string(g));
    }
    return g;
}

// ---------------------------------------------------------------------------
// Oracle and completeness

std::vector<Mat2Poly> bruteforce_constant_idempotents(const Modulus& m, u64 budget) {
    const u64 n = m.n();
    if (static_cast<u128>(n) * n * n > budget) {
        throw Error(ErrorCode::BudgetExceeded,
                    std::to_string(n) + "^3 exceeds the search budget " + std::to_string(budget));
    }
    std::vector<std::array<u64, 4>> found;
    std::vector<u64> defect(n);  // x - x^2
    for (u64 x = 0; x < n; ++x) defect[x] = sub_mod(x, mul_mod(x, x, n), n);

    for (u64 e = 0; e < n; ++e) {
        const u64 c = defect[e];
        for (u64 h = 0; h < n; ++h) {
            if (defect[h] != c) continue;
            // f(e + h - 1) = 0 and g(e + h - 1) = 0 with fg = e - e^2.
            const u64 t1 = sub_mod(add_mod(e, h, n), 1 % n, n);
            for (u64 f = 0; f < n; ++f) {
                if (mul_mod(f, t1, n) != 0) continue;
                const u64 gf = gcd(f, n);
                if (c % gf != 0) continue;
                const u64 step = n / gf;
                const u64 g0 = step == 1 ? 0 : mul_mod(c / gf % step, mod_inverse(f / gf % step, step), step);
                for (u64 g = g0; g < n; g += step) {
                    if (mul_mod(g, t1, n) == 0) found.push_back({e, f, g, h});
                }
            }
        }
    }
    std::sort(found.begin(), found.end());
    std::vector<Mat2Poly> out;
    out.reserve(found.size());
    for (const auto& [e, f, g, h] : found) out.push_back(Mat2Poly::constant(n, e, f, g, h));
    return out;
}

std::vector<ExcludedTrace> excluded_traces(const Modulus& m) {
    require_classification_scope(m);
    std::vector<ExcludedTrace> out;
    const auto add = [&](const FormulaReport& report, std::initializer_list<int> indices,
                         const std::string& det_text) {
        for (int i : indices) {
            const FormulaEntry& entry = report.entries[static_cast<std::size_t>(i - 1)];
            out.push_back({report.det, entry.value,
                           "det " + det_text + " = " + std::to_string(report.det.value()) +
                               ", trace " + entry.expression});
        }
    };
    for (u64 r : m.primes()) {
        const auto [p, q] = others(m, r);
        const auto report = lemma_formula_solutions(m, FormulaFamily::PrimePairDet, {p, q, r});
        add(report, {2, 4, 6, 8},
            "(" + std::to_string(p) + "*" + std::to_string(q) + ")^(" + std::to_string(r) + "-1)");
    }
    for (u64 p : m.primes()) {
        const auto [q, r] = others(m, p);
        const auto report = lemma_formula_solutions(m, FormulaFamily::SinglePrimeDet, {p, q, r});
        add(report, {3, 4, 5, 6, 7, 8},
            std::to_string(p) + "^((" + std::to_string(q) + "-1)(" + std::to_string(r) + "-1))");
    }
    return out;
}

bool CompletenessReport::passed() const {
    return unmatched.empty() && det_support_ok &&
           std::all_of(excluded.begin(), excluded.end(),
                       [](const auto& entry) { return entry.second == 0; });
}

CompletenessReport completeness_check(const Modulus& m, u64 budget) {
    require_classification_scope(m);
    const auto matrices = bruteforce_constant_idempotents(m, budget);
    const Classifier classifier(m);

    CompletenessReport report;
    report.n = m.n();
    report.primes = m.primes();
    for (ClassFamily f : kAllFamilies) report.family_counts[f] = 0;
    for (const Mat2Poly& g : matrices) {
        const ClassificationReport r = classifier.run(g);
        ++report.total;
        ++report.det_histogram[r.det->value()];
        ++report.det_trace_histogram[{r.det->value(), r.trace->value()}];
        if (r.trivial) {
            ++report.trivial;
            continue;
        }
        if (r.matches.empty()) {
            report.unmatched.push_back(g);
            continue;
        }
        ++report.matched;
        if (r.matches.size() > 1) ++report.overlaps;
        for (const ClassMatch& match : r.matches) {
            ++report.family_counts[match.label.family];
            ++report.label_counts[to_string(match.label)];
            if (match.label.family == ClassFamily::DetPair_Mixed) {
                ++report.mixed_total;
                const u64 diag = g.e.coeff(0);
                if (diag == *match.label.u) ++report.mixed_diag_equals_u;
                if (mul_mod(diag, diag, m.n()) == diag) ++report.mixed_diag_idempotent;
            }
        }
    }

    const auto idempotents = enumerate_idempotents(m);
    for (const auto& [det, count] : report.det_histogram) {
        (void)count;
        if (!std::binary_search(idempotents.begin(), idempotents.end(), res(det, m.n()))) {
            report.det_support_ok = false;
        }
    }
    for (const ExcludedTrace& ex : excluded_traces(m)) {
        const auto it = report.det_trace_histogram.find({ex.det.value(), ex.trace.value()});
        report.excluded.emplace_back(ex, it == report.det_trace_histogram.end() ? 0 : it->second);
    }
    return report;
}

std::string to_text(const CompletenessReport& report) {
    std::ostringstream os;
    os << "modulus " << report.n << " =";
    for (std::size_t i = 0; i < report.primes.size(); ++i) {
        os << (i ? " * " : " ") << report.primes[i];
    }
    os << '\n';
    os << "constant idempotents: " << report.total << '\n';
    os << "trivial: " << report.trivial << '\n';
    os << "matched: " << report.matched << '\n';
    os << "unmatched: " << report.unmatched.size() << '\n';
    os << "overlaps: " << report.overlaps << '\n';
    os << "family counts:\n";
    for (const auto& [family, count] : report.family_counts) {
        os << "  " << to_string(family) << ' ' << count << '\n';
    }
    os << "label counts:\n";
    for (const auto& [label, count] : report.label_counts) os << "  " << label << ' ' << count << '\n';
    os << "det histogram:\n";
    for (const auto& [det, count] : report.det_histogram) os << "  " << det << ' ' << count << '\n';
    os << "det/trace histogram:\n";
    for (const auto& [key, count] : report.det_trace_histogram) {
        os << "  " << key.first << ' ' << key.second << ' ' << count << '\n';
    }
    os << "excluded traces:\n";
    for (const auto& [ex, count] : report.excluded) {
        os << "  " << ex.trace << ' ' << count << "  (" << ex.description << ")\n";
    }
    os << "mixed diagonals: total " << report.mixed_total << ", e(0) == u " << report.mixed_diag_equals_u
       << ", e(0) idempotent " << report.mixed_diag_idempotent << '\n';
    for (const Mat2Poly& g : report.unmatched) os << "UNMATCHED " << g << '\n';
    os << "result: " << (report.passed() ? "PASS" : "FAIL") << '\n';
    return os.str();
}

nlohmann::json to_json(const CompletenessReport& report) {
    nlohmann::json j = {{"n", report.n},
                        {"primes", report.primes},
                        {"total", report.total},
                        {"trivial", report.trivial},
                        {"matched", report.matched},
                        {"overlaps", report.overlaps},
                        {"passed", report.passed()}};
    nlohmann::json families = nlohmann::json::object();
    for (const auto& [family, count] : report.family_counts) families[to_string(family)] = count;
    j["family_counts"] = families;
    j["label_counts"] = report.label_counts;
    nlohmann::json dets = nlohmann::json::object();
    for (const auto& [det, count] : report.det_histogram) dets[std::to_string(det)] = count;
    j["det_histogram"] = dets;
    auto pairs = nlohmann::json::array();
    for (const auto& [key, count] : report.det_trace_histogram) {
        pairs.push_back({{"det", key.first}, {"trace", key.second}, {"count", count}});
    }
    j["det_trace_histogram"] = pairs;
    auto excluded = nlohmann::json::array();
    for (const auto& [ex, count] : report.excluded) {
        excluded.push_back({{"det", ex.det.value()},
                            {"trace", ex.trace.value()},
                            {"description", ex.description},
                            {"count", count}});
    }
    j["excluded_traces"] = excluded;
    j["mixed_diagonals"] = {{"total", report.mixed_total},
                            {"equals_u", report.mixed_diag_equals_u},
                            {"idempotent", report.mixed_diag_idempotent}};
    auto unmatched = nlohmann::json::array();
    for (const Mat2Poly& g : report.unmatched) unmatched.push_back(to_json(g));
    j["unmatched"] = unmatched;
    return j;
}

}  // namespace idem
