#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "curveaut/forms.hpp"
#include "curveaut/group.hpp"

namespace curveaut {

/// Which square root of 5 realizes the 1/sqrt(5) entries: the Gauss sum
/// zeta5 - zeta5^2 - zeta5^3 + zeta5^4 (whose square is 5) or its negative.
enum class Sqrt5Branch { GaussSum, NegGaussSum };

inline std::string sqrt5_description(Sqrt5Branch b) {
    const std::string gauss = "zeta5 - zeta5^2 - zeta5^3 + zeta5^4";
    return b == Sqrt5Branch::GaussSum ? gauss : "-(" + gauss + ")";
}

/// xi is pinned to zeta_60 (the solution of xi^12 = zeta5 this catalog uses);
/// certificates record it.
inline constexpr const char* kXiChoice = "zeta_60";

struct CatalogOptions {
    Sqrt5Branch sqrt5 = Sqrt5Branch::GaussSum;
    unsigned conductor_cap = kDefaultConductorCap;
    std::string tamper;  // empty, or one of registered_tampers()
};

/// Registered single-coefficient faults for the sensitivity suite. Each one
/// must flip at least one verification claim.
inline const std::vector<std::string>& registered_tampers() {
    static const std::vector<std::string> ids{
        "f20-coefficient",     // F20: 494 X^10 Y^10 -> 495
        "f30-coefficient",     // F30: -10005 X^20 Y^10 -> -10004
        "f12-coefficient",     // F12: 11 X^6 Y^6 -> 10
        "sigma-entry",         // sigma: sign of the (2,2) entry flipped
        "lambda30-exponent",   // lambda(30): zeta_30 -> zeta_30^2
    };
    return ids;
}

namespace detail {

/// "lambda(30)" -> {"lambda", 30}; "C(5)_galois" -> {"C_galois", 5}.
inline std::pair<std::string, unsigned> split_name_param(const std::string& name, unsigned d) {
    const auto open = name.find('(');
    if (open == std::string::npos) return {name, d};
    const auto close = name.find(')', open);
    if (close == std::string::npos) throw BadArgumentError("unbalanced parentheses in name: " + name);
    const std::string inside = name.substr(open + 1, close - open - 1);
    std::string base = name.substr(0, open) + name.substr(close + 1);
    if (inside == "d" || inside.empty()) return {base, d};
    unsigned v = 0;
    for (char ch : inside) {
        if (ch < '0' || ch > '9') throw BadArgumentError("bad parameter in name: " + name);
        v = v * 10 + static_cast<unsigned>(ch - '0');
    }
    return {base, v};
}

} // namespace detail

/// The exact generator matrices and curve equations, over minimal conductors.
/// An instance carries the sqrt(5) branch, the conductor cap, and an optional
/// registered fault.
class Catalog {
public:
    explicit Catalog(CatalogOptions opts = {}) : opts_(std::move(opts)) {
        if (!opts_.tamper.empty()) {
            const auto& ids = registered_tampers();
            if (std::find(ids.begin(), ids.end(), opts_.tamper) == ids.end()) {
                throw BadArgumentError("unknown tamper id: " + opts_.tamper);
            }
        }
    }

    const CatalogOptions& options() const { return opts_; }

    static std::vector<std::string> matrix_names() {
        return {"sigma",       "tau",        "rho_matrix",  "phi",
                "lambda(d)",   "alpha",      "beta",        "gamma",
                "alpha_prime", "beta_prime", "gamma_prime", "split_involution"};
    }

    static std::vector<std::string> generator_set_names() {
        return {"icosahedral_2x2", "S(2,1)", "Gtilde(30)", "Gtilde(20)", "Gtilde(12)", "C(d)_galois"};
    }

    static std::vector<std::string> curve_names() {
        return {"C30", "C20", "C12", "C(d)", "fermat(d)", "klein(d)"};
    }

    static std::vector<std::string> binary_form_names() {
        return {"F30", "F20", "F12", "fermat_binary(d)"};
    }

    Mat matrix(const std::string& name_in, unsigned d_in = 0) const {
        auto [name, d] = detail::split_name_param(name_in, d_in);
        if (name == "sigma") return sigma();
        if (name == "tau") return tau();
        if (name == "rho_matrix" || name == "rho") return rho();
        if (name == "phi") return phi();
        if (name == "lambda") return lambda(d);
        if (name == "alpha") return alpha();
        if (name == "beta") return beta();
        if (name == "gamma") return gamma();
        if (name == "alpha_prime" || name == "alpha'") return block_embed(alpha());
        if (name == "beta_prime" || name == "beta'") return block_embed(beta());
        if (name == "gamma_prime" || name == "gamma'") return block_embed(gamma());
        if (name == "split_involution") return split_involution();
        throw BadArgumentError("unknown catalog matrix: " + name_in);
    }

    GeneratorSet generators(const std::string& name_in, unsigned d_in = 0) const {
        if (name_in == "S(2,1)" || name_in == "S21") {
            return make_set("S(2,1)", Mode::Linear,
                            {block_embed(alpha()), block_embed(beta()), block_embed(gamma())},
                            {"alpha_prime", "beta_prime", "gamma_prime"});
        }
        auto [name, d] = detail::split_name_param(name_in, d_in);
        if (name == "icosahedral_2x2") {
            return make_set("icosahedral_2x2", Mode::Linear, {alpha(), beta(), gamma()},
                            {"alpha", "beta", "gamma"});
        }
        if (name == "Gtilde") {
            if (d == 30 || d == 20) {
                return make_set("Gtilde(" + std::to_string(d) + ")", Mode::Projective,
                                {sigma(), tau(), lambda(d)}, {"sigma", "tau", "lambda"});
            }
            if (d == 12) {
                return make_set("Gtilde(12)", Mode::Projective, {sigma(), phi()}, {"sigma", "phi"});
            }
            throw BadArgumentError("Gtilde takes d in {30, 20, 12}");
        }
        if (name == "C_galois") {
            if (d < 5) throw BadArgumentError("C(d)_galois needs d >= 5");
            const unsigned n = d * (d - 1);  // lcm of the two deck orders
            FieldPtr f = CyclotomicField::get(n, opts_.conductor_cap);
            const Cyclo one = Cyclo::one(f);
            Mat outer = Mat::diagonal(f, {Cyclo::root_of_unity(f, n / d), one, one});
            Mat inner = Mat::diagonal(f, {one, one, Cyclo::root_of_unity(f, n / (d - 1))});
            return make_set("C(" + std::to_string(d) + ")_galois", Mode::Projective,
                            {outer, inner}, {"outer_deck", "inner_deck"});
        }
        throw BadArgumentError("unknown catalog generator set: " + name_in);
    }

    BinaryForm binary_form(const std::string& name_in, unsigned d_in = 0) const {
        auto [name, d] = detail::split_name_param(name_in, d_in);
        FieldPtr q = CyclotomicField::get(1, opts_.conductor_cap);
        if (name == "F30") {
            const long c2010 = opts_.tamper == "f30-coefficient" ? -10004 : -10005;
            return BinaryForm::from_integer_terms(
                30,
                {{30, 1}, {25, 522}, {5, -522}, {20, c2010}, {10, -10005}, {0, 1}}, q);
        }
        if (name == "F20") {
            const long c1010 = opts_.tamper == "f20-coefficient" ? 495 : 494;
            return BinaryForm::from_integer_terms(
                20, {{20, 1}, {15, -228}, {5, 228}, {10, c1010}, {0, 1}}, q);
        }
        if (name == "F12") {
            const long c66 = opts_.tamper == "f12-coefficient" ? 10 : 11;
            return BinaryForm::from_integer_terms(12, {{11, 1}, {6, c66}, {1, -1}}, q);
        }
        if (name == "fermat_binary") {
            if (d < 1) throw BadArgumentError("fermat_binary needs d >= 1");
            return BinaryForm::from_integer_terms(d, {{d, 1}, {0, 1}}, q);
        }
        throw BadArgumentError("unknown catalog binary form: " + name_in);
    }

    TernaryForm curve(const std::string& name_in, unsigned d_in = 0) const {
        auto [name, d] = detail::split_name_param(name_in, d_in);
        FieldPtr q = CyclotomicField::get(1, opts_.conductor_cap);
        const Cyclo one = Cyclo::one(q);
        if (name == "C30") return standard_curve(binary_form("F30"));
        if (name == "C20") return standard_curve(binary_form("F20"));
        if (name == "C12") return standard_curve(binary_form("F12"));
        if (name == "C") {
            if (d < 4) throw BadArgumentError("C(d) needs d >= 4");
            TernaryForm f(d, q);
            f.set({0, 1, d - 1}, one);  // Y Z^(d-1)
            f.set({d, 0, 0}, one);
            f.set({0, d, 0}, one);
            return f;
        }
        if (name == "fermat") {
            if (d < 1) throw BadArgumentError("fermat needs d >= 1");
            TernaryForm f(d, q);
            f.set({d, 0, 0}, one);
            f.set({0, d, 0}, one);
            f.set({0, 0, d}, one);
            return f;
        }
        if (name == "klein") {
            if (d < 2) throw BadArgumentError("klein needs d >= 2");
            TernaryForm f(d, q);
            f.set({1, d - 1, 0}, one);  // X Y^(d-1)
            f.set({0, 1, d - 1}, one);  // Y Z^(d-1)
            f.set({d - 1, 0, 1}, one);  // Z X^(d-1)
            return f;
        }
        throw BadArgumentError("unknown catalog curve: " + name_in);
    }

    /// Field the main generators live in: Q(zeta5).
    FieldPtr base_field() const { return CyclotomicField::get(5, opts_.conductor_cap); }

private:
    GeneratorSet make_set(std::string name, Mode mode, std::vector<Mat> mats,
                          std::vector<std::string> labels) const {
        unsigned n = 1;
        for (const auto& m : mats) n = std::lcm(n, m.field()->conductor());
        FieldPtr f = CyclotomicField::get(n, opts_.conductor_cap);
        for (auto& m : mats) m = m.embed_field(f);
        GeneratorSet out;
        out.name = std::move(name);
        out.preferred_mode = mode;
        out.field = std::move(f);
        out.matrices = std::move(mats);
        out.labels = std::move(labels);
        return out;
    }

    Mat sigma() const {
        FieldPtr f = base_field();
        const Cyclo s5 = Cyclo::sqrt_five(f, opts_.sqrt5 == Sqrt5Branch::GaussSum ? +1 : -1);
        const Cyclo inv5 = s5.inverse();
        const Cyclo u = (Cyclo::root_of_unity(f, 1) - Cyclo::root_of_unity(f, 4)) * inv5;
        const Cyclo v = (Cyclo::root_of_unity(f, 3) - Cyclo::root_of_unity(f, 2)) * inv5;
        const Cyclo z = Cyclo::zero(f), one = Cyclo::one(f);
        const Cyclo low = opts_.tamper == "sigma-entry" ? u : -u;
        return Mat(3, f, {u, v, z, v, low, z, z, z, one});
    }

    Mat tau() const {
        FieldPtr f = base_field();
        return Mat::diagonal(f, {Cyclo::root_of_unity(f, 1), Cyclo::one(f), Cyclo::one(f)});
    }

    Mat rho() const {
        FieldPtr f = base_field();
        return Mat::diagonal(f, {Cyclo::root_of_unity(f, 3), Cyclo::root_of_unity(f, 2), Cyclo::one(f)});
    }

    Mat phi() const {
        FieldPtr f = CyclotomicField::get(60, opts_.conductor_cap);
        return Mat::diagonal(f, {Cyclo::root_of_unity(f, 12), Cyclo::one(f),
                                 Cyclo::root_of_unity(f, 1)});  // xi = zeta_60
    }

    Mat lambda(unsigned d) const {
        if (d < 2) throw BadArgumentError("lambda(d) needs d >= 2");
        FieldPtr f = CyclotomicField::get(d, opts_.conductor_cap);
        const long e = (d == 30 && opts_.tamper == "lambda30-exponent") ? 2 : 1;
        return Mat::diagonal(f, {Cyclo::one(f), Cyclo::one(f), Cyclo::root_of_unity(f, e)});
    }

    Mat alpha() const {
        FieldPtr f = base_field();
        return Mat::diagonal(f, {-Cyclo::root_of_unity(f, 3), -Cyclo::root_of_unity(f, 2)});
    }

    Mat beta() const {
        FieldPtr f = base_field();
        const Cyclo z = Cyclo::zero(f), one = Cyclo::one(f);
        return Mat(2, f, {z, one, -one, z});
    }

    Mat gamma() const {
        FieldPtr f = base_field();
        const Cyclo w = (Cyclo::root_of_unity(f, 2) - Cyclo::root_of_unity(f, 3)).inverse();
        const Cyclo p = Cyclo::root_of_unity(f, 1) + Cyclo::root_of_unity(f, 4);  // zeta5 + zeta5^-1
        return Mat(2, f, {w * p, w, w, -(w * p)});
    }

    Mat split_involution() const {
        FieldPtr f = CyclotomicField::get(4, opts_.conductor_cap);
        const Cyclo z = Cyclo::zero(f), one = Cyclo::one(f);
        return Mat(3, f, {z, one, z, -one, z, z, z, z, Cyclo::root_of_unity(f, 1)});
    }

    CatalogOptions opts_;
};

} // namespace curveaut
