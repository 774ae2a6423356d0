#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curveaut/group.hpp"
#include "curveaut/matrix.hpp"

namespace curveaut {

/// Homogeneous binary form; coefficient at index i multiplies X^i Y^(d-i).
class BinaryForm {
public:
    BinaryForm(unsigned degree, FieldPtr field)
        : degree_(degree), field_(std::move(field)),
          coeff_(degree + 1, Cyclo::zero(field_)) {}

    static BinaryForm from_integer_terms(unsigned degree,
                                         const std::vector<std::pair<unsigned, long>>& terms,
                                         FieldPtr field) {
        BinaryForm f(degree, std::move(field));
        for (const auto& [xe, c] : terms) f.set(xe, Cyclo::integer(f.field_, Int(c)));
        return f;
    }

    unsigned degree() const { return degree_; }
    const FieldPtr& field() const { return field_; }
    const Cyclo& coeff(unsigned x_exp) const { return coeff_.at(x_exp); }

    void set(unsigned x_exp, Cyclo c) {
        require_same_field(c.field(), field_);
        coeff_.at(x_exp) = std::move(c);
    }

    bool is_zero() const {
        for (const auto& c : coeff_)
            if (!c.is_zero()) return false;
        return true;
    }

    BinaryForm embed_field(const FieldPtr& target) const {
        if (target->conductor() == field_->conductor()) return *this;
        BinaryForm out(degree_, target);
        for (unsigned i = 0; i <= degree_; ++i) out.coeff_[i] = coeff_[i].embed(target);
        return out;
    }

    friend bool operator==(const BinaryForm& a, const BinaryForm& b) {
        return a.degree_ == b.degree_ && a.coeff_ == b.coeff_;
    }

private:
    unsigned degree_;
    FieldPtr field_;
    std::vector<Cyclo> coeff_;
};

/// Homogeneous ternary form, stored sparsely: exponent triple -> coefficient.
class TernaryForm {
public:
    TernaryForm(unsigned degree, FieldPtr field) : degree_(degree), field_(std::move(field)) {}

    unsigned degree() const { return degree_; }
    const FieldPtr& field() const { return field_; }
    const std::map<std::array<unsigned, 3>, Cyclo>& terms() const { return terms_; }

    void set(std::array<unsigned, 3> exp, Cyclo c) {
        if (exp[0] + exp[1] + exp[2] != degree_) throw BadArgumentError("exponents must sum to the degree");
        require_same_field(c.field(), field_);
        if (c.is_zero()) terms_.erase(exp);
        else terms_.insert_or_assign(exp, std::move(c));
    }

    void add(std::array<unsigned, 3> exp, const Cyclo& c) {
        auto it = terms_.find(exp);
        if (it == terms_.end()) set(exp, c);
        else {
            Cyclo s = it->second + c;
            if (s.is_zero()) terms_.erase(it);
            else it->second = std::move(s);
        }
    }

    bool is_zero() const { return terms_.empty(); }

    TernaryForm embed_field(const FieldPtr& target) const {
        if (target->conductor() == field_->conductor()) return *this;
        TernaryForm out(degree_, target);
        for (const auto& [e, c] : terms_) out.set(e, c.embed(target));
        return out;
    }

    friend bool operator==(const TernaryForm& a, const TernaryForm& b) {
        return a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }

private:
    unsigned degree_;
    FieldPtr field_;
    std::map<std::array<unsigned, 3>, Cyclo> terms_;
};

/// Z^d + F(X, Y) as a ternary form.
inline TernaryForm standard_curve(const BinaryForm& f) {
    TernaryForm out(f.degree(), f.field());
    for (unsigned i = 0; i <= f.degree(); ++i) {
        if (!f.coeff(i).is_zero()) out.set({i, f.degree() - i, 0}, f.coeff(i));
    }
    out.set({0, 0, f.degree()}, Cyclo::one(f.field()));
    return out;
}

namespace detail {

/// Coefficient arrays of (p X + q Y)^k, index = X exponent.
inline std::vector<Cyclo> linear_power(const Cyclo& p, const Cyclo& q, unsigned k) {
    const FieldPtr& f = p.field();
    std::vector<Cyclo> out{Cyclo::one(f)};
    for (unsigned t = 0; t < k; ++t) {
        std::vector<Cyclo> nxt(out.size() + 1, Cyclo::zero(f));
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (out[i].is_zero()) continue;
            nxt[i + 1] = nxt[i + 1] + out[i] * p;
            nxt[i] = nxt[i] + out[i] * q;
        }
        out = std::move(nxt);
    }
    return out;
}

} // namespace detail

/// Substitute (X, Y) -> (row0 . vars, row1 . vars) and expand exactly.
/// pullback(F, A*B) = pullback(pullback(F, A), B).
inline BinaryForm pullback(const BinaryForm& form, const Mat& a) {
    if (a.dim() != 2) throw BadArgumentError("binary pullback expects a 2x2 matrix");
    const unsigned n = std::lcm(form.field()->conductor(), a.field()->conductor());
    FieldPtr f = CyclotomicField::get(n, std::max(n, kDefaultConductorCap));
    const BinaryForm src = form.embed_field(f);
    const Mat m = a.embed_field(f);
    const unsigned d = src.degree();
    BinaryForm out(d, f);
    std::map<unsigned, std::vector<Cyclo>> pow_x, pow_y;
    std::vector<Cyclo> acc(d + 1, Cyclo::zero(f));
    for (unsigned xe = 0; xe <= d; ++xe) {
        if (src.coeff(xe).is_zero()) continue;
        const unsigned ye = d - xe;
        auto& px = pow_x.try_emplace(xe, std::vector<Cyclo>()).first->second;
        if (px.empty()) px = detail::linear_power(m.at(0, 0), m.at(0, 1), xe);
        auto& py = pow_y.try_emplace(ye, std::vector<Cyclo>()).first->second;
        if (py.empty()) py = detail::linear_power(m.at(1, 0), m.at(1, 1), ye);
        for (std::size_t i = 0; i < px.size(); ++i) {
            if (px[i].is_zero()) continue;
            const Cyclo t = src.coeff(xe) * px[i];
            for (std::size_t j = 0; j < py.size(); ++j) {
                if (!py[j].is_zero()) acc[i + j] = acc[i + j] + t * py[j];
            }
        }
    }
    for (unsigned i = 0; i <= d; ++i)
        if (!acc[i].is_zero()) out.set(i, acc[i]);
    return out;
}

/// Ternary pullback with fast paths for diagonal and PBD(2,1)-shaped matrices.
inline TernaryForm pullback(const TernaryForm& form, const Mat& a) {
    if (a.dim() != 3) throw BadArgumentError("ternary pullback expects a 3x3 matrix");
    const unsigned n = std::lcm(form.field()->conductor(), a.field()->conductor());
    FieldPtr f = CyclotomicField::get(n, std::max(n, kDefaultConductorCap));
    const TernaryForm src = form.embed_field(f);
    const Mat m = a.embed_field(f);
    TernaryForm out(src.degree(), f);

    const bool diag = m.at(0, 1).is_zero() && m.at(0, 2).is_zero() && m.at(1, 0).is_zero() &&
                      m.at(1, 2).is_zero() && m.at(2, 0).is_zero() && m.at(2, 1).is_zero();
    if (diag) {
        for (const auto& [e, c] : src.terms()) {
            Cyclo s = c * m.at(0, 0).pow(e[0]) * m.at(1, 1).pow(e[1]) * m.at(2, 2).pow(e[2]);
            out.add(e, s);
        }
        return out;
    }
    if (m.is_pbd_shape()) {
        std::map<unsigned, std::vector<Cyclo>> pow_x, pow_y;
        for (const auto& [e, c] : src.terms()) {
            auto& px = pow_x.try_emplace(e[0], std::vector<Cyclo>()).first->second;
            if (px.empty()) px = detail::linear_power(m.at(0, 0), m.at(0, 1), e[0]);
            auto& py = pow_y.try_emplace(e[1], std::vector<Cyclo>()).first->second;
            if (py.empty()) py = detail::linear_power(m.at(1, 0), m.at(1, 1), e[1]);
            const Cyclo zc = c * m.at(2, 2).pow(e[2]);
            for (std::size_t i = 0; i < px.size(); ++i) {
                if (px[i].is_zero()) continue;
                const Cyclo t = zc * px[i];
                for (std::size_t j = 0; j < py.size(); ++j) {
                    if (py[j].is_zero()) continue;
                    const unsigned xe = static_cast<unsigned>(i + j);
                    out.add({xe, e[0] + e[1] - xe, e[2]}, t * py[j]);
                }
            }
        }
        return out;
    }
    // general case: expand products of the three substituted linear forms
    using Sparse = std::map<std::array<unsigned, 3>, Cyclo>;
    auto mul_sparse = [&](const Sparse& p, const Sparse& q) {
        Sparse r;
        for (const auto& [e1, c1] : p)
            for (const auto& [e2, c2] : q) {
                std::array<unsigned, 3> e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]};
                Cyclo prod = c1 * c2;
                auto it = r.find(e);
                if (it == r.end()) r.emplace(e, std::move(prod));
                else it->second = it->second + prod;
            }
        return r;
    };
    std::array<std::vector<Sparse>, 3> powers;  // powers[v][k] = L_v^k
    for (unsigned v = 0; v < 3; ++v) {
        Sparse lin;
        for (unsigned j = 0; j < 3; ++j) {
            if (!m.at(v, j).is_zero()) {
                std::array<unsigned, 3> e{0, 0, 0};
                e[j] = 1;
                lin.emplace(e, m.at(v, j));
            }
        }
        powers[v].push_back(Sparse{{{0, 0, 0}, Cyclo::one(f)}});
        powers[v].push_back(std::move(lin));
    }
    auto power_of = [&](unsigned v, unsigned k) -> const Sparse& {
        while (powers[v].size() <= k) {
            powers[v].push_back(mul_sparse(powers[v].back(), powers[v][1]));
        }
        return powers[v][k];
    };
    for (const auto& [e, c] : src.terms()) {
        Sparse t{{{0, 0, 0}, c}};
        for (unsigned v = 0; v < 3; ++v) {
            if (e[v] > 0) t = mul_sparse(t, power_of(v, e[v]));
        }
        for (const auto& [te, tc] : t) out.add(te, tc);
    }
    return out;
}

// ---- invariance ----

struct InvarianceReport {
    enum class Verdict { Invariant, RelativeInvariant, NotInvariant };
    Verdict verdict = Verdict::Invariant;
    std::vector<std::optional<Cyclo>> characters;  // per checked element
    std::optional<int> failing_index;

    bool all_characters_one() const { return verdict == Verdict::Invariant; }
    bool all_scalar() const { return verdict != Verdict::NotInvariant; }
};

namespace detail {

template <class Form>
std::optional<Cyclo> form_scalar_ratio(const Form& got, const Form& base);

template <>
inline std::optional<Cyclo> form_scalar_ratio(const BinaryForm& got, const BinaryForm& base) {
    std::optional<Cyclo> ratio;
    for (unsigned i = 0; i <= base.degree(); ++i) {
        const bool bz = base.coeff(i).is_zero(), gz = got.coeff(i).is_zero();
        if (bz != gz) return std::nullopt;
        if (bz) continue;
        Cyclo c = got.coeff(i) * base.coeff(i).inverse();
        if (!ratio) ratio = c;
        else if (!(*ratio == c)) return std::nullopt;
    }
    return ratio;
}

template <>
inline std::optional<Cyclo> form_scalar_ratio(const TernaryForm& got, const TernaryForm& base) {
    if (got.terms().size() != base.terms().size()) return std::nullopt;
    std::optional<Cyclo> ratio;
    auto it = got.terms().begin();
    for (const auto& [e, c] : base.terms()) {
        if (it->first != e) return std::nullopt;
        Cyclo r = it->second * c.inverse();
        if (!ratio) ratio = r;
        else if (!(*ratio == r)) return std::nullopt;
        ++it;
    }
    return ratio;
}

template <class Form>
InvarianceReport invariance_over(const Form& form, std::span<const Mat> elements) {
    InvarianceReport rep;
    if (elements.empty()) return rep;
    unsigned n = form.field()->conductor();
    for (const auto& m : elements) n = std::lcm(n, m.field()->conductor());
    FieldPtr f = CyclotomicField::get(n, std::max(n, kDefaultConductorCap));
    const Form base = form.embed_field(f);
    bool all_one = true;
    rep.characters.reserve(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        Form moved = pullback(base, elements[i]);
        auto c = form_scalar_ratio(moved, base);
        if (!c) {
            rep.verdict = InvarianceReport::Verdict::NotInvariant;
            rep.failing_index = static_cast<int>(i);
            rep.characters.push_back(std::nullopt);
            return rep;
        }
        if (!c->is_one()) all_one = false;
        rep.characters.push_back(std::move(c));
    }
    rep.verdict = all_one ? InvarianceReport::Verdict::Invariant
                          : InvarianceReport::Verdict::RelativeInvariant;
    return rep;
}

} // namespace detail

inline InvarianceReport invariance_character(const BinaryForm& f, std::span<const Mat> elements) {
    return detail::invariance_over(f, elements);
}

inline InvarianceReport invariance_character(const TernaryForm& f, std::span<const Mat> elements) {
    return detail::invariance_over(f, elements);
}

template <class Form>
InvarianceReport invariance_character(const Form& f, const GroupTable& g) {
    std::vector<Mat> elems;
    elems.reserve(static_cast<std::size_t>(g.order()));
    for (int i = 0; i < g.order(); ++i) elems.push_back(g.element(i));
    return detail::invariance_over(f, std::span<const Mat>(elems));
}

// ---- squarefreeness / smoothness ----

namespace detail {

using CPoly = std::vector<Cyclo>;  // dense, ascending

inline void cpoly_trim(CPoly& p) {
    while (p.size() > 1 && p.back().is_zero()) p.pop_back();
}

inline CPoly cpoly_rem(CPoly a, const CPoly& b) {
    cpoly_trim(a);
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size()) return a;
    const Cyclo lead_inv = b.back().inverse();
    for (std::size_t i = a.size(); i-- > db;) {
        if (a[i].is_zero()) continue;
        Cyclo c = a[i] * lead_inv;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] = a[i - db + j] - c * b[j];
    }
    a.resize(db);
    if (a.empty()) a.push_back(Cyclo::zero(b.back().field()));
    cpoly_trim(a);
    return a;
}

inline bool cpoly_is_zero(const CPoly& p) {
    for (const auto& c : p)
        if (!c.is_zero()) return false;
    return true;
}

inline CPoly cpoly_gcd(CPoly a, CPoly b) {
    cpoly_trim(a);
    cpoly_trim(b);
    while (!cpoly_is_zero(b)) {
        CPoly r = cpoly_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

} // namespace detail

/// True iff the form has no repeated irreducible factor over the closure.
/// X- and Y-factors are stripped and counted; the rest is decided by
/// gcd(f, f') for the dehomogenization f(t) = F(t, 1).
inline bool binary_squarefree(const BinaryForm& form) {
    if (form.is_zero()) throw BadArgumentError("squarefreeness of the zero form");
    const unsigned d = form.degree();
    unsigned lo = 0, hi = d;
    while (form.coeff(lo).is_zero()) ++lo;
    while (form.coeff(hi).is_zero()) --hi;
    const unsigned x_mult = lo;
    const unsigned y_mult = d - hi;
    if (x_mult >= 2 || y_mult >= 2) return false;
    if (hi == lo) return true;  // pure monomial c X^lo Y^(d-lo) with both mults <= 1
    detail::CPoly f;
    for (unsigned i = lo; i <= hi; ++i) f.push_back(form.coeff(i));
    detail::CPoly fp;
    const FieldPtr& fld = form.field();
    for (std::size_t i = 1; i < f.size(); ++i) {
        fp.push_back(Rational(static_cast<long>(i)) * f[i]);
    }
    if (fp.empty()) fp.push_back(Cyclo::zero(fld));
    detail::CPoly g = detail::cpoly_gcd(f, fp);
    return g.size() == 1 && !g[0].is_zero();
}

/// Smoothness of Z^d + F(X, Y) = 0: a singular point forces Z = 0 together
/// with a common root of F and both partials, i.e. a multiple factor of F.
inline bool is_smooth_standard(unsigned d, const BinaryForm& form) {
    if (form.degree() != d) throw BadArgumentError("degree mismatch for the standard curve");
    if (d < 4) throw BadArgumentError("standard curve needs degree >= 4");
    return binary_squarefree(form);
}

// ---- standard-position Galois point ----

struct GaloisVerdict {
    bool certified = false;
    unsigned deck_order = 0;
    std::string message;
    InvarianceReport invariance;
};

/// Verifies the outer Galois point (0:0:1) of Z^d + F(X,Y) = 0: the deck
/// group generated by diag(1,1,zeta_d) has order exactly d, fixes the curve
/// with all characters 1, and is fiberwise diagonal.
inline GaloisVerdict standard_galois_check(unsigned d, const BinaryForm& form,
                                           unsigned cap = kDefaultConductorCap) {
    if (form.degree() != d) throw BadArgumentError("degree mismatch for the standard curve");
    GaloisVerdict v;
    FieldPtr f = CyclotomicField::get(std::lcm(d, form.field()->conductor()), cap);
    const Cyclo zd = Cyclo::root_of_unity(f, static_cast<long>(f->conductor() / d));
    std::vector<Mat> deck;
    Mat lam = Mat::diagonal(f, {Cyclo::one(f), Cyclo::one(f), zd});
    Mat cur = Mat::identity(f, 3);
    for (unsigned k = 0; k < d; ++k) {
        deck.push_back(projective_canonical(cur));
        cur = cur * lam;
        if (k + 1 < d && cur.is_identity()) {
            v.message = "deck generator has order " + std::to_string(k + 1) +
                        " instead of " + std::to_string(d);
            return v;
        }
    }
    if (!cur.is_identity()) {
        v.message = "deck generator order does not divide " + std::to_string(d);
        return v;
    }
    v.deck_order = d;
    for (const auto& m : deck) {
        const bool fiberwise = m.at(0, 0).is_one() && m.at(1, 1).is_one() &&
                               m.at(0, 1).is_zero() && m.at(1, 0).is_zero() && m.is_pbd_shape();
        if (!fiberwise) {
            v.message = "deck element does not act fiberwise on the projection";
            return v;
        }
    }
    const TernaryForm curve = standard_curve(form);
    v.invariance = invariance_character(curve, std::span<const Mat>(deck));
    if (!v.invariance.all_characters_one()) {
        v.message = "not Galois in standard position: curve is not fixed by the deck group";
        return v;
    }
    v.certified = true;
    v.message = "outer Galois point (0:0:1) certified with cyclic deck group Z_" + std::to_string(d);
    return v;
}

// ---- Molien series ----

/// Exact coefficients 0..degree_bound of (1/|G|) sum_g 1/det(I - t g) for a
/// finite linear 2x2 group; the per-element factor is the series inverse of
/// 1 - tr(g) t + det(g) t^2.
inline std::vector<Rational> molien_series(const GroupTable& g, unsigned degree_bound) {
    if (g.mode() != Mode::Linear || g.dim() != 2) {
        throw BadArgumentError("Molien series needs a linear 2x2 group table");
    }
    const FieldPtr& f = g.field();
    std::vector<Cyclo> total(degree_bound + 1, Cyclo::zero(f));
    for (int i = 0; i < g.order(); ++i) {
        const Mat& m = g.element(i);
        const Cyclo tr = m.at(0, 0) + m.at(1, 1);
        const Cyclo det = m.det();
        std::vector<Cyclo> s(degree_bound + 1, Cyclo::zero(f));
        s[0] = Cyclo::one(f);
        for (unsigned k = 1; k <= degree_bound; ++k) {
            Cyclo acc = tr * s[k - 1];
            if (k >= 2) acc = acc - det * s[k - 2];
            s[k] = std::move(acc);
        }
        for (unsigned k = 0; k <= degree_bound; ++k) total[k] = total[k] + s[k];
    }
    std::vector<Rational> out;
    out.reserve(degree_bound + 1);
    const Rational inv_order(1, g.order());
    for (unsigned k = 0; k <= degree_bound; ++k) {
        Cyclo c = inv_order * total[k];
        if (!c.is_rational()) throw Error("Molien coefficient is not rational");
        out.push_back(c.rational_value());
    }
    return out;
}

// ---- JSON ----

inline nlohmann::json to_json(const BinaryForm& f) {
    nlohmann::json terms = nlohmann::json::array();
    for (unsigned i = 0; i <= f.degree(); ++i) {
        if (f.coeff(i).is_zero()) continue;
        terms.push_back({{"exp", {i, f.degree() - i}}, {"coeff", to_json(f.coeff(i))}});
    }
    return {{"vars", {"X", "Y"}}, {"degree", f.degree()}, {"terms", terms}};
}

inline nlohmann::json to_json(const TernaryForm& f) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : f.terms()) {
        terms.push_back({{"exp", {e[0], e[1], e[2]}}, {"coeff", to_json(c)}});
    }
    return {{"vars", {"X", "Y", "Z"}}, {"degree", f.degree()}, {"terms", terms}};
}

inline BinaryForm binary_form_from_json(const nlohmann::json& j, unsigned cap = kDefaultConductorCap) {
    const unsigned d = j.at("degree").get<unsigned>();
    unsigned n = 1;
    for (const auto& t : j.at("terms")) {
        n = std::lcm(n, t.at("coeff").at("conductor").get<unsigned>());
    }
    FieldPtr f = CyclotomicField::get(n, cap);
    BinaryForm out(d, f);
    for (const auto& t : j.at("terms")) {
        const auto& e = t.at("exp");
        if (!e.is_array() || e.size() != 2) throw BadArgumentError("binary form term needs two exponents");
        const unsigned xe = e.at(0).get<unsigned>(), ye = e.at(1).get<unsigned>();
        if (xe + ye != d) throw BadArgumentError("term exponents must sum to the degree");
        Cyclo c = cyclo_from_json(t.at("coeff"), cap).embed(f);
        out.set(xe, out.coeff(xe) + c);
    }
    return out;
}

inline TernaryForm ternary_form_from_json(const nlohmann::json& j, unsigned cap = kDefaultConductorCap) {
    const unsigned d = j.at("degree").get<unsigned>();
    unsigned n = 1;
    for (const auto& t : j.at("terms")) {
        n = std::lcm(n, t.at("coeff").at("conductor").get<unsigned>());
    }
    FieldPtr f = CyclotomicField::get(n, cap);
    TernaryForm out(d, f);
    for (const auto& t : j.at("terms")) {
        const auto& e = t.at("exp");
        if (!e.is_array() || e.size() != 3) throw BadArgumentError("ternary form term needs three exponents");
        Cyclo c = cyclo_from_json(t.at("coeff"), cap).embed(f);
        out.add({e.at(0).get<unsigned>(), e.at(1).get<unsigned>(), e.at(2).get<unsigned>()}, c);
    }
    return out;
}

} // namespace curveaut
