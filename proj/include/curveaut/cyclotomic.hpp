#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curveaut/error.hpp"
#include "curveaut/rational.hpp"

namespace curveaut {

inline constexpr unsigned kDefaultConductorCap = 120;

namespace detail {

inline std::vector<Int> int_poly_mul(const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> out(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j] != 0) out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// Exact division by a monic divisor; throws if the remainder is nonzero.
inline std::vector<Int> int_poly_div_exact(std::vector<Int> a, const std::vector<Int>& b) {
    const std::size_t db = b.size() - 1;
    if (b.back() != 1) throw BadArgumentError("divisor must be monic");
    if (a.size() < b.size()) throw BadArgumentError("division underflow");
    std::vector<Int> q(a.size() - db, Int(0));
    for (std::size_t i = a.size(); i-- > db;) {
        Int c = a[i];
        if (c == 0) continue;
        q[i - db] = c;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    for (std::size_t j = 0; j < db; ++j) {
        if (a[j] != 0) throw BadArgumentError("polynomial division not exact");
    }
    return q;
}

} // namespace detail

/// Coefficients of the n-th cyclotomic polynomial, ascending, monic of degree phi(n).
inline std::vector<Int> cyclotomic_polynomial(unsigned n) {
    if (n == 0) throw BadArgumentError("cyclotomic polynomial needs n >= 1");
    static std::map<unsigned, std::vector<Int>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto compute = [](auto&& self, unsigned m) -> const std::vector<Int>& {
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
        // x^m - 1 divided by the product of Phi_d over proper divisors d | m
        std::vector<Int> num(m + 1, Int(0));
        num[0] = -1;
        num[m] = 1;
        std::vector<Int> den{Int(1)};
        for (unsigned d = 1; d < m; ++d) {
            if (m % d == 0) den = detail::int_poly_mul(den, self(self, d));
        }
        auto q = detail::int_poly_div_exact(std::move(num), den);
        return cache.emplace(m, std::move(q)).first->second;
    };
    return compute(compute, n);
}

inline unsigned euler_phi(unsigned n) {
    return static_cast<unsigned>(cyclotomic_polynomial(n).size() - 1);
}

class CyclotomicField;
using FieldPtr = std::shared_ptr<const CyclotomicField>;

/// Q(zeta_n) presented as Q[x]/Phi_n(x). Immutable; shared through the registry.
class CyclotomicField {
public:
    static FieldPtr get(unsigned n, unsigned cap = kDefaultConductorCap) {
        if (n == 0) throw BadArgumentError("conductor must be >= 1");
        if (n > cap) {
            throw ConductorCapError("conductor " + std::to_string(n) +
                                    " exceeds cap " + std::to_string(cap));
        }
        static std::map<unsigned, FieldPtr> registry;
        static std::mutex mtx;
        std::lock_guard<std::mutex> lock(mtx);
        auto it = registry.find(n);
        if (it != registry.end()) return it->second;
        FieldPtr f(new CyclotomicField(n));
        registry.emplace(n, f);
        return f;
    }

    unsigned conductor() const { return n_; }
    unsigned degree() const { return phi_; }
    const std::vector<Int>& modulus() const { return modulus_; }

    /// x^k reduced mod Phi_n, for 0 <= k < row_count().
    const std::vector<Int>& power_row(std::size_t k) const { return rows_[k]; }
    std::size_t row_count() const { return rows_.size(); }

    bool operator==(const CyclotomicField& o) const { return n_ == o.n_; }

private:
    explicit CyclotomicField(unsigned n)
        : n_(n), modulus_(cyclotomic_polynomial(n)) {
        phi_ = static_cast<unsigned>(modulus_.size() - 1);
        const std::size_t top = std::max<std::size_t>(2 * phi_ - 1, n + 1);
        rows_.reserve(top);
        for (std::size_t k = 0; k < top; ++k) {
            if (k < phi_) {
                std::vector<Int> row(phi_, Int(0));
                row[k] = 1;
                rows_.push_back(std::move(row));
            } else {
                const auto& prev = rows_[k - 1];
                std::vector<Int> row(phi_, Int(0));
                for (unsigned j = 1; j < phi_; ++j) row[j] = prev[j - 1];
                const Int& lead = prev[phi_ - 1];
                if (lead != 0) {
                    for (unsigned j = 0; j < phi_; ++j) row[j] -= lead * modulus_[j];
                }
                rows_.push_back(std::move(row));
            }
        }
    }

    unsigned n_;
    unsigned phi_;
    std::vector<Int> modulus_;
    std::vector<std::vector<Int>> rows_;
};

inline void require_same_field(const FieldPtr& a, const FieldPtr& b) {
    if (a->conductor() != b->conductor()) {
        throw FieldMismatchError("elements live in Q(zeta_" + std::to_string(a->conductor()) +
                                 ") and Q(zeta_" + std::to_string(b->conductor()) + ")");
    }
}

/// Exact element of Q(zeta_n) in the power basis. Stored as an integer
/// coordinate vector over a single positive denominator with
/// gcd(content, den) = 1, which makes the representation canonical.
class Cyclo {
public:
    Cyclo() = default;

    static Cyclo zero(FieldPtr f) { return Cyclo(std::move(f)); }

    static Cyclo one(FieldPtr f) { return integer(std::move(f), 1); }

    static Cyclo integer(FieldPtr f, Int v) {
        Cyclo c(std::move(f));
        c.num_[0] = std::move(v);
        return c;
    }

    static Cyclo rational(FieldPtr f, const Rational& q) {
        Cyclo c(std::move(f));
        c.num_[0] = q.get_num();
        c.den_ = q.get_den();
        return c;
    }

    /// Element with the given power-basis coordinates.
    static Cyclo from_coords(FieldPtr f, const std::vector<Rational>& coords) {
        if (coords.size() != f->degree()) {
            throw BadArgumentError("coordinate count does not match field degree");
        }
        Cyclo c(f);
        Int den(1);
        for (const auto& q : coords) den = lcm(den, Int(q.get_den()));
        for (unsigned i = 0; i < coords.size(); ++i) {
            c.num_[i] = Int(coords[i].get_num()) * (den / Int(coords[i].get_den()));
        }
        c.den_ = den;
        c.normalize();
        return c;
    }

    /// zeta_n^k, k taken mod n.
    static Cyclo root_of_unity(FieldPtr f, long k) {
        const long n = static_cast<long>(f->conductor());
        long r = k % n;
        if (r < 0) r += n;
        Cyclo c(f);
        c.num_ = f->power_row(static_cast<std::size_t>(r));
        c.normalize();
        return c;
    }

    /// The Gauss sum zeta5 - zeta5^2 - zeta5^3 + zeta5^4 (whose square is 5),
    /// or its negative; requires 5 | conductor.
    static Cyclo sqrt_five(FieldPtr f, int sign = +1) {
        if (f->conductor() % 5 != 0) {
            throw BadArgumentError("sqrt(5) needs a conductor divisible by 5");
        }
        const long k = f->conductor() / 5;
        Cyclo g = root_of_unity(f, k) - root_of_unity(f, 2 * k) -
                  root_of_unity(f, 3 * k) + root_of_unity(f, 4 * k);
        return sign >= 0 ? g : -g;
    }

    const FieldPtr& field() const { return field_; }
    unsigned conductor() const { return field_->conductor(); }

    bool is_zero() const {
        for (const auto& x : num_)
            if (x != 0) return false;
        return true;
    }

    bool is_one() const { return den_ == 1 && num_[0] == 1 && tail_zero(); }

    bool is_rational() const { return tail_zero(); }

    Rational rational_value() const {
        if (!is_rational()) throw BadArgumentError("element is not rational");
        return make_rational(num_[0], den_);
    }

    Rational coord(unsigned i) const { return make_rational(num_.at(i), den_); }

    std::vector<Rational> coords() const {
        std::vector<Rational> out;
        out.reserve(num_.size());
        for (unsigned i = 0; i < num_.size(); ++i) out.push_back(coord(i));
        return out;
    }

    friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
        require_same_field(a.field_, b.field_);
        Cyclo out(a.field_);
        Int g = gcd(a.den_, b.den_);
        Int fa = b.den_ / g, fb = a.den_ / g;
        out.den_ = a.den_ * fa;
        for (std::size_t i = 0; i < a.num_.size(); ++i) {
            out.num_[i] = a.num_[i] * fa + b.num_[i] * fb;
        }
        out.normalize();
        return out;
    }

    friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a + (-b); }

    Cyclo operator-() const {
        Cyclo out = *this;
        for (auto& x : out.num_) x = -x;
        return out;
    }

    friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
        require_same_field(a.field_, b.field_);
        const unsigned phi = a.field_->degree();
        std::vector<Int> conv(2 * phi - 1, Int(0));
        for (unsigned i = 0; i < phi; ++i) {
            if (a.num_[i] == 0) continue;
            for (unsigned j = 0; j < phi; ++j) {
                if (b.num_[j] != 0) conv[i + j] += a.num_[i] * b.num_[j];
            }
        }
        Cyclo out(a.field_);
        out.reduce_from(std::move(conv));
        out.den_ = a.den_ * b.den_;
        out.normalize();
        return out;
    }

    friend Cyclo operator*(const Rational& q, const Cyclo& a) {
        Cyclo out = a;
        for (auto& x : out.num_) x *= q.get_num();
        out.den_ *= q.get_den();
        out.normalize();
        return out;
    }

    Cyclo inverse() const {
        if (is_zero()) throw SingularError("inverse of zero");
        // Extended Euclid in Q[x] against Phi_n.
        using QP = std::vector<Rational>;
        const auto& mod = field_->modulus();
        QP r0(mod.size());
        for (std::size_t i = 0; i < mod.size(); ++i) r0[i] = Rational(mod[i]);
        QP r1(num_.size());
        for (std::size_t i = 0; i < num_.size(); ++i) r1[i] = make_rational(num_[i], den_);
        trim(r1);
        QP s0{Rational(0)}, s1{Rational(1)};
        while (true) {
            if (r1.size() == 1) {
                QP res(s1.size());
                for (std::size_t i = 0; i < s1.size(); ++i) res[i] = s1[i] / r1[0];
                std::vector<Rational> coords(field_->degree(), Rational(0));
                for (std::size_t i = 0; i < res.size() && i < coords.size(); ++i) coords[i] = res[i];
                return from_coords(field_, coords);
            }
            QP q = qdiv(r0, r1);
            QP r2 = qsub(r0, qmul(q, r1));
            trim(r2);
            r0 = std::move(r1);
            r1 = std::move(r2);
            QP s2 = qsub(s0, qmul(q, s1));
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
    }

    Cyclo pow(long e) const {
        Cyclo base = *this;
        if (e < 0) {
            base = base.inverse();
            e = -e;
        }
        Cyclo acc = one(field_);
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    /// Image under the embedding zeta_m -> zeta_n^(n/m) into the target field.
    Cyclo embed(const FieldPtr& target) const {
        const unsigned m = field_->conductor();
        const unsigned n = target->conductor();
        if (n % m != 0) {
            throw BadArgumentError("no embedding: " + std::to_string(m) +
                                   " does not divide " + std::to_string(n));
        }
        if (n == m) return *this;
        const unsigned k = n / m;
        Cyclo out(target);
        for (unsigned j = 0; j < num_.size(); ++j) {
            if (num_[j] == 0) continue;
            const auto& row = target->power_row(static_cast<std::size_t>(j) * k);
            for (unsigned t = 0; t < out.num_.size(); ++t) {
                if (row[t] != 0) out.num_[t] += num_[j] * row[t];
            }
        }
        out.den_ = den_;
        out.normalize();
        return out;
    }

    friend bool operator==(const Cyclo& a, const Cyclo& b) {
        require_same_field(a.field_, b.field_);
        return a.den_ == b.den_ && a.num_ == b.num_;
    }

    /// Canonical serialization; equal elements have equal keys.
    std::string key() const {
        std::string s = den_.get_str();
        for (const auto& x : num_) {
            s += ',';
            s += x.get_str();
        }
        return s;
    }

    std::size_t hash() const {
        std::size_t h = hash_int(den_);
        for (const auto& x : num_) hash_mix(h, hash_int(x));
        return h;
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (unsigned i = 0; i < num_.size(); ++i) {
            if (num_[i] == 0) continue;
            Rational c = coord(i);
            if (!first) os << (sgn(c) < 0 ? " - " : " + ");
            else if (sgn(c) < 0) os << "-";
            first = false;
            Rational a = abs(c);
            if (i == 0 || a != 1) os << a.get_str();
            if (i > 0) {
                if (a != 1) os << "*";
                os << "z" << conductor();
                if (i > 1) os << "^" << i;
            }
        }
        if (first) os << "0";
        return os.str();
    }

private:
    explicit Cyclo(FieldPtr f) : field_(std::move(f)), num_(field_->degree(), Int(0)), den_(1) {}

    bool tail_zero() const {
        for (std::size_t i = 1; i < num_.size(); ++i)
            if (num_[i] != 0) return false;
        return true;
    }

    void reduce_from(std::vector<Int> conv) {
        const unsigned phi = field_->degree();
        num_.assign(conv.begin(), conv.begin() + phi);
        for (std::size_t k = phi; k < conv.size(); ++k) {
            if (conv[k] == 0) continue;
            const auto& row = field_->power_row(k);
            for (unsigned j = 0; j < phi; ++j) {
                if (row[j] != 0) num_[j] += conv[k] * row[j];
            }
        }
    }

    void normalize() {
        if (sgn(den_) < 0) {
            den_ = -den_;
            for (auto& x : num_) x = -x;
        }
        Int g = den_;
        for (const auto& x : num_) {
            if (g == 1) break;
            g = gcd(g, x);
        }
        if (g > 1) {
            den_ /= g;
            for (auto& x : num_) x /= g;
        }
        if (is_zero()) den_ = 1;
    }

    // dense rational-poly helpers for the extended Euclid above
    using QP = std::vector<Rational>;
    static void trim(QP& p) {
        while (p.size() > 1 && p.back() == 0) p.pop_back();
    }
    static QP qmul(const QP& a, const QP& b) {
        QP out(a.size() + b.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (b[j] != 0) out[i + j] += a[i] * b[j];
            }
        }
        return out;
    }
    static QP qsub(const QP& a, const QP& b) {
        QP out(std::max(a.size(), b.size()), Rational(0));
        for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
        for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
        return out;
    }
    static QP qdiv(QP a, const QP& b) {
        trim(a);
        if (a.size() < b.size()) return QP{Rational(0)};
        const std::size_t db = b.size() - 1;
        QP q(a.size() - db, Rational(0));
        const Rational& lead = b.back();
        for (std::size_t i = a.size(); i-- > db;) {
            Rational c = a[i] / lead;
            if (c != 0) {
                q[i - db] = c;
                for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
            }
        }
        return q;
    }

    FieldPtr field_;
    std::vector<Int> num_;
    Int den_;
};

inline Cyclo inv(const Cyclo& a) { return a.inverse(); }

/// JSON encoding: {"conductor": n, "coords": [["num","den"], ...]}.
inline nlohmann::json to_json(const Cyclo& a) {
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& q : a.coords()) {
        coords.push_back({q.get_num().get_str(), q.get_den().get_str()});
    }
    return {{"conductor", a.conductor()}, {"coords", coords}};
}

inline Cyclo cyclo_from_json(const nlohmann::json& j, unsigned cap = kDefaultConductorCap) {
    if (!j.contains("conductor") || !j.contains("coords")) {
        throw BadArgumentError("element JSON needs 'conductor' and 'coords'");
    }
    FieldPtr f = CyclotomicField::get(j.at("conductor").get<unsigned>(), cap);
    const auto& arr = j.at("coords");
    if (!arr.is_array() || arr.size() != f->degree()) {
        throw BadArgumentError("element JSON needs exactly phi(n) coordinates");
    }
    std::vector<Rational> coords;
    coords.reserve(arr.size());
    for (const auto& pair : arr) {
        coords.push_back(rational_from_strings(pair.at(0).get<std::string>(),
                                               pair.at(1).get<std::string>()));
    }
    return Cyclo::from_coords(std::move(f), coords);
}

} // namespace curveaut
