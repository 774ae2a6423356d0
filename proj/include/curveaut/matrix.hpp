#pragma once

#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curveaut/cyclotomic.hpp"
#include "curveaut/error.hpp"

namespace curveaut {

/// Exact 2x2 or 3x3 matrix over one cyclotomic field, row-major.
class Mat {
public:
    Mat() = default;

    Mat(unsigned dim, FieldPtr field, std::vector<Cyclo> entries)
        : dim_(dim), field_(std::move(field)), e_(std::move(entries)) {
        if (dim_ != 2 && dim_ != 3) throw BadArgumentError("matrix dim must be 2 or 3");
        if (e_.size() != std::size_t(dim_) * dim_) throw BadArgumentError("entry count mismatch");
        for (const auto& x : e_) require_same_field(x.field(), field_);
    }

    static Mat identity(FieldPtr f, unsigned dim) {
        std::vector<Cyclo> e;
        e.reserve(std::size_t(dim) * dim);
        for (unsigned i = 0; i < dim; ++i)
            for (unsigned j = 0; j < dim; ++j) e.push_back(i == j ? Cyclo::one(f) : Cyclo::zero(f));
        return Mat(dim, f, std::move(e));
    }

    static Mat diagonal(FieldPtr f, std::vector<Cyclo> d) {
        const unsigned dim = static_cast<unsigned>(d.size());
        std::vector<Cyclo> e;
        e.reserve(std::size_t(dim) * dim);
        for (unsigned i = 0; i < dim; ++i)
            for (unsigned j = 0; j < dim; ++j) e.push_back(i == j ? d[i] : Cyclo::zero(f));
        return Mat(dim, f, std::move(e));
    }

    unsigned dim() const { return dim_; }
    const FieldPtr& field() const { return field_; }
    const Cyclo& at(unsigned i, unsigned j) const { return e_[std::size_t(i) * dim_ + j]; }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.dim_ != b.dim_) throw BadArgumentError("matrix dim mismatch");
        require_same_field(a.field_, b.field_);
        const unsigned n = a.dim_;
        std::vector<Cyclo> out;
        out.reserve(std::size_t(n) * n);
        for (unsigned i = 0; i < n; ++i) {
            for (unsigned j = 0; j < n; ++j) {
                Cyclo acc = a.at(i, 0) * b.at(0, j);
                for (unsigned k = 1; k < n; ++k) acc = acc + a.at(i, k) * b.at(k, j);
                out.push_back(std::move(acc));
            }
        }
        return Mat(n, a.field_, std::move(out));
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        if (a.dim_ != b.dim_) return false;
        require_same_field(a.field_, b.field_);
        return a.e_ == b.e_;
    }

    Cyclo det() const {
        if (dim_ == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
        Cyclo t = at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1));
        t = t - at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0));
        t = t + at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
        return t;
    }

    Mat inverse() const {
        Cyclo d = det();
        if (d.is_zero()) throw SingularError("matrix is singular");
        Cyclo di = d.inverse();
        std::vector<Cyclo> adj(std::size_t(dim_) * dim_, Cyclo::zero(field_));
        if (dim_ == 2) {
            adj[0] = at(1, 1);
            adj[1] = -at(0, 1);
            adj[2] = -at(1, 0);
            adj[3] = at(0, 0);
        } else {
            auto cof = [&](unsigned r0, unsigned r1, unsigned c0, unsigned c1) {
                return at(r0, c0) * at(r1, c1) - at(r0, c1) * at(r1, c0);
            };
            // adjugate: transpose of cofactors
            adj[0] = cof(1, 2, 1, 2);
            adj[1] = -cof(0, 2, 1, 2);
            adj[2] = cof(0, 1, 1, 2);
            adj[3] = -cof(1, 2, 0, 2);
            adj[4] = cof(0, 2, 0, 2);
            adj[5] = -cof(0, 1, 0, 2);
            adj[6] = cof(1, 2, 0, 1);
            adj[7] = -cof(0, 2, 0, 1);
            adj[8] = cof(0, 1, 0, 1);
        }
        for (auto& x : adj) x = x * di;
        return Mat(dim_, field_, std::move(adj));
    }

    Mat scalar_mul(const Cyclo& c) const {
        std::vector<Cyclo> out;
        out.reserve(e_.size());
        for (const auto& x : e_) out.push_back(c * x);
        return Mat(dim_, field_, std::move(out));
    }

    Mat pow(long e) const {
        Mat base = *this;
        if (e < 0) {
            base = base.inverse();
            e = -e;
        }
        Mat acc = identity(field_, dim_);
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    bool is_identity() const {
        for (unsigned i = 0; i < dim_; ++i)
            for (unsigned j = 0; j < dim_; ++j) {
                if (i == j ? !at(i, j).is_one() : !at(i, j).is_zero()) return false;
            }
        return true;
    }

    bool is_scalar() const {
        for (unsigned i = 0; i < dim_; ++i)
            for (unsigned j = 0; j < dim_; ++j) {
                if (i != j && !at(i, j).is_zero()) return false;
                if (i == j && !(at(i, j) == at(0, 0))) return false;
            }
        return !at(0, 0).is_zero();
    }

    /// Block-diagonal with a 2x2 block and a nonzero lower-right entry.
    bool is_pbd_shape() const {
        if (dim_ != 3) return false;
        return at(0, 2).is_zero() && at(1, 2).is_zero() && at(2, 0).is_zero() &&
               at(2, 1).is_zero() && !at(2, 2).is_zero();
    }

    Mat embed_field(const FieldPtr& target) const {
        if (target->conductor() == field_->conductor()) return *this;
        std::vector<Cyclo> out;
        out.reserve(e_.size());
        for (const auto& x : e_) out.push_back(x.embed(target));
        return Mat(dim_, target, std::move(out));
    }

    std::string key() const {
        std::string s = "M";
        s += std::to_string(dim_);
        s += 'c';
        s += std::to_string(field_->conductor());
        for (const auto& x : e_) {
            s += '|';
            s += x.key();
        }
        return s;
    }

private:
    unsigned dim_ = 0;
    FieldPtr field_;
    std::vector<Cyclo> e_;
};

/// Scale so the first nonzero row-major entry becomes 1.
inline Mat projective_canonical(const Mat& a) {
    for (unsigned i = 0; i < a.dim(); ++i) {
        for (unsigned j = 0; j < a.dim(); ++j) {
            if (!a.at(i, j).is_zero()) {
                if (a.at(i, j).is_one()) return a;
                return a.scalar_mul(a.at(i, j).inverse());
            }
        }
    }
    throw SingularError("cannot canonicalize the zero matrix");
}

/// PGL element: a matrix pinned to its canonical scale.
class ProjectiveMatrix {
public:
    explicit ProjectiveMatrix(const Mat& any_rep) : rep_(projective_canonical(any_rep)) {}

    const Mat& rep() const { return rep_; }

    friend bool operator==(const ProjectiveMatrix& a, const ProjectiveMatrix& b) {
        return a.rep_ == b.rep_;
    }

    std::string key() const { return rep_.key(); }

private:
    Mat rep_;
};

/// alpha' / beta' / gamma' style embedding: A in the upper-left, 1 at (3,3).
inline Mat block_embed(const Mat& a) {
    if (a.dim() != 2) throw BadArgumentError("block_embed expects a 2x2 matrix");
    const FieldPtr& f = a.field();
    std::vector<Cyclo> e{a.at(0, 0),      a.at(0, 1),      Cyclo::zero(f),
                         a.at(1, 0),      a.at(1, 1),      Cyclo::zero(f),
                         Cyclo::zero(f),  Cyclo::zero(f),  Cyclo::one(f)};
    return Mat(3, f, std::move(e));
}

/// Upper-left 2x2 block of a PBD(2,1) class, canonicalized. The restriction
/// is a group homomorphism on PBD(2,1).
inline ProjectiveMatrix pbd_restrict(const ProjectiveMatrix& a) {
    const Mat& m = a.rep();
    if (m.dim() != 3 || !m.is_pbd_shape()) {
        throw ShapeError("matrix is not of PBD(2,1) shape");
    }
    std::vector<Cyclo> e{m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1)};
    return ProjectiveMatrix(Mat(2, m.field(), std::move(e)));
}

enum class Mode { Linear, Projective };

inline std::string mode_name(Mode m) { return m == Mode::Linear ? "linear" : "projective"; }

inline Mode mode_from_name(const std::string& s) {
    if (s == "linear") return Mode::Linear;
    if (s == "projective") return Mode::Projective;
    throw BadArgumentError("mode must be 'linear' or 'projective'");
}

// ---- word identities ----

enum class WordStatus { Exact, ProjectiveWithScalar, Fail };

struct WordCheck {
    WordStatus status;
    std::optional<Cyclo> scalar;   // product = scalar * target when status != Exact-mismatch
    std::optional<Mat> residual;   // product * target^-1 on failure
    Mat product;
};

/// Evaluate a word in given matrices (with integer exponents) and compare it
/// with the target: exact equality, equality up to a reported scalar, or
/// failure with the residual. All factors are embedded into the least common
/// field first.
inline WordCheck check_word_identity(std::span<const std::pair<Mat, long>> word, const Mat& target,
                                     Mode mode = Mode::Linear,
                                     unsigned cap = kDefaultConductorCap) {
    (void)mode; // classification below already reports both readings
    unsigned n = target.field()->conductor();
    for (const auto& [m, e] : word) n = std::lcm(n, m.field()->conductor());
    FieldPtr f = CyclotomicField::get(n, cap);
    Mat t = target.embed_field(f);
    Mat prod = Mat::identity(f, t.dim());
    for (const auto& [m, e] : word) prod = prod * m.embed_field(f).pow(e);
    if (prod == t) return {WordStatus::Exact, std::nullopt, std::nullopt, prod};
    // proportional? compare entrywise against the scalar from the first
    // nonzero target entry
    std::optional<Cyclo> ratio;
    bool proportional = true;
    for (unsigned i = 0; i < t.dim() && proportional; ++i) {
        for (unsigned j = 0; j < t.dim() && proportional; ++j) {
            const Cyclo &p = prod.at(i, j), &w = t.at(i, j);
            if (w.is_zero() != p.is_zero()) {
                proportional = false;
            } else if (!w.is_zero()) {
                Cyclo c = p * w.inverse();
                if (!ratio) ratio = c;
                else if (!(*ratio == c)) proportional = false;
            }
        }
    }
    if (proportional && ratio) {
        return {WordStatus::ProjectiveWithScalar, ratio, std::nullopt, prod};
    }
    Mat residual = prod * t.inverse();
    return {WordStatus::Fail, std::nullopt, residual, prod};
}

// ---- JSON ----

/// {"dim": k, "conductor": n, "rows": [[elem, ...], ...]} with elem encoded
/// as a cyclotomic element object.
inline nlohmann::json to_json(const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (unsigned i = 0; i < m.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (unsigned j = 0; j < m.dim(); ++j) row.push_back(to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return {{"dim", m.dim()}, {"conductor", m.field()->conductor()}, {"rows", rows}};
}

inline Mat mat_from_json(const nlohmann::json& j, unsigned cap = kDefaultConductorCap) {
    const unsigned dim = j.at("dim").get<unsigned>();
    const unsigned n = j.at("conductor").get<unsigned>();
    FieldPtr f = CyclotomicField::get(n, cap);
    const auto& rows = j.at("rows");
    if (!rows.is_array() || rows.size() != dim) throw BadArgumentError("matrix JSON: bad row count");
    std::vector<Cyclo> e;
    e.reserve(std::size_t(dim) * dim);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != dim) throw BadArgumentError("matrix JSON: bad row length");
        for (const auto& elem : row) {
            Cyclo x = cyclo_from_json(elem, cap);
            if (x.conductor() != n) x = x.embed(f);
            e.push_back(std::move(x));
        }
    }
    return Mat(dim, std::move(f), std::move(e));
}

} // namespace curveaut
