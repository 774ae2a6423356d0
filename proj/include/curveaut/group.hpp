#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curveaut/matrix.hpp"

namespace curveaut {

struct GeneratorSet {
    std::string name;
    Mode preferred_mode = Mode::Projective;
    FieldPtr field;
    std::vector<Mat> matrices;
    std::vector<std::string> labels;
};

struct ClosureOptions {
    std::size_t max_order = 10000;   // error out beyond this many elements
    std::size_t table_limit = 2000;  // materialize the full n x n table up to here
};

/// Finite matrix group as an element list with index-level products.
///
/// Elements are canonical representatives (projective mode) or exact matrices
/// (linear mode), in deterministic BFS discovery order with the identity at
/// index 0. Products between arbitrary indices use the materialized table
/// when present and otherwise a BFS-word recurrence, so only |G| * #gens
/// products are ever computed with matrix arithmetic.
class GroupTable {
public:
    static GroupTable closure(const GeneratorSet& gens, Mode mode, ClosureOptions opts = {}) {
        if (gens.matrices.empty()) throw BadArgumentError("closure needs at least one generator");
        const unsigned dim = gens.matrices.front().dim();
        for (const auto& m : gens.matrices) {
            if (m.dim() != dim) throw BadArgumentError("generators have mixed dimensions");
            require_same_field(m.field(), gens.field);
            if (m.det().is_zero()) throw SingularError("generator is singular");
        }
        GroupTable g;
        g.mode_ = mode;
        g.field_ = gens.field;
        g.dim_ = dim;
        g.provenance_ = gens.name;

        auto canon = [&](const Mat& m) {
            return mode == Mode::Projective ? projective_canonical(m) : m;
        };

        // dedupe generators, keeping first-occurrence order
        std::vector<Mat> gs;
        std::unordered_map<std::string, int> seen;
        for (std::size_t a = 0; a < gens.matrices.size(); ++a) {
            Mat c = canon(gens.matrices[a]);
            const std::string k = c.key();
            if (seen.emplace(k, 1).second) {
                gs.push_back(std::move(c));
                g.gen_labels_.push_back(a < gens.labels.size() ? gens.labels[a]
                                                               : "g" + std::to_string(a));
            }
        }

        Mat ident = canon(Mat::identity(gens.field, dim));
        g.elems_.push_back(ident);
        g.index_.emplace(ident.key(), 0);
        g.parent_.push_back(-1);
        g.via_.push_back(-1);

        const int ngens = static_cast<int>(gs.size());
        g.ngens_ = ngens;
        for (std::size_t i = 0; i < g.elems_.size(); ++i) {
            for (int a = 0; a < ngens; ++a) {
                Mat p = canon(g.elems_[i] * gs[a]);
                std::string k = p.key();
                auto it = g.index_.find(k);
                int idx;
                if (it == g.index_.end()) {
                    idx = static_cast<int>(g.elems_.size());
                    if (static_cast<std::size_t>(idx) + 1 > opts.max_order) {
                        throw OrderBoundError("order bound exceeded (max_order = " +
                                              std::to_string(opts.max_order) + ")");
                    }
                    g.index_.emplace(std::move(k), idx);
                    g.elems_.push_back(std::move(p));
                    g.parent_.push_back(static_cast<int>(i));
                    g.via_.push_back(a);
                } else {
                    idx = it->second;
                }
                g.gtable_.push_back(idx);
            }
        }

        if (g.elems_.size() <= opts.table_limit) g.materialize_table();
        g.build_inverses();
        g.spot_check_associativity();
        return g;
    }

    /// Build from explicit representatives and a full multiplication table
    /// (used for quotients and homomorphic images).
    static GroupTable from_table(Mode mode, FieldPtr field, unsigned dim, std::vector<Mat> reps,
                                 std::vector<std::int32_t> table, std::string provenance) {
        GroupTable g;
        g.mode_ = mode;
        g.field_ = std::move(field);
        g.dim_ = dim;
        g.provenance_ = std::move(provenance);
        g.elems_ = std::move(reps);
        g.table_ = std::move(table);
        const std::size_t n = g.elems_.size();
        if (g.table_.size() != n * n) throw BadArgumentError("table size mismatch");
        for (std::size_t i = 0; i < n; ++i) g.index_.emplace(g.elems_[i].key(), static_cast<int>(i));
        if (g.index_.size() != n) throw BadArgumentError("duplicate representatives");
        // identity and closure sanity
        for (std::size_t i = 0; i < n; ++i) {
            if (g.table_[i * n] != static_cast<std::int32_t>(i) ||
                g.table_[i] != static_cast<std::int32_t>(i)) {
                throw BadArgumentError("index 0 is not an identity for the table");
            }
        }
        for (auto v : g.table_) {
            if (v < 0 || static_cast<std::size_t>(v) >= n) throw BadArgumentError("table entry out of range");
        }
        g.build_inverses();
        g.spot_check_associativity();
        return g;
    }

    Mode mode() const { return mode_; }
    const FieldPtr& field() const { return field_; }
    unsigned dim() const { return dim_; }
    int order() const { return static_cast<int>(elems_.size()); }
    const Mat& element(int i) const { return elems_[static_cast<std::size_t>(i)]; }
    const std::string& provenance() const { return provenance_; }
    int generator_count() const { return ngens_; }
    const std::vector<std::string>& generator_labels() const { return gen_labels_; }
    bool has_full_table() const { return !table_.empty(); }

    /// Index of the i-th element times the a-th (deduped) generator.
    int generator_product(int i, int a) const {
        return gtable_[static_cast<std::size_t>(i) * ngens_ + a];
    }

    int product(int i, int j) const {
        const std::size_t n = elems_.size();
        if (!table_.empty()) return table_[static_cast<std::size_t>(i) * n + j];
        // fold i against the BFS word of j
        via_chain_.clear();
        for (int cur = j; cur != 0; cur = parent_[cur]) via_chain_.push_back(via_[cur]);
        int res = i;
        for (auto it = via_chain_.rbegin(); it != via_chain_.rend(); ++it) {
            res = generator_product(res, *it);
        }
        return res;
    }

    int inverse(int i) const { return inv_[static_cast<std::size_t>(i)]; }

    /// Least k >= 1 with g^k = identity.
    int element_order(int i) const {
        int k = 1;
        int cur = i;
        while (cur != 0) {
            cur = product(cur, i);
            ++k;
        }
        return k;
    }

    /// Index of the given matrix (canonicalized in projective mode), or -1.
    int index_of(const Mat& m) const {
        Mat c = mode_ == Mode::Projective ? projective_canonical(m) : m;
        if (c.field()->conductor() != field_->conductor()) {
            c = c.embed_field(field_);
            if (mode_ == Mode::Projective) c = projective_canonical(c);
        }
        auto it = index_.find(c.key());
        return it == index_.end() ? -1 : it->second;
    }

    bool element_is_scalar(int i) const { return elems_[static_cast<std::size_t>(i)].is_scalar(); }

    nlohmann::json export_json() const {
        nlohmann::json elems = nlohmann::json::array();
        for (const auto& m : elems_) elems.push_back(to_json(m));
        nlohmann::json mul;
        if (!table_.empty()) {
            mul = nlohmann::json::array();
            const std::size_t n = elems_.size();
            for (std::size_t i = 0; i < n; ++i) {
                nlohmann::json row = nlohmann::json::array();
                for (std::size_t j = 0; j < n; ++j) row.push_back(table_[i * n + j]);
                mul.push_back(std::move(row));
            }
        } else {
            mul = nullptr;
        }
        return {{"mode", mode_name(mode_)},
                {"order", order()},
                {"provenance", {{"name", provenance_}, {"generators", gen_labels_}}},
                {"elements", elems},
                {"mul", mul}};
    }

private:
    GroupTable() = default;

    void materialize_table() {
        const std::size_t n = elems_.size();
        table_.assign(n * n, 0);
        // column recurrence in BFS order: col(j) = col(parent(j)) * gen(via(j))
        for (std::size_t i = 0; i < n; ++i) table_[i * n] = static_cast<std::int32_t>(i);
        for (std::size_t j = 1; j < n; ++j) {
            const int p = parent_[j], v = via_[j];
            for (std::size_t i = 0; i < n; ++i) {
                table_[i * n + j] =
                    static_cast<std::int32_t>(generator_product(table_[i * n + p], v));
            }
        }
    }

    void build_inverses() {
        const std::size_t n = elems_.size();
        inv_.assign(n, 0);
        for (std::size_t i = 1; i < n; ++i) {
            int prev = 0, cur = static_cast<int>(i);
            while (cur != 0) {
                prev = cur;
                cur = product(cur, static_cast<int>(i));
            }
            inv_[i] = prev;
        }
    }

    void spot_check_associativity() const {
        const int n = order();
        if (n <= 1) return;
        std::mt19937_64 rng(0x5eedULL ^ static_cast<unsigned long long>(n));
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int t = 0; t < 64; ++t) {
            const int a = pick(rng), b = pick(rng), c = pick(rng);
            if (product(product(a, b), c) != product(a, product(b, c))) {
                throw Error("associativity spot check failed");
            }
        }
    }

    Mode mode_ = Mode::Projective;
    FieldPtr field_;
    unsigned dim_ = 0;
    std::vector<Mat> elems_;
    std::unordered_map<std::string, int> index_;
    int ngens_ = 0;
    std::vector<std::string> gen_labels_;
    std::vector<int> gtable_;
    std::vector<int> parent_, via_;
    std::vector<std::int32_t> table_;
    std::vector<int> inv_;
    std::string provenance_;
    mutable std::vector<int> via_chain_;
};

/// Subset of a GroupTable that forms a subgroup; indices are parent indices.
struct Subgroup {
    const GroupTable* parent = nullptr;
    std::vector<int> members;  // sorted ascending, always contains 0
    std::vector<char> mask;

    int order() const { return static_cast<int>(members.size()); }
    bool contains(int i) const { return mask[static_cast<std::size_t>(i)] != 0; }
};

namespace detail {

inline Subgroup make_subgroup_unchecked(const GroupTable& g, std::vector<int> members) {
    Subgroup s;
    s.parent = &g;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    s.members = std::move(members);
    s.mask.assign(static_cast<std::size_t>(g.order()), 0);
    for (int i : s.members) s.mask[static_cast<std::size_t>(i)] = 1;
    return s;
}

inline void check_subgroup(const Subgroup& s) {
    if (s.members.empty() || s.members.front() != 0) {
        throw BadArgumentError("subgroup must contain the identity");
    }
    for (int a : s.members) {
        if (!s.contains(s.parent->inverse(a))) throw BadArgumentError("subgroup not closed under inverse");
        for (int b : s.members) {
            if (!s.contains(s.parent->product(a, b))) throw BadArgumentError("subgroup not closed under product");
        }
    }
}

inline Subgroup make_subgroup(const GroupTable& g, std::vector<int> members) {
    Subgroup s = make_subgroup_unchecked(g, std::move(members));
    check_subgroup(s);
    return s;
}

} // namespace detail

inline Subgroup whole_group(const GroupTable& g) {
    std::vector<int> all(static_cast<std::size_t>(g.order()));
    for (int i = 0; i < g.order(); ++i) all[static_cast<std::size_t>(i)] = i;
    return detail::make_subgroup_unchecked(g, std::move(all));
}

/// Subgroup generated by the given element indices (closure inside the table).
inline Subgroup subgroup_generated(const GroupTable& g, std::span<const int> gens) {
    std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
    std::vector<int> queue{0};
    in[0] = 1;
    std::vector<int> gen_list;
    for (int x : gens) {
        if (x < 0 || x >= g.order()) throw BadArgumentError("generator index out of range");
        gen_list.push_back(x);
        gen_list.push_back(g.inverse(x));
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (int a : gen_list) {
            const int p = g.product(queue[head], a);
            if (!in[static_cast<std::size_t>(p)]) {
                in[static_cast<std::size_t>(p)] = 1;
                queue.push_back(p);
            }
        }
    }
    return detail::make_subgroup_unchecked(g, std::move(queue));
}

inline Subgroup center(const GroupTable& g) {
    std::vector<int> zs;
    for (int z = 0; z < g.order(); ++z) {
        bool central = true;
        for (int x = 0; x < g.order() && central; ++x) {
            central = g.product(z, x) == g.product(x, z);
        }
        if (central) zs.push_back(z);
    }
    return detail::make_subgroup_unchecked(g, std::move(zs));
}

/// Derived subgroup of S (default: of the whole group), inside the parent table.
inline Subgroup derived_subgroup(const GroupTable& g, const Subgroup* within = nullptr) {
    std::vector<int> comms;
    std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
    auto add = [&](int c) {
        if (!seen[static_cast<std::size_t>(c)]) {
            seen[static_cast<std::size_t>(c)] = 1;
            comms.push_back(c);
        }
    };
    if (within) {
        for (int a : within->members)
            for (int b : within->members)
                add(g.product(g.product(g.inverse(a), g.inverse(b)), g.product(a, b)));
    } else {
        for (int a = 0; a < g.order(); ++a)
            for (int b = 0; b < g.order(); ++b)
                add(g.product(g.product(g.inverse(a), g.inverse(b)), g.product(a, b)));
    }
    return subgroup_generated(g, comms);
}

inline bool is_normal(const GroupTable& g, const Subgroup& s) {
    for (int x = 0; x < g.order(); ++x) {
        const int xi = g.inverse(x);
        for (int a : s.members) {
            if (!s.contains(g.product(g.product(x, a), xi))) return false;
        }
    }
    return true;
}

/// Normality of s inside the subgroup u (both over the same parent).
inline bool is_normal_within(const GroupTable& g, const Subgroup& u, const Subgroup& s) {
    for (int x : u.members) {
        const int xi = g.inverse(x);
        for (int a : s.members) {
            if (!s.contains(g.product(g.product(x, a), xi))) return false;
        }
    }
    return true;
}

inline Subgroup intersect(const Subgroup& a, const Subgroup& b) {
    if (a.parent != b.parent) throw BadArgumentError("subgroups have different parents");
    std::vector<int> out;
    for (int x : a.members)
        if (b.contains(x)) out.push_back(x);
    return detail::make_subgroup_unchecked(*a.parent, std::move(out));
}

inline Subgroup scalar_subgroup(const GroupTable& g) {
    std::vector<int> out;
    for (int i = 0; i < g.order(); ++i)
        if (g.element_is_scalar(i)) out.push_back(i);
    return detail::make_subgroup_unchecked(g, std::move(out));
}

/// Quotient by a normal subgroup: cosets indexed by their least representative,
/// in ascending representative order. The projection is verified to preserve
/// products (all pairs up to order 2000, random sample above).
inline GroupTable quotient(const GroupTable& g, const Subgroup& n) {
    if (n.parent != &g) throw BadArgumentError("subgroup belongs to a different table");
    if (!is_normal(g, n)) throw NotNormalError("quotient by a non-normal subgroup");
    const int order = g.order();
    std::vector<int> coset_rep(static_cast<std::size_t>(order), -1);
    std::vector<int> reps;
    for (int i = 0; i < order; ++i) {
        if (coset_rep[static_cast<std::size_t>(i)] != -1) continue;
        // members are ascending, so the first unseen i is its coset's least element
        reps.push_back(i);
        for (int a : n.members) coset_rep[static_cast<std::size_t>(g.product(i, a))] = i;
    }
    std::vector<int> q_of(static_cast<std::size_t>(order), -1);
    std::unordered_map<int, int> rep_index;
    for (std::size_t k = 0; k < reps.size(); ++k) rep_index.emplace(reps[k], static_cast<int>(k));
    for (int i = 0; i < order; ++i) q_of[static_cast<std::size_t>(i)] = rep_index.at(coset_rep[static_cast<std::size_t>(i)]);

    const std::size_t m = reps.size();
    std::vector<std::int32_t> table(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            table[a * m + b] = static_cast<std::int32_t>(q_of[static_cast<std::size_t>(g.product(reps[a], reps[b]))]);

    // verified homomorphism
    if (order <= 2000) {
        for (int i = 0; i < order; ++i)
            for (int j = 0; j < order; ++j)
                if (q_of[static_cast<std::size_t>(g.product(i, j))] !=
                    table[static_cast<std::size_t>(q_of[static_cast<std::size_t>(i)]) * m +
                          q_of[static_cast<std::size_t>(j)]])
                    throw Error("quotient projection is not a homomorphism");
    } else {
        std::mt19937_64 rng(0xc05e7ULL);
        std::uniform_int_distribution<int> pick(0, order - 1);
        for (int t = 0; t < 20000; ++t) {
            const int i = pick(rng), j = pick(rng);
            if (q_of[static_cast<std::size_t>(g.product(i, j))] !=
                table[static_cast<std::size_t>(q_of[static_cast<std::size_t>(i)]) * m +
                      q_of[static_cast<std::size_t>(j)]])
                throw Error("quotient projection is not a homomorphism");
        }
    }

    std::vector<Mat> rep_mats;
    rep_mats.reserve(m);
    for (int r : reps) rep_mats.push_back(g.element(r));
    return GroupTable::from_table(g.mode(), g.field(), g.dim(), std::move(rep_mats),
                                  std::move(table), g.provenance() + "/N");
}

struct ImageKernel {
    GroupTable image;          // 2x2 projective classes
    Subgroup kernel;           // subgroup of the source
    std::vector<int> class_of; // source index -> image index
};

/// Block-restriction homomorphism on a table of PBD(2,1)-shaped elements:
/// image in PGL(2) plus the kernel. |G| = |image| * |kernel| always holds.
inline ImageKernel image_and_kernel(const GroupTable& g) {
    const int order = g.order();
    std::vector<int> class_of(static_cast<std::size_t>(order), -1);
    std::vector<Mat> image_elems;
    std::unordered_map<std::string, int> image_index;
    std::vector<int> image_rep; // first source element mapping to each class
    for (int i = 0; i < order; ++i) {
        const Mat& m = g.element(i);
        if (!m.is_pbd_shape()) {
            throw ShapeError("element " + std::to_string(i) + " is not of PBD(2,1) shape: " + m.key());
        }
        ProjectiveMatrix blk = pbd_restrict(ProjectiveMatrix(m));
        const std::string k = blk.key();
        auto it = image_index.find(k);
        if (it == image_index.end()) {
            const int idx = static_cast<int>(image_elems.size());
            image_index.emplace(k, idx);
            image_elems.push_back(blk.rep());
            image_rep.push_back(i);
            class_of[static_cast<std::size_t>(i)] = idx;
        } else {
            class_of[static_cast<std::size_t>(i)] = it->second;
        }
    }
    const std::size_t m = image_elems.size();
    std::vector<std::int32_t> table(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            table[a * m + b] = static_cast<std::int32_t>(
                class_of[static_cast<std::size_t>(g.product(image_rep[a], image_rep[b]))]);
    // well-definedness / homomorphism check
    if (order <= 2000) {
        for (int i = 0; i < order; ++i)
            for (int j = 0; j < order; ++j)
                if (class_of[static_cast<std::size_t>(g.product(i, j))] !=
                    table[static_cast<std::size_t>(class_of[static_cast<std::size_t>(i)]) * m +
                          class_of[static_cast<std::size_t>(j)]])
                    throw Error("block restriction is not a homomorphism on this table");
    } else {
        std::mt19937_64 rng(0x1a93eULL);
        std::uniform_int_distribution<int> pick(0, order - 1);
        for (int t = 0; t < 20000; ++t) {
            const int i = pick(rng), j = pick(rng);
            if (class_of[static_cast<std::size_t>(g.product(i, j))] !=
                table[static_cast<std::size_t>(class_of[static_cast<std::size_t>(i)]) * m +
                      class_of[static_cast<std::size_t>(j)]])
                throw Error("block restriction is not a homomorphism on this table");
        }
    }
    GroupTable image = GroupTable::from_table(Mode::Projective, g.field(), 2, std::move(image_elems),
                                              std::move(table), g.provenance() + "|pbd");
    std::vector<int> ker;
    for (int i = 0; i < order; ++i)
        if (class_of[static_cast<std::size_t>(i)] == 0) ker.push_back(i);
    Subgroup kernel = detail::make_subgroup_unchecked(g, std::move(ker));
    return ImageKernel{std::move(image), std::move(kernel), std::move(class_of)};
}

} // namespace curveaut
