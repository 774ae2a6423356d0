#pragma once

#include <cstddef>
#include <string>

#include <gmpxx.h>

#include "curveaut/error.hpp"

namespace curveaut {

// Arbitrary-precision integers and rationals. mpq_class keeps the canonical
// form required here: reduced, positive denominator.
using Int = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Int& num, const Int& den) {
    if (den == 0) throw BadArgumentError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rational_from_strings(const std::string& num, const std::string& den) {
    Int n, d;
    if (n.set_str(num, 10) != 0) throw BadArgumentError("bad integer literal: " + num);
    if (d.set_str(den, 10) != 0) throw BadArgumentError("bad integer literal: " + den);
    return make_rational(n, d);
}

inline std::size_t hash_int(const Int& z) {
    // Stable across runs: residue mod a large prime plus the sign.
    std::size_t h = mpz_fdiv_ui(z.get_mpz_t(), 0x1fffffffffffffffULL);
    return h ^ (static_cast<std::size_t>(sgn(z) < 0) << 62);
}

inline void hash_mix(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

} // namespace curveaut
