#pragma once

#include <optional>
#include <vector>

#include "cosrec/bigfloat.hpp"
#include "cosrec/lattice.hpp"

namespace cosrec {

// Vector of dyadic rationals with a shared scale: value_i = num[i] * 2^-N.
struct DyadicVector {
    long N = 0;
    std::vector<mpz_class> num;

    int size() const { return static_cast<int>(num.size()); }
    mpq_class value(int i) const;
    double norm() const;  // l2 norm of the real values
};

struct IntegerRelation {
    std::vector<mpz_class> t;
    double norm = 0.0;
};

// Numerator of (x)_N = sgn(x) * floor(2^N |x|) * 2^-N, truncation toward zero.
mpz_class truncate_dyadic(const BigFloat& x, long N);
mpz_class truncate_dyadic(double x, long N);
mpq_class dyadic_value(const mpz_class& numerator, long N);

// n x n basis whose columns span { c : M*(sum_i num_i c_i) paired with c_2..c_n }:
// row 1 is M*2^N*b_i = M*num_i, rows 2..n are (0 | I). Requires b_1 = 1.
IntMatrix build_relation_lattice(const DyadicVector& b, const mpz_class& M);

// LLL on the embedding lattice. Returns a relation t with <b,t> = 0 exactly,
// or nothing when the first reduced vector keeps a nonzero scaled coordinate
// (M too small, or no short relation exists).
std::optional<IntegerRelation> detect_integer_relation(const DyadicVector& b, const mpz_class& M,
                                                       const mpq_class& delta = mpq_class(3, 4));

// Exact inner product <b, t> as the numerator over 2^N; zero iff t is a relation.
mpz_class relation_residual_num(const DyadicVector& b, const std::vector<mpz_class>& t);

}  // namespace cosrec
