#include "cosrec/intrel.hpp"

#include <cmath>
#include <stdexcept>

namespace cosrec {

mpq_class DyadicVector::value(int i) const {
    return dyadic_value(num[i], N);
}

double DyadicVector::norm() const {
    mpz_class s = norm_sq(num);
    mpq_class scaled(s);
    scaled /= mpq_class(mpz_class(1) << (2 * static_cast<unsigned long>(N)));
    return std::sqrt(scaled.get_d());
}

mpz_class truncate_dyadic(const BigFloat& x, long N) {
    if (!x.is_finite()) throw std::domain_error("truncate_dyadic: non-finite input");
    if (N < 1) throw std::invalid_argument("truncate_dyadic: N must be >= 1");
    return x.trunc_scaled(N);
}

mpz_class truncate_dyadic(double x, long N) {
    return truncate_dyadic(BigFloat(x, 64), N);
}

mpq_class dyadic_value(const mpz_class& numerator, long N) {
    mpq_class v(numerator);
    v /= mpq_class(mpz_class(1) << static_cast<unsigned long>(N));
    return v;
}

namespace {

void check_leading_one(const DyadicVector& b) {
    if (b.size() < 1) throw std::invalid_argument("relation lattice: empty input");
    if (b.N < 1) throw std::invalid_argument("relation lattice: N must be >= 1");
    if (b.num[0] != (mpz_class(1) << static_cast<unsigned long>(b.N)))
        throw std::invalid_argument("relation lattice: first entry must be exactly 1");
}

}  // namespace

IntMatrix build_relation_lattice(const DyadicVector& b, const mpz_class& M) {
    check_leading_one(b);
    if (M < 1) throw std::invalid_argument("relation lattice: M must be >= 1");
    const int n = b.size();
    IntMatrix B(n, n);
    for (int c = 0; c < n; ++c) B.at(0, c) = M * b.num[c];
    for (int r = 1; r < n; ++r) B.at(r, r) = 1;
    return B;
}

mpz_class relation_residual_num(const DyadicVector& b, const std::vector<mpz_class>& t) {
    mpz_class s = 0;
    for (int i = 0; i < b.size(); ++i) s += b.num[i] * t[i];
    return s;
}

std::optional<IntegerRelation> detect_integer_relation(const DyadicVector& b, const mpz_class& M,
                                                       const mpq_class& delta) {
    IntMatrix B = build_relation_lattice(b, M);
    IntMatrix red = lll_reduce(B, delta);
    const int n = b.size();

    if (red.at(0, 0) != 0) return std::nullopt;

    // First column is (0, t_2, ..., t_n); t_1 comes from the exact relation
    // 2^N t_1 = -(sum_{i>=2} num_i t_i).
    IntegerRelation rel;
    rel.t.resize(n);
    mpz_class acc = 0;
    for (int i = 1; i < n; ++i) {
        rel.t[i] = red.at(i, 0);
        acc += b.num[i] * rel.t[i];
    }
    mpz_class t1;
    mpz_neg(acc.get_mpz_t(), acc.get_mpz_t());
    mpz_divexact(t1.get_mpz_t(), acc.get_mpz_t(), b.num[0].get_mpz_t());
    rel.t[0] = t1;

    if (relation_residual_num(b, rel.t) != 0)
        throw std::logic_error("relation detection: residual not zero");
    bool all_zero = true;
    for (const auto& ti : rel.t)
        if (ti != 0) all_zero = false;
    if (all_zero) return std::nullopt;

    rel.norm = std::sqrt(mpq_class(norm_sq(rel.t)).get_d());
    return rel;
}

}  // namespace cosrec
