#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cosrec/intrel.hpp"
#include "cosrec/rng.hpp"

using namespace cosrec;

namespace {

mpz_class pow2(long e) { return mpz_class(1) << static_cast<unsigned long>(e); }

double l2(const std::vector<mpz_class>& v) {
    return std::sqrt(mpq_class(norm_sq(v)).get_d());
}

}  // namespace

TEST_CASE("dyadic truncation") {
    CHECK(truncate_dyadic(1.0, 4) == 16);
    CHECK(truncate_dyadic(0.75, 2) == 3);
    CHECK(truncate_dyadic(-0.3, 4) == -4);
    CHECK(dyadic_value(truncate_dyadic(-0.3, 4), 4) == mpq_class(-1, 4));
    CHECK(dyadic_value(mpz_class(16), 4) == 1);

    CHECK_THROWS_AS(truncate_dyadic(std::numeric_limits<double>::infinity(), 8),
                    std::domain_error);
    CHECK_THROWS_AS(truncate_dyadic(0.5, 0), std::invalid_argument);

    Rng rng(19);
    for (int i = 0; i < 5000; ++i) {
        double x = rng.uniform(-20.0, 20.0);
        long N = 1 + static_cast<long>(rng.next_u64() % 60);
        mpq_class v = dyadic_value(truncate_dyadic(x, N), N);
        mpq_class err = mpq_class(x) - v;
        CHECK(abs(err) <= mpq_class(1, 1) / mpq_class(pow2(N)));
        CHECK(abs(v) <= abs(mpq_class(x)));  // toward zero
        CHECK(v * pow2(N) == mpq_class(truncate_dyadic(x, N)));
    }

    // high precision input
    BigFloat x(1.0, 256);
    x = x / BigFloat(3.0, 256);
    mpz_class n128 = truncate_dyadic(x, 128);
    mpq_class v = dyadic_value(n128, 128);
    CHECK(abs(mpq_class(1, 3) - v) <= mpq_class(1) / mpq_class(pow2(128)));
}

TEST_CASE("relation lattice construction") {
    DyadicVector b1{1, {pow2(1)}};
    auto B1 = build_relation_lattice(b1, 2);
    CHECK(B1.rows == 1);
    CHECK(B1.at(0, 0) == 4);

    DyadicVector b2{1, {pow2(1), mpz_class(1)}};  // (1, 1/2) at N=1
    auto B2 = build_relation_lattice(b2, 1);
    CHECK(B2.at(0, 0) == 2);
    CHECK(B2.at(0, 1) == 1);
    CHECK(B2.at(1, 0) == 0);
    CHECK(B2.at(1, 1) == 1);

    Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng.next_u64() % 6);
        long N = 4 + static_cast<long>(rng.next_u64() % 24);
        DyadicVector b;
        b.N = N;
        b.num.resize(n);
        b.num[0] = pow2(N);
        for (int i = 1; i < n; ++i)
            b.num[i] = mpz_class(static_cast<long>(rng.next_u64() % 1000)) - 500;
        mpz_class M(1 + static_cast<long>(rng.next_u64() % 500));
        CHECK(det_exact(build_relation_lattice(b, M)) == M * pow2(N));
    }

    DyadicVector bad{4, {mpz_class(3)}};
    CHECK_THROWS_AS(build_relation_lattice(bad, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_relation_lattice(b1, 0), std::invalid_argument);
}

TEST_CASE("detects a pinned relation") {
    const long N = 8;
    DyadicVector b{N, {pow2(N), pow2(N - 1), mpz_class(1)}};  // (1, 1/2, 2^-N)
    auto rel = detect_integer_relation(b, 16);
    REQUIRE(rel.has_value());
    CHECK(relation_residual_num(b, rel->t) == 0);
    double witness = std::sqrt(5.0);  // (1,-2,0)
    CHECK(rel->norm <= 4.0 * witness * b.norm() + 1e-9);
    CHECK(rel->norm == doctest::Approx(l2(rel->t)));
}

TEST_CASE("planted relations are recovered with the norm guarantee") {
    Rng rng(47);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 3 + static_cast<int>(rng.next_u64() % 6);  // 3..8
        const long N = 32;
        DyadicVector b;
        b.N = N;
        b.num.resize(n);
        b.num[0] = pow2(N);
        std::vector<mpz_class> m(n);
        for (int i = 0; i < n - 1; ++i)
            m[i] = mpz_class(static_cast<long>(rng.next_u64() % 11)) - 5;
        m[n - 1] = 1;
        for (int i = 1; i < n - 1; ++i) {
            // values in (-1, 1)
            b.num[i] = mpz_class(static_cast<long>(rng.next_u64() % 2000001)) - 1000000;
            b.num[i] = b.num[i] * pow2(N - 21);
        }
        mpz_class acc = 0;
        for (int i = 0; i + 1 < n; ++i) acc += m[i] * b.num[i];
        b.num[n - 1] = -acc;

        auto rel = detect_integer_relation(b, pow2(20));
        REQUIRE(rel.has_value());
        CHECK(relation_residual_num(b, rel->t) == 0);
        double bound = std::pow(2.0, (n + 1) / 2.0) * l2(m) * b.norm();
        CHECK(rel->norm <= bound + 1e-9);
    }
}

TEST_CASE("no short relation yields not-found") {
    const long N = 64;
    BigFloat two(2.0, 256);
    DyadicVector b{N, {pow2(N), truncate_dyadic(sqrt(two), N)}};
    auto rel = detect_integer_relation(b, pow2(10));
    CHECK(!rel.has_value());

    // no coefficients up to 1000 cancel: t1*2^N = -t2*num2 forces
    // 2^(N-v2(num2)) | t2, far beyond the search box
    CHECK(mpz_scan1(b.num[1].get_mpz_t(), 0) < 10);
    for (long t2 = 1; t2 <= 1000; ++t2) {
        mpz_class prod = t2 * b.num[1];
        CHECK(prod % pow2(N) != 0);
    }
}

TEST_CASE("truncation slack converts approximate relations to exact ones") {
    Rng rng(53);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 3 + static_cast<int>(rng.next_u64() % 5);
        const long N = 40;
        std::vector<double> s(n);
        std::vector<mpz_class> m(n);
        s[0] = 1.0;
        for (int i = 0; i < n - 1; ++i) {
            do {
                m[i] = mpz_class(static_cast<long>(rng.next_u64() % 11)) - 5;
            } while (i == 0 && m[i] == 0);
            if (i > 0) s[i] = rng.uniform(-1.0, 1.0);
        }
        m[n - 1] = 1;
        double acc = 0;
        for (int i = 0; i + 1 < n; ++i) acc += m[i].get_d() * s[i];
        s[n - 1] = -acc;  // real relation up to double rounding

        DyadicVector b;
        b.N = N;
        b.num.resize(n + 1);
        for (int i = 0; i < n; ++i) b.num[i] = truncate_dyadic(s[i], N);
        b.num[n] = 1;  // slack coordinate 2^-N

        mpz_class slack = 0;
        for (int i = 0; i < n; ++i) slack -= m[i] * b.num[i];
        std::vector<mpz_class> ext = m;
        ext.push_back(slack);
        CHECK(relation_residual_num(b, ext) == 0);
        CHECK(mpz_class(abs(slack)).get_d() <= 3.0 * std::sqrt(double(n)) * l2(m));

        auto rel = detect_integer_relation(b, pow2(30));
        REQUIRE(rel.has_value());
        CHECK(relation_residual_num(b, rel->t) == 0);
        double bound = std::pow(2.0, (n + 2) / 2.0) * l2(ext) * b.norm();
        CHECK(rel->norm <= bound + 1e-9);
    }
}
