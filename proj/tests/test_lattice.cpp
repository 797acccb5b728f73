#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cosrec/lattice.hpp"
#include "cosrec/rng.hpp"

using namespace cosrec;

namespace {

IntMatrix from_columns(const std::vector<std::vector<long>>& cols) {
    IntMatrix m(static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
    for (int c = 0; c < m.cols; ++c)
        for (int r = 0; r < m.rows; ++r) m.at(r, c) = cols[c][r];
    return m;
}

IntMatrix random_basis(Rng& rng, int n, long lim) {
    for (;;) {
        IntMatrix m(n, n);
        for (auto& e : m.a) e = static_cast<long>(rng.next_u64() % (2 * lim + 1)) - lim;
        if (det_exact(m) != 0) return m;
    }
}

// solves A x = b over the rationals by Gaussian elimination
RationalVector solve_rational(const IntMatrix& A, const std::vector<mpz_class>& b) {
    const int n = A.rows;
    std::vector<RationalVector> m(n, RationalVector(n + 1));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) m[r][c] = mpq_class(A.at(r, c));
        m[r][n] = mpq_class(b[r]);
    }
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && m[p][k] == 0) ++p;
        REQUIRE(p < n);
        std::swap(m[k], m[p]);
        for (int r = 0; r < n; ++r) {
            if (r == k) continue;
            mpq_class f = m[r][k] / m[k][k];
            for (int c = k; c <= n; ++c) m[r][c] -= f * m[k][c];
        }
    }
    RationalVector x(n);
    for (int k = 0; k < n; ++k) x[k] = m[k][n] / m[k][k];
    return x;
}

bool same_lattice(const IntMatrix& in, const IntMatrix& out) {
    mpz_class di = det_exact(in), doo = det_exact(out);
    if (di != doo && di != -doo) return false;
    for (int c = 0; c < out.cols; ++c) {
        auto x = solve_rational(in, out.col(c));
        for (const auto& xi : x)
            if (xi.get_den() != 1) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("gram schmidt on pinned bases") {
    auto id = IntMatrix::identity(3);
    auto gs = gram_schmidt_exact(id);
    for (int i = 0; i < 3; ++i) {
        CHECK(gs.norm_sq[i] == 1);
        for (int j = 0; j < i; ++j) CHECK(gs.mu[i][j] == 0);
    }

    auto m = from_columns({{1, 1}, {0, 1}});
    gs = gram_schmidt_exact(m);
    CHECK(gs.norm_sq[0] == 2);
    CHECK(gs.mu[1][0] == mpq_class(1, 2));
    CHECK(gs.norm_sq[1] == mpq_class(1, 2));
}

TEST_CASE("gram schmidt determinant identity and reconstruction") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        auto m = random_basis(rng, 4, 9);
        auto gs = gram_schmidt_exact(m);

        mpq_class prod = 1;
        for (const auto& n2 : gs.norm_sq) prod *= n2;
        IntMatrix gram(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                mpz_class s = 0;
                for (int r = 0; r < 4; ++r) s += m.at(r, i) * m.at(r, j);
                gram.at(i, j) = s;
            }
        CHECK(prod == mpq_class(det_exact(gram)));

        // rebuild the star vectors from mu and check they are orthogonal with
        // the reported norms, and that b_i = b*_i + sum_j mu_ij b*_j
        std::vector<RationalVector> star(4, RationalVector(4));
        for (int i = 0; i < 4; ++i) {
            for (int r = 0; r < 4; ++r) star[i][r] = mpq_class(m.at(r, i));
            for (int j = 0; j < i; ++j)
                for (int r = 0; r < 4; ++r) star[i][r] -= gs.mu[i][j] * star[j][r];
            mpq_class n2 = 0;
            for (int r = 0; r < 4; ++r) n2 += star[i][r] * star[i][r];
            CHECK(n2 == gs.norm_sq[i]);
            for (int j = 0; j < i; ++j) {
                mpq_class ip = 0;
                for (int r = 0; r < 4; ++r) ip += star[i][r] * star[j][r];
                CHECK(ip == 0);
            }
        }
    }
}

TEST_CASE("gram schmidt rejects dependent columns") {
    auto m = from_columns({{1, 2}, {2, 4}});
    CHECK_THROWS_AS(gram_schmidt_exact(m), SingularBasisError);
}

TEST_CASE("lll on pinned bases") {
    auto id = IntMatrix::identity(4);
    CHECK(lll_reduce(id) == id);
    CHECK(is_lll_reduced(id));

    auto m = from_columns({{1, 0}, {4, 1}});
    auto red = lll_reduce(m);
    CHECK(is_lll_reduced(red));
    CHECK(same_lattice(m, red));
    auto sv = shortest_vector_bruteforce(red, default_svp_coeff_bound(red));
    CHECK(norm_sq(sv) == 1);  // lambda_1 = 1 in Z^2
    CHECK(norm_sq(red.col(0)) <= 2 * norm_sq(sv));

    // size-reduced but Lovasz-violating
    auto m2 = from_columns({{2, 0}, {0, 1}});
    CHECK(!is_lll_reduced(m2));
    CHECK(is_lll_reduced(lll_reduce(m2)));

    auto m3 = from_columns({{1, 0}, {100, 1}});
    CHECK(!is_lll_reduced(m3));
}

TEST_CASE("lll input validation") {
    auto id = IntMatrix::identity(2);
    CHECK_THROWS_AS(lll_reduce(id, mpq_class(1, 4)), std::invalid_argument);
    CHECK_THROWS_AS(lll_reduce(id, mpq_class(1)), std::invalid_argument);
    auto dep = from_columns({{1, 2}, {2, 4}});
    CHECK_THROWS_AS(lll_reduce(dep), SingularBasisError);
    auto zero = from_columns({{0, 0}, {1, 1}});
    CHECK_THROWS_AS(lll_reduce(zero), SingularBasisError);
}

TEST_CASE("lll randomized approximation bound and lattice preservation") {
    Rng rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng.next_u64() % 4);  // 2..5
        auto m = random_basis(rng, n, 50);
        auto red = lll_reduce(m);
        CHECK(is_lll_reduced(red));
        CHECK(same_lattice(m, red));
        auto sv = shortest_vector_bruteforce(red, default_svp_coeff_bound(red));
        // ||b_1||^2 <= 2^(n-1) * lambda_1^2
        CHECK(norm_sq(red.col(0)) <= (mpz_class(1) << (n - 1)) * norm_sq(sv));
    }
}

TEST_CASE("lll with alternative delta") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = random_basis(rng, 4, 30);
        mpq_class delta(99, 100);
        auto red = lll_reduce(m, delta);
        CHECK(is_lll_reduced(red, delta));
        CHECK(same_lattice(m, red));
    }
}

TEST_CASE("lll handles wide entries") {
    mpz_class big("123456789123456789123456789");
    IntMatrix m(2, 2);
    m.at(0, 0) = 1;
    m.at(1, 0) = 0;
    m.at(0, 1) = big;
    m.at(1, 1) = 1;
    auto red = lll_reduce(m);
    CHECK(is_lll_reduced(red));
    CHECK(same_lattice(m, red));
}

TEST_CASE("shortest vector bruteforce") {
    auto id = IntMatrix::identity(3);
    auto sv = shortest_vector_bruteforce(id, 2);
    CHECK(norm_sq(sv) == 1);

    auto m = from_columns({{2, 0}, {1, 2}});
    CHECK(norm_sq(shortest_vector_bruteforce(m, default_svp_coeff_bound(m))) == 4);

    // homogeneity under integer scaling
    auto m3 = from_columns({{6, 0}, {3, 6}});
    CHECK(norm_sq(shortest_vector_bruteforce(m3, default_svp_coeff_bound(m3))) == 36);

    IntMatrix big(9, 9);
    CHECK_THROWS_AS(shortest_vector_bruteforce(big, 1), std::invalid_argument);
    CHECK_THROWS_AS(shortest_vector_bruteforce(id, 0), std::invalid_argument);

    // oracle value is basis independent
    Rng rng(31);
    for (int trial = 0; trial < 15; ++trial) {
        auto b = random_basis(rng, 3, 8);
        auto red = lll_reduce(b);
        auto s1 = shortest_vector_bruteforce(b, default_svp_coeff_bound(b));
        auto s2 = shortest_vector_bruteforce(red, default_svp_coeff_bound(red));
        CHECK(norm_sq(s1) == norm_sq(s2));
    }
}

TEST_CASE("gcd of integer vectors") {
    CHECK(euclid_gcd_vec({mpz_class(0), mpz_class(0), mpz_class(0)}) == 0);
    CHECK(euclid_gcd_vec({mpz_class(6), mpz_class(-4), mpz_class(10)}) == 2);
    CHECK(euclid_gcd_vec({mpz_class(7), mpz_class(7), mpz_class(7), mpz_class(7)}) == 7);
    CHECK(euclid_gcd_vec({}) == 0);
    CHECK(euclid_gcd_vec({mpz_class(-5)}) == 5);
}

TEST_CASE("determinant") {
    CHECK(det_exact(IntMatrix::identity(5)) == 1);
    auto m = from_columns({{2, 0}, {1, 2}});
    CHECK(det_exact(m) == 4);
    auto swapped = from_columns({{1, 2}, {2, 0}});
    CHECK(det_exact(swapped) == -4);
    auto dep = from_columns({{1, 2}, {2, 4}});
    CHECK(det_exact(dep) == 0);
    auto zerotop = from_columns({{0, 1}, {1, 0}});
    CHECK(det_exact(zerotop) == -1);
}

TEST_CASE("basis file round trip") {
    Rng rng(37);
    auto m = random_basis(rng, 3, 20);
    std::stringstream ss;
    write_basis(ss, m);
    auto back = read_basis(ss);
    CHECK(back == m);

    std::stringstream bad("2");
    CHECK_THROWS_AS(read_basis(bad), std::runtime_error);
    std::stringstream bad2("2 2\n1 2\n3");
    CHECK_THROWS_AS(read_basis(bad2), std::runtime_error);
    std::stringstream neg("0 2\n");
    CHECK_THROWS_AS(read_basis(neg), std::runtime_error);
}
