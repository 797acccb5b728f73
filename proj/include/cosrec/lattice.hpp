#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace cosrec {

struct SingularBasisError : std::runtime_error {
    explicit SingularBasisError(const std::string& what) : std::runtime_error(what) {}
};

// Dense integer matrix, row-major storage. Lattice bases keep the basis
// vectors in the COLUMNS.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<mpz_class> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    mpz_class& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const mpz_class& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static IntMatrix identity(int n);
    std::vector<mpz_class> col(int c) const;
    bool operator==(const IntMatrix&) const = default;
};

using RationalVector = std::vector<mpq_class>;

struct GramSchmidtResult {
    std::vector<mpq_class> norm_sq;                // ||b*_i||^2 per column
    std::vector<std::vector<mpq_class>> mu;        // mu[i][j] defined for j < i
};

// Exact rational Gram-Schmidt over the columns. Throws SingularBasisError on
// dependent columns.
GramSchmidtResult gram_schmidt_exact(const IntMatrix& basis);

// LLL reduction of the columns in exact integer arithmetic. delta must lie in
// (1/4, 1). The first output column v satisfies
// ||v|| <= 2^((n-1)/2) * lambda_1 when delta = 3/4.
IntMatrix lll_reduce(const IntMatrix& basis, const mpq_class& delta = mpq_class(3, 4));

// Checks |mu_{i,j}| <= 1/2 and delta*||b*_i||^2 <= ||b*_{i+1} + mu*b*_i||^2
// in exact rational arithmetic.
bool is_lll_reduced(const IntMatrix& basis, const mpq_class& delta = mpq_class(3, 4));

// Minimum-norm nonzero lattice vector over integer coefficient vectors with
// ||coeffs||_inf <= coeff_bound. Guarded to n <= 8 columns.
std::vector<mpz_class> shortest_vector_bruteforce(const IntMatrix& basis,
                                                  const mpz_class& coeff_bound);

// ceil(2^(n/2) * max_i ||b_i|| / min_i ||b*_i||): box large enough that the
// true shortest vector's coefficients fit for the bases handled here.
mpz_class default_svp_coeff_bound(const IntMatrix& basis);

// gcd of absolute values; 0 iff all entries are zero.
mpz_class euclid_gcd_vec(const std::vector<mpz_class>& values);

// Exact determinant of a square integer matrix (fraction-free elimination).
mpz_class det_exact(const IntMatrix& m);

mpz_class norm_sq(const std::vector<mpz_class>& v);

// Text format: "rows cols" header line, then entries row-major.
IntMatrix read_basis(std::istream& is);
void write_basis(std::ostream& os, const IntMatrix& m);

}  // namespace cosrec
