#include "cosrec/lattice.hpp"

#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace cosrec {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::vector<mpz_class> IntMatrix::col(int c) const {
    std::vector<mpz_class> v(rows);
    for (int r = 0; r < rows; ++r) v[r] = at(r, c);
    return v;
}

mpz_class norm_sq(const std::vector<mpz_class>& v) {
    mpz_class s = 0;
    for (const auto& x : v) s += x * x;
    return s;
}

mpz_class euclid_gcd_vec(const std::vector<mpz_class>& values) {
    mpz_class g = 0;
    for (const auto& v : values) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    return g;
}

GramSchmidtResult gram_schmidt_exact(const IntMatrix& basis) {
    if (basis.rows < basis.cols || basis.cols < 1)
        throw SingularBasisError("gram_schmidt: need at least as many rows as columns");
    const int n = basis.cols;
    GramSchmidtResult r;
    r.norm_sq.resize(n);
    r.mu.assign(n, {});
    // star[j] holds b*_j exactly
    std::vector<RationalVector> star(n, RationalVector(basis.rows));
    for (int i = 0; i < n; ++i) {
        RationalVector v(basis.rows);
        for (int row = 0; row < basis.rows; ++row) v[row] = mpq_class(basis.at(row, i));
        r.mu[i].resize(i);
        for (int j = 0; j < i; ++j) {
            mpq_class proj = 0;
            for (int row = 0; row < basis.rows; ++row)
                proj += mpq_class(basis.at(row, i)) * star[j][row];
            proj /= r.norm_sq[j];
            r.mu[i][j] = proj;
            for (int row = 0; row < basis.rows; ++row) v[row] -= proj * star[j][row];
        }
        mpq_class n2 = 0;
        for (int row = 0; row < basis.rows; ++row) n2 += v[row] * v[row];
        if (n2 == 0) throw SingularBasisError("gram_schmidt: dependent columns");
        r.norm_sq[i] = n2;
        star[i] = std::move(v);
    }
    return r;
}

namespace {

void check_delta(const mpq_class& delta) {
    if (!(delta > mpq_class(1, 4) && delta < 1))
        throw std::invalid_argument("lll: delta must lie in (1/4, 1)");
}

}  // namespace

IntMatrix lll_reduce(const IntMatrix& basis, const mpq_class& delta) {
    check_delta(delta);
    if (basis.rows != basis.cols || basis.cols < 1)
        throw std::invalid_argument("lll: basis must be square");
    const int n = basis.cols;

    // Integral state: d[i] = det of the leading i x i Gram block (d[0] = 1),
    // lam[k][j] = d[j] * mu_{k,j}. All three stay integers throughout.
    std::vector<std::vector<mpz_class>> b(n + 1, std::vector<mpz_class>(n));
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) b[c + 1][r] = basis.at(r, c);
    std::vector<mpz_class> d(n + 1);
    std::vector<std::vector<mpz_class>> lam(n + 1, std::vector<mpz_class>(n + 1));
    const mpz_class num = delta.get_num(), den = delta.get_den();

    d[0] = 1;
    d[1] = norm_sq(b[1]);
    if (d[1] == 0) throw SingularBasisError("lll: dependent columns");

    mpz_class u, t0, t1, q, lamv, B, t;

    auto dotcol = [&](int i, int j) {
        mpz_class s = 0;
        for (int r = 0; r < n; ++r)
            mpz_addmul(s.get_mpz_t(), b[i][r].get_mpz_t(), b[j][r].get_mpz_t());
        return s;
    };

    auto red = [&](int k, int l) {
        mpz_abs(t0.get_mpz_t(), lam[k][l].get_mpz_t());
        mpz_mul_2exp(t0.get_mpz_t(), t0.get_mpz_t(), 1);
        if (mpz_cmp(t0.get_mpz_t(), d[l].get_mpz_t()) <= 0) return;
        // q = nearest integer to lam[k][l] / d[l]
        mpz_mul_2exp(t0.get_mpz_t(), lam[k][l].get_mpz_t(), 1);
        mpz_add(t0.get_mpz_t(), t0.get_mpz_t(), d[l].get_mpz_t());
        mpz_mul_2exp(t1.get_mpz_t(), d[l].get_mpz_t(), 1);
        mpz_fdiv_q(q.get_mpz_t(), t0.get_mpz_t(), t1.get_mpz_t());
        for (int r = 0; r < n; ++r)
            mpz_submul(b[k][r].get_mpz_t(), q.get_mpz_t(), b[l][r].get_mpz_t());
        mpz_submul(lam[k][l].get_mpz_t(), q.get_mpz_t(), d[l].get_mpz_t());
        for (int i = 1; i < l; ++i)
            mpz_submul(lam[k][i].get_mpz_t(), q.get_mpz_t(), lam[l][i].get_mpz_t());
    };

    auto swapk = [&](int k, int kmax) {
        std::swap(b[k], b[k - 1]);
        for (int j = 1; j <= k - 2; ++j) std::swap(lam[k][j], lam[k - 1][j]);
        lamv = lam[k][k - 1];
        // B = (d[k-2]*d[k] + lamv^2) / d[k-1]
        mpz_mul(B.get_mpz_t(), d[k - 2].get_mpz_t(), d[k].get_mpz_t());
        mpz_addmul(B.get_mpz_t(), lamv.get_mpz_t(), lamv.get_mpz_t());
        mpz_divexact(B.get_mpz_t(), B.get_mpz_t(), d[k - 1].get_mpz_t());
        for (int i = k + 1; i <= kmax; ++i) {
            t = lam[i][k];
            // lam[i][k] = (d[k]*lam[i][k-1] - lamv*t) / d[k-1]
            mpz_mul(lam[i][k].get_mpz_t(), d[k].get_mpz_t(), lam[i][k - 1].get_mpz_t());
            mpz_submul(lam[i][k].get_mpz_t(), lamv.get_mpz_t(), t.get_mpz_t());
            mpz_divexact(lam[i][k].get_mpz_t(), lam[i][k].get_mpz_t(), d[k - 1].get_mpz_t());
            // lam[i][k-1] = (B*t + lamv*lam[i][k]) / d[k], using the new lam[i][k]
            mpz_mul(lam[i][k - 1].get_mpz_t(), B.get_mpz_t(), t.get_mpz_t());
            mpz_addmul(lam[i][k - 1].get_mpz_t(), lamv.get_mpz_t(), lam[i][k].get_mpz_t());
            mpz_divexact(lam[i][k - 1].get_mpz_t(), lam[i][k - 1].get_mpz_t(), d[k].get_mpz_t());
        }
        d[k - 1] = B;
    };

    int k = 2, kmax = 1;
    while (k <= n) {
        if (k > kmax) {
            for (int j = 1; j <= k; ++j) {
                u = dotcol(k, j);
                for (int i = 1; i < j; ++i) {
                    mpz_mul(u.get_mpz_t(), u.get_mpz_t(), d[i].get_mpz_t());
                    mpz_submul(u.get_mpz_t(), lam[k][i].get_mpz_t(), lam[j][i].get_mpz_t());
                    mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d[i - 1].get_mpz_t());
                }
                if (j < k)
                    lam[k][j] = u;
                else
                    d[k] = u;
            }
            if (d[k] == 0) throw SingularBasisError("lll: dependent columns");
            kmax = k;
        }
        for (;;) {
            red(k, k - 1);
            // Lovasz with delta = num/den: swap iff
            // den*(d[k]*d[k-2] + lam^2) < num*d[k-1]^2
            mpz_mul(t0.get_mpz_t(), d[k].get_mpz_t(), d[k - 2].get_mpz_t());
            mpz_addmul(t0.get_mpz_t(), lam[k][k - 1].get_mpz_t(), lam[k][k - 1].get_mpz_t());
            mpz_mul(t0.get_mpz_t(), t0.get_mpz_t(), den.get_mpz_t());
            mpz_mul(t1.get_mpz_t(), d[k - 1].get_mpz_t(), d[k - 1].get_mpz_t());
            mpz_mul(t1.get_mpz_t(), t1.get_mpz_t(), num.get_mpz_t());
            if (mpz_cmp(t0.get_mpz_t(), t1.get_mpz_t()) < 0) {
                swapk(k, kmax);
                k = std::max(2, k - 1);
            } else {
                for (int l = k - 2; l >= 1; --l) red(k, l);
                ++k;
                break;
            }
        }
    }

    IntMatrix out(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) out.at(r, c) = b[c + 1][r];
    return out;
}

bool is_lll_reduced(const IntMatrix& basis, const mpq_class& delta) {
    check_delta(delta);
    if (basis.rows != basis.cols) throw std::invalid_argument("is_lll_reduced: basis must be square");
    auto gs = gram_schmidt_exact(basis);
    const int n = basis.cols;
    const mpq_class half(1, 2);
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (abs(gs.mu[i][j]) > half) return false;
    for (int i = 0; i + 1 < n; ++i) {
        mpq_class rhs = gs.norm_sq[i + 1] + gs.mu[i + 1][i] * gs.mu[i + 1][i] * gs.norm_sq[i];
        if (delta * gs.norm_sq[i] > rhs) return false;
    }
    return true;
}

std::vector<mpz_class> shortest_vector_bruteforce(const IntMatrix& basis,
                                                  const mpz_class& coeff_bound) {
    const int n = basis.cols;
    if (n > 8) throw std::invalid_argument("shortest_vector_bruteforce: limited to 8 columns");
    if (coeff_bound < 1) throw std::invalid_argument("shortest_vector_bruteforce: bound must be >= 1");
    auto gs = gram_schmidt_exact(basis);

    // start from the shortest basis column; enumeration can only improve it
    mpq_class best2;
    std::vector<long> bestu(n, 0);
    for (int c = 0; c < n; ++c) {
        mpq_class n2(norm_sq(basis.col(c)));
        if (c == 0 || n2 < best2) {
            best2 = n2;
            std::fill(bestu.begin(), bestu.end(), 0L);
            bestu[c] = 1;
        }
    }

    const double boundd = coeff_bound.get_d();
    std::vector<long> u(n, 0);
    std::vector<mpq_class> rho(n + 1);  // rho[i] = norm^2 contribution of levels i..n-1
    std::function<void(int)> rec = [&](int i) {
        if (i < 0) {
            if (rho[0] > 0 && rho[0] < best2) {
                best2 = rho[0];
                bestu = u;
            }
            return;
        }
        mpq_class c = 0;
        for (int j = i + 1; j < n; ++j)
            if (u[j] != 0) c -= mpq_class(u[j]) * gs.mu[j][i];
        mpq_class rem = best2 - rho[i + 1];
        if (rem < 0) return;
        double s = std::sqrt(rem.get_d() / gs.norm_sq[i].get_d()) + 1.0;
        double cd = c.get_d();
        long lo = static_cast<long>(std::ceil(std::max(cd - s, -boundd)));
        long hi = static_cast<long>(std::floor(std::min(cd + s, boundd)));
        for (long ui = lo; ui <= hi; ++ui) {
            mpq_class diff = mpq_class(ui) - c;
            rho[i] = rho[i + 1] + diff * diff * gs.norm_sq[i];
            if (rho[i] <= best2) {
                u[i] = ui;
                rec(i - 1);
            }
        }
        u[i] = 0;
    };
    rec(n - 1);

    std::vector<mpz_class> v(basis.rows, 0);
    for (int c = 0; c < n; ++c)
        if (bestu[c] != 0)
            for (int r = 0; r < basis.rows; ++r) v[r] += bestu[c] * basis.at(r, c);
    return v;
}

mpz_class default_svp_coeff_bound(const IntMatrix& basis) {
    auto gs = gram_schmidt_exact(basis);
    double maxb = 0.0, minstar = 0.0;
    for (int c = 0; c < basis.cols; ++c) {
        maxb = std::max(maxb, norm_sq(basis.col(c)).get_d());
        double s = gs.norm_sq[c].get_d();
        if (c == 0 || s < minstar) minstar = s;
    }
    double bound = std::ceil(std::pow(2.0, basis.cols / 2.0) * std::sqrt(maxb / minstar));
    mpz_class out;
    mpz_set_d(out.get_mpz_t(), bound);
    return out < 1 ? mpz_class(1) : out;
}

mpz_class det_exact(const IntMatrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("det_exact: matrix must be square");
    const int n = m.rows;
    IntMatrix a = m;
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                a.at(i, j) = a.at(k, k) * a.at(i, j) - a.at(i, k) * a.at(k, j);
                mpz_divexact(a.at(i, j).get_mpz_t(), a.at(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

IntMatrix read_basis(std::istream& is) {
    int rows = 0, cols = 0;
    if (!(is >> rows >> cols) || rows < 1 || cols < 1)
        throw std::runtime_error("basis file: bad header");
    IntMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (!(is >> m.at(r, c))) throw std::runtime_error("basis file: truncated entries");
    return m;
}

void write_basis(std::ostream& os, const IntMatrix& m) {
    os << m.rows << ' ' << m.cols << '\n';
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) os << m.at(r, c) << (c + 1 == m.cols ? "" : " ");
        os << '\n';
    }
}

}  // namespace cosrec
