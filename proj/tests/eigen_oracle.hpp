#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

// Cyclic Jacobi eigensolver for small dense symmetric matrices. Slow but
// dependency-free; used as an oracle against closed-form spectra and to build
// Gauss-Hermite rules from the moment recurrence.

struct EigenDecomposition {
    std::vector<double> values;                // ascending
    std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i], unit norm
};

inline EigenDecomposition jacobi_eigensolve(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) throw std::invalid_argument("matrix must be nonempty");
    double fro2 = 0.0;
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(a[i].size()) != n) throw std::invalid_argument("matrix must be square");
        for (int j = 0; j < n; ++j) fro2 += a[i][j] * a[i][j];
    }
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off <= 1e-28 * (fro2 + 1.0)) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a[p][q];
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                double app = a[p][p], aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = a[q][p] = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = a[p][i] = c * aip - s * aiq;
                    a[i][q] = a[q][i] = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = v[i][p], viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a[x][x] < a[y][y]; });
    EigenDecomposition out;
    out.values.reserve(n);
    out.vectors.reserve(n);
    for (int j : order) {
        out.values.push_back(a[j][j]);
        std::vector<double> vec(n);
        for (int i = 0; i < n; ++i) vec[i] = v[i][j];
        out.vectors.push_back(std::move(vec));
    }
    return out;
}

struct GaussHermiteRule {
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;  // sums to 1 for the standard normal measure
};

// probabilists' rule: Jacobi matrix has zero diagonal and off-diagonal sqrt(k)
inline GaussHermiteRule gauss_hermite_rule(int n) {
    std::vector<std::vector<double>> j(n, std::vector<double>(n, 0.0));
    for (int k = 1; k < n; ++k) j[k - 1][k] = j[k][k - 1] = std::sqrt(double(k));
    EigenDecomposition eig = jacobi_eigensolve(std::move(j));
    GaussHermiteRule rule;
    rule.nodes = eig.values;
    rule.weights.reserve(n);
    for (int i = 0; i < n; ++i) rule.weights.push_back(eig.vectors[i][0] * eig.vectors[i][0]);
    return rule;
}
