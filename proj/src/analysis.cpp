#include "cosrec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace cosrec {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.283185307179586476925286766559;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void check_unit(const std::vector<double>& w, const char* name) {
    if (w.empty()) throw std::invalid_argument(std::string(name) + " must be nonempty");
    if (std::fabs(norm(w) - 1.0) > std::ldexp(1.0, -40))
        throw std::invalid_argument(std::string(name) + " must be a unit vector");
}

// log of the Poisson(lambda) weight lambda^k/k! * exp(-lambda)
double log_poisson_term(int k, double lambda) {
    return k * std::log(lambda) - std::lgamma(double(k) + 1.0) - lambda;
}

}  // namespace

double hermite_cosine_coefficient(int k, double rho, double gamma) {
    if (k < 0) throw std::invalid_argument("order must be nonnegative");
    if (k % 2 != 0) return 0.0;
    const double c = 2.0 * kPi * kPi * gamma * gamma;
    if (k == 0) return std::exp(-c);
    // (2*pi*gamma)^k / sqrt(k!) in log space; the k/2 sign alternates
    double mag = std::exp(k * std::log(kTwoPi * gamma) - 0.5 * std::lgamma(double(k) + 1.0) - c);
    double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * std::pow(rho, k) * mag;
}

void HermiteLossParams::validate() const {
    if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [-1,1]");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    if (kmax < 2 || kmax % 2 != 0) throw std::invalid_argument("kmax must be even and >= 2");
}

HermiteLossParams HermiteLossParams::make(double rho, double gamma) {
    HermiteLossParams p;
    p.rho = rho;
    p.gamma = gamma;
    const double lambda = 4.0 * kPi * kPi * gamma * gamma;
    // past 2*lambda the terms at least halve each step, so the tail is below
    // 4x the next term
    int k = 2 + 2 * int(lambda);
    while (4.0 * std::exp(log_poisson_term(k + 1, lambda)) >= 1e-13) k += 2;
    p.kmax = k;
    return p;
}

double population_loss_closed_form(const HermiteLossParams& params) {
    params.validate();
    const double lambda = 4.0 * kPi * kPi * params.gamma * params.gamma;
    // rho^k for even k through squares, so the sign of rho cannot leak in
    const double rho2 = params.rho * params.rho;
    double rk = 1.0;
    double sum = 0.0;
    for (int k = 0; k <= params.kmax; k += 2) {
        sum += std::exp(log_poisson_term(k, lambda)) * (1.0 - rk);
        rk *= rho2;
    }
    return 2.0 * sum;
}

double trivial_loss(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    const double c = 4.0 * kPi * kPi * gamma * gamma;
    return 0.5 + 0.5 * std::exp(-2.0 * c) - std::exp(-c);
}

MonteCarloEstimate population_loss_monte_carlo(const std::vector<double>& w,
                                               const std::vector<double>& w_prime, double gamma,
                                               long n, Rng& rng) {
    check_unit(w, "w");
    check_unit(w_prime, "w_prime");
    if (w.size() != w_prime.size()) throw std::invalid_argument("dimension mismatch");
    if (n < 2) throw std::invalid_argument("need at least two draws");
    const int d = static_cast<int>(w.size());
    double mean = 0.0, m2 = 0.0;
    std::vector<double> x(d);
    for (long i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) x[j] = rng.gaussian();
        double diff = std::cos(kTwoPi * gamma * dot(w, x)) - std::cos(kTwoPi * gamma * dot(w_prime, x));
        double v = diff * diff;
        double delta = v - mean;
        mean += delta / double(i + 1);
        m2 += delta * (v - mean);
    }
    MonteCarloEstimate est;
    est.mean = mean;
    est.std_error = std::sqrt(m2 / double(n - 1) / double(n));
    return est;
}

bool parameter_recovery_edge_check(double rho, double gamma) {
    double loss = population_loss_closed_form(HermiteLossParams::make(rho, gamma));
    return loss <= trivial_loss(gamma) - 1.0 / 12.0;
}

double periodic_gaussian_density(double s, double z, int kmax) {
    if (!(s > 0.0)) throw std::domain_error("width must be positive");
    const double inv = 1.0 / (s * std::sqrt(2.0 * kPi));
    int k_terms = kmax;
    if (k_terms <= 0) {
        // images at distance >= k - 1/2 from any z in [-1/2,1/2); stop once
        // they fall below 1e-17 so the dropped tail stays under 1e-14
        k_terms = 1;
        while (true) {
            double t = (double(k_terms) - 0.5) / s;
            if (inv * std::exp(-0.5 * t * t) < 1e-17) break;
            ++k_terms;
        }
    }
    double sum = 0.0;
    for (int k = -k_terms; k <= k_terms; ++k) {
        double t = (z - double(k)) / s;
        sum += std::exp(-0.5 * t * t);
    }
    return inv * sum;
}

PeriodicGaussianBounds periodic_gaussian_bounds(double s) {
    if (!(s > 0.0)) throw std::domain_error("width must be positive");
    PeriodicGaussianBounds b;
    b.peak_bound = (1.0 + 2.0 * (1.0 + s * s) * std::exp(-1.0 / (2.0 * s * s))) /
                   (s * std::sqrt(2.0 * kPi));
    // the Mill step bounds the image sum by (1 + 1/(2*pi*s)^2) e^{-2 pi^2 s^2}
    double q = 1.0 / (2.0 * kPi * s);
    b.uniform_deviation_bound = 2.0 * (1.0 + q * q) * std::exp(-2.0 * kPi * kPi * s * s);
    return b;
}

double mills_tail_bound(double t) {
    if (!(t > 0.0)) throw std::domain_error("threshold must be positive");
    return std::sqrt(2.0 / kPi) * std::exp(-0.5 * t * t) / t;
}

double empirical_squared_loss(const Hypothesis& h, const std::vector<LabeledSample>& data) {
    if (!h) throw std::invalid_argument("empty hypothesis");
    if (data.empty()) throw std::invalid_argument("need at least one sample");
    double sum = 0.0;
    for (const auto& s : data) {
        double e = h(s.x) - s.z;
        sum += e * e;
    }
    return sum / double(data.size());
}

double weak_learning_edge(const Hypothesis& h, const std::vector<LabeledSample>& data,
                          double best_constant) {
    if (data.empty()) throw std::invalid_argument("need at least one sample");
    double const_loss = 0.0;
    for (const auto& s : data) {
        double e = best_constant - s.z;
        const_loss += e * e;
    }
    return const_loss / double(data.size()) - empirical_squared_loss(h, data);
}

namespace {

double clipped(const Hypothesis& h, const std::vector<double>& x) {
    return std::clamp(h(x), -1.0, 1.0);
}

DetectionOutcome run_detection(const Hypothesis& h, bool failed,
                               const std::vector<LabeledSample>& holdout,
                               const std::vector<LabeledSample>& null_batch, double eps) {
    DetectionOutcome out;
    if (failed) {
        out.learner_failed = true;
        return out;
    }
    double lu = 0.0, ln = 0.0;
    for (const auto& s : holdout) {
        double e = clipped(h, s.x) - s.z;
        lu += e * e;
    }
    for (const auto& s : null_batch) {
        double e = clipped(h, s.x) - s.z;
        ln += e * e;
    }
    out.loss_unknown = lu / double(holdout.size());
    out.loss_null = ln / double(null_batch.size());
    out.yes = out.loss_unknown <= out.loss_null - eps / 4.0;
    return out;
}

void check_detection_args(long m, double eps) {
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
}

}  // namespace

DetectionOutcome clwe_detection_test(const Learner& learner, const SampleSource& unknown_source,
                                     const SampleSource& null_source, long m, double eps) {
    check_detection_args(m, eps);
    std::vector<LabeledSample> train, holdout, null_batch;
    train.reserve(m);
    holdout.reserve(m);
    null_batch.reserve(m);
    for (long i = 0; i < 2 * m; ++i) {
        LabeledSample s = unknown_source();
        s.z = std::cos(kTwoPi * s.z);
        (i < m ? train : holdout).push_back(std::move(s));
    }
    for (long i = 0; i < m; ++i) {
        LabeledSample s = null_source();
        s.z = std::cos(kTwoPi * s.z);
        null_batch.push_back(std::move(s));
    }
    Hypothesis h;
    bool failed = false;
    try {
        h = learner(train);
    } catch (...) {
        failed = true;
    }
    if (!failed && !h) failed = true;
    return run_detection(h, failed, holdout, null_batch, eps);
}

DetectionOutcome clwe_detection_test(const HpLearner& learner, const HpSource& unknown_source,
                                     const HpSource& null_source, long m, double eps) {
    check_detection_args(m, eps);
    HpBatch drawn = unknown_source(2 * m);
    HpBatch null_drawn = null_source(m);
    if (long(drawn.xs.size()) != 2 * m || long(null_drawn.xs.size()) != m)
        throw std::invalid_argument("source returned wrong batch size");
    HpBatch train;
    train.xs.assign(drawn.xs.begin(), drawn.xs.begin() + m);
    for (long i = 0; i < m; ++i) {
        BigFloat two_pi = BigFloat::pi(drawn.z[i].prec());
        two_pi.mul_2si(1);
        train.z.push_back(cos(two_pi * drawn.z[i]));
    }
    auto to_eval = [](const HpBatch& b, long from, long to) {
        std::vector<LabeledSample> out;
        out.reserve(to - from);
        for (long i = from; i < to; ++i)
            out.push_back({b.xs[i], std::cos(kTwoPi * b.z[i].to_double())});
        return out;
    };
    std::vector<LabeledSample> holdout = to_eval(drawn, m, 2 * m);
    std::vector<LabeledSample> null_batch = to_eval(null_drawn, 0, m);
    Hypothesis h;
    bool failed = false;
    try {
        h = learner(train);
    } catch (...) {
        failed = true;
    }
    if (!failed && !h) failed = true;
    return run_detection(h, failed, holdout, null_batch, eps);
}

HpLearner make_recovery_learner(const RecoveryConfig& cfg) {
    return [cfg](const HpBatch& batch) -> Hypothesis {
        if (batch.xs.empty()) return {};
        const long d = long(batch.xs[0].size());
        if (long(batch.xs.size()) < d + 1) return {};
        std::vector<std::vector<double>> xs(batch.xs.begin(), batch.xs.begin() + d + 1);
        std::vector<BigFloat> zs(batch.z.begin(), batch.z.begin() + d + 1);
        RecoveryOutcome out = recover_cosine_hp(xs, zs, cfg);
        if (out.status != RecoveryStatus::success) return {};
        std::vector<double> w = out.w_scaled;
        return [w](const std::vector<double>& x) {
            double t = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) t += w[i] * x[i];
            return std::clamp(std::cos(kTwoPi * t), -1.0, 1.0);
        };
    };
}

double ReluNetwork::evaluate(double z) const {
    double out = a;
    for (const auto& u : units)
        if (z > u.beta) out += u.alpha * (z - u.beta);
    return out;
}

void ReluNetwork::validate() const {
    if (!(L > 0.0) || !(R > 0.0) || !(eta > 0.0))
        throw std::invalid_argument("L, R, eta must be positive");
    if (double(units.size()) > 3.0 * R * L / eta)
        throw std::invalid_argument("unit count exceeds 3*R*L/eta");
    for (const auto& u : units)
        if (std::fabs(u.alpha) > 2.0 * L)
            throw std::invalid_argument("unit weight exceeds 2L");
}

ReluNetwork relu_approximate_cosine(double gamma, double eps) {
    if (!(gamma >= 1.0)) throw std::invalid_argument("gamma must be >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    ReluNetwork net;
    net.L = kTwoPi;
    net.eta = std::sqrt(eps / 2.0);
    net.R = std::ceil(gamma * std::sqrt(2.0 * std::log(8.0 / eps))) + 0.5;
    const long n = long(std::ceil(2.0 * net.R * net.L / net.eta));
    const double sp = 2.0 * net.R / double(n);
    std::vector<double> f(n + 1);
    for (long j = 0; j <= n; ++j) f[j] = std::cos(kTwoPi * (-net.R + sp * double(j)));
    net.a = f[0];
    net.units.reserve(n + 1);
    double prev_slope = 0.0;
    for (long j = 0; j < n; ++j) {
        double slope = (f[j + 1] - f[j]) / sp;
        net.units.push_back({slope - prev_slope, -net.R + sp * double(j)});
        prev_slope = slope;
    }
    net.units.push_back({-prev_slope, net.R});
    net.validate();
    return net;
}

double relu_gaussian_squared_loss(const ReluNetwork& net, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    // 12-point Gauss-Legendre nodes and weights on [-1,1]
    static const double kNode[6] = {0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
                                    0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
    static const double kWeight[6] = {0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                                      0.1600783285433462, 0.1069393259953184, 0.0471753363865118};
    const double inv = 1.0 / (gamma * std::sqrt(2.0 * kPi));
    auto integrand = [&](double z) {
        double e = std::cos(kTwoPi * z) - net.evaluate(z);
        return e * e * inv * std::exp(-0.5 * z * z / (gamma * gamma));
    };
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < net.units.size(); ++j) {
        double lo = net.units[j].beta, hi = net.units[j + 1].beta;
        double c = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double seg = 0.0;
        for (int q = 0; q < 6; ++q)
            seg += kWeight[q] * (integrand(c - half * kNode[q]) + integrand(c + half * kNode[q]));
        total += seg * half;
    }
    // worst case (cos - net)^2 <= 4 outside [-R, R]
    total += 4.0 * std::erfc(net.R / (gamma * std::sqrt(2.0)));
    return total;
}

namespace {

// row-major LU with partial pivoting; throws on (near-)singular input
struct Lu {
    std::vector<double> a;
    std::vector<int> piv;
    int n = 0;
};

Lu lu_factor(const std::vector<std::vector<double>>& X) {
    const int n = static_cast<int>(X.size());
    if (n == 0) throw std::invalid_argument("matrix must be nonempty");
    Lu lu;
    lu.n = n;
    lu.a.resize(std::size_t(n) * n);
    lu.piv.resize(n);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        if (int(X[i].size()) != n) throw std::invalid_argument("matrix must be square");
        for (int j = 0; j < n; ++j) {
            lu.a[std::size_t(i) * n + j] = X[i][j];
            scale = std::max(scale, std::fabs(X[i][j]));
        }
    }
    if (scale == 0.0) throw SingularSystemError("matrix is zero");
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(lu.a[std::size_t(i) * n + k]) > std::fabs(lu.a[std::size_t(p) * n + k]))
                p = i;
        if (std::fabs(lu.a[std::size_t(p) * n + k]) <= 1e-12 * scale)
            throw SingularSystemError("matrix is singular");
        lu.piv[k] = p;
        if (p != k)
            for (int j = 0; j < n; ++j)
                std::swap(lu.a[std::size_t(k) * n + j], lu.a[std::size_t(p) * n + j]);
        for (int i = k + 1; i < n; ++i) {
            double f = lu.a[std::size_t(i) * n + k] / lu.a[std::size_t(k) * n + k];
            lu.a[std::size_t(i) * n + k] = f;
            for (int j = k + 1; j < n; ++j)
                lu.a[std::size_t(i) * n + j] -= f * lu.a[std::size_t(k) * n + j];
        }
    }
    return lu;
}

std::vector<double> lu_solve(const Lu& lu, std::vector<double> b) {
    const int n = lu.n;
    // swaps go first: entries past k hold raw permuted data until their turn
    for (int k = 0; k < n; ++k) {
        std::swap(b[k], b[lu.piv[k]]);
        for (int j = 0; j < k; ++j) b[k] -= lu.a[std::size_t(k) * n + j] * b[j];
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= lu.a[std::size_t(i) * n + j] * b[j];
        b[i] /= lu.a[std::size_t(i) * n + i];
    }
    return b;
}

}  // namespace

std::vector<double> sign_flip_solution(const std::vector<std::vector<double>>& X,
                                       const std::vector<double>& y,
                                       const std::vector<int>& signs) {
    const std::size_t d = X.size();
    if (y.size() != d || signs.size() != d) throw std::invalid_argument("size mismatch");
    for (int s : signs)
        if (s != 1 && s != -1) throw std::invalid_argument("signs must be +-1");
    std::vector<double> rhs(d);
    for (std::size_t i = 0; i < d; ++i) rhs[i] = signs[i] * y[i];
    return lu_solve(lu_factor(X), std::move(rhs));
}

std::vector<std::vector<double>> phase_retrieval_feasible_set(
    const std::vector<std::vector<double>>& X, const std::vector<double>& y) {
    const int d = static_cast<int>(X.size());
    if (d > 16) throw std::invalid_argument("sign enumeration is capped at d = 16");
    if (y.size() != std::size_t(d)) throw std::invalid_argument("size mismatch");
    Lu lu = lu_factor(X);
    std::vector<std::vector<double>> out;
    out.reserve(std::size_t(1) << d);
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << d); ++mask) {
        std::vector<double> rhs(d);
        for (int i = 0; i < d; ++i) rhs[i] = (mask >> i) & 1u ? -y[i] : y[i];
        out.push_back(lu_solve(lu, std::move(rhs)));
    }
    return out;
}

std::pair<double, double> sign_flip_extreme_eigenvalues(
    const std::vector<std::vector<double>>& X) {
    const int d = static_cast<int>(X.size());
    Lu lu = lu_factor(X);
    std::vector<double> e1(d, 0.0);
    e1[0] = 1.0;
    std::vector<double> col = lu_solve(lu, std::move(e1));
    // <x_1, col> = 1, so eta >= 1 by Cauchy-Schwarz
    double eta = std::max(1.0, norm(X[0]) * norm(col));
    double s = std::sqrt(std::max(0.0, eta * eta - 1.0));
    return {-1.0 + 2.0 * eta * eta - 2.0 * eta * s, -1.0 + 2.0 * eta * eta + 2.0 * eta * s};
}

SpuriousProbeResult spurious_norm_probe(int d, long trials, Rng& rng) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (trials < 1000) throw std::invalid_argument("need at least 1000 trials");
    SpuriousProbeResult res;
    res.trials = trials;
    std::vector<std::vector<double>> X(d, std::vector<double>(d));
    for (long t = 0; t < trials; ++t) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) X[i][j] = rng.gaussian();
        std::vector<double> u = sample_hidden_direction(rng, d);
        double r = rng.uniform(1.0, 2.0);
        std::vector<double> rhs(d);
        for (int i = 0; i < d; ++i) rhs[i] = r * dot(X[i], u);
        rhs[0] = -rhs[0];
        try {
            double nrm = norm(lu_solve(lu_factor(X), std::move(rhs)));
            if (nrm >= 1.0 && nrm < r) ++res.successes;
        } catch (const SingularSystemError&) {
        }
    }
    const double z = 1.959963984540054;
    const double n = double(trials);
    const double p = double(res.successes) / n;
    const double denom = 1.0 + z * z / n;
    const double center = (p + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    res.frequency = p;
    res.ci_low = std::max(0.0, center - half);
    res.ci_high = std::min(1.0, center + half);
    return res;
}

}  // namespace cosrec
