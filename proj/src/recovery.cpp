#include "cosrec/recovery.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>

#include "cosrec/lattice.hpp"

namespace cosrec {

namespace {

// Gaussian elimination with partial pivoting at the matrix entries' precision.
// A pivot below 2^(-prec/2) is treated as rank deficiency.
std::vector<BigFloat> solve_square(std::vector<std::vector<BigFloat>> a,
                                   std::vector<BigFloat> rhs, long prec) {
    const int n = static_cast<int>(a.size());
    BigFloat tiny(1.0, prec);
    tiny.mul_2si(-(prec / 2));
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
        if (!(abs(a[piv][col]) > tiny)) throw SingularSystemError("pivot below rank threshold");
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (int r = col + 1; r < n; ++r) {
            if (a[r][col].is_zero()) continue;
            BigFloat f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<BigFloat> x(n, BigFloat(prec));
    for (int r = n - 1; r >= 0; --r) {
        BigFloat acc = rhs[r];
        for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

void check_batch_shape(const std::vector<std::vector<double>>& xs, std::size_t labels) {
    if (xs.size() < 2) throw std::invalid_argument("recovery needs d+1 samples");
    const std::size_t d = xs.size() - 1;
    for (const auto& x : xs)
        if (x.size() != d) throw std::invalid_argument("recovery needs d+1 samples of dimension d");
    if (labels != xs.size()) throw std::invalid_argument("label count must match sample count");
}

BigFloat clamp_unit(BigFloat z) {
    BigFloat one(1.0, z.prec());
    if (z > one) return one;
    if (z < -one) return -one;
    return z;
}

// arccos(clamp(z)) / (2 pi), the phase in [0, 1/2]
BigFloat phase_of(const BigFloat& z, long prec) {
    BigFloat two_pi = BigFloat::pi(prec);
    two_pi.mul_2si(1);
    return acos(clamp_unit(z)) / two_pi;
}

std::vector<BigFloat> phases_from_doubles(const std::vector<LabeledSample>& samples, long prec,
                                          bool fold_cosine) {
    std::vector<BigFloat> phases;
    phases.reserve(samples.size());
    BigFloat two_pi = BigFloat::pi(prec);
    two_pi.mul_2si(1);
    for (const auto& s : samples) {
        BigFloat z(s.z, prec);
        if (fold_cosine) z = cos(two_pi * z);
        phases.push_back(phase_of(z, prec));
    }
    return phases;
}

std::vector<std::vector<double>> covariates_of(const std::vector<LabeledSample>& samples) {
    std::vector<std::vector<double>> xs;
    xs.reserve(samples.size());
    for (const auto& s : samples) xs.push_back(s.x);
    return xs;
}

BigFloat dot_bf(const std::vector<double>& w, const std::vector<double>& x, long prec) {
    BigFloat acc(prec);
    for (std::size_t i = 0; i < w.size(); ++i) acc += BigFloat(w[i], prec) * BigFloat(x[i], prec);
    return acc;
}

// t - round(t), the signed distance to the nearest integer, half-integers down
BigFloat mod_one_bf(const BigFloat& t) {
    BigFloat half(0.5, t.prec());
    return t - floor(t + half);
}

}  // namespace

RecoveryConfig RecoveryConfig::desk(int d) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    RecoveryConfig cfg;
    cfg.N = std::max(128L, 32L * d);
    cfg.precision_bits = cfg.N + 64;
    cfg.M = 0;
    return cfg;
}

RecoveryConfig RecoveryConfig::paper(int d) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    RecoveryConfig cfg;
    double raw = std::ceil(std::pow(double(d), 3) * std::pow(std::log(double(d)), 2));
    cfg.N = std::max(16L, static_cast<long>(raw));
    cfg.precision_bits = cfg.N + 64;
    cfg.M = 0;
    return cfg;
}

mpz_class RecoveryConfig::scale_for(int d) const {
    if (M != 0) return M;
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), 2, static_cast<unsigned long>(3 * d));
    return m;
}

void RecoveryConfig::validate() const {
    if (N < 16) throw std::invalid_argument("truncation depth must be at least 16 bits");
    if (precision_bits < N + 64)
        throw std::invalid_argument("working precision must exceed truncation depth by 64 bits");
    if (M < 0) throw std::invalid_argument("embedding scale must be nonnegative");
    if (M != 0 && M < 2) throw std::invalid_argument("embedding scale must be at least 2");
    if (delta <= mpq_class(1, 4) || delta >= 1)
        throw std::invalid_argument("reduction parameter must lie in (1/4, 1)");
}

const char* to_string(RecoveryStatus s) {
    switch (s) {
        case RecoveryStatus::success: return "success";
        case RecoveryStatus::fail_singular: return "fail_singular";
        case RecoveryStatus::fail_relation_shape: return "fail_relation_shape";
    }
    return "unknown";
}

double arccos_phase(double z) {
    if (z > 1.0) z = 1.0;
    if (z < -1.0) z = -1.0;
    return std::acos(z) / 6.283185307179586476925286766559;
}

std::vector<BigFloat> solve_lambda(const std::vector<std::vector<double>>& xs,
                                   long precision_bits) {
    check_batch_shape(xs, xs.size());
    const int d = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<BigFloat>> a(d, std::vector<BigFloat>(d, BigFloat(precision_bits)));
    std::vector<BigFloat> rhs(d, BigFloat(precision_bits));
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) a[r][c] = BigFloat(xs[c + 1][r], precision_bits);
        rhs[r] = BigFloat(xs[0][r], precision_bits);
    }
    std::vector<BigFloat> y = solve_square(std::move(a), std::move(rhs), precision_bits);
    std::vector<BigFloat> lambda;
    lambda.reserve(d + 1);
    lambda.push_back(BigFloat(1.0, precision_bits));
    for (int j = 0; j < d; ++j) lambda.push_back(-y[j]);
    return lambda;
}

RecoveryOutcome recover_from_phases(const std::vector<std::vector<double>>& xs,
                                    const std::vector<BigFloat>& phases,
                                    const RecoveryConfig& cfg) {
    cfg.validate();
    check_batch_shape(xs, phases.size());
    const int d = static_cast<int>(xs.size()) - 1;
    const long prec = cfg.precision_bits;

    RecoveryOutcome out;
    std::vector<BigFloat> lambda;
    try {
        lambda = solve_lambda(xs, prec);
    } catch (const SingularSystemError&) {
        out.status = RecoveryStatus::fail_singular;
        return out;
    }

    DyadicVector b;
    b.N = cfg.N;
    b.num.resize(2 * d + 3);
    mpz_ui_pow_ui(b.num[0].get_mpz_t(), 2, static_cast<unsigned long>(cfg.N));
    for (int j = 1; j <= d; ++j) b.num[j] = truncate_dyadic(lambda[j], cfg.N);
    for (int i = 0; i <= d; ++i)
        b.num[d + 1 + i] = truncate_dyadic(lambda[i] * phases[i], cfg.N);
    b.num[2 * d + 2] = 1;

    const auto t0 = std::chrono::steady_clock::now();
    auto rel = detect_integer_relation(b, cfg.scale_for(d), cfg.delta);
    out.lattice_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.status = RecoveryStatus::fail_relation_shape;
    if (!rel) return out;
    out.relation = rel;

    std::vector<mpz_class> sign_block(rel->t.begin() + (d + 1), rel->t.begin() + (2 * d + 2));
    mpz_class g = euclid_gcd_vec(sign_block);
    if (g == 0) return out;
    std::vector<int> signs(d + 1);
    for (int i = 0; i <= d; ++i) {
        if (abs(sign_block[i]) != g) return out;
        signs[i] = sgn(sign_block[i]);
    }
    std::vector<mpz_class> offsets(d + 1);
    for (int i = 0; i <= d; ++i) {
        if (!mpz_divisible_p(rel->t[i].get_mpz_t(), g.get_mpz_t())) return out;
        offsets[i] = rel->t[i] / g;
    }

    std::vector<std::vector<BigFloat>> a(d, std::vector<BigFloat>(d, BigFloat(prec)));
    std::vector<BigFloat> rhs(d, BigFloat(prec));
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) a[r][c] = BigFloat(xs[r + 1][c], prec);
        BigFloat term = phases[r + 1];
        if (signs[r + 1] < 0) term = -term;
        rhs[r] = term + BigFloat(offsets[r + 1], prec);
    }
    std::vector<BigFloat> w;
    try {
        w = solve_square(std::move(a), std::move(rhs), prec);
    } catch (const SingularSystemError&) {
        out.status = RecoveryStatus::fail_singular;
        return out;
    }

    BigFloat norm_sq(prec);
    for (const auto& c : w) norm_sq += c * c;
    const double norm = sqrt(norm_sq).to_double();
    if (!(norm > 0.0) || !std::isfinite(norm)) return out;

    out.status = RecoveryStatus::success;
    out.signs = std::move(signs);
    out.offsets = std::move(offsets);
    out.w_scaled.resize(d);
    out.w_unit.resize(d);
    for (int i = 0; i < d; ++i) {
        out.w_scaled[i] = w[i].to_double();
        out.w_unit[i] = out.w_scaled[i] / norm;
    }
    return out;
}

RecoveryOutcome recover_cosine(const std::vector<LabeledSample>& samples,
                               const RecoveryConfig& cfg) {
    cfg.validate();
    return recover_from_phases(covariates_of(samples),
                               phases_from_doubles(samples, cfg.precision_bits, false), cfg);
}

RecoveryOutcome recover_phase_retrieval(const std::vector<LabeledSample>& samples,
                                        const RecoveryConfig& cfg) {
    cfg.validate();
    return recover_from_phases(covariates_of(samples),
                               phases_from_doubles(samples, cfg.precision_bits, true), cfg);
}

RecoveryOutcome recover_clwe(const std::vector<LabeledSample>& samples,
                             const RecoveryConfig& cfg) {
    cfg.validate();
    return recover_from_phases(covariates_of(samples),
                               phases_from_doubles(samples, cfg.precision_bits, true), cfg);
}

RecoveryOutcome recover_cosine_hp(const std::vector<std::vector<double>>& xs,
                                  const std::vector<BigFloat>& z, const RecoveryConfig& cfg) {
    cfg.validate();
    std::vector<BigFloat> phases;
    phases.reserve(z.size());
    for (const auto& zi : z) phases.push_back(phase_of(zi, cfg.precision_bits));
    return recover_from_phases(xs, phases, cfg);
}

RecoveryOutcome recover_phase_retrieval_hp(const std::vector<std::vector<double>>& xs,
                                           const std::vector<BigFloat>& y,
                                           const RecoveryConfig& cfg) {
    cfg.validate();
    const long prec = cfg.precision_bits;
    BigFloat two_pi = BigFloat::pi(prec);
    two_pi.mul_2si(1);
    std::vector<BigFloat> phases;
    phases.reserve(y.size());
    for (const auto& yi : y) phases.push_back(phase_of(cos(two_pi * yi), prec));
    return recover_from_phases(xs, phases, cfg);
}

RecoveryOutcome recover_clwe_hp(const std::vector<std::vector<double>>& xs,
                                const std::vector<BigFloat>& zcheck, const RecoveryConfig& cfg) {
    return recover_phase_retrieval_hp(xs, zcheck, cfg);
}

RecoveryOutcome recover_phase_retrieval_rescaled_hp(const std::vector<std::vector<double>>& xs,
                                                    const std::vector<BigFloat>& y,
                                                    const RecoveryConfig& cfg) {
    cfg.validate();
    const long prec = cfg.precision_bits;
    BigFloat ss(0.0, prec);
    for (const auto& yi : y) ss += yi * yi;
    if (y.empty() || !(ss > BigFloat(0.0, prec)))
        return recover_phase_retrieval_hp(xs, y, cfg);
    BigFloat scale = sqrt(ss / BigFloat(static_cast<double>(y.size()), prec));
    std::vector<BigFloat> scaled;
    scaled.reserve(y.size());
    for (const auto& yi : y) scaled.push_back(yi / scale);
    RecoveryOutcome out = recover_phase_retrieval_hp(xs, scaled, cfg);
    if (out.status != RecoveryStatus::success) return out;

    // The labels are unwrapped magnitudes, so once the sign of each inner
    // product is settled the hidden vector solves a linear system on the
    // original labels. Re-solving there avoids the double rounding a
    // post-hoc scale-back of w_scaled would introduce.
    const int d = static_cast<int>(xs.size()) - 1;
    const double back = scale.to_double();
    std::vector<std::vector<BigFloat>> a(d, std::vector<BigFloat>(d, BigFloat(prec)));
    std::vector<BigFloat> rhs(d, BigFloat(prec));
    for (int r = 0; r < d; ++r) {
        double dot = 0.0;
        for (int c = 0; c < d; ++c) {
            a[r][c] = BigFloat(xs[r + 1][c], prec);
            dot += out.w_scaled[c] * xs[r + 1][c];
        }
        rhs[r] = dot < 0.0 ? -y[r + 1] : y[r + 1];
    }
    std::vector<BigFloat> w;
    try {
        w = solve_square(std::move(a), std::move(rhs), prec);
    } catch (const SingularSystemError&) {
        for (double& c : out.w_scaled) c *= back;
        return out;
    }
    BigFloat norm_sq(prec);
    for (const auto& c : w) norm_sq += c * c;
    const double norm = sqrt(norm_sq).to_double();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        for (double& c : out.w_scaled) c *= back;
        return out;
    }
    for (int i = 0; i < d; ++i) {
        out.w_scaled[i] = w[i].to_double();
        out.w_unit[i] = out.w_scaled[i] / norm;
    }
    return out;
}

double recovery_error(const std::vector<double>& w_hat, const std::vector<double>& w_true) {
    if (w_hat.size() != w_true.size())
        throw std::invalid_argument("vectors must share a dimension");
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < w_hat.size(); ++i) {
        plus += (w_hat[i] - w_true[i]) * (w_hat[i] - w_true[i]);
        minus += (w_hat[i] + w_true[i]) * (w_hat[i] + w_true[i]);
    }
    return std::sqrt(std::min(plus, minus));
}

HpBatch hp_batch_cosine(const std::vector<double>& w, double gamma, int count, Rng& rng,
                        long prec, const NoiseModel& noise) {
    if (w.empty()) throw std::invalid_argument("dimension must be positive");
    if (count < 1) throw std::invalid_argument("count must be positive");
    const int d = static_cast<int>(w.size());
    BigFloat two_pi = BigFloat::pi(prec);
    two_pi.mul_2si(1);
    HpBatch batch;
    batch.xs.reserve(count);
    batch.z.reserve(count);
    for (int s = 0; s < count; ++s) {
        std::vector<double> x(d);
        for (int i = 0; i < d; ++i) x[i] = rng.gaussian();
        const double xi = noise.draw(rng);
        BigFloat arg = BigFloat(gamma, prec) * dot_bf(w, x, prec);
        batch.z.push_back(cos(two_pi * arg) + BigFloat(xi, prec));
        batch.xs.push_back(std::move(x));
    }
    return batch;
}

HpBatch hp_batch_phase_retrieval(const std::vector<double>& w, int count, Rng& rng, long prec,
                                 const NoiseModel& noise) {
    if (w.empty()) throw std::invalid_argument("dimension must be positive");
    if (count < 1) throw std::invalid_argument("count must be positive");
    const int d = static_cast<int>(w.size());
    HpBatch batch;
    batch.xs.reserve(count);
    batch.z.reserve(count);
    for (int s = 0; s < count; ++s) {
        std::vector<double> x(d);
        for (int i = 0; i < d; ++i) x[i] = rng.gaussian();
        const double xi = noise.draw(rng);
        batch.z.push_back(abs(dot_bf(w, x, prec)) + BigFloat(xi, prec));
        batch.xs.push_back(std::move(x));
    }
    return batch;
}

HpBatch hp_batch_clwe(const std::vector<double>& w, double gamma, double beta, int count,
                      Rng& rng, long prec) {
    if (w.empty()) throw std::invalid_argument("dimension must be positive");
    if (count < 1) throw std::invalid_argument("count must be positive");
    const int d = static_cast<int>(w.size());
    HpBatch batch;
    batch.xs.reserve(count);
    batch.z.reserve(count);
    for (int s = 0; s < count; ++s) {
        std::vector<double> x(d);
        for (int i = 0; i < d; ++i) x[i] = rng.gaussian();
        const double xi = beta * rng.gaussian();
        BigFloat t = BigFloat(gamma, prec) * dot_bf(w, x, prec) + BigFloat(xi, prec);
        batch.z.push_back(abs(mod_one_bf(t)));
        batch.xs.push_back(std::move(x));
    }
    return batch;
}

HpBatch hp_batch_null(int d, int count, Rng& rng, long prec) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (count < 1) throw std::invalid_argument("count must be positive");
    HpBatch batch;
    batch.xs.reserve(count);
    batch.z.reserve(count);
    for (int s = 0; s < count; ++s) {
        std::vector<double> x(d);
        for (int i = 0; i < d; ++i) x[i] = rng.gaussian();
        batch.z.emplace_back(rng.uniform(-0.5, 0.5), prec);
        batch.xs.push_back(std::move(x));
    }
    return batch;
}

}  // namespace cosrec
