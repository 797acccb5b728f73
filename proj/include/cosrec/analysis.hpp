#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cosrec/recovery.hpp"
#include "cosrec/sampling.hpp"

namespace cosrec {

// ---------------------------------------------------------------------------
// Population loss of one cosine neuron against another, via the Hermite
// expansion of cos(2*pi*gamma*z) in Gaussian space.
// ---------------------------------------------------------------------------

// E[h_k(Z) cos(2*pi*gamma*Z_rho)] for the normalized (probabilist's) Hermite
// family and a standard Gaussian pair with correlation rho; zero for odd k.
double hermite_cosine_coefficient(int k, double rho, double gamma);

struct HermiteLossParams {
    double rho = 0.0;    // <w,w'> in [-1,1]
    double gamma = 1.0;  // frequency
    int kmax = 2;        // even truncation order >= 2

    // kmax picked so the Poisson(4*pi^2*gamma^2) tail beyond it is < 1e-13
    static HermiteLossParams make(double rho, double gamma);
    void validate() const;
};

// L(w') = 2 * sum over even k <= kmax of (2*pi*gamma)^(2k)/k! *
// exp(-4*pi^2*gamma^2) * (1 - rho^k). Even powers only, so L(rho) = L(-rho)
// bit for bit.
double population_loss_closed_form(const HermiteLossParams& params);

// Var(cos(2*pi*gamma*Z)) = 1/2 + (1/2)exp(-8*pi^2*gamma^2) - exp(-4*pi^2*gamma^2):
// the loss of the best constant predictor.
double trivial_loss(double gamma);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

MonteCarloEstimate population_loss_monte_carlo(const std::vector<double>& w,
                                               const std::vector<double>& w_prime, double gamma,
                                               long n, Rng& rng);

// true iff the closed-form loss at rho beats the constant predictor by 1/12
bool parameter_recovery_edge_check(double rho, double gamma);

// ---------------------------------------------------------------------------
// Periodic Gaussian density Psi_s: N(0, s^2) wrapped modulo 1.
// ---------------------------------------------------------------------------

// Sum over k in [-kmax, kmax] of the shifted Gaussian density at z - k;
// kmax = 0 picks the smallest truncation with tail below 1e-14.
double periodic_gaussian_density(double s, double z, int kmax = 0);

struct PeriodicGaussianBounds {
    double peak_bound;               // Psi_s(z) <= this everywhere
    double uniform_deviation_bound;  // |Psi_s(z) - 1| <= this everywhere
};

PeriodicGaussianBounds periodic_gaussian_bounds(double s);

// (1/t) * sqrt(2/pi) * exp(-t^2/2), a bound on P(|Z| >= t) for standard Z
double mills_tail_bound(double t);

// ---------------------------------------------------------------------------
// Weak learning edge and the CLWE detection test.
// ---------------------------------------------------------------------------

using Hypothesis = std::function<double(const std::vector<double>&)>;

double empirical_squared_loss(const Hypothesis& h, const std::vector<LabeledSample>& data);

// L_hat(best_constant) - L_hat(h) on the given data
double weak_learning_edge(const Hypothesis& h, const std::vector<LabeledSample>& data,
                          double best_constant);

struct DetectionOutcome {
    bool yes = false;
    bool learner_failed = false;  // learner threw or produced no hypothesis
    double loss_unknown = 0.0;    // held-out loss on the unknown source
    double loss_null = 0.0;       // loss on fresh null samples
};

// Draws 2m samples from the unknown source and m from the null source, maps
// every label through cos(2*pi*z), trains on the first m unknown samples, and
// answers YES iff the held-out loss undercuts the null loss by eps/4.
// Hypothesis outputs are clamped to [-1,1] before scoring. A learner that
// throws or returns an empty hypothesis yields NO with learner_failed set.
using SampleSource = std::function<LabeledSample()>;
using Learner = std::function<Hypothesis(const std::vector<LabeledSample>&)>;
DetectionOutcome clwe_detection_test(const Learner& learner, const SampleSource& unknown_source,
                                     const SampleSource& null_source, long m, double eps);

// Same protocol with labels carried at extended precision, for noise rates
// far below double resolution. The label map runs at each label's precision.
using HpSource = std::function<HpBatch(long)>;
using HpLearner = std::function<Hypothesis(const HpBatch&)>;
DetectionOutcome clwe_detection_test(const HpLearner& learner, const HpSource& unknown_source,
                                     const HpSource& null_source, long m, double eps);

// Learner that feeds the first d+1 training samples to the lattice recovery
// pipeline and predicts cos(2*pi*<w_scaled, x>); empty on recovery failure.
HpLearner make_recovery_learner(const RecoveryConfig& cfg);

// ---------------------------------------------------------------------------
// One-hidden-layer ReLU approximant of the cosine class.
// ---------------------------------------------------------------------------

struct ReluUnit {
    double alpha;  // output weight
    double beta;   // breakpoint
};

struct ReluNetwork {
    double a = 0.0;  // bias; the network is a + sum alpha_i * relu(z - beta_i)
    std::vector<ReluUnit> units;
    double L = 0.0;    // Lipschitz bound of the target
    double R = 0.0;    // approximation interval is [-R, R]
    double eta = 0.0;  // uniform error target on the interval

    double evaluate(double z) const;
    void validate() const;  // |alpha_i| <= 2L, unit count <= 3*R*L/eta
};

// Uniform-grid interpolant of cos(2*pi*z) on [-R, R] with L = 2*pi,
// eta = sqrt(eps/2), R = ceil(gamma*sqrt(2*log(8/eps))) + 1/2, grid spacing
// <= eta/L. Constant outside the interval at the boundary value cos(2*pi*R);
// the Gaussian tail beyond R absorbs the mismatch with the hard-clipped
// target, keeping the population loss below eps.
ReluNetwork relu_approximate_cosine(double gamma, double eps);

// Upper estimate of E[(cos(2*pi*z) - net(z))^2] for z ~ N(0, gamma^2):
// per-segment Gauss-Legendre quadrature on [-R, R] plus the worst-case bound
// 4*P(|z| > R) for the tails.
double relu_gaussian_squared_loss(const ReluNetwork& net, double gamma);

// ---------------------------------------------------------------------------
// Phase retrieval from d samples: the 2^d-point feasible set and the
// spurious-solution probe.
// ---------------------------------------------------------------------------

// Solves X w' = diag(signs) y. X has rows x_i^T; signs are +-1.
std::vector<double> sign_flip_solution(const std::vector<std::vector<double>>& X,
                                       const std::vector<double>& y,
                                       const std::vector<int>& signs);

// All 2^d solutions of |X w'| = y, ordered by sign mask (bit i set flips
// sample i; mask 0 first). Guarded at d <= 16.
std::vector<std::vector<double>> phase_retrieval_feasible_set(
    const std::vector<std::vector<double>>& X, const std::vector<double>& y);

// Extreme eigenvalues of A^T A for A = X^{-1} diag(-1,1,...,1) X, via the
// closed form -1 + 2*eta^2 -+ 2*eta*sqrt(eta^2-1) with eta = |x_1| * |col_1
// of X^{-1}|. Returns (min, max).
std::pair<double, double> sign_flip_extreme_eigenvalues(
    const std::vector<std::vector<double>>& X);

struct SpuriousProbeResult {
    double frequency = 0.0;
    double ci_low = 0.0;  // 95% Wilson interval
    double ci_high = 0.0;
    long successes = 0;
    long trials = 0;
};

// Draws X Gaussian and w with uniform direction and |w| ~ U[1,2], flips the
// sign of the first measurement, and counts how often the flipped solution
// w~ lands in 1 <= |w~| < |w|: a spurious answer no estimator can rule out.
SpuriousProbeResult spurious_norm_probe(int d, long trials, Rng& rng);

}  // namespace cosrec
