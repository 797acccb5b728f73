#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "cosrec/bigfloat.hpp"
#include "cosrec/intrel.hpp"
#include "cosrec/sampling.hpp"

namespace cosrec {

struct SingularSystemError : std::runtime_error {
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

// Truncation bits N, embedding scale M, and the working mantissa width.
// precision_bits >= N + 64 keeps the arithmetic error of the pipeline below
// the 2^-N truncation grid, so truncation is the only error that reaches the
// relation lattice.
struct RecoveryConfig {
    long N = 128;
    mpz_class M = 0;  // 0 picks 2^(3d) at call time
    long precision_bits = 192;
    mpq_class delta = mpq_class(3, 4);

    static RecoveryConfig desk(int d);   // N = max(128, 32d)
    static RecoveryConfig paper(int d);  // N = ceil(d^3 (ln d)^2)

    mpz_class scale_for(int d) const;
    void validate() const;  // throws std::invalid_argument
};

enum class RecoveryStatus { success, fail_singular, fail_relation_shape };
const char* to_string(RecoveryStatus s);

struct RecoveryOutcome {
    RecoveryStatus status = RecoveryStatus::fail_relation_shape;
    std::vector<double> w_scaled;           // ~ +-(gamma w), empty unless success
    std::vector<double> w_unit;             // normalized, empty unless success
    std::vector<int> signs;                 // sign pattern, entries +-1
    std::vector<mpz_class> offsets;         // integer phase offsets
    std::optional<IntegerRelation> relation;
    double lattice_ms = 0.0;                // wall time of the relation-detection step
};

// clamp z into [-1,1], then arccos(z)/(2pi) in [0, 1/2]
double arccos_phase(double z);

// lambda_1 = 1 and (lambda_2..lambda_{d+1}) = -X^{-1} x_1 for X = [x_2..x_{d+1}],
// so that sum_i lambda_i x_i = 0. Throws SingularSystemError when pivoting
// detects rank deficiency (pivot below 2^(-precision_bits/2)).
std::vector<BigFloat> solve_lambda(const std::vector<std::vector<double>>& xs,
                                   long precision_bits);

// Core pipeline on extracted phases in [0, 1/2]: truncate (lambda_i) and
// (lambda_i * phase_i) to N bits, detect an integer relation on the
// (2d+3)-vector, gcd-normalize the sign block, then solve the square system
// through samples 2..d+1.
RecoveryOutcome recover_from_phases(const std::vector<std::vector<double>>& xs,
                                    const std::vector<BigFloat>& phases,
                                    const RecoveryConfig& cfg);

RecoveryOutcome recover_cosine(const std::vector<LabeledSample>& samples,
                               const RecoveryConfig& cfg);
// label transform z <- cos(2 pi y), then the cosine pipeline
RecoveryOutcome recover_phase_retrieval(const std::vector<LabeledSample>& samples,
                                        const RecoveryConfig& cfg);
// label transform z <- cos(2 pi zcheck), then the cosine pipeline
RecoveryOutcome recover_clwe(const std::vector<LabeledSample>& samples,
                             const RecoveryConfig& cfg);

// Same adapters with labels carried at full working precision. Double labels
// limit the usable truncation depth to roughly the double mantissa; these
// variants let seeded experiments exercise the deep-N regime.
RecoveryOutcome recover_cosine_hp(const std::vector<std::vector<double>>& xs,
                                  const std::vector<BigFloat>& z, const RecoveryConfig& cfg);
RecoveryOutcome recover_phase_retrieval_hp(const std::vector<std::vector<double>>& xs,
                                           const std::vector<BigFloat>& y,
                                           const RecoveryConfig& cfg);
RecoveryOutcome recover_clwe_hp(const std::vector<std::vector<double>>& xs,
                                const std::vector<BigFloat>& zcheck, const RecoveryConfig& cfg);

// Phase-retrieval adapter with an RMS front end: labels are divided by
// sqrt(mean y_i^2) before the wrap and the recovered vector is scaled back.
// Keeps the wrap offsets at unit scale whatever ||w|| is, which is what the
// truncation depth budget actually constrains. relation/offsets in the
// outcome refer to the rescaled labels.
RecoveryOutcome recover_phase_retrieval_rescaled_hp(const std::vector<std::vector<double>>& xs,
                                                    const std::vector<BigFloat>& y,
                                                    const RecoveryConfig& cfg);

// min(||w_hat - w||, ||w_hat + w||)
double recovery_error(const std::vector<double>& w_hat, const std::vector<double>& w_true);

// Covariates drawn as doubles exactly like the double samplers; labels
// evaluated at `prec` bits. Noise draws still come from the double generator.
struct HpBatch {
    std::vector<std::vector<double>> xs;
    std::vector<BigFloat> z;
};

HpBatch hp_batch_cosine(const std::vector<double>& w, double gamma, int count, Rng& rng,
                        long prec, const NoiseModel& noise = NoiseModel::none());
HpBatch hp_batch_phase_retrieval(const std::vector<double>& w, int count, Rng& rng, long prec,
                                 const NoiseModel& noise = NoiseModel::none());
HpBatch hp_batch_clwe(const std::vector<double>& w, double gamma, double beta, int count,
                      Rng& rng, long prec);
HpBatch hp_batch_null(int d, int count, Rng& rng, long prec);

}  // namespace cosrec
