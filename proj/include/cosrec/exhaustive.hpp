#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cosrec/sampling.hpp"

namespace cosrec {

struct SphereCover {
    int d = 0;
    double eps = 0.0;
    std::vector<std::vector<double>> points;  // unit vectors
};

// The uncapped construction needs ceil(2 N log N) points with N = ceil((1+4/eps)^d),
// which overflows quickly; the error reports how many points the request implies.
struct CoverSizeError : std::runtime_error {
    CoverSizeError(const std::string& what, double log10_required)
        : std::runtime_error(what), log10_required(log10_required) {}
    double log10_required;
};

// count = min(cap, ceil(2 N log N)); without a cap, oversized requests refuse
SphereCover random_sphere_cover(int d, double eps, Rng& rng,
                                std::optional<std::uint64_t> cap = std::nullopt);

// largest distance from any of `probes` random unit vectors to its nearest
// cover point; reports what radius a capped cover actually achieves
double cover_effective_radius(const SphereCover& cover, int probes, Rng& rng);

// T_v = (1/m) sum_i 1[|gamma<v,x_i> - z_i mod 1| <= threshold]
//              + 1[|gamma<v,x_i> + z_i mod 1| <= threshold]
double score_direction(const std::vector<double>& v, const std::vector<LabeledSample>& samples,
                       double gamma, double threshold);

using ScoreTable = std::vector<double>;  // per-candidate T_v, each in [0, 2]

ScoreTable score_cover(const SphereCover& cover, const std::vector<LabeledSample>& samples,
                       double gamma, double threshold);
ScoreTable score_cover_serial(const SphereCover& cover, const std::vector<LabeledSample>& samples,
                              double gamma, double threshold);

// lowest index among maximal scores
std::size_t argmax_score(const ScoreTable& scores);

// m = ceil(64 d log(1/eps))
long default_sample_count(int d, double eps);

// argmax_v T_v over the cover at threshold 3*noise_bound (floored at 1e-9 so a
// zero-noise run still accepts the label-roundtrip error)
std::vector<double> recover_exhaustive_phaseless(const std::vector<LabeledSample>& samples,
                                                 double gamma, double noise_bound,
                                                 const SphereCover& cover);
std::vector<double> recover_exhaustive_phaseless(const std::vector<LabeledSample>& samples,
                                                 double gamma, double noise_bound, Rng& rng,
                                                 std::optional<std::uint64_t> cover_cap);

// cosine labels: map z through arccos_phase, then the phaseless core with
// tau = arccos(1-beta)/(2pi)
std::vector<double> recover_exhaustive_cosine(const std::vector<LabeledSample>& samples,
                                              double gamma, double beta, const SphereCover& cover);
std::vector<double> recover_exhaustive_cosine(const std::vector<LabeledSample>& samples,
                                              double gamma, double beta, Rng& rng,
                                              std::optional<std::uint64_t> cover_cap);

}  // namespace cosrec
