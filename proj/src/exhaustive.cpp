#include "cosrec/exhaustive.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "cosrec/recovery.hpp"

namespace cosrec {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kZeroNoiseFloor = 1e-9;
// guarantee preconditions; violations warn, they do not refuse
constexpr double kPhaselessBetaCap = 1.0 / 400.0;
const double kCosineBetaCap = 1.0 - std::cos(3.14159265358979323846 / 200.0);

double indicator_pair(double proj, double z, double threshold) {
    double t = 0.0;
    if (std::fabs(mod_one(proj - z)) <= threshold) t += 1.0;
    if (std::fabs(mod_one(proj + z)) <= threshold) t += 1.0;
    return t;
}

void warn_once(std::atomic<bool>& flag, const char* message) {
    if (!flag.exchange(true)) std::fprintf(stderr, "%s\n", message);
}

}  // namespace

SphereCover random_sphere_cover(int d, double eps, Rng& rng,
                                std::optional<std::uint64_t> cap) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("cover radius must lie in (0,1)");
    const long double n_raw = std::ceil(std::pow(1.0L + 4.0L / eps, d));
    const long double need = std::ceil(2.0L * n_raw * std::log(n_raw));
    const long double log10_need =
        (long double)d * std::log10(1.0L + 4.0L / eps) + std::log10(2.0L * std::log(n_raw));
    constexpr long double kUncappedLimit = 5e7L;
    if (!cap && !(need <= kUncappedLimit)) {
        throw CoverSizeError("uncapped cover needs about 10^" +
                                 std::to_string(double(log10_need)) +
                                 " points; pass a cap or widen eps",
                             double(log10_need));
    }
    std::uint64_t count = static_cast<std::uint64_t>(std::min<long double>(
        need, cap ? (long double)*cap : kUncappedLimit));
    SphereCover cover;
    cover.d = d;
    cover.eps = eps;
    cover.points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) cover.points.push_back(sample_hidden_direction(rng, d));
    return cover;
}

double cover_effective_radius(const SphereCover& cover, int probes, Rng& rng) {
    if (cover.points.empty()) throw std::invalid_argument("empty cover");
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        std::vector<double> u = sample_hidden_direction(rng, cover.d);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : cover.points) {
            double dist = 0.0;
            for (int i = 0; i < cover.d; ++i) dist += (u[i] - c[i]) * (u[i] - c[i]);
            best = std::min(best, dist);
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

double score_direction(const std::vector<double>& v, const std::vector<LabeledSample>& samples,
                       double gamma, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
    if (samples.empty()) throw std::invalid_argument("need at least one sample");
    double total = 0.0;
    for (const auto& s : samples) {
        double proj = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) proj += gamma * v[i] * s.x[i];
        total += indicator_pair(proj, s.z, threshold);
    }
    return total / double(samples.size());
}

ScoreTable score_cover_serial(const SphereCover& cover, const std::vector<LabeledSample>& samples,
                              double gamma, double threshold) {
    ScoreTable scores(cover.points.size());
    for (std::size_t c = 0; c < cover.points.size(); ++c)
        scores[c] = score_direction(cover.points[c], samples, gamma, threshold);
    return scores;
}

ScoreTable score_cover(const SphereCover& cover, const std::vector<LabeledSample>& samples,
                       double gamma, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
    if (samples.empty()) throw std::invalid_argument("need at least one sample");
    ScoreTable scores(cover.points.size());
    const std::int64_t n = static_cast<std::int64_t>(cover.points.size());
    // candidates partition across threads and each slot is written once, so
    // the table is identical to the serial one for any thread count
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < n; ++c) {
        const auto& v = cover.points[c];
        double total = 0.0;
        for (const auto& s : samples) {
            double proj = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) proj += gamma * v[i] * s.x[i];
            total += indicator_pair(proj, s.z, threshold);
        }
        scores[c] = total / double(samples.size());
    }
    return scores;
}

std::size_t argmax_score(const ScoreTable& scores) {
    if (scores.empty()) throw std::invalid_argument("empty score table");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

long default_sample_count(int d, double eps) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    return static_cast<long>(std::ceil(64.0 * d * std::log(1.0 / eps)));
}

std::vector<double> recover_exhaustive_phaseless(const std::vector<LabeledSample>& samples,
                                                 double gamma, double noise_bound,
                                                 const SphereCover& cover) {
    if (cover.points.empty()) throw std::invalid_argument("empty cover");
    static std::atomic<bool> warned{false};
    if (noise_bound >= kPhaselessBetaCap)
        warn_once(warned, "phaseless noise bound >= 1/400: accuracy guarantee void");
    const double threshold = std::max(3.0 * noise_bound, kZeroNoiseFloor);
    ScoreTable scores = score_cover(cover, samples, gamma, threshold);
    return cover.points[argmax_score(scores)];
}

std::vector<double> recover_exhaustive_phaseless(const std::vector<LabeledSample>& samples,
                                                 double gamma, double noise_bound, Rng& rng,
                                                 std::optional<std::uint64_t> cover_cap) {
    if (!(noise_bound > 0.0)) throw std::invalid_argument("cover construction needs noise_bound > 0");
    if (samples.empty()) throw std::invalid_argument("need at least one sample");
    const int d = static_cast<int>(samples.front().x.size());
    SphereCover cover = random_sphere_cover(d, noise_bound / gamma, rng, cover_cap);
    return recover_exhaustive_phaseless(samples, gamma, noise_bound, cover);
}

namespace {

std::vector<LabeledSample> to_phaseless(const std::vector<LabeledSample>& samples) {
    std::vector<LabeledSample> out(samples);
    for (auto& s : out) s.z = arccos_phase(s.z);
    return out;
}

double phase_noise_bound(double beta) { return std::acos(1.0 - beta) / kTwoPi; }

}  // namespace

std::vector<double> recover_exhaustive_cosine(const std::vector<LabeledSample>& samples,
                                              double gamma, double beta,
                                              const SphereCover& cover) {
    static std::atomic<bool> warned{false};
    if (beta > kCosineBetaCap)
        warn_once(warned, "cosine noise bound > 1-cos(pi/200): accuracy guarantee void");
    return recover_exhaustive_phaseless(to_phaseless(samples), gamma, phase_noise_bound(beta),
                                        cover);
}

std::vector<double> recover_exhaustive_cosine(const std::vector<LabeledSample>& samples,
                                              double gamma, double beta, Rng& rng,
                                              std::optional<std::uint64_t> cover_cap) {
    static std::atomic<bool> warned{false};
    if (beta > kCosineBetaCap)
        warn_once(warned, "cosine noise bound > 1-cos(pi/200): accuracy guarantee void");
    return recover_exhaustive_phaseless(to_phaseless(samples), gamma, phase_noise_bound(beta), rng,
                                        cover_cap);
}

}  // namespace cosrec
