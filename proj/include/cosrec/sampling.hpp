#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cosrec/rng.hpp"

namespace cosrec {

// Hidden direction plus the scaling/noise parameters of one problem instance.
// w must be a unit vector (samplers assume it; validate() enforces it to
// within 2^-48).
struct Instance {
    int d = 0;
    std::vector<double> w;
    double gamma = 1.0;
    double beta = 0.0;

    void validate() const;  // throws std::invalid_argument on bad fields
};

struct LabeledSample {
    std::vector<double> x;
    double z = 0.0;
};

// Additive label noise. `level` is the bound for the bounded kinds and the
// standard deviation for gaussian.
struct NoiseModel {
    enum class Kind { none, uniform_bounded, constant, gaussian };

    Kind kind = Kind::none;
    double level = 0.0;

    static NoiseModel none() { return {Kind::none, 0.0}; }
    static NoiseModel uniform_bounded(double beta) { return {Kind::uniform_bounded, beta}; }
    static NoiseModel constant(double beta) { return {Kind::constant, beta}; }
    static NoiseModel gaussian(double sigma) { return {Kind::gaussian, sigma}; }

    bool bounded() const { return kind != Kind::gaussian; }
    double draw(Rng& rng) const;
};

NoiseModel parse_noise(const std::string& text);  // "none" | "uniform:B" | "constant:B" | "gaussian:S"

// Representative of t mod 1 in [-1/2, 1/2).
double mod_one(double t);

// Uniform point on the unit sphere in R^d (normalized Gaussian vector).
std::vector<double> sample_hidden_direction(Rng& rng, int d);

// x ~ N(0, I_d), z = cos(2*pi*gamma*<w,x>) + noise.
LabeledSample sample_cosine(const Instance& inst, Rng& rng, const NoiseModel& noise);

// x ~ N(0, I_d), z = (gamma*<w,x> + xi) mod 1 with xi ~ N(0, beta).
LabeledSample sample_clwe(const Instance& inst, Rng& rng);

// x ~ N(0, I_d), z ~ U[-1/2, 1/2), independent.
LabeledSample sample_null(Rng& rng, int d);

// x ~ N(0, I_d), z = |(gamma*<w,x> + noise) mod 1| in [0, 1/2].
LabeledSample sample_phaseless_clwe(const Instance& inst, Rng& rng, const NoiseModel& noise);

// x ~ N(0, I_d), z = |<w,x>| + noise; w need not be unit length, beta only
// reported in metadata.
LabeledSample sample_phase_retrieval(const std::vector<double>& w, double beta, Rng& rng,
                                     const NoiseModel& noise);

struct SampleMeta {
    std::string dist;
    double gamma = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
};

// One sample as a single JSON line: {"x":[...],"z":...,"meta":{...}}.
std::string to_json_line(const LabeledSample& s, const SampleMeta& meta);
void write_json_lines(std::ostream& os, const std::vector<LabeledSample>& batch,
                      const SampleMeta& meta);

}  // namespace cosrec
