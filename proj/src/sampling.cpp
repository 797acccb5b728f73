#include "cosrec/sampling.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace cosrec {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> gaussian_vec(Rng& rng, int d) {
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.gaussian();
    return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

void Instance::validate() const {
    if (d < 1) throw std::invalid_argument("instance: d must be >= 1");
    if (w.size() != static_cast<std::size_t>(d))
        throw std::invalid_argument("instance: w has wrong length");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("instance: gamma must be positive");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("instance: beta must be >= 0");
    double n2 = dot(w, w);
    if (std::fabs(std::sqrt(n2) - 1.0) > 0x1.0p-48)
        throw std::invalid_argument("instance: w must be a unit vector");
}

double NoiseModel::draw(Rng& rng) const {
    switch (kind) {
        case Kind::none:
            return 0.0;
        case Kind::uniform_bounded:
            return level * (2.0 * rng.uniform01() - 1.0);
        case Kind::constant:
            return level;
        case Kind::gaussian:
            return level * rng.gaussian();
    }
    return 0.0;
}

NoiseModel parse_noise(const std::string& text) {
    if (text == "none" || text.empty()) return NoiseModel::none();
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    double level = 0.0;
    if (colon != std::string::npos) level = std::stod(text.substr(colon + 1));
    if (kind == "uniform") return NoiseModel::uniform_bounded(level);
    if (kind == "constant") return NoiseModel::constant(level);
    if (kind == "gaussian") return NoiseModel::gaussian(level);
    throw std::invalid_argument("unknown noise model: " + text);
}

double mod_one(double t) {
    if (!std::isfinite(t)) throw std::domain_error("mod_one: input must be finite");
    double r = t - std::floor(t + 0.5);
    // floor(t+0.5) can land exactly on t+0.5, giving r = -1/2 which is already
    // the canonical representative; r = +1/2 cannot occur.
    return r;
}

std::vector<double> sample_hidden_direction(Rng& rng, int d) {
    if (d < 1) throw std::invalid_argument("sample_hidden_direction: d must be >= 1");
    for (;;) {
        std::vector<double> g = gaussian_vec(rng, d);
        double n = std::sqrt(dot(g, g));
        if (n > 1e-150) {
            for (double& v : g) v /= n;
            return g;
        }
    }
}

LabeledSample sample_cosine(const Instance& inst, Rng& rng, const NoiseModel& noise) {
    LabeledSample s;
    s.x = gaussian_vec(rng, inst.d);
    s.z = std::cos(kTwoPi * inst.gamma * dot(inst.w, s.x)) + noise.draw(rng);
    return s;
}

LabeledSample sample_clwe(const Instance& inst, Rng& rng) {
    LabeledSample s;
    s.x = gaussian_vec(rng, inst.d);
    double xi = inst.beta * rng.gaussian();
    s.z = mod_one(inst.gamma * dot(inst.w, s.x) + xi);
    return s;
}

LabeledSample sample_null(Rng& rng, int d) {
    if (d < 1) throw std::invalid_argument("sample_null: d must be >= 1");
    LabeledSample s;
    s.x = gaussian_vec(rng, d);
    s.z = rng.uniform01() - 0.5;
    return s;
}

LabeledSample sample_phaseless_clwe(const Instance& inst, Rng& rng, const NoiseModel& noise) {
    LabeledSample s;
    s.x = gaussian_vec(rng, inst.d);
    s.z = std::fabs(mod_one(inst.gamma * dot(inst.w, s.x) + noise.draw(rng)));
    return s;
}

LabeledSample sample_phase_retrieval(const std::vector<double>& w, double beta, Rng& rng,
                                     const NoiseModel& noise) {
    if (w.empty()) throw std::invalid_argument("sample_phase_retrieval: empty w");
    (void)beta;  // noise bound; the model's own level is the generator's truth
    LabeledSample s;
    s.x = gaussian_vec(rng, static_cast<int>(w.size()));
    s.z = std::fabs(dot(w, s.x)) + noise.draw(rng);
    return s;
}

std::string to_json_line(const LabeledSample& s, const SampleMeta& meta) {
    nlohmann::ordered_json j;
    j["x"] = s.x;
    j["z"] = s.z;
    j["meta"] = {{"dist", meta.dist}, {"gamma", meta.gamma}, {"beta", meta.beta}, {"seed", meta.seed}};
    return j.dump();
}

void write_json_lines(std::ostream& os, const std::vector<LabeledSample>& batch,
                      const SampleMeta& meta) {
    for (const auto& s : batch) os << to_json_line(s, meta) << '\n';
}

}  // namespace cosrec
