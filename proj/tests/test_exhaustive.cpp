#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cosrec/exhaustive.hpp"
#include "cosrec/recovery.hpp"

using namespace cosrec;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double sq_recovery_error(const std::vector<double>& a, const std::vector<double>& b) {
    double e = recovery_error(a, b);
    return e * e;
}

}  // namespace

TEST_CASE("cover size follows the construction formula") {
    Rng rng(14001);
    SphereCover one = random_sphere_cover(1, 0.5, rng);
    CHECK(one.points.size() == 40);  // N=9, ceil(2*9*ln 9)
    bool plus = false, minus = false;
    for (const auto& p : one.points) {
        REQUIRE(p.size() == 1);
        CHECK(std::fabs(std::fabs(p[0]) - 1.0) <= std::ldexp(1.0, -40));
        (p[0] > 0 ? plus : minus) = true;
    }
    CHECK(plus);
    CHECK(minus);

    SphereCover two = random_sphere_cover(2, 0.5, rng);
    CHECK(two.points.size() == 712);  // N=81, ceil(162*ln 81)
    for (const auto& p : two.points)
        CHECK(std::fabs(std::hypot(p[0], p[1]) - 1.0) <= std::ldexp(1.0, -40));

    SphereCover capped = random_sphere_cover(2, 0.5, rng, 100);
    CHECK(capped.points.size() == 100);

    CHECK_THROWS_AS(random_sphere_cover(2, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(random_sphere_cover(2, 1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(random_sphere_cover(0, 0.5, rng), std::invalid_argument);
}

TEST_CASE("oversized cover refuses with a count report") {
    Rng rng(14002);
    try {
        random_sphere_cover(10, 0.01, rng);
        FAIL("expected refusal");
    } catch (const CoverSizeError& e) {
        CHECK(e.log10_required > 20.0);
        CHECK(std::string(e.what()).find("10^") != std::string::npos);
    }
    // same request goes through with a cap
    SphereCover c = random_sphere_cover(10, 0.01, rng, 50);
    CHECK(c.points.size() == 50);
}

TEST_CASE("random cover covers the circle") {
    Rng rng(14003);
    SphereCover cover = random_sphere_cover(2, 0.5, rng);
    Rng probe_rng(14004);
    CHECK(cover_effective_radius(cover, 10000, probe_rng) <= 0.5);
}

TEST_CASE("covering numbers sandwich the minimal grid at d=2") {
    const double eps = 0.5;
    // smallest uniform angle grid whose covering radius (chord) is <= eps
    int k = 1;
    while (2.0 * std::sin(3.14159265358979323846 / (2.0 * k)) > eps) ++k;
    CHECK(k == 7);
    CHECK(std::pow(1.0 / eps, 2) <= double(k));
    CHECK(double(k) <= std::pow(2.0 / eps + 1.0, 2));
}

TEST_CASE("scoring pinned examples") {
    std::vector<LabeledSample> samples(1);
    samples[0] = {{1.0, 0.0}, 0.2};
    std::vector<double> v = {1.0, 0.0};
    // proj = 2: both mod-1 distances are 0.2
    CHECK(score_direction(v, samples, 2.0, 0.25) == 2.0);
    CHECK(score_direction(v, samples, 2.0, 0.21) == 2.0);
    CHECK(score_direction(v, samples, 2.0, 0.1) == 0.0);

    samples.push_back({{0.0, 1.0}, 0.1});
    // second sample: proj = 0, distances both 0.1; averages over samples
    CHECK(score_direction(v, samples, 2.0, 0.25) == doctest::Approx(2.0));
    CHECK(score_direction(v, samples, 2.0, 0.15) == doctest::Approx(1.0));

    CHECK_THROWS_AS(score_direction(v, samples, 2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(score_direction(v, {}, 2.0, 0.1), std::invalid_argument);
}

TEST_CASE("truth always fires one indicator at zero noise") {
    const int d = 3;
    const double gamma = 3.0;
    Rng rng(15001);
    std::vector<double> w = sample_hidden_direction(rng, d);
    Instance inst{d, w, gamma, 0.0};
    std::vector<LabeledSample> samples;
    for (int i = 0; i < 50; ++i)
        samples.push_back(sample_phaseless_clwe(inst, rng, NoiseModel::none()));
    double t = score_direction(w, samples, gamma, 1e-9);
    CHECK(t >= 1.0);
    CHECK(t <= 2.0);

    // z = 0 and an orthogonal direction fire both indicators of one sample
    std::vector<LabeledSample> crafted(1);
    crafted[0] = {{0.0, 1.0, 0.0}, 0.0};
    CHECK(score_direction({1.0, 0.0, 0.0}, crafted, gamma, 1e-9) == 2.0);
}

TEST_CASE("far directions score like the flat density") {
    const int d = 3;
    const double gamma = 5.0, beta = 0.001;
    Rng rng(15002);
    std::vector<double> w = sample_hidden_direction(rng, d);
    Instance inst{d, w, gamma, beta};
    const int m = 100000;
    std::vector<LabeledSample> samples;
    samples.reserve(m);
    for (int i = 0; i < m; ++i)
        samples.push_back(sample_phaseless_clwe(inst, rng, NoiseModel::uniform_bounded(beta)));
    std::vector<double> v = sample_hidden_direction(rng, d);
    const double threshold = 3.0 * beta;
    double t = score_direction(v, samples, gamma, threshold);
    // each indicator hits with probability ~ 2*threshold for a far direction
    const double expected = 2.0 * (2.0 * threshold);
    const double se = std::sqrt(expected * (2.0 - expected) / m);
    CHECK(std::fabs(t - expected) <= 3.0 * se + 1e-12);
}

TEST_CASE("phaseless recovery honors the cover") {
    const int d = 3;
    const double gamma = 2.0;
    Rng rng(15003);
    std::vector<double> w = sample_hidden_direction(rng, d);
    Instance inst{d, w, gamma, 0.0};
    std::vector<LabeledSample> samples;
    for (int i = 0; i < 50; ++i)
        samples.push_back(sample_phaseless_clwe(inst, rng, NoiseModel::none()));

    SphereCover cover = random_sphere_cover(d, 0.3, rng, 2000);
    cover.points.insert(cover.points.begin(), w);
    std::vector<double> got = recover_exhaustive_phaseless(samples, gamma, 1e-10, cover);
    CHECK(got == w);

    SphereCover pm;
    pm.d = d;
    pm.eps = 0.1;
    pm.points = {w, {-w[0], -w[1], -w[2]}};
    std::vector<LabeledSample> single(samples.begin(), samples.begin() + 1);
    std::vector<double> pick = recover_exhaustive_phaseless(single, gamma, 1e-10, pm);
    CHECK((pick == pm.points[0] || pick == pm.points[1]));

    SphereCover empty;
    CHECK_THROWS_AS(recover_exhaustive_phaseless(samples, gamma, 1e-10, empty),
                    std::invalid_argument);
}

TEST_CASE("cosine recovery meets the squared-error budget") {
    const int d = 2;
    const double gamma = 4.0, beta = 1e-3;
    const double tau = std::acos(1.0 - beta) / kTwoPi;
    const double budget = 40000.0 * tau * tau / (gamma * gamma);
    for (int trial = 0; trial < 5; ++trial) {
        Rng rng = Rng::stream(16000, trial);
        std::vector<double> w = sample_hidden_direction(rng, d);
        Instance inst{d, w, gamma, beta};
        const long m = default_sample_count(d, tau / gamma);
        std::vector<LabeledSample> samples;
        for (long i = 0; i < m; ++i)
            samples.push_back(sample_cosine(inst, rng, NoiseModel::uniform_bounded(beta)));
        std::vector<double> got = recover_exhaustive_cosine(samples, gamma, beta, rng, 150000);
        CHECK(sq_recovery_error(got, w) <= budget);
    }
}

TEST_CASE("zero-noise cosine with truth in cover returns it exactly") {
    const int d = 2;
    const double gamma = 3.0;
    Rng rng(16100);
    std::vector<double> w = sample_hidden_direction(rng, d);
    Instance inst{d, w, gamma, 0.0};
    std::vector<LabeledSample> samples;
    for (int i = 0; i < 60; ++i)
        samples.push_back(sample_cosine(inst, rng, NoiseModel::none()));
    SphereCover cover = random_sphere_cover(d, 0.2, rng, 2000);
    cover.points.insert(cover.points.begin(), w);
    CHECK(recover_exhaustive_cosine(samples, gamma, 0.0, cover) == w);
}

TEST_CASE("arccos difference transfer bound") {
    for (double tau0 : {0.01, 0.1, 0.5}) {
        const double bound = std::acos(1.0 - tau0);
        double sup = 0.0;
        const int steps = 200000;
        for (int i = 0; i <= steps; ++i) {
            double x = -1.0 + 2.0 * double(i) / steps;
            double y = std::min(1.0, x + tau0);
            sup = std::max(sup, std::fabs(std::acos(x) - std::acos(y)));
        }
        CHECK(sup <= bound + 1e-12);
    }
}

TEST_CASE("cosine labels map to phaseless losslessly") {
    Rng rng(16200);
    for (int i = 0; i < 20000; ++i) {
        double z = rng.uniform(-1.2, 1.2);
        double clamped = std::min(1.0, std::max(-1.0, z));
        CHECK(std::fabs(std::cos(kTwoPi * arccos_phase(z)) - clamped) <= 1e-12);
    }
}

TEST_CASE("parallel scoring matches the serial reference") {
    const int d = 3;
    Rng rng(16300);
    std::vector<double> w = sample_hidden_direction(rng, d);
    Instance inst{d, w, 2.5, 1e-3};
    std::vector<LabeledSample> samples;
    for (int i = 0; i < 200; ++i)
        samples.push_back(sample_phaseless_clwe(inst, rng, NoiseModel::uniform_bounded(1e-3)));
    SphereCover cover = random_sphere_cover(d, 0.3, rng, 500);
    ScoreTable par = score_cover(cover, samples, 2.5, 3e-3);
    ScoreTable ser = score_cover_serial(cover, samples, 2.5, 3e-3);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
    for (double t : par) {
        CHECK(t >= 0.0);
        CHECK(t <= 2.0);
    }

    std::size_t best = argmax_score(par);
    for (double t : par) CHECK(par[best] >= t);
    ScoreTable ties = {1.0, 2.0, 2.0};
    CHECK(argmax_score(ties) == 1);
    CHECK_THROWS_AS(argmax_score({}), std::invalid_argument);
}

TEST_CASE("default sample count follows the formula") {
    CHECK(default_sample_count(2, 0.1) == long(std::ceil(128.0 * std::log(10.0))));
    CHECK(default_sample_count(5, 0.01) == long(std::ceil(320.0 * std::log(100.0))));
    CHECK(default_sample_count(3, 0.5) >= 1);
    CHECK_THROWS_AS(default_sample_count(2, 0.0), std::invalid_argument);
}
