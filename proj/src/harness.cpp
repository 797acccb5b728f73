#include "cosrec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "cosrec/analysis.hpp"
#include "cosrec/exhaustive.hpp"

namespace cosrec {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string join_violations(const std::vector<std::string>& items) {
    std::string msg = "invalid experiment config:";
    for (const auto& it : items) {
        msg += "\n  - ";
        msg += it;
    }
    return msg;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

bool starts_with(const std::string& s, const char* prefix) {
    return s.rfind(prefix, 0) == 0;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_longlong(const std::string& s, long long& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtoll(s.c_str(), &end, 10);
    return end == s.c_str() + s.size();
}

bool parse_uint64(const std::string& s, std::uint64_t& out) {
    if (s.empty() || s.front() == '-') return false;
    char* end = nullptr;
    out = std::strtoull(s.c_str(), &end, 10);
    return end == s.c_str() + s.size();
}

std::string g12(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double median_of(std::vector<double> xs) {
    if (xs.empty()) return -1.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::vector<double> scaled(const std::vector<double>& v, double c) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
    return out;
}

double sq_dist_signed(const std::vector<double>& a, const std::vector<double>& b) {
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        plus += (a[i] - b[i]) * (a[i] - b[i]);
        minus += (a[i] + b[i]) * (a[i] + b[i]);
    }
    return std::min(plus, minus);
}

// One grid cell with every derived quantity resolved.
struct CellParams {
    int d = 0;
    std::string gamma_spec;
    double gamma = 0.0;
    double beta = 0.0;
    long n_bits = 0;
    long prec = 0;
    std::uint64_t cell_seed = 0;
    RecoveryConfig rcfg;
};

long resolve_n(const ExperimentConfig& cfg, int d, long n) {
    if (n != 0) return n;
    return (cfg.preset == "paper" ? RecoveryConfig::paper(d) : RecoveryConfig::desk(d)).N;
}

CellParams make_cell(const ExperimentConfig& cfg, int d, const std::string& spec, double beta,
                     long n) {
    CellParams c;
    c.d = d;
    c.gamma_spec = spec;
    c.gamma = resolve_gamma(spec, d);
    c.beta = beta;
    c.n_bits = resolve_n(cfg, d, n);
    c.prec = cfg.precision_bits != 0 ? cfg.precision_bits : std::max<long>(192, c.n_bits + 64);
    c.rcfg = cfg.preset == "paper" ? RecoveryConfig::paper(d) : RecoveryConfig::desk(d);
    c.rcfg.N = c.n_bits;
    c.rcfg.precision_bits = c.prec;
    if (cfg.m_exp > 0)
        mpz_ui_pow_ui(c.rcfg.M.get_mpz_t(), 2, static_cast<unsigned long>(cfg.m_exp));
    // The stream key uses the cell's values, never its grid position, so a
    // permuted grid reproduces the same record contents.
    char key[256];
    std::snprintf(key, sizeof key, "mode=%s;preset=%s;d=%d;gamma=%s;beta=%a;N=%ld;prec=%ld",
                  cfg.mode.c_str(), cfg.preset.c_str(), d, spec.c_str(), beta, c.n_bits, c.prec);
    c.cell_seed = splitmix64(splitmix64(cfg.seed) ^ fnv1a64(key));
    return c;
}

NoiseModel resolve_noise(const std::string& noise, double beta) {
    if (beta == 0.0 || noise == "none") return NoiseModel::none();
    if (noise == "constant") return NoiseModel::constant(beta);
    if (noise == "gaussian") return NoiseModel::gaussian(beta);
    return NoiseModel::uniform_bounded(beta);  // "uniform" and "auto"
}

double resolve_threshold(const ExperimentConfig& cfg, const CellParams& cell) {
    if (cfg.success_threshold > 0.0) return cfg.success_threshold;
    if (starts_with(cfg.mode, "exhaustive")) {
        double tau = cfg.mode == "exhaustive-cosine" ? std::acos(1.0 - cell.beta) / kTwoPi
                                                     : cell.beta;
        tau = std::max(tau, 1e-9);
        return 40000.0 * tau * tau / (cell.gamma * cell.gamma);
    }
    return cell.beta == 0.0 ? 1e-9 : 100.0 * cell.beta;
}

bool trial_success(const std::string& mode, const TrialOutcome& t, double threshold) {
    if (mode == "detect-clwe") return t.status == "yes";
    if (mode == "detect-null") return t.status != "yes";
    return t.status == "success" && t.error >= 0.0 && t.error <= threshold;
}

TrialOutcome trial_recover(const ExperimentConfig& cfg, const CellParams& cell, Rng& rng) {
    TrialOutcome t;
    std::vector<double> w = sample_hidden_direction(rng, cell.d);
    RecoveryOutcome out;
    std::vector<double> target;
    if (cfg.mode == "recover-cosine") {
        HpBatch batch = hp_batch_cosine(w, cell.gamma, cell.d + 1, rng, cell.prec,
                                        resolve_noise(cfg.noise, cell.beta));
        out = recover_cosine_hp(batch.xs, batch.z, cell.rcfg);
        target = scaled(w, cell.gamma);
    } else if (cfg.mode == "recover-clwe") {
        HpBatch batch = hp_batch_clwe(w, cell.gamma, cell.beta, cell.d + 1, rng, cell.prec);
        out = recover_clwe_hp(batch.xs, batch.z, cell.rcfg);
        target = scaled(w, cell.gamma);
    } else {  // recover-phase: the gamma column carries |w|
        target = scaled(w, cell.gamma);
        HpBatch batch = hp_batch_phase_retrieval(target, cell.d + 1, rng, cell.prec,
                                                 resolve_noise(cfg.noise, cell.beta));
        out = recover_phase_retrieval_hp(batch.xs, batch.z, cell.rcfg);
    }
    t.status = to_string(out.status);
    t.lattice_ms = out.lattice_ms;
    if (out.relation) t.relation_norm = out.relation->norm;
    if (out.status == RecoveryStatus::success) t.error = recovery_error(out.w_scaled, target);
    return t;
}

TrialOutcome trial_phase_ambiguous(const CellParams& cell, Rng& rng) {
    TrialOutcome t;
    std::vector<double> w = scaled(sample_hidden_direction(rng, cell.d), cell.gamma);
    std::vector<std::vector<double>> xs(cell.d, std::vector<double>(cell.d));
    std::vector<double> y(cell.d);
    for (int i = 0; i < cell.d; ++i) {
        double dot = 0.0;
        for (int j = 0; j < cell.d; ++j) {
            xs[i][j] = rng.gaussian();
            dot += xs[i][j] * w[j];
        }
        y[i] = std::abs(dot);
    }
    std::vector<std::vector<double>> fs = phase_retrieval_feasible_set(xs, y);
    t.status = "fail_ambiguous";
    t.candidates = static_cast<long>(fs.size());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : fs) {
        double s = 0.0;
        for (int j = 0; j < cell.d; ++j) s += (v[j] - w[j]) * (v[j] - w[j]);
        best = std::min(best, std::sqrt(s));
    }
    t.error = best;
    return t;
}

TrialOutcome trial_exhaustive(const ExperimentConfig& cfg, const CellParams& cell, Rng& rng) {
    TrialOutcome t;
    std::vector<double> w = sample_hidden_direction(rng, cell.d);
    Instance inst{cell.d, w, cell.gamma, cell.beta};
    const bool cosine = cfg.mode == "exhaustive-cosine";
    const double tau = cosine ? std::acos(1.0 - cell.beta) / kTwoPi : cell.beta;
    const double tau_eff = std::max(tau, 1e-9);
    const long m = default_sample_count(cell.d, tau_eff / cell.gamma);
    NoiseModel noise = resolve_noise(cfg.noise, cell.beta);
    std::vector<LabeledSample> samples;
    samples.reserve(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i)
        samples.push_back(cosine ? sample_cosine(inst, rng, noise)
                                 : sample_phaseless_clwe(inst, rng, noise));
    std::optional<std::uint64_t> cap;
    if (cfg.cover_cap != 0) cap = cfg.cover_cap;
    // cover sizing needs a positive noise bound; the cosine floor keeps
    // acos(1-beta)/2pi above the scorer's 1e-9 phase threshold after double
    // rounding (1 - 1e-15 is still below 1.0)
    const double beta_rec = std::max(cell.beta, cosine ? 1e-15 : 1e-9);
    std::vector<double> v = cosine
        ? recover_exhaustive_cosine(samples, cell.gamma, beta_rec, rng, cap)
        : recover_exhaustive_phaseless(samples, cell.gamma, beta_rec, rng, cap);
    t.status = "success";
    t.error = sq_dist_signed(v, w);
    return t;
}

TrialOutcome trial_detect(const ExperimentConfig& cfg, const CellParams& cell, Rng& rng) {
    TrialOutcome t;
    std::vector<double> w = sample_hidden_direction(rng, cell.d);
    HpSource clwe_src = [&](long count) {
        return hp_batch_clwe(w, cell.gamma, cell.beta, static_cast<int>(count), rng, cell.prec);
    };
    HpSource null_src = [&](long count) {
        return hp_batch_null(cell.d, static_cast<int>(count), rng, cell.prec);
    };
    HpLearner learner = make_recovery_learner(cell.rcfg);
    DetectionOutcome out =
        clwe_detection_test(learner, cfg.mode == "detect-null" ? null_src : clwe_src, null_src,
                            cfg.detect_m, cfg.detect_eps);
    t.status = out.learner_failed ? "learner_failed" : (out.yes ? "yes" : "no");
    t.error = out.loss_null - out.loss_unknown;
    return t;
}

TrialOutcome run_one(const ExperimentConfig& cfg, const CellParams& cell, long trial) {
    Rng rng = Rng::stream(cell.cell_seed, static_cast<std::uint64_t>(trial));
    const auto t0 = std::chrono::steady_clock::now();
    TrialOutcome t;
    try {
        if (cfg.mode == "recover-phase" && cfg.phase_samples == "d") {
            t = trial_phase_ambiguous(cell, rng);
        } else if (starts_with(cfg.mode, "recover")) {
            t = trial_recover(cfg, cell, rng);
        } else if (starts_with(cfg.mode, "exhaustive")) {
            t = trial_exhaustive(cfg, cell, rng);
        } else {
            t = trial_detect(cfg, cell, rng);
        }
    } catch (const CoverSizeError&) {
        t = TrialOutcome{};
        t.status = "fail_cover_size";
    } catch (const SingularSystemError&) {
        t = TrialOutcome{};
        t.status = "fail_singular";
    } catch (const std::exception&) {
        t = TrialOutcome{};
        t.status = "fail_error";
    }
    t.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return t;
}

nlohmann::json outcome_to_json(const TrialOutcome& t) {
    return {{"status", t.status},           {"error", t.error},
            {"wall_ms", t.wall_ms},         {"lattice_ms", t.lattice_ms},
            {"relation_norm", t.relation_norm}, {"candidates", t.candidates}};
}

nlohmann::json record_to_json(const ExperimentRecord& r) {
    nlohmann::json j;
    j["mode"] = r.mode;
    j["d"] = r.d;
    j["gamma_spec"] = r.gamma_spec;
    j["gamma"] = r.gamma;
    j["beta"] = r.beta;
    j["N"] = r.n_bits;
    j["precision_bits"] = r.precision_bits;
    j["trials"] = r.trials;
    j["cell_seed"] = r.cell_seed;
    j["successes"] = r.successes;
    j["success_rate"] = r.success_rate;
    j["median_error"] = r.median_error;
    j["median_wall_ms"] = r.median_wall_ms;
    j["median_lattice_ms"] = r.median_lattice_ms;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : r.outcomes) arr.push_back(outcome_to_json(t));
    j["outcomes"] = std::move(arr);
    return j;
}

const char* kCsvHeader =
    "mode,d,gamma_spec,gamma,beta,N,precision_bits,trials,cell_seed,successes,success_rate,"
    "median_error,median_wall_ms,median_lattice_ms";

std::string emit_csv(const std::vector<ExperimentRecord>& records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        out += r.mode + ',' + std::to_string(r.d) + ',' + r.gamma_spec + ',' + g12(r.gamma) +
               ',' + g12(r.beta) + ',' + std::to_string(r.n_bits) + ',' +
               std::to_string(r.precision_bits) + ',' + std::to_string(r.trials) + ',' +
               std::to_string(r.cell_seed) + ',' + std::to_string(r.successes) + ',' +
               g12(r.success_rate) + ',' + g12(r.median_error) + ',' + g12(r.median_wall_ms) +
               ',' + g12(r.median_lattice_ms) + '\n';
    }
    return out;
}

std::string emit_markdown(const std::vector<ExperimentRecord>& records) {
    std::vector<double> betas;
    std::vector<std::string> modes;
    for (const auto& r : records) {
        if (std::find(betas.begin(), betas.end(), r.beta) == betas.end()) betas.push_back(r.beta);
        if (std::find(modes.begin(), modes.end(), r.mode) == modes.end()) modes.push_back(r.mode);
    }
    std::sort(betas.begin(), betas.end());
    std::string out = "| beta |";
    for (const auto& m : modes) out += ' ' + m + " |";
    out += "\n| --- |";
    for (std::size_t i = 0; i < modes.size(); ++i) out += " --- |";
    out += '\n';
    for (double b : betas) {
        out += "| " + g12(b) + " |";
        for (const auto& m : modes) {
            long s = 0, t = 0;
            for (const auto& r : records) {
                if (r.beta == b && r.mode == m) {
                    s += r.successes;
                    t += r.trials;
                }
            }
            out += t == 0 ? " -- |" : ' ' + std::to_string(s) + '/' + std::to_string(t) + " |";
        }
        out += '\n';
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), items(std::move(violations)) {}

const std::vector<std::string> kExperimentModes = {
    "recover-cosine", "recover-phase",        "recover-clwe", "exhaustive-cosine",
    "exhaustive-phaseless", "detect-clwe", "detect-null"};

double resolve_gamma(const std::string& spec, int d) {
    if (d < 1) throw std::invalid_argument("gamma spec needs d >= 1");
    std::string s;
    for (char c : spec)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    double base = 1.0;
    bool has_base = false;
    std::string head = s;
    const std::string sqrt_suffix = "sqrt(d)";
    if (s.size() >= sqrt_suffix.size() &&
        s.compare(s.size() - sqrt_suffix.size(), sqrt_suffix.size(), sqrt_suffix) == 0) {
        base = std::sqrt(static_cast<double>(d));
        has_base = true;
        head = s.substr(0, s.size() - sqrt_suffix.size());
    } else if (!s.empty() && s.back() == 'd') {
        base = static_cast<double>(d);
        has_base = true;
        head = s.substr(0, s.size() - 1);
    }
    if (has_base && !head.empty() && head.back() == '*') head.pop_back();
    double mult = 1.0;
    if (!head.empty() || !has_base) {
        if (!parse_double(head, mult))
            throw std::invalid_argument("bad gamma spec '" + spec + "'");
    }
    const double g = mult * base;
    if (!(g > 0.0) || !std::isfinite(g))
        throw std::invalid_argument("gamma spec '" + spec + "' is not positive");
    return g;
}

std::vector<std::string> ExperimentConfig::violations() const {
    std::vector<std::string> v;
    if (std::find(kExperimentModes.begin(), kExperimentModes.end(), mode) ==
        kExperimentModes.end())
        v.push_back("unknown mode '" + mode + "'");
    for (int d : d_grid)
        if (d < 1) v.push_back("d must be >= 1, got " + std::to_string(d));
    for (const auto& spec : gamma_grid) {
        try {
            resolve_gamma(spec, 4);
        } catch (const std::invalid_argument& e) {
            v.push_back(e.what());
        }
    }
    for (double b : beta_grid)
        if (!(b >= 0.0) || !std::isfinite(b)) v.push_back("beta must be finite and >= 0");
    for (long n : n_grid)
        if (n < 0) v.push_back("N must be >= 0, got " + std::to_string(n));
    if (trials < 1) v.push_back("trials must be >= 1, got " + std::to_string(trials));
    if (preset != "desk" && preset != "paper") v.push_back("unknown preset '" + preset + "'");
    if (precision_bits < 0)
        v.push_back("precision must be >= 0, got " + std::to_string(precision_bits));
    if (m_exp < 0) v.push_back("M_exp must be >= 0, got " + std::to_string(m_exp));
    if (!(success_threshold >= 0.0) || !std::isfinite(success_threshold))
        v.push_back("threshold must be finite and >= 0");
    if (noise != "auto" && noise != "none" && noise != "uniform" && noise != "constant" &&
        noise != "gaussian")
        v.push_back("unknown noise model '" + noise + "'");
    if (phase_samples != "d+1" && phase_samples != "d")
        v.push_back("phase_samples must be 'd+1' or 'd', got '" + phase_samples + "'");
    if (mode == "recover-phase" && phase_samples == "d")
        for (int d : d_grid)
            if (d > 16)
                v.push_back("feasible-set enumeration needs d <= 16, got " + std::to_string(d));
    if (detect_m < 1) v.push_back("detect_m must be >= 1, got " + std::to_string(detect_m));
    if (!(detect_eps > 0.0) || !std::isfinite(detect_eps))
        v.push_back("detect_eps must be positive");
    if (jobs < 1) v.push_back("jobs must be >= 1, got " + std::to_string(jobs));
    if (format != "json" && format != "csv" && format != "markdown")
        v.push_back("unknown format '" + format + "'");
    return v;
}

void ExperimentConfig::validate() const {
    auto v = violations();
    if (!v.empty()) throw ConfigError(std::move(v));
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<CellParams> cells;
    for (int d : config.d_grid)
        for (const auto& spec : config.gamma_grid)
            for (double beta : config.beta_grid)
                for (long n : config.n_grid) cells.push_back(make_cell(config, d, spec, beta, n));

    const long trials = config.trials;
    std::vector<std::vector<TrialOutcome>> outs(cells.size(),
                                                std::vector<TrialOutcome>(trials));
    const std::size_t total = cells.size() * static_cast<std::size_t>(trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i; (i = next.fetch_add(1)) < total;) {
            const std::size_t ci = i / static_cast<std::size_t>(trials);
            const long t = static_cast<long>(i % static_cast<std::size_t>(trials));
            outs[ci][t] = run_one(config, cells[ci], t);
        }
    };
    const int nthreads =
        static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(config.jobs),
                                               std::max<std::size_t>(total, 1)));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }

    std::vector<ExperimentRecord> records;
    records.reserve(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const CellParams& cell = cells[ci];
        ExperimentRecord r;
        r.mode = config.mode;
        r.d = cell.d;
        r.gamma_spec = cell.gamma_spec;
        r.gamma = cell.gamma;
        r.beta = cell.beta;
        r.n_bits = cell.n_bits;
        r.precision_bits = cell.prec;
        r.trials = config.trials;
        r.cell_seed = cell.cell_seed;
        r.outcomes = std::move(outs[ci]);
        const double threshold = resolve_threshold(config, cell);
        std::vector<double> ok_errors, walls, lattices;
        for (const auto& t : r.outcomes) {
            if (trial_success(config.mode, t, threshold)) {
                ++r.successes;
                ok_errors.push_back(t.error);
            }
            walls.push_back(t.wall_ms);
            lattices.push_back(t.lattice_ms);
        }
        r.success_rate = static_cast<double>(r.successes) / r.trials;
        r.median_error = median_of(std::move(ok_errors));
        r.median_wall_ms = median_of(std::move(walls));
        r.median_lattice_ms = median_of(std::move(lattices));
        records.push_back(std::move(r));
    }
    return records;
}

std::string emit_report(const std::vector<ExperimentRecord>& records, const std::string& format) {
    if (format == "json") {
        nlohmann::json j;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : records) arr.push_back(record_to_json(r));
        j["records"] = std::move(arr);
        return j.dump(2) + "\n";
    }
    if (format != "csv" && format != "markdown")
        throw std::invalid_argument("unknown report format '" + format + "'");
    if (records.empty())
        throw std::invalid_argument("table formats need at least one record");
    return format == "csv" ? emit_csv(records) : emit_markdown(records);
}

std::vector<ExperimentRecord> parse_report_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        std::vector<ExperimentRecord> records;
        for (const auto& jr : j.at("records")) {
            ExperimentRecord r;
            r.mode = jr.at("mode").get<std::string>();
            r.d = jr.at("d").get<int>();
            r.gamma_spec = jr.at("gamma_spec").get<std::string>();
            r.gamma = jr.at("gamma").get<double>();
            r.beta = jr.at("beta").get<double>();
            r.n_bits = jr.at("N").get<long>();
            r.precision_bits = jr.at("precision_bits").get<long>();
            r.trials = jr.at("trials").get<int>();
            r.cell_seed = jr.at("cell_seed").get<std::uint64_t>();
            r.successes = jr.at("successes").get<long>();
            r.success_rate = jr.at("success_rate").get<double>();
            r.median_error = jr.at("median_error").get<double>();
            r.median_wall_ms = jr.at("median_wall_ms").get<double>();
            r.median_lattice_ms = jr.at("median_lattice_ms").get<double>();
            for (const auto& jt : jr.at("outcomes")) {
                TrialOutcome t;
                t.status = jt.at("status").get<std::string>();
                t.error = jt.at("error").get<double>();
                t.wall_ms = jt.at("wall_ms").get<double>();
                t.lattice_ms = jt.at("lattice_ms").get<double>();
                t.relation_norm = jt.at("relation_norm").get<double>();
                t.candidates = jt.at("candidates").get<long>();
                r.outcomes.push_back(std::move(t));
            }
            records.push_back(std::move(r));
        }
        return records;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad report json: ") + e.what());
    }
}

void write_report(const std::vector<ExperimentRecord>& records, const std::string& format,
                  const std::string& path, std::ostream& out) {
    const std::string text = emit_report(records, format);
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open report path '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f.good()) throw std::runtime_error("short write to report path '" + path + "'");
}

ExperimentConfig parse_config_file(std::istream& is, const ExperimentConfig& defaults) {
    ExperimentConfig cfg = defaults;
    std::vector<std::string> bad;
    std::string line;
    int lineno = 0;

    auto trim = [](std::string s) {
        const char* ws = " \t\r";
        const auto a = s.find_first_not_of(ws);
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(ws);
        return s.substr(a, b - a + 1);
    };
    auto note = [&](const std::string& what) {
        bad.push_back("line " + std::to_string(lineno) + ": " + what);
    };
    // [a, b, c] or a bare scalar, as trimmed item strings
    auto split_items = [&](const std::string& val, bool& ok) {
        std::vector<std::string> items;
        ok = true;
        if (val.empty() || val.front() != '[') {
            items.push_back(val);
            return items;
        }
        if (val.back() != ']') {
            ok = false;
            note("unterminated array '" + val + "'");
            return items;
        }
        const std::string inner = trim(val.substr(1, val.size() - 2));
        if (inner.empty()) return items;  // [] is an empty grid
        std::size_t pos = 0;
        while (true) {
            const auto comma = inner.find(',', pos);
            items.push_back(trim(inner.substr(pos, comma - pos)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return items;
    };

    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            note("expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        bool ok = true;

        if (key == "mode") {
            cfg.mode = val;
        } else if (key == "preset") {
            cfg.preset = val;
        } else if (key == "noise") {
            cfg.noise = val;
        } else if (key == "phase_samples") {
            cfg.phase_samples = val;
        } else if (key == "format") {
            cfg.format = val;
        } else if (key == "output") {
            cfg.output_path = val;
        } else if (key == "gamma") {
            cfg.gamma_grid = split_items(val, ok);
        } else if (key == "d") {
            cfg.d_grid.clear();
            for (const auto& it : split_items(val, ok)) {
                long long x;
                if (parse_longlong(it, x))
                    cfg.d_grid.push_back(static_cast<int>(x));
                else
                    note("bad integer '" + it + "' for d");
            }
        } else if (key == "N") {
            cfg.n_grid.clear();
            for (const auto& it : split_items(val, ok)) {
                long long x;
                if (parse_longlong(it, x))
                    cfg.n_grid.push_back(static_cast<long>(x));
                else
                    note("bad integer '" + it + "' for N");
            }
        } else if (key == "beta") {
            cfg.beta_grid.clear();
            for (const auto& it : split_items(val, ok)) {
                double x;
                if (parse_double(it, x))
                    cfg.beta_grid.push_back(x);
                else
                    note("bad number '" + it + "' for beta");
            }
        } else if (key == "trials" || key == "jobs" || key == "detect_m" ||
                   key == "precision" || key == "M_exp") {
            long long x;
            if (!parse_longlong(val, x)) {
                note("bad integer '" + val + "' for " + key);
            } else if (key == "trials") {
                cfg.trials = static_cast<int>(x);
            } else if (key == "jobs") {
                cfg.jobs = static_cast<int>(x);
            } else if (key == "detect_m") {
                cfg.detect_m = static_cast<long>(x);
            } else if (key == "M_exp") {
                cfg.m_exp = static_cast<long>(x);
            } else {
                cfg.precision_bits = static_cast<long>(x);
            }
        } else if (key == "seed" || key == "cover_cap") {
            std::uint64_t x;
            if (!parse_uint64(val, x))
                note("bad unsigned integer '" + val + "' for " + key);
            else if (key == "seed")
                cfg.seed = x;
            else
                cfg.cover_cap = x;
        } else if (key == "threshold" || key == "detect_eps") {
            double x;
            if (!parse_double(val, x))
                note("bad number '" + val + "' for " + key);
            else if (key == "threshold")
                cfg.success_threshold = x;
            else
                cfg.detect_eps = x;
        } else {
            note("unknown key '" + key + "'");
        }
    }
    if (!bad.empty()) throw ConfigError(std::move(bad));
    return cfg;
}

DyadicVector read_dyadic_vector(std::istream& is) {
    long long n = 0, shift = 0;
    if (!(is >> n >> shift) || n < 1 || shift < 0)
        throw std::invalid_argument("dyadic input: expected a 'count N' header line");
    DyadicVector b;
    b.N = static_cast<long>(shift);
    b.num.resize(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        std::string tok;
        if (!(is >> tok))
            throw std::invalid_argument("dyadic input: expected " + std::to_string(n) +
                                        " numerators, got " + std::to_string(i));
        // base 0 accepts decimal and 0x-prefixed hex
        if (mpz_set_str(b.num[static_cast<std::size_t>(i)].get_mpz_t(), tok.c_str(), 0) != 0)
            throw std::invalid_argument("dyadic input: bad integer '" + tok + "'");
    }
    return b;
}

}  // namespace cosrec
