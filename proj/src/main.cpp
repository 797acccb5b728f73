#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosrec/analysis.hpp"
#include "cosrec/exhaustive.hpp"
#include "cosrec/harness.hpp"

using namespace cosrec;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t env_default_seed() {
    const char* env = std::getenv("COSREC_SEED");
    if (!env) return 1;
    const std::string s(env);
    char* end = nullptr;
    const std::uint64_t out = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s.front() == '-' || end != s.c_str() + s.size())
        throw std::invalid_argument("COSREC_SEED must be an unsigned integer, got '" + s + "'");
    return out;
}

// stdout unless a path is given
struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;
};

Output open_output(const std::string& path) {
    Output out;
    if (!path.empty()) {
        out.file.open(path);
        if (!out.file) throw std::invalid_argument("cannot open '" + path + "' for writing");
        out.os = &out.file;
    }
    return out;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read '" + path + "'");
    return in;
}

std::string g12(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

mpq_class parse_delta(const std::string& text) {
    try {
        mpq_class q(text);
        q.canonicalize();
        if (!(q > 0) || q > 1) throw std::invalid_argument("");
        return q;
    } catch (const std::exception&) {
        throw std::invalid_argument("delta must be a rational in (0, 1], got '" + text + "'");
    }
}

int run_guarded(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const CoverSizeError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const SingularSystemError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const SingularBasisError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

struct SampleArgs {
    std::string dist;
    int d = 1;
    double gamma = 1.0;
    double beta = 0.0;
    double norm = 1.0;
    std::string noise = "auto";
    long count = 10;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_sample(const SampleArgs& a) {
    Rng rng(a.seed);
    // "auto" turns a positive beta into the bounded adversarial stand-in
    NoiseModel nm = a.noise == "auto"
                        ? (a.beta > 0.0 ? NoiseModel::uniform_bounded(a.beta)
                                        : NoiseModel::none())
                        : parse_noise(a.noise);
    SampleMeta meta{a.dist, a.gamma, a.beta, a.seed};
    std::vector<LabeledSample> batch;
    batch.reserve(static_cast<std::size_t>(a.count));
    if (a.dist == "null") {
        for (long i = 0; i < a.count; ++i) batch.push_back(sample_null(rng, a.d));
    } else if (a.dist == "phase") {
        std::vector<double> w = sample_hidden_direction(rng, a.d);
        for (double& c : w) c *= a.norm;
        for (long i = 0; i < a.count; ++i)
            batch.push_back(sample_phase_retrieval(w, a.beta, rng, nm));
    } else {
        Instance inst{a.d, sample_hidden_direction(rng, a.d), a.gamma, a.beta};
        for (long i = 0; i < a.count; ++i) {
            if (a.dist == "cosine")
                batch.push_back(sample_cosine(inst, rng, nm));
            else if (a.dist == "clwe")
                batch.push_back(sample_clwe(inst, rng));
            else
                batch.push_back(sample_phaseless_clwe(inst, rng, nm));
        }
    }
    Output out = open_output(a.out);
    write_json_lines(*out.os, batch, meta);
    return 0;
}

// ---------------------------------------------------------------------------
// lll / intrel
// ---------------------------------------------------------------------------

struct LllArgs {
    std::string in;
    std::string out;
    std::string delta = "3/4";
};

int cmd_lll(const LllArgs& a) {
    std::ifstream in = open_input(a.in);
    IntMatrix basis = read_basis(in);
    IntMatrix reduced = lll_reduce(basis, parse_delta(a.delta));
    Output out = open_output(a.out);
    write_basis(*out.os, reduced);
    return 0;
}

struct IntrelArgs {
    std::string in;
    long m_exp = 0;
    std::string delta = "3/4";
};

int cmd_intrel(const IntrelArgs& a) {
    std::ifstream in = open_input(a.in);
    DyadicVector b = read_dyadic_vector(in);
    const long e = a.m_exp > 0 ? a.m_exp : 3L * b.size();
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), 2, static_cast<unsigned long>(e));
    auto rel = detect_integer_relation(b, m, parse_delta(a.delta));
    if (!rel) {
        std::cout << "NOT FOUND\n";
        return 0;
    }
    for (int i = 0; i < static_cast<int>(rel->t.size()); ++i)
        std::cout << (i ? " " : "") << rel->t[i].get_str();
    std::cout << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// recover / exhaustive: single-cell experiments, one JSON line per trial
// ---------------------------------------------------------------------------

struct RecoverArgs {
    std::string dist;
    int d = 2;
    std::string gamma = "1";
    double beta = 0.0;
    std::string noise = "auto";
    std::uint64_t seed = 1;
    long n_bits = 0;
    long m_exp = 0;
    long precision = 0;
    int trials = 1;
    std::string preset = "desk";
    double threshold = 0.0;
    std::string phase_samples = "d+1";
    std::uint64_t cover_cap = 1000000;
    std::string out;
};

int emit_trial_lines(const ExperimentConfig& cfg, const std::string& path) {
    std::vector<ExperimentRecord> records = run_experiment(cfg);
    Output out = open_output(path);
    for (const auto& r : records) {
        for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
            const TrialOutcome& t = r.outcomes[i];
            nlohmann::json j{{"trial", i},
                             {"status", t.status},
                             {"error", t.error},
                             {"wall_ms", t.wall_ms},
                             {"lattice_ms", t.lattice_ms},
                             {"relation_norm", t.relation_norm}};
            if (t.candidates != 0) j["candidates"] = t.candidates;
            *out.os << j.dump() << "\n";
        }
    }
    return 0;
}

int cmd_recover(const RecoverArgs& a, bool exhaustive) {
    ExperimentConfig cfg;
    cfg.mode = (exhaustive ? "exhaustive-" : "recover-") + a.dist;
    cfg.d_grid = {a.d};
    cfg.gamma_grid = {a.gamma};
    cfg.beta_grid = {a.beta};
    cfg.n_grid = {a.n_bits};
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.preset = a.preset;
    cfg.precision_bits = a.precision;
    cfg.m_exp = a.m_exp;
    cfg.success_threshold = a.threshold;
    cfg.noise = a.noise;
    cfg.phase_samples = a.phase_samples;
    cfg.cover_cap = a.cover_cap;
    return emit_trial_lines(cfg, a.out);
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string what;
    std::vector<double> gamma = {1.0};
    std::vector<double> rho = {0.0, 0.5, 0.9};
    long mc = 100000;
    std::vector<double> s = {0.05, 0.1, 0.3, 1.0, 2.0};
    long points = 1001;
    double eps = 0.1;
    std::vector<int> d = {2};
    long trials = 100000;
    double beta = 0.0;
    long m = 2000;
    double norm = 1.0;
    long n_bits = 0;
    long precision = 0;
    bool on_null = false;
    std::uint64_t seed = 1;
    std::string out;
};

int analyze_loss(const AnalyzeArgs& a, std::ostream& os) {
    os << "rho,gamma,closed_form,mc_mean,mc_std_error,mc_draws\n";
    Rng rng(a.seed);
    for (double rho : a.rho) {
        for (double gamma : a.gamma) {
            const double closed = population_loss_closed_form(HermiteLossParams::make(rho, gamma));
            const std::vector<double> w{1.0, 0.0};
            const std::vector<double> wp{rho, std::sqrt(std::max(0.0, 1.0 - rho * rho))};
            MonteCarloEstimate est = population_loss_monte_carlo(w, wp, gamma, a.mc, rng);
            os << g12(rho) << ',' << g12(gamma) << ',' << g12(closed) << ',' << g12(est.mean)
               << ',' << g12(est.std_error) << ',' << a.mc << "\n";
        }
    }
    return 0;
}

int analyze_psi(const AnalyzeArgs& a, std::ostream& os) {
    if (a.points < 2) throw std::invalid_argument("psi needs --points >= 2");
    os << "s,z,density,peak_bound,deviation_bound\n";
    for (double s : a.s) {
        PeriodicGaussianBounds bounds = periodic_gaussian_bounds(s);
        for (long i = 0; i < a.points; ++i) {
            const double z = -0.5 + static_cast<double>(i) / (a.points - 1);
            os << g12(s) << ',' << g12(z) << ',' << g12(periodic_gaussian_density(s, z)) << ','
               << g12(bounds.peak_bound) << ',' << g12(bounds.uniform_deviation_bound) << "\n";
        }
    }
    return 0;
}

int analyze_relu(const AnalyzeArgs& a, std::ostream& os) {
    os << "gamma,eps,L,R,eta,units,alpha_max,grid_sup_error,quadrature_loss\n";
    for (double gamma : a.gamma) {
        ReluNetwork net = relu_approximate_cosine(gamma, a.eps);
        double alpha_max = 0.0;
        for (const auto& u : net.units) alpha_max = std::max(alpha_max, std::fabs(u.alpha));
        double sup = 0.0;
        const long grid = 20001;
        for (long i = 0; i < grid; ++i) {
            const double z = -net.R + 2.0 * net.R * static_cast<double>(i) / (grid - 1);
            sup = std::max(sup, std::fabs(net.evaluate(z) - std::cos(kTwoPi * z)));
        }
        os << g12(gamma) << ',' << g12(a.eps) << ',' << g12(net.L) << ',' << g12(net.R) << ','
           << g12(net.eta) << ',' << net.units.size() << ',' << g12(alpha_max) << ',' << g12(sup)
           << ',' << g12(relu_gaussian_squared_loss(net, gamma)) << "\n";
    }
    return 0;
}

int analyze_feasible(const AnalyzeArgs& a, std::ostream& os) {
    const int d = a.d.front();
    Rng rng(a.seed);
    std::vector<double> w = sample_hidden_direction(rng, d);
    for (double& c : w) c *= a.norm;
    std::vector<std::vector<double>> xs(d, std::vector<double>(d));
    std::vector<double> y(d);
    for (int i = 0; i < d; ++i) {
        double dot = 0.0;
        for (int j = 0; j < d; ++j) {
            xs[i][j] = rng.gaussian();
            dot += xs[i][j] * w[j];
        }
        y[i] = std::fabs(dot);
    }
    std::vector<std::vector<double>> fs = phase_retrieval_feasible_set(xs, y);
    os << "mask,max_residual";
    for (int j = 1; j <= d; ++j) os << ",v" << j;
    os << "\n";
    for (std::size_t mask = 0; mask < fs.size(); ++mask) {
        double res = 0.0;
        for (int i = 0; i < d; ++i) {
            double dot = 0.0;
            for (int j = 0; j < d; ++j) dot += xs[i][j] * fs[mask][j];
            res = std::max(res, std::fabs(std::fabs(dot) - y[i]));
        }
        os << mask << ',' << g12(res);
        for (int j = 0; j < d; ++j) os << ',' << g12(fs[mask][j]);
        os << "\n";
    }
    return 0;
}

int analyze_probe(const AnalyzeArgs& a, std::ostream& os) {
    os << "d,trials,successes,frequency,ci_low,ci_high\n";
    for (int d : a.d) {
        Rng rng = Rng::stream(a.seed, static_cast<std::uint64_t>(d));
        SpuriousProbeResult r = spurious_norm_probe(d, a.trials, rng);
        os << d << ',' << r.trials << ',' << r.successes << ',' << g12(r.frequency) << ','
           << g12(r.ci_low) << ',' << g12(r.ci_high) << "\n";
    }
    return 0;
}

int analyze_detect(const AnalyzeArgs& a, std::ostream& os) {
    ExperimentConfig cfg;
    cfg.mode = a.on_null ? "detect-null" : "detect-clwe";
    cfg.d_grid = {a.d.front()};
    cfg.gamma_grid = {g12(a.gamma.front())};
    cfg.beta_grid = {a.beta};
    cfg.n_grid = {a.n_bits};
    cfg.trials = static_cast<int>(a.trials);
    cfg.seed = a.seed;
    cfg.precision_bits = a.precision;
    cfg.detect_m = a.m;
    cfg.detect_eps = a.eps;
    std::vector<ExperimentRecord> records = run_experiment(cfg);
    os << "trial,answer,margin,wall_ms\n";
    for (const auto& r : records)
        for (std::size_t i = 0; i < r.outcomes.size(); ++i)
            os << i << ',' << r.outcomes[i].status << ',' << g12(r.outcomes[i].error) << ','
               << g12(r.outcomes[i].wall_ms) << "\n";
    return 0;
}

int cmd_analyze(const AnalyzeArgs& a) {
    Output out = open_output(a.out);
    if (a.what == "loss") return analyze_loss(a, *out.os);
    if (a.what == "psi") return analyze_psi(a, *out.os);
    if (a.what == "relu") return analyze_relu(a, *out.os);
    if (a.what == "feasible") return analyze_feasible(a, *out.os);
    if (a.what == "probe") return analyze_probe(a, *out.os);
    return analyze_detect(a, *out.os);
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

struct ExperimentArgs {
    std::string config_path;
    std::string out;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"algorithmic landscape of learning a single periodic neuron"};
    app.require_subcommand(1);

    SampleArgs sa;
    auto* sc_sample = app.add_subcommand("sample", "draw labeled samples as JSON lines");
    sc_sample->add_option("--dist", sa.dist, "source distribution")
        ->required()
        ->check(CLI::IsMember({"cosine", "clwe", "phaseless", "phase", "null"}));
    sc_sample->add_option("--d", sa.d, "ambient dimension")->required()->check(CLI::PositiveNumber);
    sc_sample->add_option("--gamma", sa.gamma, "frequency scaling");
    sc_sample->add_option("--beta", sa.beta, "noise level");
    sc_sample->add_option("--noise", sa.noise,
                          "noise model: auto|none|uniform:B|constant:B|gaussian:S");
    sc_sample->add_option("--norm", sa.norm, "target norm for --dist phase");
    sc_sample->add_option("--count", sa.count, "samples to draw")->check(CLI::PositiveNumber);
    auto* sample_seed = sc_sample->add_option("--seed", sa.seed, "rng seed");
    sc_sample->add_option("--out", sa.out, "output path (default stdout)");

    LllArgs la;
    auto* sc_lll = app.add_subcommand("lll", "reduce an integer basis file");
    sc_lll->add_option("--in", la.in, "basis file: 'n m' header, then n rows")->required();
    sc_lll->add_option("--out", la.out, "output path (default stdout)");
    sc_lll->add_option("--delta", la.delta, "reduction parameter as a rational");

    IntrelArgs ia;
    auto* sc_intrel = app.add_subcommand("intrel", "find an integer relation for a dyadic vector");
    sc_intrel->add_option("--in", ia.in, "input: 'count N' header, then numerators")->required();
    sc_intrel->add_option("--M-exp", ia.m_exp, "embedding scale exponent (default 3n)");
    sc_intrel->add_option("--delta", ia.delta, "reduction parameter as a rational");

    RecoverArgs ra;
    auto* sc_recover = app.add_subcommand("recover", "lattice recovery trials, JSON per trial");
    sc_recover->add_option("--dist", ra.dist, "label family")
        ->required()
        ->check(CLI::IsMember({"cosine", "phase", "clwe"}));
    sc_recover->add_option("--d", ra.d, "dimension")->required()->check(CLI::PositiveNumber);
    sc_recover->add_option("--gamma", ra.gamma,
                           "frequency spec (norm for --dist phase): number, d, sqrt(d)");
    sc_recover->add_option("--beta", ra.beta, "noise level");
    sc_recover->add_option("--noise", ra.noise, "noise model for the bounded families");
    auto* recover_seed = sc_recover->add_option("--seed", ra.seed, "rng seed");
    sc_recover->add_option("--N", ra.n_bits, "truncation depth (0 = preset)");
    sc_recover->add_option("--M-exp", ra.m_exp, "embedding scale exponent (0 = 2^(3d))");
    sc_recover->add_option("--precision", ra.precision, "working mantissa bits (0 = auto)");
    sc_recover->add_option("--trials", ra.trials, "seeded trials")->check(CLI::PositiveNumber);
    sc_recover->add_option("--preset", ra.preset, "numeric preset")
        ->check(CLI::IsMember({"desk", "paper"}));
    sc_recover->add_option("--threshold", ra.threshold, "success threshold (0 = per-mode rule)");
    sc_recover->add_option("--phase-samples", ra.phase_samples, "d+1 or d (ambiguity probe)")
        ->check(CLI::IsMember({"d+1", "d"}));
    sc_recover->add_option("--out", ra.out, "output path (default stdout)");

    RecoverArgs ea;
    auto* sc_exhaustive =
        app.add_subcommand("exhaustive", "cover-search recovery trials, JSON per trial");
    sc_exhaustive->add_option("--dist", ea.dist, "label family")
        ->required()
        ->check(CLI::IsMember({"cosine", "phaseless"}));
    sc_exhaustive->add_option("--d", ea.d, "dimension")->required()->check(CLI::PositiveNumber);
    sc_exhaustive->add_option("--gamma", ea.gamma, "frequency spec: number, d, sqrt(d)");
    sc_exhaustive->add_option("--beta", ea.beta, "noise level");
    sc_exhaustive->add_option("--noise", ea.noise, "noise model");
    auto* exhaustive_seed = sc_exhaustive->add_option("--seed", ea.seed, "rng seed");
    sc_exhaustive->add_option("--trials", ea.trials, "seeded trials")
        ->check(CLI::PositiveNumber);
    sc_exhaustive->add_option("--cover-cap", ea.cover_cap, "cover size cap (0 = uncapped)");
    sc_exhaustive->add_option("--threshold", ea.threshold,
                              "success threshold on squared error (0 = budget rule)");
    sc_exhaustive->add_option("--out", ea.out, "output path (default stdout)");

    AnalyzeArgs aa;
    auto* sc_analyze = app.add_subcommand("analyze", "closed-form studies, CSV output");
    sc_analyze->add_option("what", aa.what, "study to run")
        ->required()
        ->check(CLI::IsMember({"loss", "psi", "relu", "feasible", "probe", "detect"}));
    sc_analyze->add_option("--gamma", aa.gamma, "frequency list")->delimiter(',');
    sc_analyze->add_option("--rho", aa.rho, "inner product list for loss")->delimiter(',');
    sc_analyze->add_option("--mc", aa.mc, "monte carlo draws for loss")
        ->check(CLI::PositiveNumber);
    sc_analyze->add_option("--s", aa.s, "width list for psi")->delimiter(',');
    sc_analyze->add_option("--points", aa.points, "grid points for psi");
    sc_analyze->add_option("--eps", aa.eps, "target loss (relu) or test margin (detect)");
    sc_analyze->add_option("--d", aa.d, "dimension list")->delimiter(',');
    sc_analyze->add_option("--trials", aa.trials, "trials for probe and detect")
        ->check(CLI::PositiveNumber);
    sc_analyze->add_option("--beta", aa.beta, "noise level for detect");
    sc_analyze->add_option("--m", aa.m, "samples per source for detect");
    sc_analyze->add_option("--norm", aa.norm, "target norm for feasible");
    sc_analyze->add_option("--N", aa.n_bits, "truncation depth for detect (0 = preset)");
    sc_analyze->add_option("--precision", aa.precision, "mantissa bits for detect (0 = auto)");
    sc_analyze->add_flag("--null", aa.on_null, "run detect against the null source");
    auto* analyze_seed = sc_analyze->add_option("--seed", aa.seed, "rng seed");
    sc_analyze->add_option("--out", aa.out, "output path (default stdout)");

    ExperimentArgs xa;
    ExperimentConfig xcfg;
    auto* sc_exp = app.add_subcommand("experiment", "run a parameter sweep and emit a report");
    sc_exp->add_option("--config", xa.config_path, "flat key/value config file");
    auto* xo_mode = sc_exp->add_option("--mode", xcfg.mode, "experiment mode");
    auto* xo_d = sc_exp->add_option("--d", xcfg.d_grid, "dimension grid")->delimiter(',');
    auto* xo_gamma =
        sc_exp->add_option("--gamma", xcfg.gamma_grid, "gamma spec grid")->delimiter(',');
    auto* xo_beta = sc_exp->add_option("--beta", xcfg.beta_grid, "beta grid")->delimiter(',');
    auto* xo_n = sc_exp->add_option("--N", xcfg.n_grid, "truncation grid")->delimiter(',');
    auto* xo_trials = sc_exp->add_option("--trials", xcfg.trials, "trials per cell");
    auto* xo_seed = sc_exp->add_option("--seed", xcfg.seed, "rng seed");
    auto* xo_preset = sc_exp->add_option("--preset", xcfg.preset, "numeric preset");
    auto* xo_prec = sc_exp->add_option("--precision", xcfg.precision_bits, "mantissa bits");
    auto* xo_mexp = sc_exp->add_option("--M-exp", xcfg.m_exp, "embedding scale exponent");
    auto* xo_thr = sc_exp->add_option("--threshold", xcfg.success_threshold, "success threshold");
    auto* xo_noise = sc_exp->add_option("--noise", xcfg.noise, "noise model");
    auto* xo_ps = sc_exp->add_option("--phase-samples", xcfg.phase_samples, "d+1 or d");
    auto* xo_cap = sc_exp->add_option("--cover-cap", xcfg.cover_cap, "cover size cap");
    auto* xo_dm = sc_exp->add_option("--detect-m", xcfg.detect_m, "samples per source");
    auto* xo_de = sc_exp->add_option("--detect-eps", xcfg.detect_eps, "detection margin");
    auto* xo_jobs = sc_exp->add_option("--jobs", xcfg.jobs, "worker threads");
    auto* xo_fmt = sc_exp->add_option("--format", xcfg.format, "json|csv|markdown");
    auto* xo_out = sc_exp->add_option("--out", xa.out, "report path (default config, then stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*sc_sample)
        return run_guarded([&] {
            if (sample_seed->count() == 0) sa.seed = env_default_seed();
            return cmd_sample(sa);
        });
    if (*sc_lll) return run_guarded([&] { return cmd_lll(la); });
    if (*sc_intrel) return run_guarded([&] { return cmd_intrel(ia); });
    if (*sc_recover)
        return run_guarded([&] {
            if (recover_seed->count() == 0) ra.seed = env_default_seed();
            return cmd_recover(ra, false);
        });
    if (*sc_exhaustive)
        return run_guarded([&] {
            if (exhaustive_seed->count() == 0) ea.seed = env_default_seed();
            return cmd_recover(ea, true);
        });
    if (*sc_analyze)
        return run_guarded([&] {
            if (analyze_seed->count() == 0) aa.seed = env_default_seed();
            return cmd_analyze(aa);
        });
    return run_guarded([&] {
        ExperimentConfig defaults;
        defaults.seed = env_default_seed();
        ExperimentConfig cfg = defaults;
        if (!xa.config_path.empty()) {
            std::ifstream f = open_input(xa.config_path);
            cfg = parse_config_file(f, defaults);
        }
        // explicit flags override file values
        if (xo_mode->count()) cfg.mode = xcfg.mode;
        if (xo_d->count()) cfg.d_grid = xcfg.d_grid;
        if (xo_gamma->count()) cfg.gamma_grid = xcfg.gamma_grid;
        if (xo_beta->count()) cfg.beta_grid = xcfg.beta_grid;
        if (xo_n->count()) cfg.n_grid = xcfg.n_grid;
        if (xo_trials->count()) cfg.trials = xcfg.trials;
        if (xo_seed->count()) cfg.seed = xcfg.seed;
        if (xo_preset->count()) cfg.preset = xcfg.preset;
        if (xo_prec->count()) cfg.precision_bits = xcfg.precision_bits;
        if (xo_mexp->count()) cfg.m_exp = xcfg.m_exp;
        if (xo_thr->count()) cfg.success_threshold = xcfg.success_threshold;
        if (xo_noise->count()) cfg.noise = xcfg.noise;
        if (xo_ps->count()) cfg.phase_samples = xcfg.phase_samples;
        if (xo_cap->count()) cfg.cover_cap = xcfg.cover_cap;
        if (xo_dm->count()) cfg.detect_m = xcfg.detect_m;
        if (xo_de->count()) cfg.detect_eps = xcfg.detect_eps;
        if (xo_jobs->count()) cfg.jobs = xcfg.jobs;
        if (xo_fmt->count()) cfg.format = xcfg.format;
        if (xo_out->count()) cfg.output_path = xa.out;
        std::vector<ExperimentRecord> records = run_experiment(cfg);
        write_report(records, cfg.format, cfg.output_path, std::cout);
        return 0;
    });
}
