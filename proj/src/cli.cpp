#include "coopfield/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "coopfield/errors.hpp"
#include "coopfield/experiments.hpp"
#include "coopfield/oracle.hpp"
#include "coopfield/records_io.hpp"
#include "coopfield/rng.hpp"

namespace coopfield {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> table = {
        {"sweep",
         {"config", "n", "b", "c", "gamma", "beta-grid", "solver", "mode", "steps",
          "burn-in", "thinning", "seed", "init", "series-k", "output", "format"}},
        {"crossing", {"config", "n", "b", "c", "gamma", "beta-lo", "beta-hi", "mode"}},
        {"transition",
         {"config", "n", "b", "gamma", "c-low", "c-high", "beta-grid", "mode", "output"}},
        {"variance",
         {"config", "n", "b", "c", "gamma", "beta-grid", "mode", "output", "format"}},
        {"fit", {"config", "input", "window"}},
        {"oracle-check", {"config", "points", "seed"}},
        {"figure",
         {"config", "output", "format", "steps", "burn-in", "seed", "with-mc", "mode"}},
    };
    return table;
}

std::string canonical_subcommand(const std::string& name) {
    if (name == "run") return "sweep";  // historical alias
    return name;
}

void insert_value(CliArgs& args, const std::set<std::string>& keys, const std::string& key,
                  const std::string& value, const char* origin) {
    if (!keys.count(key)) {
        throw UsageError("unknown key '" + key + "' for subcommand '" + args.subcommand +
                         "'");
    }
    if (key == "config") {
        throw UsageError("a config file cannot set 'config'");
    }
    if (!args.values.emplace(key, value).second) {
        throw UsageError(std::string("duplicate key '") + key + "' in " + origin);
    }
}

void load_config_file(CliArgs& args, const std::set<std::string>& keys,
                      const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        const auto eq = line.find('=', start);
        if (eq == std::string::npos) {
            throw UsageError("config file " + path + ":" + std::to_string(lineno) +
                             ": expected key=value");
        }
        std::string key = line.substr(start, eq - start);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::size_t vstart = line.find_first_not_of(" \t", eq + 1);
        std::string value = vstart == std::string::npos ? "" : line.substr(vstart);
        insert_value(args, keys, key, value, "config file");
    }
}

double parse_real(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw UsageError("key '" + key + "': expected a real number, got '" + text + "'");
    }
}

long long parse_int(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw UsageError("key '" + key + "': expected an integer, got '" + text + "'");
    }
}

std::vector<double> parse_grid(const std::string& key, const std::string& text) {
    // lo:hi:step
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw UsageError("key '" + key + "': expected lo:hi:step, got '" + text + "'");
    }
    const double lo = parse_real(key, text.substr(0, first));
    const double hi = parse_real(key, text.substr(first + 1, second - first - 1));
    const double step = parse_real(key, text.substr(second + 1));
    if (!(step > 0.0) || hi < lo) {
        throw UsageError("key '" + key + "': need lo <= hi and step > 0 in '" + text + "'");
    }
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double v = lo + i * step;
        if (v > hi + 0.5 * step) break;
        grid.push_back(std::min(v, hi));
    }
    return grid;
}

std::pair<double, double> parse_window(const std::string& key, const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw UsageError("key '" + key + "': expected lo:hi, got '" + text + "'");
    }
    const double lo = parse_real(key, text.substr(0, colon));
    const double hi = parse_real(key, text.substr(colon + 1));
    if (hi <= lo) throw UsageError("key '" + key + "': need lo < hi");
    return {lo, hi};
}

RiskMode mode_from(const CliArgs& args) {
    RiskMode mode = RiskMode::mean_field();
    mode.kind = parse_mode(args.get("mode", "meanfield"));
    return mode;
}

InitialState parse_init(const std::string& text) {
    if (text == "alldefect") return InitialState::AllDefect;
    if (text == "allcooperate") return InitialState::AllCooperate;
    if (text == "random") return InitialState::Random;
    if (text == "mixed") return InitialState::Mixed;
    throw UsageError("unknown init '" + text +
                     "' (expected alldefect|allcooperate|random|mixed)");
}

ChainConfig chain_from(const CliArgs& args) {
    ChainConfig cfg;
    cfg.steps = args.get_int("steps", cfg.steps);
    cfg.burn_in = args.get_int("burn-in", cfg.steps / 10);
    cfg.thinning = args.get_int("thinning", 0);
    cfg.seed = static_cast<std::uint64_t>(args.get_int("seed", 1));
    cfg.initial_state = parse_init(args.get("init", "random"));
    return cfg;
}

GameParams params_from(const CliArgs& args, double default_n, double default_b,
                       double default_c, double default_gamma) {
    return GameParams(static_cast<int>(args.get_int("n", static_cast<long long>(default_n))),
                      args.get_real("b", default_b), args.get_real("c", default_c),
                      args.get_real("gamma", default_gamma));
}

void emit_to_destination(const std::vector<SweepRecord>& records, const CliArgs& args,
                         std::ostream& out) {
    const std::string fmt = args.get("format", "csv");
    if (fmt != "csv" && fmt != "json") {
        throw UsageError("key 'format': expected csv or json, got '" + fmt + "'");
    }
    const RecordFormat format = fmt == "json" ? RecordFormat::Json : RecordFormat::Csv;
    const std::string dest = args.get("output", "-");
    if (dest == "-") {
        emit_records(records, format, out);
    } else {
        emit_records(records, format, dest);
    }
}

std::vector<Solver> solvers_from(const CliArgs& args, const std::string& fallback) {
    std::vector<Solver> solvers;
    std::stringstream ss(args.get("solver", fallback));
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) solvers.push_back(parse_solver(token));
    }
    if (solvers.empty()) throw UsageError("key 'solver': no solver given");
    return solvers;
}

int run_sweep(const CliArgs& args, std::ostream& out) {
    const GameParams p = params_from(args, 1024, 1.0, 0.5, 0.0);
    SweepOptions opts;
    opts.mode = mode_from(args);
    opts.chain = chain_from(args);
    opts.series.truncation_k = static_cast<int>(args.get_int("series-k", 64));
    const auto betas = parse_grid("beta-grid", args.get("beta-grid", "0:5:0.1"));
    const auto records = beta_sweep(p, betas, solvers_from(args, "exact"), opts);
    emit_to_destination(records, args, out);
    return 0;
}

int run_crossing(const CliArgs& args, std::ostream& out) {
    const GameParams p = params_from(args, 1024, 1.0, 0.75, 1.0);
    const double lo = args.get_real("beta-lo", 0.05);
    const double hi = args.get_real("beta-hi", 5.0);
    const double beta_hat = find_crossing(p, lo, hi, mode_from(args));
    char buf[64];
    std::snprintf(buf, sizeof buf, "beta_cross=%.12g\n", beta_hat);
    out << buf;
    std::snprintf(buf, sizeof buf, "beta_star_formula=%.12g\n",
                  crossing_beta(p.benefit, p.cost));
    out << buf;
    return 0;
}

int run_transition(const CliArgs& args, std::ostream& out) {
    const double b = args.get_real("b", 1.0);
    const double gamma = args.get_real("gamma", 1.0);
    const int n = static_cast<int>(args.get_int("n", 1024));
    const GameParams p_low(n, b, args.get_real("c-low", 0.664), gamma);
    const GameParams p_high(n, b, args.get_real("c-high", 0.665), gamma);
    const auto betas = parse_grid("beta-grid", args.get("beta-grid", "0:6:0.25"));
    const RiskMode mode = mode_from(args);

    std::ostringstream body;
    body << "beta,gap\n";
    for (double beta : betas) {
        const double gap = transition_gap(p_low, p_high, beta, mode);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", beta, gap);
        body << buf;
    }
    const std::string dest = args.get("output", "-");
    if (dest == "-") {
        out << body.str();
    } else {
        std::ofstream file(dest);
        if (!file) throw IoError("cannot open '" + dest + "' for writing");
        file << body.str();
        if (!file) throw IoError("write failed for '" + dest + "'");
    }
    return 0;
}

int run_variance(const CliArgs& args, std::ostream& out, std::ostream& err) {
    const GameParams p = params_from(args, 1024, 1.0, 0.665, 1.0);
    const auto betas = parse_grid("beta-grid", args.get("beta-grid", "1.5:3:0.02"));
    SweepOptions opts;
    opts.mode = mode_from(args);
    const auto records = beta_sweep(p, betas, {Solver::Exact}, opts);
    const VarianceCurve curve = variance_curve(p, betas, opts.mode);
    emit_to_destination(records, args, out);
    char buf[96];
    std::snprintf(buf, sizeof buf, "peak_beta=%.6g%s\n", curve.peak_beta,
                  curve.boundary_warning ? " (warning: peak at grid boundary)" : "");
    err << buf;
    return 0;
}

int run_fit(const CliArgs& args, std::ostream& out) {
    const std::string input = args.get("input", "-");
    std::vector<SweepRecord> records;
    if (input == "-") {
        records = parse_records_csv(std::cin);
    } else {
        records = parse_records_csv_file(input);
    }
    const auto [lo, hi] = parse_window("window", args.get("window", "2.3:4.5"));
    const FitResult fit = fit_decay(records, lo, hi);
    char buf[64];
    std::snprintf(buf, sizeof buf, "beta0=%.12g\n", fit.beta0); out << buf;
    std::snprintf(buf, sizeof buf, "omega1=%.12g\n", fit.omega1); out << buf;
    std::snprintf(buf, sizeof buf, "omega2=%.12g\n", fit.omega2); out << buf;
    std::snprintf(buf, sizeof buf, "intercept=%.12g\n", fit.intercept); out << buf;
    std::snprintf(buf, sizeof buf, "residual_rms=%.12g\n", fit.residual_rms); out << buf;
    return 0;
}

bool relative_match(double a, double b, double tol) {
    const double scale = std::max({std::abs(a), std::abs(b)});
    if (scale < 1e-14) return true;  // both effectively zero
    return std::abs(a - b) <= tol * scale;
}

int run_oracle_check(const CliArgs& args, std::ostream& out) {
    const int points = static_cast<int>(args.get_int("points", 50));
    Xoshiro256 rng(static_cast<std::uint64_t>(args.get_int("seed", 7)));
    int failures = 0;

    for (int i = 0; i < points; ++i) {
        const int n = 2 + static_cast<int>(rng.uniform_index(15));  // 2..16
        const double b = 2.0 * rng.uniform();
        const double c = 2.0 * rng.uniform();
        const double gammas[3] = {0.0, 0.5, 1.0};
        const double gamma = gammas[rng.uniform_index(3)];
        const double beta = 5.0 * rng.uniform();
        const RiskMode mode = (i % 2 == 0) ? RiskMode::mean_field()
                                           : RiskMode::self_consistent();
        const GameParams p(n, b, c, gamma);
        const ThermoResult brute = enumerate_thermo(p, beta, mode);
        const ThermoResult fast = exact_thermo(build_energy_model(p, beta, mode), beta);
        const bool ok = relative_match(brute.log_partition, fast.log_partition, 1e-10) &&
                        relative_match(brute.mean_density, fast.mean_density, 1e-10) &&
                        relative_match(brute.density_variance, fast.density_variance, 1e-10);
        if (!ok) ++failures;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "%s point %02d: N=%2d b=%.3f c=%.3f gamma=%.1f beta=%.3f mode=%s\n",
                      ok ? "PASS" : "FAIL", i, n, b, c, gamma, beta,
                      mode_name(mode.kind).c_str());
        out << buf;
    }

    // gamma = 0 factorization: connected pair correlations vanish.
    bool corr_ok = true;
    for (int draw = 0; draw < 8; ++draw) {
        const int n = 2 + static_cast<int>(rng.uniform_index(9));  // 2..10
        const GameParams p(n, 2.0 * rng.uniform(), 2.0 * rng.uniform(), 0.0);
        const double beta = 5.0 * rng.uniform();
        for (int j = 0; j < n && corr_ok; ++j) {
            for (int k = j + 1; k < n && corr_ok; ++k) {
                corr_ok = std::abs(enumerate_pair_correlation(p, beta, RiskMode::bare(), j,
                                                              k)) < 1e-12;
            }
        }
    }
    if (!corr_ok) ++failures;
    out << (corr_ok ? "PASS" : "FAIL") << " gamma=0 pair correlations vanish\n";

    out << (failures == 0 ? "ALL CHECKS PASSED\n"
                          : "FAILURES: " + std::to_string(failures) + "\n");
    if (failures != 0) throw NumericalValidityError("oracle cross-check failed");
    return 0;
}

int run_figure(const CliArgs& args, std::ostream& out, std::ostream& err) {
    if (args.positionals.size() != 1) {
        throw UsageError("figure requires exactly one id: 2a|2b|3a|3b|4");
    }
    const std::string id = args.positionals.front();
    SweepOptions opts;
    opts.mode = mode_from(args);
    opts.chain.steps = args.get_int("steps", 10'000'000);
    opts.chain.burn_in = args.get_int("burn-in", opts.chain.steps / 10);
    const std::uint64_t seed = static_cast<std::uint64_t>(args.get_int("seed", 1));

    std::vector<SweepRecord> records;
    if (id == "2a" || id == "2b") {
        const double c = id == "2a" ? 0.5 : 0.75;
        const bool with_mc = args.get_int("with-mc", 1) != 0;
        const auto betas = parse_grid("beta-grid", "0:5:0.1");
        std::vector<Solver> solvers = {Solver::Exact};
        if (with_mc) solvers.push_back(Solver::MC);
        int curve = 0;
        for (double gamma : {0.0, 1.0}) {
            opts.chain.seed = derive_stream_seed(seed, static_cast<std::uint64_t>(curve++));
            const GameParams p(1024, 1.0, c, gamma);
            const auto part = beta_sweep(p, betas, solvers, opts);
            records.insert(records.end(), part.begin(), part.end());
        }
    } else if (id == "3a") {
        const bool with_mc = args.get_int("with-mc", 0) != 0;
        const auto betas = parse_grid("beta-grid", "0.05:6:0.05");
        std::vector<Solver> solvers = {Solver::Exact};
        if (with_mc) solvers.push_back(Solver::MC);
        int curve = 0;
        for (double c : {0.664, 0.665}) {
            opts.chain.seed = derive_stream_seed(seed, static_cast<std::uint64_t>(curve++));
            const GameParams p(1024, 1.0, c, 1.0);
            const auto part = beta_sweep(p, betas, solvers, opts);
            records.insert(records.end(), part.begin(), part.end());
        }
        const GameParams lo(1024, 1.0, 0.664, 1.0), hi(1024, 1.0, 0.665, 1.0);
        for (double beta : {2.0, 3.0, 4.0, 6.0}) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "gap(beta=%g)=%.6g\n", beta,
                          transition_gap(lo, hi, beta, opts.mode));
            err << buf;
        }
    } else if (id == "3b") {
        const GameParams p(1024, 1.0, 0.665, 1.0);
        const auto betas = parse_grid("beta-grid", "2.3:4.5:0.02");
        records = beta_sweep(p, betas, {Solver::Exact}, opts);
        const FitResult fit = fit_decay(records, 2.3, 4.5);
        char buf[128];
        std::snprintf(buf, sizeof buf, "fit: beta0=%.4g omega1=%.4g omega2=%.4g rms=%.3g\n",
                      fit.beta0, fit.omega1, fit.omega2, fit.residual_rms);
        err << buf;
    } else if (id == "4") {
        const GameParams p(1024, 1.0, 0.665, 1.0);
        std::vector<double> betas = parse_grid("beta-grid", "0.2:1.45:0.05");
        for (double v : parse_grid("beta-grid", "1.5:3:0.02")) betas.push_back(v);
        for (double v : parse_grid("beta-grid", "3.1:4:0.1")) betas.push_back(v);
        records = beta_sweep(p, betas, {Solver::Exact}, opts);
        const VarianceCurve curve = variance_curve(p, betas, opts.mode);
        char buf[64];
        std::snprintf(buf, sizeof buf, "peak_beta=%.6g\n", curve.peak_beta);
        err << buf;
    } else {
        throw UsageError("unknown figure id '" + id + "' (expected 2a|2b|3a|3b|4)");
    }
    emit_to_destination(records, args, out);
    return 0;
}

}  // namespace

const std::string* CliArgs::find(const std::string& key) const {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
}

std::string CliArgs::get(const std::string& key, const std::string& fallback) const {
    const std::string* v = find(key);
    return v ? *v : fallback;
}

double CliArgs::get_real(const std::string& key, double fallback) const {
    const std::string* v = find(key);
    return v ? parse_real(key, *v) : fallback;
}

long long CliArgs::get_int(const std::string& key, long long fallback) const {
    const std::string* v = find(key);
    return v ? parse_int(key, *v) : fallback;
}

CliArgs parse_config(const std::vector<std::string>& argv) {
    if (argv.empty()) throw UsageError("missing subcommand");
    CliArgs args;
    args.subcommand = canonical_subcommand(argv[0]);
    const auto table_it = known_keys().find(args.subcommand);
    if (table_it == known_keys().end()) {
        throw UsageError("unknown subcommand '" + argv[0] + "'");
    }
    const auto& keys = table_it->second;

    // First pass over the command line into a staging map so the config file
    // can be merged underneath it (command line wins, but repeating a key on
    // the command line itself is an error).
    std::map<std::string, std::string> cli_values;
    std::string config_path;
    for (std::size_t i = 1; i < argv.size(); ++i) {
        const std::string& tok = argv[i];
        if (tok.rfind("--", 0) != 0) {
            args.positionals.push_back(tok);
            continue;
        }
        std::string key = tok.substr(2);
        std::string value;
        const auto eq = key.find('=');
        if (eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= argv.size()) {
                throw UsageError("key '" + key + "' expects a value");
            }
            value = argv[++i];
        }
        if (!keys.count(key)) {
            throw UsageError("unknown key '" + key + "' for subcommand '" +
                             args.subcommand + "'");
        }
        if (key == "config") {
            if (!config_path.empty()) throw UsageError("duplicate key 'config'");
            config_path = value;
            continue;
        }
        if (!cli_values.emplace(key, value).second) {
            throw UsageError("duplicate key '" + key + "' on the command line");
        }
    }
    if (!config_path.empty()) load_config_file(args, keys, config_path);
    for (auto& [key, value] : cli_values) args.values[key] = value;  // CLI wins
    return args;
}

std::string usage_text() {
    return "usage: coopfield <subcommand> [--key value ...]\n"
           "\n"
           "subcommands:\n"
           "  sweep        density/variance observables over a beta grid\n"
           "               (--n --b --c --gamma --beta-grid lo:hi:step\n"
           "                --solver exact,mc,series,digamma --mode\n"
           "                --steps --burn-in --thinning --seed --init\n"
           "                --series-k --output --format csv|json)\n"
           "  crossing     beta where the punished density meets the gamma=0 one\n"
           "               (--n --b --c --gamma --beta-lo --beta-hi --mode)\n"
           "  transition   density gap across a cost pair over a beta grid\n"
           "               (--n --b --gamma --c-low --c-high --beta-grid --output)\n"
           "  variance     exact variance curve and its peak (--beta-grid ...)\n"
           "  fit          decay-law fit on an emitted CSV (--input --window lo:hi)\n"
           "  oracle-check cross-solver invariant suite (--points --seed)\n"
           "  figure       canned parameter sets: 2a 2b 3a 3b 4\n"
           "\n"
           "Any subcommand accepts --config FILE with key=value lines; command-line\n"
           "keys override the file. Exit codes: 0 ok, 2 usage, 3 I/O, 4 numerical.\n";
}

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    try {
        if (argv.empty() || argv[0] == "--help" || argv[0] == "-h" || argv[0] == "help") {
            out << usage_text();
            return argv.empty() ? 2 : 0;
        }
        const CliArgs args = parse_config(argv);
        if (args.subcommand == "sweep") return run_sweep(args, out);
        if (args.subcommand == "crossing") return run_crossing(args, out);
        if (args.subcommand == "transition") return run_transition(args, out);
        if (args.subcommand == "variance") return run_variance(args, out, err);
        if (args.subcommand == "fit") return run_fit(args, out);
        if (args.subcommand == "oracle-check") return run_oracle_check(args, out);
        if (args.subcommand == "figure") return run_figure(args, out, err);
        throw UsageError("unknown subcommand '" + args.subcommand + "'");
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << usage_text();
        return 2;
    } catch (const ParameterError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ModeError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const CapacityError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const ConvergenceError& e) {
        err << "numerical error: " << e.what() << '\n';
        return 4;
    } catch (const NumericalValidityError& e) {
        err << "numerical error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace coopfield
