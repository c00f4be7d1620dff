#include "coopfield/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "coopfield/errors.hpp"
#include "coopfield/parallel.hpp"
#include "coopfield/rng.hpp"

namespace coopfield {

namespace {

Configuration make_initial(const EnergyModel& model, const ChainConfig& cfg,
                           Xoshiro256& rng) {
    switch (cfg.initial_state) {
        case InitialState::AllDefect:
            return Configuration::all_defect(model.n_players);
        case InitialState::AllCooperate:
            return Configuration::all_cooperate(model.n_players);
        case InitialState::Random:
            return Configuration::random(model.n_players, rng);
        case InitialState::Mixed:
            throw ParameterError("mixed initial states apply to ensembles only");
    }
    throw ParameterError("unknown initial state");
}

void check_chain_config(const EnergyModel& model, double beta, const ChainConfig& cfg) {
    if (!(beta >= 0.0)) throw ParameterError("beta must be nonnegative");
    if (cfg.burn_in < 0 || cfg.burn_in >= cfg.steps) {
        throw ParameterError("need steps > burn_in >= 0 (steps=" +
                             std::to_string(cfg.steps) + ", burn_in=" +
                             std::to_string(cfg.burn_in) + ")");
    }
    if (cfg.thinning < 0) throw ParameterError("thinning must be >= 1 (or 0 for one sweep)");
    if (model.n_players < 2) throw ParameterError("model must have at least 2 players");
}

ChainResult run_chain(const EnergyModel& model, double beta, const ChainConfig& cfg,
                      Configuration state) {
    const int n = model.n_players;
    const std::int64_t thin = cfg.thinning > 0 ? cfg.thinning : n;
    Xoshiro256 rng(cfg.seed);

    int m = state.cooperator_count();
    std::int64_t accepted = 0;
    std::int64_t since_record = 0;
    std::vector<int> trace;
    trace.reserve(static_cast<std::size_t>((cfg.steps - cfg.burn_in) / thin + 1));

    for (std::int64_t step = 0; step < cfg.steps; ++step) {
        const int k = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        const bool up = state.strategy(k) == 0;
        const double delta = model.flip_delta(m, up);
        bool accept = delta <= 0.0;
        if (!accept) accept = rng.uniform() < std::exp(-beta * delta);
        if (accept) {
            state.flip(k);
            m += up ? 1 : -1;
            if (step >= cfg.burn_in) ++accepted;
        }
        if (cfg.validate_energy && step % 97 == 0) {
            int recount = 0;
            for (int j = 0; j < n; ++j) recount += state.strategy(j);
            const bool dir = m < n;
            const double incremental = model.flip_delta(m, dir);
            const double direct = model.energy(dir ? m + 1 : m - 1) - model.energy(m);
            if (recount != m || std::abs(direct - incremental) > 1e-10) {
                throw NumericalValidityError("incremental energy update drifted from "
                                             "recomputation");
            }
        }
        if (step >= cfg.burn_in) {
            if (++since_record == thin) {
                trace.push_back(m);
                since_record = 0;
            }
        }
    }

    ChainResult result;
    result.n_samples = static_cast<std::int64_t>(trace.size());
    result.acceptance_rate =
        static_cast<double>(accepted) / static_cast<double>(cfg.steps - cfg.burn_in);
    std::vector<double> densities(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        densities[i] = static_cast<double>(trace[i]) / n;
    }
    double mean = 0.0;
    for (double d : densities) mean += d;
    if (!densities.empty()) mean /= static_cast<double>(densities.size());
    double var = 0.0;
    for (double d : densities) var += (d - mean) * (d - mean);
    if (!densities.empty()) var /= static_cast<double>(densities.size());
    result.mean_density = mean;
    result.density_variance = var;
    if (densities.size() >= 100) {
        result.tau_int = integrated_autocorrelation(densities, &result.degenerate_trace);
    } else {
        result.tau_int = 0.5;
        result.degenerate_trace = true;
    }
    const double ns = static_cast<double>(result.n_samples);
    result.std_error = ns > 0 ? std::sqrt(var * 2.0 * result.tau_int / ns) : 0.0;
    result.n_effective = result.tau_int > 0 ? ns / (2.0 * result.tau_int) : 0.0;
    if (cfg.keep_trace) result.trace = std::move(trace);
    result.final_state = std::move(state);
    return result;
}

}  // namespace

ChainResult metropolis_run(const EnergyModel& model, double beta, const ChainConfig& cfg) {
    check_chain_config(model, beta, cfg);
    Xoshiro256 init_rng(derive_stream_seed(cfg.seed, 0x1d));
    return run_chain(model, beta, cfg, make_initial(model, cfg, init_rng));
}

ChainResult metropolis_run(const EnergyModel& model, double beta, const ChainConfig& cfg,
                           const Configuration& initial) {
    check_chain_config(model, beta, cfg);
    if (initial.size() != model.n_players) {
        throw ParameterError("initial configuration size does not match the model");
    }
    return run_chain(model, beta, cfg, initial);
}

double integrated_autocorrelation(std::span<const double> trace, bool* degenerate) {
    if (degenerate) *degenerate = false;
    const std::size_t n = trace.size();
    if (n < 100) throw ParameterError("autocorrelation needs at least 100 samples");

    double mean = 0.0;
    for (double x : trace) mean += x;
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (double x : trace) c0 += (x - mean) * (x - mean);
    c0 /= static_cast<double>(n);
    if (c0 <= 0.0) {
        if (degenerate) *degenerate = true;
        return 0.5;
    }

    double tau = 0.5;
    for (std::size_t t = 1; t < n; ++t) {
        double ct = 0.0;
        for (std::size_t i = 0; i + t < n; ++i) {
            ct += (trace[i] - mean) * (trace[i + t] - mean);
        }
        ct /= static_cast<double>(n);  // biased normalization, standard for tau_int
        tau += ct / c0;
        if (static_cast<double>(t) >= 6.0 * tau) break;
    }
    return std::max(tau, 0.5);
}

ChainResult ensemble_run(const EnergyModel& model, double beta, const ChainConfig& cfg,
                         int replicas) {
    if (replicas < 1) throw ParameterError("replicas must be >= 1");
    check_chain_config(model, beta, cfg);

    std::vector<ChainResult> results(static_cast<std::size_t>(replicas));
    parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t i) {
        ChainConfig local = cfg;
        local.seed = derive_stream_seed(cfg.seed, i);
        if (cfg.initial_state == InitialState::Mixed) {
            local.initial_state =
                (i % 2 == 0) ? InitialState::AllDefect : InitialState::AllCooperate;
        }
        results[i] = metropolis_run(model, beta, local);
    });

    if (replicas == 1) return std::move(results.front());

    ChainResult pooled;
    const double r = replicas;
    std::vector<double> means(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) means[i] = results[i].mean_density;
    double grand = 0.0;
    for (double v : means) grand += v;
    grand /= r;
    double between = 0.0, within = 0.0, tau = 0.0, acc = 0.0;
    for (const auto& res : results) {
        between += (res.mean_density - grand) * (res.mean_density - grand);
        within += res.density_variance;
        tau += res.tau_int;
        acc += res.acceptance_rate;
        pooled.n_samples += res.n_samples;
    }
    pooled.mean_density = grand;
    pooled.density_variance = within / r + between / r;  // law of total variance
    pooled.tau_int = tau / r;
    pooled.acceptance_rate = acc / r;
    pooled.std_error = std::sqrt(between / (r - 1.0) / r);
    pooled.n_effective = static_cast<double>(pooled.n_samples) / (2.0 * pooled.tau_int);

    // Two-cluster split at the largest gap of the sorted replica means; call
    // it bimodal when the cluster centers sit more than 0.5 apart.
    std::sort(means.begin(), means.end());
    std::size_t split = 0;
    double widest = -1.0;
    for (std::size_t i = 0; i + 1 < means.size(); ++i) {
        const double gap = means[i + 1] - means[i];
        if (gap > widest) {
            widest = gap;
            split = i + 1;
        }
    }
    if (split > 0 && split < means.size()) {
        double lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < split; ++i) lo += means[i];
        for (std::size_t i = split; i < means.size(); ++i) hi += means[i];
        lo /= static_cast<double>(split);
        hi /= static_cast<double>(means.size() - split);
        pooled.bimodal = (hi - lo) > 0.5;
    }
    return pooled;
}

void dump_trace(const std::vector<int>& trace, std::ostream& out) {
    for (int m : trace) out << m << '\n';
}

}  // namespace coopfield
