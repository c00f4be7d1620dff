#ifndef COOPFIELD_MONTECARLO_HPP
#define COOPFIELD_MONTECARLO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "coopfield/energy.hpp"
#include "coopfield/game.hpp"

namespace coopfield {

enum class InitialState {
    AllDefect,
    AllCooperate,
    Random,  // drawn from the chain seed
    Mixed,   // ensemble only: replica i starts AllDefect (even) / AllCooperate (odd)
};

struct ChainConfig {
    std::int64_t steps = 10'000'000;   // total single-flip proposals
    std::int64_t burn_in = 1'000'000;  // discarded proposals
    std::int64_t thinning = 0;         // record every k proposals; 0 = one sweep (N)
    std::uint64_t seed = 0;
    InitialState initial_state = InitialState::Random;
    bool keep_trace = false;       // retain recorded cooperator counts
    bool validate_energy = false;  // audit the O(1) delta-E path against recomputation
};

struct ChainResult {
    double mean_density = 0.0;
    double density_variance = 0.0;
    double tau_int = 0.5;     // in recorded samples
    double std_error = 0.0;   // sqrt(var * 2 tau / n_samples)
    double n_effective = 0.0; // n_samples / (2 tau)
    double acceptance_rate = 0.0;
    std::int64_t n_samples = 0;
    bool degenerate_trace = false;
    bool bimodal = false;  // set by ensemble_run
    std::vector<int> trace;
    std::optional<Configuration> final_state;  // for annealed warm starts
};

// Single-spin-flip Metropolis on the count-reduced energy. Proposals pick a
// player uniformly; delta-E comes from E(M +/- 1) - E(M) in O(1). Identical
// inputs (model, beta, config incl. seed) give bit-identical results on one
// platform.
ChainResult metropolis_run(const EnergyModel& model, double beta, const ChainConfig& cfg);
// Warm-start variant.
ChainResult metropolis_run(const EnergyModel& model, double beta, const ChainConfig& cfg,
                           const Configuration& initial);

// tau_int = 1/2 + sum_{t<=W} rho(t) with the automatic window
// W = smallest W >= 6 tau(W). Returns at least 0.5; a constant trace reports
// 0.5 and sets *degenerate.
double integrated_autocorrelation(std::span<const double> trace,
                                  bool* degenerate = nullptr);

// Independent replicas with seeds derived by the documented splitting rule
// (rng.hpp). Pools replica means; the standard error comes from the
// between-replica variance; flags bimodality when the replica-mean histogram
// splits into two clusters separated by more than 0.5 in density.
ChainResult ensemble_run(const EnergyModel& model, double beta, const ChainConfig& cfg,
                         int replicas);

// Plain-text trace dump: one recorded cooperator count per line.
void dump_trace(const std::vector<int>& trace, std::ostream& out);

}  // namespace coopfield

#endif
