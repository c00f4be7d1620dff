#ifndef COOPFIELD_GAME_HPP
#define COOPFIELD_GAME_HPP

#include <cstdint>
#include <vector>

#include "coopfield/rng.hpp"

namespace coopfield {

// Economic parameters of one public-goods game instance: N players each may
// pay cost c into a pool that returns b/N per contributor to every player;
// defectors earn a fraction (1-gamma) of their payoff under punishment.
struct GameParams {
    GameParams(int n_players, double benefit, double cost, double punishment);

    int n_players;      // N >= 2
    double benefit;     // b >= 0
    double cost;        // c >= 0
    double punishment;  // gamma in [0, 1]

    double net_profit() const { return benefit - cost; }  // Delta = b - c
};

// An N-bit strategy profile; 1 = cooperator, 0 = defector. The cooperator
// count is cached and kept in sync by every mutation.
class Configuration {
public:
    explicit Configuration(std::vector<std::uint8_t> strategies);

    static Configuration all_defect(int n_players);
    static Configuration all_cooperate(int n_players);
    static Configuration random(int n_players, Xoshiro256& rng);
    // Bit k of mask is player k's strategy (oracle enumeration order).
    static Configuration from_mask(int n_players, std::uint64_t mask);

    int size() const { return static_cast<int>(strategies_.size()); }
    int cooperator_count() const { return cooperator_count_; }
    int strategy(int k) const { return strategies_[static_cast<std::size_t>(k)]; }
    void flip(int k);

    bool operator==(const Configuration& other) const = default;

private:
    std::vector<std::uint8_t> strategies_;
    int cooperator_count_;
};

// Per-player payoffs. All formulas depend on the configuration only through
// the player's own bit and the cooperator count M.
double payoff_cooperator(const Configuration& config, int k, const GameParams& p);
double payoff_defector(const Configuration& config, int k, const GameParams& p);
double payoff_defector_punished(const Configuration& config, int k, const GameParams& p);
double earnings(const Configuration& config, int k, const GameParams& p);

// Cooperation risk mu = c - b/N and its punishment-reduced form
// mu' = mu - gamma*b*rho*(N-1)/N, always <= mu for rho in [0,1].
double cooperation_risk(const GameParams& p);
double cooperation_risk_punished(const GameParams& p, double mean_density);

// Mean-field payoff decrement from punishment: -gamma*b*rho*(1-rho) <= 0.
double payoff_decrement_meanfield(double gamma, double b, double mean_density);

}  // namespace coopfield

#endif
