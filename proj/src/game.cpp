#include "coopfield/game.hpp"

#include <cmath>
#include <string>

#include "coopfield/errors.hpp"

namespace coopfield {

namespace {

void check_player_index(const Configuration& config, int k, const GameParams& p) {
    if (config.size() != p.n_players) {
        throw ParameterError("configuration has " + std::to_string(config.size()) +
                             " players but game expects " + std::to_string(p.n_players));
    }
    if (k < 0 || k >= p.n_players) {
        throw ParameterError("player index " + std::to_string(k) +
                             " out of range [0, " + std::to_string(p.n_players) + ")");
    }
}

}  // namespace

GameParams::GameParams(int n_players_in, double benefit_in, double cost_in,
                       double punishment_in)
    : n_players(n_players_in),
      benefit(benefit_in),
      cost(cost_in),
      punishment(punishment_in) {
    if (n_players < 2) {
        throw ParameterError("n_players must be at least 2 (got " +
                             std::to_string(n_players) + ")");
    }
    if (!(benefit >= 0.0)) {
        throw ParameterError("benefit must be nonnegative (got " +
                             std::to_string(benefit) + ")");
    }
    if (!(cost >= 0.0)) {
        throw ParameterError("cost must be nonnegative (got " + std::to_string(cost) + ")");
    }
    if (!(punishment >= 0.0 && punishment <= 1.0)) {
        throw ParameterError("punishment must lie in [0,1] (got " +
                             std::to_string(punishment) + ")");
    }
}

Configuration::Configuration(std::vector<std::uint8_t> strategies)
    : strategies_(std::move(strategies)), cooperator_count_(0) {
    for (auto& s : strategies_) {
        if (s > 1) throw ParameterError("strategies must be 0 or 1");
        cooperator_count_ += s;
    }
}

Configuration Configuration::all_defect(int n_players) {
    return Configuration(std::vector<std::uint8_t>(static_cast<std::size_t>(n_players), 0));
}

Configuration Configuration::all_cooperate(int n_players) {
    return Configuration(std::vector<std::uint8_t>(static_cast<std::size_t>(n_players), 1));
}

Configuration Configuration::random(int n_players, Xoshiro256& rng) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n_players));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next() >> 63);
    return Configuration(std::move(bits));
}

Configuration Configuration::from_mask(int n_players, std::uint64_t mask) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n_players));
    for (int k = 0; k < n_players; ++k) bits[static_cast<std::size_t>(k)] = (mask >> k) & 1u;
    return Configuration(std::move(bits));
}

void Configuration::flip(int k) {
    auto& bit = strategies_[static_cast<std::size_t>(k)];
    cooperator_count_ += bit ? -1 : +1;
    bit ^= 1u;
}

double payoff_cooperator(const Configuration& config, int k, const GameParams& p) {
    check_player_index(config, k, p);
    const double nk = config.strategy(k);
    const double m = config.cooperator_count();
    return nk * ((p.benefit / p.n_players) * m - p.cost * nk);
}

double payoff_defector(const Configuration& config, int k, const GameParams& p) {
    check_player_index(config, k, p);
    const double nk = config.strategy(k);
    const double m = config.cooperator_count();
    // The -c*nk term vanishes identically on the defector support.
    return (1.0 - nk) * ((p.benefit / p.n_players) * m - p.cost * nk);
}

double payoff_defector_punished(const Configuration& config, int k, const GameParams& p) {
    return (1.0 - p.punishment) * payoff_defector(config, k, p);
}

double earnings(const Configuration& config, int k, const GameParams& p) {
    check_player_index(config, k, p);
    const double nk = config.strategy(k);
    const double m = config.cooperator_count();
    const double g = p.punishment;
    return -p.cost * nk + (p.benefit / p.n_players) * (1.0 - g + g * nk) * m;
}

double cooperation_risk(const GameParams& p) {
    return p.cost - p.benefit / p.n_players;
}

double cooperation_risk_punished(const GameParams& p, double mean_density) {
    if (!(mean_density >= 0.0 && mean_density <= 1.0)) {
        throw ParameterError("mean_density must lie in [0,1] (got " +
                             std::to_string(mean_density) + ")");
    }
    const double n = p.n_players;
    return cooperation_risk(p) -
           p.punishment * p.benefit * mean_density * (n - 1.0) / n;
}

double payoff_decrement_meanfield(double gamma, double b, double mean_density) {
    if (!(mean_density >= 0.0 && mean_density <= 1.0)) {
        throw ParameterError("mean_density must lie in [0,1]");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw ParameterError("gamma must lie in [0,1]");
    }
    return -gamma * b * mean_density * (1.0 - mean_density);
}

}  // namespace coopfield
