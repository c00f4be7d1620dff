#include "coopfield/oracle.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "coopfield/errors.hpp"

namespace coopfield {

namespace {

void check_capacity(const GameParams& p) {
    if (p.n_players > kOracleMaxPlayers) {
        throw CapacityError("oracle enumeration capped at N <= " +
                            std::to_string(kOracleMaxPlayers) + " (got " +
                            std::to_string(p.n_players) + ")");
    }
}

// Risk coefficient entering the per-configuration energy, fixed by the mode's
// closure density. Bare (gamma = 0) reduces to the plain mu.
double effective_risk(const GameParams& p, double beta, const RiskMode& mode) {
    const EnergyModel model = build_energy_model(p, beta, mode);
    return cooperation_risk_punished(p, model.mean_density_used);
}

double mask_energy(std::uint64_t mask, const GameParams& p, double risk) {
    const int n = p.n_players;
    const int m = std::popcount(mask);
    const double g = p.punishment;
    const double share = p.benefit / n * m;
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        const double nk = (mask >> k) & 1u;
        const double earn = -p.cost * nk + share * (1.0 - g + g * nk);
        total += earn - risk * nk;
    }
    return -total;
}

}  // namespace

double configuration_energy(const Configuration& config, const GameParams& p, double risk) {
    if (config.size() != p.n_players) {
        throw ParameterError("configuration size does not match the game");
    }
    double total = 0.0;
    for (int k = 0; k < p.n_players; ++k) {
        total += earnings(config, k, p) - risk * config.strategy(k);
    }
    return -total;
}

ThermoResult enumerate_thermo(const GameParams& p, double beta, const RiskMode& mode) {
    check_capacity(p);
    if (!(beta >= 0.0)) throw ParameterError("beta must be nonnegative");
    const double risk = effective_risk(p, beta, mode);
    const int n = p.n_players;
    const std::uint64_t states = 1ull << n;

    std::vector<double> energies(states);
    double emin = std::numeric_limits<double>::infinity();
    for (std::uint64_t s = 0; s < states; ++s) {
        energies[s] = mask_energy(s, p, risk);
        emin = std::min(emin, energies[s]);
    }
    long double norm = 0.0L, dens = 0.0L;
    for (std::uint64_t s = 0; s < states; ++s) {
        const long double w = expl(static_cast<long double>(-beta * (energies[s] - emin)));
        norm += w;
        dens += w * (static_cast<long double>(std::popcount(s)) / n);
    }
    const double log_partition = -beta * emin + static_cast<double>(logl(norm));
    const double mean = static_cast<double>(dens / norm);
    long double var = 0.0L, men = 0.0L;
    for (std::uint64_t s = 0; s < states; ++s) {
        const long double w = expl(static_cast<long double>(-beta * (energies[s] - emin)));
        const long double d = static_cast<long double>(std::popcount(s)) / n - mean;
        var += w * d * d;
        men += w * static_cast<long double>(energies[s]);
    }
    return ThermoResult{log_partition, mean, static_cast<double>(var / norm),
                        static_cast<double>(men / norm)};
}

double enumerate_pair_correlation(const GameParams& p, double beta, const RiskMode& mode,
                                  int j, int k) {
    check_capacity(p);
    if (j == k) throw ParameterError("pair correlation requires j != k");
    if (j < 0 || j >= p.n_players || k < 0 || k >= p.n_players) {
        throw ParameterError("player index out of range");
    }
    const double risk = effective_risk(p, beta, mode);
    const int n = p.n_players;
    const std::uint64_t states = 1ull << n;

    double emin = std::numeric_limits<double>::infinity();
    std::vector<double> energies(states);
    for (std::uint64_t s = 0; s < states; ++s) {
        energies[s] = mask_energy(s, p, risk);
        emin = std::min(emin, energies[s]);
    }
    long double norm = 0.0L, ej = 0.0L, ek = 0.0L, ejk = 0.0L;
    for (std::uint64_t s = 0; s < states; ++s) {
        const long double w = expl(static_cast<long double>(-beta * (energies[s] - emin)));
        const long double nj = (s >> j) & 1u;
        const long double nk = (s >> k) & 1u;
        norm += w;
        ej += w * nj;
        ek += w * nk;
        ejk += w * nj * nk;
    }
    return static_cast<double>(ejk / norm - (ej / norm) * (ek / norm));
}

NashResult nash_ground_state(const GameParams& p, const RiskMode& mode) {
    check_capacity(p);
    // Ground states live at beta -> infinity; under the mean-field closures the
    // closure density saturates there, to 0 or 1 by the sign of Delta - mu.
    double rho = 0.0;
    if (mode.kind != RiskKind::Bare) {
        const double gap = p.net_profit() - cooperation_risk(p);
        rho = gap > 0.0 ? 1.0 : (gap == 0.0 ? 0.5 : 0.0);
    } else if (p.punishment > 0.0) {
        throw ModeError("bare risk mode requires gamma = 0");
    }
    const double risk = cooperation_risk_punished(p, rho);

    const std::uint64_t states = 1ull << p.n_players;
    std::uint64_t best = 0;
    double best_energy = mask_energy(0, p, risk);
    bool degenerate = false;
    const double scale = std::max({1.0, std::abs(best_energy)});
    for (std::uint64_t s = 1; s < states; ++s) {
        const double e = mask_energy(s, p, risk);
        if (e < best_energy - 1e-12 * scale) {
            best = s;
            best_energy = e;
            degenerate = false;
        } else if (std::abs(e - best_energy) <= 1e-12 * std::max(scale, std::abs(e))) {
            degenerate = true;
        }
    }
    return NashResult{Configuration::from_mask(p.n_players, best), degenerate};
}

}  // namespace coopfield
