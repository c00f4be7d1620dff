#ifndef COOPFIELD_ORACLE_HPP
#define COOPFIELD_ORACLE_HPP

#include "coopfield/energy.hpp"
#include "coopfield/game.hpp"
#include "coopfield/thermo.hpp"

namespace coopfield {

// Hard cap: 2^20 states keeps a full enumeration around a second.
inline constexpr int kOracleMaxPlayers = 20;

// H(s) = -sum_k (earnings_k(s) - risk * n_k), the per-player route to the
// configuration energy. With risk = mu'(rho) this equals the count-reduced
// -alpha2 M^2 - alpha1 M identically; the oracle keeps the per-player form so
// the two paths stay independent cross-checks.
double configuration_energy(const Configuration& config, const GameParams& p, double risk);

// Ground truth by summing Boltzmann weights over all 2^N bit patterns.
ThermoResult enumerate_thermo(const GameParams& p, double beta, const RiskMode& mode);

// Connected correlation <n_j n_k> - <n_j><n_k> under the exact measure.
double enumerate_pair_correlation(const GameParams& p, double beta, const RiskMode& mode,
                                  int j, int k);

struct NashResult {
    Configuration config;
    bool degenerate;  // another configuration ties the minimum
};

// Configuration minimizing the energy. For gamma = 0 this is all-cooperate
// when Delta > mu and all-defect when Delta < mu; exact ties return
// all-defect with the degeneracy flag set.
NashResult nash_ground_state(const GameParams& p, const RiskMode& mode);

}  // namespace coopfield

#endif
