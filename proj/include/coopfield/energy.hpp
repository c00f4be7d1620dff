#ifndef COOPFIELD_ENERGY_HPP
#define COOPFIELD_ENERGY_HPP

#include "coopfield/game.hpp"

namespace coopfield {

// How the mean density entering the risk correction mu' is evaluated.
enum class RiskKind {
    Bare,                 // no correction; only valid for gamma = 0
    MeanFieldClosedForm,  // rho = nbar(beta), the gamma=0 closed form
    SelfConsistent,       // rho = fixed point of the exact mean density
};

struct RiskMode {
    RiskKind kind = RiskKind::MeanFieldClosedForm;
    double tolerance = 1e-10;   // SelfConsistent only
    int max_iterations = 10000; // SelfConsistent only

    static RiskMode bare() { return {RiskKind::Bare}; }
    static RiskMode mean_field() { return {RiskKind::MeanFieldClosedForm}; }
    static RiskMode self_consistent(double tol = 1e-10, int max_iter = 10000) {
        return {RiskKind::SelfConsistent, tol, max_iter};
    }
};

// Reduced Hamiltonian H = -alpha2*M^2 - alpha1*M over cooperator counts M,
// with alpha2 = gamma*b/N and alpha1 = (Delta - mu) - gamma*b*(1 - rho*(N-1)/N).
// Energy depends on a configuration only through M, which is what makes exact
// thermodynamics at N = 1024 and beyond tractable.
struct EnergyModel {
    double alpha1;
    double alpha2;
    int n_players;
    GameParams source_params;
    RiskMode risk_mode;
    double mean_density_used;  // the rho baked into alpha1

    // E(m) = -alpha2 m^2 - alpha1 m, 0 <= m <= N.
    double energy(int m) const;
    // E(m +/- 1) - E(m) in O(1); used by the sampler.
    double flip_delta(int m, bool up) const {
        return up ? -(alpha2 * (2.0 * m + 1.0) + alpha1)
                  : alpha2 * (2.0 * m - 1.0) + alpha1;
    }
};

// The gamma=0 closed-form density nbar = 1/(1 + exp(-beta*(Delta - mu))),
// used both as an observable and as the mean-field closure for alpha1.
double mean_field_density(const GameParams& p, double beta);

// Builds the model with rho chosen by the risk mode. Bare requires gamma = 0;
// SelfConsistent runs the damped fixed-point iteration (see thermo.hpp).
EnergyModel build_energy_model(const GameParams& p, double beta, const RiskMode& mode);

// Builds the model with an explicit closure density (fixed-point iterations,
// oracle cross-checks).
EnergyModel build_energy_model_at_density(const GameParams& p, double rho,
                                          const RiskMode& mode);

}  // namespace coopfield

#endif
