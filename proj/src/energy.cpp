#include "coopfield/energy.hpp"

#include <cmath>
#include <string>

#include "coopfield/errors.hpp"
#include "coopfield/thermo.hpp"

namespace coopfield {

double EnergyModel::energy(int m) const {
    if (m < 0 || m > n_players) {
        throw ParameterError("cooperator count " + std::to_string(m) +
                             " out of range [0, " + std::to_string(n_players) + "]");
    }
    const double md = m;
    return -alpha2 * md * md - alpha1 * md;
}

double mean_field_density(const GameParams& p, double beta) {
    const double gap = p.net_profit() - cooperation_risk(p);  // Delta - mu
    return 1.0 / (1.0 + std::exp(-beta * gap));
}

EnergyModel build_energy_model_at_density(const GameParams& p, double rho,
                                          const RiskMode& mode) {
    const double n = p.n_players;
    const double alpha2 = p.punishment * p.benefit / n;
    const double base = p.net_profit() - cooperation_risk(p);  // Delta - c + b/N
    const double alpha1 =
        base - p.punishment * p.benefit * (1.0 - rho * (n - 1.0) / n);
    if (std::isnan(alpha1) || std::isnan(alpha2)) {
        throw ParameterError("couplings are NaN");
    }
    return EnergyModel{alpha1, alpha2, p.n_players, p, mode, rho};
}

EnergyModel build_energy_model(const GameParams& p, double beta, const RiskMode& mode) {
    if (!(beta >= 0.0)) {
        throw ParameterError("beta must be nonnegative (got " + std::to_string(beta) + ")");
    }
    double rho = 0.0;
    switch (mode.kind) {
        case RiskKind::Bare:
            if (p.punishment > 0.0) {
                throw ModeError("bare risk mode requires gamma = 0 (got " +
                                std::to_string(p.punishment) + ")");
            }
            rho = 0.0;
            break;
        case RiskKind::MeanFieldClosedForm:
            rho = mean_field_density(p, beta);
            break;
        case RiskKind::SelfConsistent:
            rho = self_consistent_density(p, beta, mode.tolerance, mode.max_iterations);
            break;
    }
    return build_energy_model_at_density(p, rho, mode);
}

}  // namespace coopfield
