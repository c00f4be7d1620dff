#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "coopfield/energy.hpp"
#include "coopfield/errors.hpp"
#include "coopfield/special.hpp"
#include "coopfield/thermo.hpp"

using namespace coopfield;

TEST_CASE("closed-form public-goods density") {
    SUBCASE("random play at infinite temperature") {
        CHECK(pg_mean_density(GameParams(16, 1.3, 0.9, 0.0), 0.0) == doctest::Approx(0.5));
    }
    SUBCASE("symmetric point b(1+1/N) = 2c") {
        const GameParams p(2, 1.0, 0.75, 0.0);  // Delta = mu = 0.25
        for (double beta : {0.1, 1.0, 7.0}) {
            CHECK(pg_mean_density(p, beta) == doctest::Approx(0.5).epsilon(1e-14));
        }
    }
    SUBCASE("unit gap") {
        const GameParams p(2, 1.0, 0.25, 0.0);  // Delta - mu = 1
        CHECK(pg_mean_density(p, 1.0) ==
              doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-14));
    }
    SUBCASE("punished games are rejected") {
        CHECK_THROWS_AS(pg_mean_density(GameParams(4, 1.0, 0.5, 0.5), 1.0), ModeError);
    }
    SUBCASE("monotone in beta away from the symmetric point") {
        const GameParams favouring(8, 1.0, 0.2, 0.0);   // Delta > mu
        const GameParams inhibiting(8, 1.0, 0.9, 0.0);  // Delta < mu
        double prev_up = 0.5, prev_down = 0.5;
        for (double beta = 0.25; beta <= 5.0; beta += 0.25) {
            const double up = pg_mean_density(favouring, beta);
            const double down = pg_mean_density(inhibiting, beta);
            CHECK(up > prev_up);
            CHECK(down < prev_down);
            prev_up = up;
            prev_down = down;
        }
    }
}

TEST_CASE("exact thermodynamics from the degeneracy sum") {
    SUBCASE("uniform measure at beta = 0") {
        for (int n : {2, 64, 1024, 16384}) {
            const GameParams p(n, 1.0, 0.7, 1.0);
            const ThermoResult t =
                exact_thermo(build_energy_model(p, 0.0, RiskMode::mean_field()), 0.0);
            CHECK(t.mean_density == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(t.log_partition == doctest::Approx(n * std::log(2.0)).epsilon(1e-12));
        }
    }
    SUBCASE("gamma = 0 factorizes onto the closed form") {
        for (int n : {2, 64, 1024}) {
            const GameParams p(n, 1.0, 0.3, 0.0);
            for (double beta : {0.1, 1.0, 5.0}) {
                const ThermoResult t =
                    exact_thermo(build_energy_model(p, beta, RiskMode::bare()), beta);
                const double nbar = pg_mean_density(p, beta);
                CHECK(std::abs(t.mean_density - nbar) < 1e-12);
                CHECK(std::abs(t.density_variance - nbar * (1.0 - nbar) / n) < 1e-12);
                CHECK(t.log_partition ==
                      doctest::Approx(n * std::log1p(std::exp(
                                              beta * (p.net_profit() - cooperation_risk(p)))))
                          .epsilon(1e-12));
            }
        }
    }
    SUBCASE("frozen reference point, N=4 punished game") {
        const GameParams p(4, 1.0, 0.5, 1.0);
        const ThermoResult t =
            exact_thermo(build_energy_model(p, 1.0, RiskMode::mean_field()), 1.0);
        CHECK(t.log_partition == doctest::Approx(3.737843424598758).epsilon(1e-12));
        CHECK(t.mean_density == doctest::Approx(0.725161408859805).epsilon(1e-12));
        CHECK(t.density_variance == doctest::Approx(0.069210015344758).epsilon(1e-10));
        CHECK(t.mean_energy == doctest::Approx(-1.427798220628428).epsilon(1e-10));
    }
    SUBCASE("NaN couplings are rejected") {
        const GameParams p(4, 1.0, 0.5, 1.0);
        EnergyModel model = build_energy_model(p, 1.0, RiskMode::mean_field());
        model.alpha1 = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(exact_thermo(model, 1.0), ParameterError);
    }
    SUBCASE("bounded density, nonnegative variance") {
        const GameParams p(256, 1.9, 1.7, 0.5);
        for (double beta : {0.0, 0.7, 3.3, 9.0}) {
            const ThermoResult t =
                exact_thermo(build_energy_model(p, beta, RiskMode::mean_field()), beta);
            CHECK(t.mean_density >= 0.0);
            CHECK(t.mean_density <= 1.0);
            CHECK(t.density_variance >= 0.0);
        }
    }
    SUBCASE("large N with nonzero couplings stays finite and sane") {
        const GameParams p(16384, 1.0, 0.664, 1.0);
        const ThermoResult t =
            exact_thermo(build_energy_model(p, 3.0, RiskMode::mean_field()), 3.0);
        CHECK(std::isfinite(t.log_partition));
        CHECK(t.mean_density >= 0.0);
        CHECK(t.mean_density <= 1.0);
        CHECK(t.density_variance >= 0.0);
        CHECK(std::isfinite(t.mean_energy));
    }
}

TEST_CASE("crossing temperature formula") {
    CHECK(crossing_beta(1.0, 0.75) == doctest::Approx(std::log(2.0) / 0.5).epsilon(1e-12));
    CHECK(crossing_beta(2.0, 2.0) == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
    CHECK(crossing_beta(1.0, 0.6) == doctest::Approx(std::log(2.0) / 0.2).epsilon(1e-12));
    CHECK_THROWS_AS(crossing_beta(1.0, 0.45), std::domain_error);
    CHECK_THROWS_AS(crossing_beta(1.0, 0.5), std::domain_error);
}

TEST_CASE("stationary densities of the digamma condition") {
    SUBCASE("symmetric unpunished game has the single root 1/2") {
        const GameParams p(2, 1.0, 0.75, 0.0);  // alpha1 = 0
        const auto roots = solve_density_condition(p, 2.0, RiskMode::bare());
        REQUIRE(roots.size() == 1);
        CHECK(roots[0] == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("near the first-order region the largest root is deep in cooperation") {
        const GameParams p(1024, 1.0, 0.664, 1.0);
        const auto roots = solve_density_condition(p, 4.0, RiskMode::mean_field());
        REQUIRE(!roots.empty());
        CHECK(roots.back() > 0.9);
        CHECK(std::is_sorted(roots.begin(), roots.end()));
    }
    SUBCASE("roots satisfy the condition and match the summand maximum") {
        const GameParams p(64, 1.0, 0.5, 1.0);
        const double beta = 1.0;
        const EnergyModel model = build_energy_model(p, beta, RiskMode::mean_field());
        const auto roots = solve_density_condition(model, beta);
        REQUIRE(roots.size() == 1);
        // Independent check: the discrete summand ln C(N,m) - beta E(m) peaks
        // at the count nearest the root.
        int argmax = 0;
        double best = -1e300;
        for (int m = 0; m <= 64; ++m) {
            const double w = log_choose(64, m) - beta * model.energy(m);
            if (w > best) {
                best = w;
                argmax = m;
            }
        }
        CHECK(std::lround(roots[0] * 64) == argmax);
        // Residual bound at every root.
        for (double rho : roots) {
            const double f = 2.0 * beta * model.alpha2 * 64 * rho + beta * model.alpha1 -
                             digamma(64 * rho + 1.0) + digamma(64 - 64 * rho + 1.0);
            CHECK(std::abs(f) < 1e-9);
        }
    }
    SUBCASE("residuals vanish across a parameter spread") {
        for (double c : {0.3, 0.6, 0.75}) {
            const GameParams p(128, 1.0, c, 1.0);
            for (double beta : {0.5, 2.0, 5.0}) {
                const EnergyModel model = build_energy_model(p, beta, RiskMode::mean_field());
                for (double rho : solve_density_condition(model, beta)) {
                    const double f = 2.0 * beta * model.alpha2 * 128 * rho +
                                     beta * model.alpha1 - digamma(128 * rho + 1.0) +
                                     digamma(128 - 128 * rho + 1.0);
                    CHECK(std::abs(f) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("self-consistent closure") {
    SUBCASE("no feedback without punishment") {
        const GameParams p(32, 1.0, 0.4, 0.0);
        CHECK(self_consistent_density(p, 1.3) ==
              doctest::Approx(pg_mean_density(p, 1.3)).epsilon(1e-12));
    }
    SUBCASE("infinite temperature fixes 1/2") {
        const GameParams p(32, 1.0, 0.4, 1.0);
        CHECK(self_consistent_density(p, 0.0) == doctest::Approx(0.5).epsilon(1e-10));
    }
    SUBCASE("returned point is a fixed point of one exact pass") {
        const GameParams p(16, 1.0, 0.5, 1.0);
        const double tol = 1e-10;
        const double rho = self_consistent_density(p, 1.0, tol);
        const EnergyModel model =
            build_energy_model_at_density(p, rho, RiskMode::self_consistent());
        CHECK(std::abs(exact_thermo(model, 1.0).mean_density - rho) < tol);
    }
    SUBCASE("iteration budget exhaustion carries the last iterates") {
        const GameParams p(16, 1.0, 0.5, 1.0);
        try {
            self_consistent_density(p, 1.0, 1e-14, 1);
            FAIL("expected a convergence error");
        } catch (const ConvergenceError& e) {
            CHECK(e.previous_iterate >= 0.0);
            CHECK(e.previous_iterate <= 1.0);
            CHECK(e.last_iterate >= 0.0);
            CHECK(e.last_iterate <= 1.0);
            CHECK(e.previous_iterate != e.last_iterate);
        }
    }
}

TEST_CASE("digamma-condition convenience overload uses the mode closure") {
    const GameParams p(64, 1.0, 0.5, 1.0);
    const auto via_params = solve_density_condition(p, 1.0, RiskMode::mean_field());
    const auto via_model =
        solve_density_condition(build_energy_model(p, 1.0, RiskMode::mean_field()), 1.0);
    REQUIRE(via_params.size() == via_model.size());
    for (std::size_t i = 0; i < via_params.size(); ++i) {
        CHECK(via_params[i] == doctest::Approx(via_model[i]).epsilon(1e-12));
    }
}
