#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "coopfield/energy.hpp"
#include "coopfield/errors.hpp"
#include "coopfield/game.hpp"
#include "coopfield/oracle.hpp"
#include "coopfield/rng.hpp"

using namespace coopfield;

namespace {

GameParams random_params(Xoshiro256& rng, int n_min = 2, int n_max = 12) {
    const int n = n_min + static_cast<int>(rng.uniform_index(
                              static_cast<std::uint64_t>(n_max - n_min + 1)));
    const double gammas[3] = {0.0, 0.5, 1.0};
    return GameParams(n, 2.0 * rng.uniform(), 2.0 * rng.uniform(),
                      gammas[rng.uniform_index(3)]);
}

}  // namespace

TEST_CASE("game parameter invariants") {
    CHECK_THROWS_AS(GameParams(1, 1.0, 0.5, 0.0), ParameterError);
    CHECK_THROWS_AS(GameParams(4, -1.0, 0.5, 0.0), ParameterError);
    CHECK_THROWS_AS(GameParams(4, 1.0, -0.5, 0.0), ParameterError);
    CHECK_THROWS_AS(GameParams(4, 1.0, 0.5, 1.5), ParameterError);
    CHECK_THROWS_AS(GameParams(4, 1.0, 0.5, -0.1), ParameterError);
    const GameParams p(4, 1.25, 0.5, 1.0);
    CHECK(p.net_profit() == doctest::Approx(0.75));
}

TEST_CASE("configuration tracks its cooperator count") {
    Configuration cfg = Configuration::from_mask(5, 0b10110);
    CHECK(cfg.cooperator_count() == 3);
    CHECK(cfg.strategy(0) == 0);
    CHECK(cfg.strategy(1) == 1);
    cfg.flip(0);
    CHECK(cfg.cooperator_count() == 4);
    cfg.flip(1);
    CHECK(cfg.cooperator_count() == 3);
    CHECK(Configuration::all_cooperate(7).cooperator_count() == 7);
    CHECK(Configuration::all_defect(7).cooperator_count() == 0);
}

TEST_CASE("cooperator payoff") {
    const GameParams p2(2, 1.0, 0.25, 0.0);
    CHECK(payoff_cooperator(Configuration::from_mask(2, 0b11), 0, p2) ==
          doctest::Approx(0.75));

    const GameParams p4(4, 2.0, 0.5, 0.0);
    // |1010> lists player 0 first; mask bit k = player k.
    CHECK(payoff_cooperator(Configuration::from_mask(4, 0b0101), 0, p4) ==
          doctest::Approx(0.5));

    // Defectors earn nothing through the cooperative channel.
    CHECK(payoff_cooperator(Configuration::from_mask(4, 0b0101), 1, p4) == 0.0);
    CHECK(payoff_cooperator(Configuration::all_defect(4), 2, p4) == 0.0);

    CHECK_THROWS_AS(payoff_cooperator(Configuration::all_defect(4), 4, p4), ParameterError);
    CHECK_THROWS_AS(payoff_cooperator(Configuration::all_defect(4), -1, p4), ParameterError);
    CHECK_THROWS_AS(payoff_cooperator(Configuration::all_defect(3), 0, p4), ParameterError);
}

TEST_CASE("defector payoff") {
    const GameParams p2(2, 1.0, 0.25, 0.0);
    CHECK(payoff_defector(Configuration::from_mask(2, 0b01), 1, p2) == doctest::Approx(0.5));

    const GameParams p4(4, 2.0, 0.5, 0.0);
    CHECK(payoff_defector(Configuration::from_mask(4, 0b0101), 0, p4) == 0.0);
    CHECK(payoff_defector(Configuration::all_defect(4), 2, p4) == 0.0);
}

TEST_CASE("punished defector payoff") {
    const GameParams half(2, 1.0, 0.25, 0.5);
    CHECK(payoff_defector_punished(Configuration::from_mask(2, 0b01), 1, half) ==
          doctest::Approx(0.25));

    const GameParams full(3, 1.5, 0.25, 1.0);
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
        const Configuration cfg = Configuration::from_mask(3, mask);
        for (int k = 0; k < 3; ++k) {
            CHECK(payoff_defector_punished(cfg, k, full) == 0.0);
        }
    }

    const GameParams off(3, 1.5, 0.25, 0.0);
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
        const Configuration cfg = Configuration::from_mask(3, mask);
        for (int k = 0; k < 3; ++k) {
            CHECK(payoff_defector_punished(cfg, k, off) == payoff_defector(cfg, k, off));
        }
    }
}

TEST_CASE("total earnings and the payoff split") {
    const GameParams p2(2, 1.0, 0.25, 0.0);
    CHECK(earnings(Configuration::from_mask(2, 0b11), 0, p2) == doctest::Approx(0.75));
    CHECK(earnings(Configuration::all_defect(2), 0, p2) == 0.0);
    CHECK(earnings(Configuration::all_defect(2), 1, p2) == 0.0);

    // Fully punished defector facing a cooperator earns nothing.
    const GameParams punished(2, 1.0, 0.25, 1.0);
    CHECK(earnings(Configuration::from_mask(2, 0b10), 0, punished) == doctest::Approx(0.0));

    // earnings = cooperative + punished-defective, for every input.
    Xoshiro256 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const GameParams p = random_params(rng);
        const Configuration cfg = Configuration::random(p.n_players, rng);
        for (int k = 0; k < p.n_players; ++k) {
            const double whole = earnings(cfg, k, p);
            const double split =
                payoff_cooperator(cfg, k, p) + payoff_defector_punished(cfg, k, p);
            CHECK(whole == doctest::Approx(split).epsilon(1e-12));
        }
    }
}

TEST_CASE("cooperation risk") {
    CHECK(cooperation_risk(GameParams(2, 1.0, 0.75, 0.0)) == doctest::Approx(0.25));
    CHECK(cooperation_risk(GameParams(4, 2.0, 0.5, 0.0)) == doctest::Approx(0.0));
    CHECK(cooperation_risk(GameParams(1024, 1.0, 0.664, 0.0)) ==
          doctest::Approx(0.664 - 1.0 / 1024).epsilon(1e-14));
}

TEST_CASE("punished cooperation risk") {
    const GameParams p(2, 1.0, 0.75, 1.0);
    CHECK(cooperation_risk_punished(p, 0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(cooperation_risk_punished(p, 0.0) == doctest::Approx(cooperation_risk(p)));

    const GameParams unpunished(8, 1.0, 0.75, 0.0);
    CHECK(cooperation_risk_punished(unpunished, 0.7) ==
          doctest::Approx(cooperation_risk(unpunished)));

    CHECK_THROWS_AS(cooperation_risk_punished(p, -0.1), ParameterError);
    CHECK_THROWS_AS(cooperation_risk_punished(p, 1.1), ParameterError);

    // Punishment never raises the risk.
    Xoshiro256 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const GameParams q = random_params(rng);
        const double rho = rng.uniform();
        CHECK(cooperation_risk_punished(q, rho) <= cooperation_risk(q) + 1e-15);
    }
}

TEST_CASE("mean-field payoff decrement") {
    CHECK(payoff_decrement_meanfield(1.0, 1.0, 0.5) == doctest::Approx(-0.25));
    CHECK(payoff_decrement_meanfield(1.0, 2.0, 0.0) == 0.0);
    CHECK(payoff_decrement_meanfield(1.0, 2.0, 1.0) == 0.0);
    CHECK(payoff_decrement_meanfield(0.0, 2.0, 0.3) == 0.0);
    Xoshiro256 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        CHECK(payoff_decrement_meanfield(rng.uniform(), 2.0 * rng.uniform(),
                                         rng.uniform()) <= 0.0);
    }
    CHECK_THROWS_AS(payoff_decrement_meanfield(1.0, 1.0, 1.5), ParameterError);
    CHECK_THROWS_AS(payoff_decrement_meanfield(2.0, 1.0, 0.5), ParameterError);
}

TEST_CASE("energy model couplings") {
    SUBCASE("gamma = 0 reduces to the one-body model") {
        const GameParams p(2, 1.0, 0.75, 0.0);
        const EnergyModel model = build_energy_model(p, 1.0, RiskMode::bare());
        CHECK(model.alpha2 == 0.0);
        CHECK(model.alpha1 == doctest::Approx(0.0).epsilon(1e-14));  // Delta = mu here
    }
    SUBCASE("two-body coupling is gamma b / N") {
        const GameParams p(1024, 1.0, 0.5, 1.0);
        const EnergyModel model = build_energy_model(p, 2.0, RiskMode::mean_field());
        CHECK(model.alpha2 == doctest::Approx(1.0 / 1024).epsilon(1e-14));
    }
    SUBCASE("infinite temperature closes at density 1/2") {
        const GameParams p(64, 1.7, 0.3, 0.8);
        const EnergyModel model = build_energy_model(p, 0.0, RiskMode::mean_field());
        CHECK(model.mean_density_used == doctest::Approx(0.5));
    }
    SUBCASE("bare mode rejects punishment") {
        const GameParams p(8, 1.0, 0.5, 0.5);
        CHECK_THROWS_AS(build_energy_model(p, 1.0, RiskMode::bare()), ModeError);
    }
    SUBCASE("negative beta is rejected") {
        const GameParams p(8, 1.0, 0.5, 0.0);
        CHECK_THROWS_AS(build_energy_model(p, -1.0, RiskMode::bare()), ParameterError);
    }
    SUBCASE("alpha2 is nonnegative and vanishes only without punishment") {
        Xoshiro256 rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            const GameParams p = random_params(rng);
            const EnergyModel model = build_energy_model(p, rng.uniform(),
                                                         RiskMode::mean_field());
            CHECK(model.alpha2 >= 0.0);
            CHECK((model.alpha2 == 0.0) == (p.punishment * p.benefit == 0.0));
        }
    }
}

TEST_CASE("count-reduced energy") {
    const GameParams p(2, 1.0, 0.25, 0.0);
    const EnergyModel model = build_energy_model(p, 1.0, RiskMode::bare());
    CHECK(model.alpha1 == doctest::Approx(1.0));
    CHECK(model.energy(0) == 0.0);
    CHECK(model.energy(2) == doctest::Approx(-2.0));

    EnergyModel manual = model;
    manual.alpha1 = 1.0;
    manual.alpha2 = 0.5;
    manual.n_players = 4;
    CHECK(manual.energy(3) == doctest::Approx(-7.5));
    CHECK_THROWS_AS(manual.energy(-1), ParameterError);
    CHECK_THROWS_AS(manual.energy(5), ParameterError);

    // O(1) flip deltas match energy differences.
    for (int m = 0; m < 4; ++m) {
        CHECK(manual.flip_delta(m, true) ==
              doctest::Approx(manual.energy(m + 1) - manual.energy(m)).epsilon(1e-14));
        CHECK(manual.flip_delta(m + 1, false) ==
              doctest::Approx(manual.energy(m) - manual.energy(m + 1)).epsilon(1e-14));
    }
}

TEST_CASE("count path equals the per-player path on every configuration") {
    Xoshiro256 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        const GameParams p = random_params(rng, 2, 8);
        const double rho = rng.uniform();
        const EnergyModel model =
            build_energy_model_at_density(p, rho, RiskMode::mean_field());
        const double risk = cooperation_risk_punished(p, rho);
        const double scale = std::max(1.0, std::abs(model.energy(p.n_players)));
        for (std::uint64_t mask = 0; mask < (1ull << p.n_players); ++mask) {
            const Configuration cfg = Configuration::from_mask(p.n_players, mask);
            const double per_player = configuration_energy(cfg, p, risk);
            CHECK(std::abs(per_player - model.energy(cfg.cooperator_count())) <=
                  1e-12 * scale);
        }
    }
}

TEST_CASE("energy is invariant under player permutations") {
    Xoshiro256 rng(55);
    const GameParams p(8, 1.3, 0.6, 0.7);
    const double risk = cooperation_risk_punished(p, 0.4);
    for (int trial = 0; trial < 50; ++trial) {
        Configuration cfg = Configuration::random(8, rng);
        const double reference = configuration_energy(cfg, p, risk);
        // Rotate the strategy vector; the cooperator count never changes.
        std::vector<std::uint8_t> bits;
        for (int k = 0; k < 8; ++k) bits.push_back(static_cast<std::uint8_t>(cfg.strategy(k)));
        std::rotate(bits.begin(), bits.begin() + 3, bits.end());
        const Configuration rotated{bits};
        CHECK(configuration_energy(rotated, p, risk) ==
              doctest::Approx(reference).epsilon(1e-12));
    }
}
