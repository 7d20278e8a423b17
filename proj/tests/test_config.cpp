#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "eda/config.hpp"
#include "eda/presets.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("SimConfig defaults match the documented contract") {
    const eda::SimConfig cfg;
    CHECK(cfg.n_peers == 1000);
    CHECK(cfg.sample_ratio == 0.02);
    CHECK(cfg.epsilon == 0.01);
    CHECK(cfg.byzantine_fraction == 0.0);
    CHECK(cfg.seed == 0);
    CHECK(cfg.init_mode == eda::InitMode::Random);
    CHECK(cfg.jitter == 0.5);
    CHECK(cfg.max_rounds == 100);
    CHECK(cfg.record_history);
    REQUIRE(cfg.transactions.size() == 1);
    CHECK(eda::anchor_of(cfg.transactions[0]) == Approx(0.5).margin(1e-12));
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("SimConfig validation names the offending field") {
    eda::SimConfig cfg;

    cfg.n_peers = 1;
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("n_peers"));
    cfg = {};

    cfg.sample_ratio = 0.0;
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("sample_ratio"));
    cfg.sample_ratio = 1.5;
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("sample_ratio"));
    cfg = {};

    cfg.epsilon = 0.0;
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("epsilon"));
    cfg.epsilon = 1.0;  // the agreement band must be narrower than the whole interval
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("epsilon"));
    cfg = {};

    cfg.byzantine_fraction = -0.1;
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("byzantine_fraction"));
    cfg.byzantine_fraction = 1.0;
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("byzantine_fraction"));
    cfg = {};

    cfg.jitter = -0.01;
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("jitter"));
    cfg = {};

    cfg.max_rounds = 0;
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("max_rounds"));
    cfg = {};

    cfg.transactions.clear();
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("transactions"));
    cfg = {};

    // Equal digests with distinct indices model a deliberate capacity
    // collision and stay valid; a fully identical id is a config error.
    cfg.transactions = {eda::TransactionId::from_anchor(0, 0.5),
                        eda::TransactionId::from_anchor(1, 0.5)};
    CHECK_NOTHROW(cfg.validate());
    cfg.transactions = {eda::TransactionId::from_anchor(2, 0.5),
                        eda::TransactionId::from_anchor(2, 0.5)};
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("duplicate"));
}

TEST_CASE("evenly_spaced_transactions spreads anchors over the unit interval") {
    CHECK_THROWS_AS(eda::evenly_spaced_transactions(0), std::invalid_argument);

    const auto one = eda::evenly_spaced_transactions(1);
    REQUIRE(one.size() == 1);
    CHECK(eda::anchor_of(one[0]) == Approx(0.5).margin(1e-12));

    const auto eleven = eda::evenly_spaced_transactions(11);
    REQUIRE(eleven.size() == 11);
    for (std::uint32_t k = 0; k < 11; ++k) {
        CHECK(eleven[k].index == k);
        CHECK(eda::anchor_of(eleven[k]) == Approx(k / 10.0).margin(1e-12));
    }
    CHECK(eda::anchor_of(eleven.front()) == 0.0);
    CHECK(eda::anchor_of(eleven.back()) == 1.0);

    // Distinct digests, so the per-transaction streams never collide.
    eda::SimConfig cfg;
    cfg.transactions = eleven;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("presets cover the reference experiments at both scales") {
    const auto names = eda::preset_names();
    REQUIRE(names.size() == 6);

    const eda::SimConfig fig1 = eda::preset_config("fig1-uniform");
    CHECK(fig1.n_peers == 20000);
    CHECK(fig1.sample_ratio == 0.01);
    CHECK(fig1.epsilon == 0.01);
    CHECK(fig1.byzantine_fraction == 0.0);
    CHECK(fig1.init_mode == eda::InitMode::UniformGrid);
    CHECK(fig1.jitter == 0.5);
    CHECK(fig1.transactions.size() == 1);

    const eda::SimConfig fig2 = eda::preset_config("fig2-random");
    CHECK(fig2.init_mode == eda::InitMode::Random);
    CHECK(fig2.n_peers == 20000);

    const eda::SimConfig fig4 = eda::preset_config("fig4-parallel");
    CHECK(fig4.n_peers == 20000);
    CHECK(fig4.byzantine_fraction == 0.01);
    CHECK(fig4.transactions.size() == 10);
    CHECK(fig4.jitter == 0.05);

    const eda::SimConfig fig1_desk = eda::preset_config("fig1-uniform-desk");
    CHECK(fig1_desk.n_peers == 1000);
    CHECK(fig1_desk.sample_ratio == 0.02);
    CHECK(fig1_desk.init_mode == eda::InitMode::UniformGrid);

    const eda::SimConfig fig2_desk = eda::preset_config("fig2-random-desk");
    CHECK(fig2_desk.init_mode == eda::InitMode::Random);
    CHECK(fig2_desk.n_peers == 1000);

    const eda::SimConfig fig4_desk = eda::preset_config("fig4-parallel-desk");
    CHECK(fig4_desk.n_peers == 2000);
    CHECK(fig4_desk.sample_ratio == 0.05);
    CHECK(fig4_desk.byzantine_fraction == 0.01);
    CHECK(fig4_desk.transactions.size() == 10);

    for (const auto& name : names) { CHECK_NOTHROW(eda::preset_config(name).validate()); }
    for (const auto& preset : eda::experiment_presets()) { CHECK_FALSE(preset.description.empty()); }

    CHECK_THROWS_AS(eda::preset_config("fig9-nope"), std::invalid_argument);
}
