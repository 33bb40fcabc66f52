#include "netepi/error.hpp"
#include "netepi/grounder.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace netepi;

TEST_CASE("coin counts for two individuals and one contact")
{
    ModelSpec spec;
    spec.horizon = 3;
    spec.transmission_prob = 0.8;
    spec.external_prob = 0.1;
    const TemporalContactGraph g({"a", "b"}, {{1, 0, 1}});
    const GroundedModel m = ground(spec, g);
    CHECK(m.count(CoinKind::External) == 4);
    CHECK(m.count(CoinKind::Transmission) == 1);
    CHECK(m.count(CoinKind::Persistence) == 0);
    CHECK(m.count(CoinKind::Immunity) == 6);
    CHECK(m.coins.size() == 11);

    const auto into2 = m.transmissions_into(2);
    REQUIRE(into2.size() == 1);
    CHECK(into2[0].target == 1);
    CHECK(into2[0].source == 0);
    CHECK(m.coins[into2[0].coin] == Coin{CoinKind::Transmission, 1, PersonIndex{0}, 2, 0.8});
    CHECK(m.transmissions_into(3).empty());
    CHECK(m.initial_infected == std::vector<PersonIndex>{0});
}

TEST_CASE("single individual with a one-step horizon")
{
    ModelSpec spec;
    spec.horizon = 1;
    spec.persistence_prob = 0.5;
    const GroundedModel m = ground(spec, TemporalContactGraph({"solo"}, {}));
    CHECK(m.count(CoinKind::External) == 0);
    CHECK(m.count(CoinKind::Transmission) == 0);
    CHECK(m.count(CoinKind::Persistence) == 0);
    CHECK(m.count(CoinKind::Immunity) == 1);
}

TEST_CASE("contacts at the last step ground no coin")
{
    ModelSpec spec;
    spec.horizon = 3;
    const GroundedModel m = ground(spec, TemporalContactGraph({"a", "b"}, {{1, 0, 3}, {1, 0, 2}}));
    CHECK(m.count(CoinKind::Transmission) == 1);
    CHECK(m.transmissions_into(3).size() == 1);
}

TEST_CASE("grounding errors")
{
    ModelSpec spec;
    spec.initial_infected = std::vector<std::string>{"zed"};
    const TemporalContactGraph g({"a", "b"}, {});
    CHECK_THROWS_WITH_AS(ground(spec, g), doctest::Contains("zed"), Error);
    try {
        ground(spec, g);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownSeedIndividual);
    }
    spec.initial_infected = std::size_t{3};
    CHECK_THROWS_AS(ground(spec, g), Error);
    try {
        ground(ModelSpec{}, TemporalContactGraph({}, {}));
        FAIL("expected EmptyPopulation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyPopulation);
    }
}

TEST_CASE("property: coin counts match the closed form and the index helpers agree")
{
    std::mt19937_64 gen(77);
    for (int iter = 0; iter < 200; ++iter) {
        const auto inst = testing::random_instance(gen, 1, 6, 1, 8, 0.3);
        const GroundedModel m = ground(inst.spec, inst.graph);
        const std::size_t n = inst.graph.size();
        const std::size_t T = std::size_t(inst.spec.horizon);
        std::size_t live = 0;
        for (const auto& e : inst.graph.events()) live += e.timestep <= int(T) - 1;

        CHECK(m.count(CoinKind::External) == n * (T - 1));
        CHECK(m.count(CoinKind::Transmission) == live);
        CHECK(m.count(CoinKind::Persistence) == (inst.spec.persistence_prob < 1.0 ? n * (T - 1) : 0));
        CHECK(m.count(CoinKind::Immunity) == n * T);

        for (PersonIndex x = 0; x < n; ++x) {
            for (int t = 1; t <= int(T); ++t) {
                CHECK(m.coins[m.immunity_coin(x, t)] == Coin{CoinKind::Immunity, x, std::nullopt, t, m.immunity_prob});
                if (t < 2) continue;
                CHECK(m.coins[m.external_coin(x, t)] == Coin{CoinKind::External, x, std::nullopt, t, m.external_prob});
                if (m.persistence_is_random()) {
                    CHECK(m.coins[m.persistence_coin(x, t)].kind == CoinKind::Persistence);
                    CHECK(m.coins[m.persistence_coin(x, t)].subject == x);
                    CHECK(m.coins[m.persistence_coin(x, t)].timestep == t);
                }
            }
        }

        std::size_t seen = 0;
        for (int t = 1; t <= int(T); ++t) {
            const auto at = m.coins_at(t);
            seen += at.size();
            for (CoinIndex c : at) CHECK(m.coins[c].timestep == t);
        }
        CHECK(seen == m.coins.size());
        for (std::size_t c = 1; c < m.coins.size(); ++c) {
            const Coin& a = m.coins[c - 1];
            const Coin& b = m.coins[c];
            CHECK(std::tuple(a.kind, a.subject, a.source.value_or(0), a.timestep) <
                  std::tuple(b.kind, b.subject, b.source.value_or(0), b.timestep));
        }
    }
}
