#pragma once

// Time-grounded model: every ground instance of a probabilistic clause is a
// Coin, an independent Bernoulli choice. Deterministic rules and inhibitors
// are carried as parameters and applied by the engine.

#include "netepi/dsl.hpp"
#include "netepi/population.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace netepi {

using CoinIndex = std::uint32_t;

enum class CoinKind { External, Transmission, Persistence, Immunity };

std::string_view to_string(CoinKind kind);

struct Coin {
    CoinKind kind = CoinKind::External;
    PersonIndex subject = 0;
    std::optional<PersonIndex> source; // Transmission only
    int timestep = 1;
    double probability = 0.0;

    friend bool operator==(const Coin&, const Coin&) = default;
};

/// A transmission coin acting at some timestep t, for a contact at t-1.
struct Transmission {
    PersonIndex target = 0;
    PersonIndex source = 0;
    CoinIndex coin = 0;
};

struct GroundedModel {
    int horizon = 1;
    std::vector<std::string> individuals;
    /// Ordered by kind, then subject, then source, then timestep.
    std::vector<Coin> coins;

    double transmission_prob = 0.0;
    double external_prob = 0.0;
    double persistence_prob = 1.0;
    double immunity_prob = 0.0;
    Duration infectious_period;
    Duration immunity_period;
    /// Sorted, unique.
    std::vector<PersonIndex> initial_infected;
    QuerySet queries;

    std::size_t population() const { return individuals.size(); }
    bool persistence_is_random() const { return persistence_prob < 1.0; }

    /// t in 2..T
    CoinIndex external_coin(PersonIndex x, int t) const
    {
        return static_cast<CoinIndex>(x * steps_after_first() + (t - 2));
    }
    /// t in 2..T; only valid when persistence_is_random().
    CoinIndex persistence_coin(PersonIndex x, int t) const
    {
        return static_cast<CoinIndex>(persistence_base_ + x * steps_after_first() + (t - 2));
    }
    /// t in 1..T
    CoinIndex immunity_coin(PersonIndex x, int t) const
    {
        return static_cast<CoinIndex>(immunity_base_ + x * std::size_t(horizon) + (t - 1));
    }
    /// Transmission coins acting at t in 2..T, ordered by target then source.
    std::span<const Transmission> transmissions_into(int t) const
    {
        return transmissions_by_step_[static_cast<std::size_t>(t)];
    }

    std::size_t count(CoinKind kind) const;
    /// Coins acting at timestep t, in coin order.
    std::vector<CoinIndex> coins_at(int t) const;

private:
    std::size_t steps_after_first() const { return std::size_t(horizon - 1); }

    std::size_t transmission_base_ = 0;
    std::size_t persistence_base_ = 0;
    std::size_t immunity_base_ = 0;
    std::vector<std::vector<Transmission>> transmissions_by_step_;

    friend GroundedModel ground(const ModelSpec& spec, const TemporalContactGraph& graph);
};

/// Throws Error(EmptyPopulation) or Error(UnknownSeedIndividual).
GroundedModel ground(const ModelSpec& spec, const TemporalContactGraph& graph);

} // namespace netepi
