#pragma once

// Test-only helpers: random model instances and a literal possible-world
// oracle that shares no evaluation code with the engine.

#include "netepi/engine.hpp"
#include "netepi/grounder.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <tuple>
#include <vector>

namespace netepi::testing {

struct Instance {
    ModelSpec spec;
    TemporalContactGraph graph;
};

inline double pick_probability(std::mt19937_64& gen)
{
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    switch (kind(gen)) {
    case 0: return 0.0;
    case 1: return 1.0;
    default: return u(gen);
    }
}

/// Population of n individuals named a, b, c, ...; random contacts; random
/// parameters including degenerate probabilities and bounded periods.
inline Instance random_instance(std::mt19937_64& gen, int min_n, int max_n, int min_T, int max_T,
                                double contact_density = 0.4)
{
    std::uniform_int_distribution<int> n_dist(min_n, max_n);
    std::uniform_int_distribution<int> t_dist(min_T, max_T);
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution contact(contact_density);

    const int n = n_dist(gen);
    const int T = t_dist(gen);
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back(std::string(1, char('a' + i)));

    std::vector<ContactEvent> events;
    for (PersonIndex x = 0; x < PersonIndex(n); ++x) {
        for (PersonIndex y = 0; y < PersonIndex(n); ++y) {
            if (x == y) continue;
            for (int t = 1; t <= T; ++t) {
                if (contact(gen)) events.push_back({x, y, t});
            }
        }
    }

    ModelSpec spec;
    spec.horizon = T;
    spec.transmission_prob = pick_probability(gen);
    spec.external_prob = pick_probability(gen);
    spec.immunity_prob = pick_probability(gen);
    spec.persistence_prob = coin(gen) ? 1.0 : pick_probability(gen);
    std::uniform_int_distribution<int> period(1, std::max(1, T));
    spec.infectious_period = coin(gen) ? Duration::steps(period(gen)) : Duration::unlimited();
    spec.immunity_period = coin(gen) ? Duration::steps(period(gen)) : Duration::unlimited();
    if (coin(gen)) {
        spec.initial_infected = std::size_t(std::uniform_int_distribution<int>(0, n)(gen));
    } else {
        std::vector<std::string> seeds;
        for (const auto& id : ids) {
            if (coin(gen)) seeds.push_back(id);
        }
        spec.initial_infected = seeds;
    }
    return {spec, TemporalContactGraph(ids, events)};
}

/// All atoms of one possible world, indexed [t][x], t in 1..T.
struct World {
    std::vector<std::vector<bool>> infected, resistant, recovered;

    bool susceptible(PersonIndex x, int t) const { return !infected[t][x] && !resistant[t][x]; }
    bool holds(Compartment c, PersonIndex x, int t) const
    {
        switch (c) {
        case Compartment::Susceptible: return susceptible(x, t);
        case Compartment::Infected: return infected[t][x];
        case Compartment::Recovered: return recovered[t][x];
        case Compartment::Resistant: return resistant[t][x];
        }
        return false;
    }
};

/// Evaluates the program literally for one full coin assignment, scanning the
/// coin list for the causes of each atom.
inline World evaluate_world(const GroundedModel& m, const std::vector<bool>& fired)
{
    const int T = m.horizon;
    const std::size_t n = m.population();
    World w;
    w.infected.assign(std::size_t(T) + 1, std::vector<bool>(n, false));
    w.resistant = w.infected;
    w.recovered = w.infected;
    for (PersonIndex x : m.initial_infected) w.infected[1][x] = true;

    for (int t = 2; t <= T; ++t) {
        for (PersonIndex x = 0; x < n; ++x) {
            bool cause = m.persistence_prob >= 1.0 && w.infected[t - 1][x];
            bool immunity_fired = false;
            for (std::size_t c = 0; c < m.coins.size(); ++c) {
                const Coin& coin = m.coins[c];
                if (coin.subject != x || coin.timestep != t || !fired[c]) continue;
                switch (coin.kind) {
                case CoinKind::External:
                    cause = cause || w.susceptible(x, t - 1);
                    break;
                case CoinKind::Transmission:
                    cause = cause || (w.susceptible(x, t - 1) && w.infected[t - 1][*coin.source]);
                    break;
                case CoinKind::Persistence:
                    cause = cause || w.infected[t - 1][x];
                    break;
                case CoinKind::Immunity:
                    immunity_fired = true;
                    break;
                }
            }
            const int d = m.infectious_period.bounded() ? m.infectious_period.count() : 0;
            const bool inhibited = d > 0 && t - d >= 1 && w.infected[t - d][x];
            w.infected[t][x] = cause && !inhibited;
            w.recovered[t][x] = w.infected[t - 1][x] && !w.infected[t][x];

            const int k = m.immunity_period.bounded() ? m.immunity_period.count() : 0;
            const bool lapses = k > 0 && t - k >= 1 && w.resistant[t - k][x] && w.recovered[t - k][x];
            w.resistant[t][x] = (w.resistant[t - 1][x] && !lapses) || (w.recovered[t][x] && immunity_fired);
        }
    }
    return w;
}

/// P(compartment, x, t) by summing over every assignment of the coins whose
/// probability is strictly between 0 and 1; the others are fixed.
class PossibleWorldOracle {
public:
    explicit PossibleWorldOracle(const GroundedModel& m) : m_(m)
    {
        const int T = m.horizon;
        const std::size_t n = m.population();
        probs_.assign(std::size_t(T + 1) * n * 4, 0.0);
        std::vector<bool> fired(m.coins.size());
        std::vector<std::size_t> free;
        for (std::size_t c = 0; c < m.coins.size(); ++c) {
            const double p = m.coins[c].probability;
            if (p > 0.0 && p < 1.0) {
                free.push_back(c);
            } else {
                fired[c] = p >= 1.0;
            }
        }
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
            double weight = 1.0;
            for (std::size_t i = 0; i < free.size(); ++i) {
                fired[free[i]] = (mask >> i) & 1U;
                const double p = m.coins[free[i]].probability;
                weight *= fired[free[i]] ? p : 1.0 - p;
            }
            const World w = evaluate_world(m, fired);
            for (int t = 1; t <= T; ++t) {
                for (PersonIndex x = 0; x < n; ++x) {
                    for (Compartment cp : kAllCompartments) {
                        if (w.holds(cp, x, t)) probs_[index(cp, x, t)] += weight;
                    }
                }
            }
        }
    }

    double operator()(Compartment c, PersonIndex x, int t) const { return probs_[index(c, x, t)]; }

private:
    std::size_t index(Compartment c, PersonIndex x, int t) const
    {
        return (std::size_t(t) * m_.population() + x) * 4 + static_cast<std::size_t>(c);
    }

    const GroundedModel& m_;
    std::vector<double> probs_;
};

} // namespace netepi::testing
