#include "netepi/grounder.hpp"

#include "netepi/error.hpp"

#include <algorithm>
#include <limits>

namespace netepi {

std::string_view to_string(CoinKind kind)
{
    switch (kind) {
    case CoinKind::External: return "external";
    case CoinKind::Transmission: return "transmission";
    case CoinKind::Persistence: return "persistence";
    case CoinKind::Immunity: return "immunity";
    }
    return "?";
}

std::size_t GroundedModel::count(CoinKind kind) const
{
    switch (kind) {
    case CoinKind::External: return transmission_base_;
    case CoinKind::Transmission: return persistence_base_ - transmission_base_;
    case CoinKind::Persistence: return immunity_base_ - persistence_base_;
    case CoinKind::Immunity: return coins.size() - immunity_base_;
    }
    return 0;
}

std::vector<CoinIndex> GroundedModel::coins_at(int t) const
{
    std::vector<CoinIndex> out;
    if (t >= 2) {
        for (PersonIndex x = 0; x < population(); ++x) out.push_back(external_coin(x, t));
        for (const Transmission& tr : transmissions_into(t)) out.push_back(tr.coin);
        if (persistence_is_random()) {
            for (PersonIndex x = 0; x < population(); ++x) out.push_back(persistence_coin(x, t));
        }
    }
    for (PersonIndex x = 0; x < population(); ++x) out.push_back(immunity_coin(x, t));
    std::sort(out.begin(), out.end());
    return out;
}

GroundedModel ground(const ModelSpec& spec, const TemporalContactGraph& graph)
{
    validate(spec);
    const std::size_t n = graph.size();
    if (n == 0) {
        throw Error(ErrorCode::EmptyPopulation, "cannot ground a model without individuals");
    }
    const int T = spec.horizon;

    GroundedModel m;
    m.horizon = T;
    m.individuals.assign(graph.individuals().begin(), graph.individuals().end());
    m.transmission_prob = spec.transmission_prob;
    m.external_prob = spec.external_prob;
    m.persistence_prob = spec.persistence_prob;
    m.immunity_prob = spec.immunity_prob;
    m.infectious_period = spec.infectious_period;
    m.immunity_period = spec.immunity_period;
    m.queries = spec.queries;

    if (const auto* count = std::get_if<std::size_t>(&spec.initial_infected)) {
        if (*count > n) {
            throw Error(ErrorCode::UnknownSeedIndividual,
                        "cannot seed " + std::to_string(*count) + " infected in a population of " +
                            std::to_string(n));
        }
        for (PersonIndex x = 0; x < *count; ++x) m.initial_infected.push_back(x);
    } else {
        for (const std::string& id : std::get<std::vector<std::string>>(spec.initial_infected)) {
            auto x = graph.index_of(id);
            if (!x) {
                throw Error(ErrorCode::UnknownSeedIndividual, "seed individual '" + id + "' is not in the population");
            }
            m.initial_infected.push_back(*x);
        }
        std::sort(m.initial_infected.begin(), m.initial_infected.end());
        m.initial_infected.erase(std::unique(m.initial_infected.begin(), m.initial_infected.end()),
                                 m.initial_infected.end());
    }

    std::size_t transmissions = 0;
    for (const ContactEvent& e : graph.events()) {
        if (e.timestep <= T - 1) ++transmissions;
    }
    const std::size_t steps = std::size_t(T - 1);
    const std::size_t persistence = spec.persistence_prob < 1.0 ? n * steps : 0;
    const std::size_t total = n * steps + transmissions + persistence + n * std::size_t(T);
    if (total > std::numeric_limits<CoinIndex>::max()) {
        throw Error(ErrorCode::TooLarge, "grounded model exceeds the coin index range");
    }
    m.coins.reserve(total);

    for (PersonIndex x = 0; x < n; ++x) {
        for (int t = 2; t <= T; ++t) {
            m.coins.push_back({CoinKind::External, x, std::nullopt, t, spec.external_prob});
        }
    }
    m.transmission_base_ = m.coins.size();
    m.transmissions_by_step_.resize(std::size_t(T) + 1);
    // graph events are sorted by (target, source, timestep), matching coin order
    for (const ContactEvent& e : graph.events()) {
        if (e.timestep > T - 1) continue;
        const int acts_at = e.timestep + 1;
        m.transmissions_by_step_[std::size_t(acts_at)].push_back(
            {e.target, e.source, static_cast<CoinIndex>(m.coins.size())});
        m.coins.push_back({CoinKind::Transmission, e.target, e.source, acts_at, spec.transmission_prob});
    }
    m.persistence_base_ = m.coins.size();
    if (persistence > 0) {
        for (PersonIndex x = 0; x < n; ++x) {
            for (int t = 2; t <= T; ++t) {
                m.coins.push_back({CoinKind::Persistence, x, std::nullopt, t, spec.persistence_prob});
            }
        }
    }
    m.immunity_base_ = m.coins.size();
    for (PersonIndex x = 0; x < n; ++x) {
        for (int t = 1; t <= T; ++t) {
            m.coins.push_back({CoinKind::Immunity, x, std::nullopt, t, spec.immunity_prob});
        }
    }
    return m;
}

} // namespace netepi
