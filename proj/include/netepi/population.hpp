#pragma once

// Individuals and time-stamped contact events, loaded from headerless CSV or
// generated as an Erdos-Renyi graph.

#include "netepi/dsl.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netepi {

using PersonIndex = std::uint32_t;

/// `target` may be infected at `timestep + 1` by `source` being infected at
/// `timestep`. Endpoints index TemporalContactGraph::individuals().
struct ContactEvent {
    PersonIndex target = 0;
    PersonIndex source = 0;
    int timestep = 1;

    friend auto operator<=>(const ContactEvent&, const ContactEvent&) = default;
};

class TemporalContactGraph {
public:
    TemporalContactGraph() = default;

    /// `individuals` must be strictly increasing. Events are sorted and
    /// deduplicated. Throws Error(InvalidArgument) on unsorted ids, a
    /// self-contact, a timestep < 1, or an endpoint outside `individuals`.
    TemporalContactGraph(std::vector<std::string> individuals, std::vector<ContactEvent> events);

    std::span<const std::string> individuals() const { return individuals_; }
    std::span<const ContactEvent> events() const { return events_; }
    std::size_t size() const { return individuals_.size(); }

    std::optional<PersonIndex> index_of(std::string_view id) const;
    const std::string& id(PersonIndex i) const { return individuals_[i]; }

    int max_timestep() const;

    friend bool operator==(const TemporalContactGraph&, const TemporalContactGraph&) = default;

private:
    std::vector<std::string> individuals_;
    std::vector<ContactEvent> events_;
};

struct IndividualsLoad {
    std::vector<std::string> ids;
    std::vector<std::string> warnings;
};

IndividualsLoad load_individuals(std::string_view csv);

struct ContactsLoad {
    std::vector<ContactEvent> events;
    std::vector<std::string> warnings;
};

/// `known_ids` must be sorted (as returned by load_individuals). When a
/// horizon is given, events too late to act within it are kept but warned
/// about.
ContactsLoad load_contacts(std::string_view csv, std::span<const std::string> known_ids,
                           bool undirected, std::optional<int> horizon = std::nullopt);

/// Erdos-Renyi contacts over individuals 0..n-1: each unordered pair is kept
/// with probability `edge_prob`, once for all timesteps 1..horizon-1 (Static)
/// or independently per timestep (PerTimestep), as two directed events.
std::vector<ContactEvent> random_contacts(std::size_t n, double edge_prob, ContactRegime regime, int horizon,
                                          std::uint64_t seed);

/// Individuals "p1".."pn" with random_contacts between them.
TemporalContactGraph generate_random(int n, double edge_prob, ContactRegime regime, int horizon,
                                     std::uint64_t seed);

/// `target,source,timestep` rows in canonical order, no header.
std::string write_contacts_csv(const TemporalContactGraph& graph);
std::string write_individuals_csv(const TemporalContactGraph& graph);

} // namespace netepi
