#include "netepi/population.hpp"

#include "netepi/error.hpp"
#include "netepi/rng.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace netepi {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

struct Row {
    int line = 0;
    std::vector<std::string_view> fields;
};

// Headerless, unquoted, comma-separated rows; blank lines are skipped.
std::vector<Row> split_rows(std::string_view csv)
{
    std::vector<Row> rows;
    int line_no = 0;
    std::size_t start = 0;
    while (start < csv.size()) {
        std::size_t nl = csv.find('\n', start);
        if (nl == std::string_view::npos) nl = csv.size();
        ++line_no;
        std::string_view line = trim(csv.substr(start, nl - start));
        start = nl + 1;
        if (line.empty()) continue;
        Row row{line_no, {}};
        std::size_t field_start = 0;
        while (true) {
            std::size_t comma = line.find(',', field_start);
            if (comma == std::string_view::npos) {
                row.fields.push_back(trim(line.substr(field_start)));
                break;
            }
            row.fields.push_back(trim(line.substr(field_start, comma - field_start)));
            field_start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

[[noreturn]] void malformed(int line, const std::string& what)
{
    throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": " + what);
}

} // namespace

TemporalContactGraph::TemporalContactGraph(std::vector<std::string> individuals,
                                           std::vector<ContactEvent> events)
    : individuals_(std::move(individuals)), events_(std::move(events))
{
    if (std::adjacent_find(individuals_.begin(), individuals_.end(),
                           [](const auto& a, const auto& b) { return !(a < b); }) != individuals_.end()) {
        throw Error(ErrorCode::InvalidArgument, "individuals must be sorted and unique");
    }
    const auto n = individuals_.size();
    for (const ContactEvent& e : events_) {
        if (e.target >= n || e.source >= n) {
            throw Error(ErrorCode::InvalidArgument, "contact endpoint outside the population");
        }
        if (e.target == e.source) {
            throw Error(ErrorCode::InvalidArgument, "self-contact for " + individuals_[e.target]);
        }
        if (e.timestep < 1) {
            throw Error(ErrorCode::InvalidArgument, "contact timestep must be positive");
        }
    }
    std::sort(events_.begin(), events_.end());
    events_.erase(std::unique(events_.begin(), events_.end()), events_.end());
}

std::optional<PersonIndex> TemporalContactGraph::index_of(std::string_view id) const
{
    auto it = std::lower_bound(individuals_.begin(), individuals_.end(), id);
    if (it == individuals_.end() || *it != id) {
        return std::nullopt;
    }
    return static_cast<PersonIndex>(it - individuals_.begin());
}

int TemporalContactGraph::max_timestep() const
{
    int t = 0;
    for (const ContactEvent& e : events_) t = std::max(t, e.timestep);
    return t;
}

IndividualsLoad load_individuals(std::string_view csv)
{
    IndividualsLoad out;
    for (const Row& row : split_rows(csv)) {
        if (row.fields.size() != 1) {
            malformed(row.line, "expected exactly one column");
        }
        if (row.fields[0].empty()) {
            malformed(row.line, "empty identifier");
        }
        out.ids.emplace_back(row.fields[0]);
    }
    if (out.ids.empty()) {
        throw Error(ErrorCode::EmptyFile, "no individuals listed");
    }
    std::sort(out.ids.begin(), out.ids.end());
    for (auto it = out.ids.begin(); (it = std::adjacent_find(it, out.ids.end())) != out.ids.end(); ++it) {
        out.warnings.push_back("duplicate individual '" + *it + "' ignored");
    }
    out.ids.erase(std::unique(out.ids.begin(), out.ids.end()), out.ids.end());
    return out;
}

ContactsLoad load_contacts(std::string_view csv, std::span<const std::string> known_ids,
                           bool undirected, std::optional<int> horizon)
{
    if (known_ids.empty()) {
        throw Error(ErrorCode::EmptyPopulation, "contacts need a non-empty population");
    }
    auto lookup = [&](std::string_view id, int line) {
        auto it = std::lower_bound(known_ids.begin(), known_ids.end(), id);
        if (it == known_ids.end() || *it != id) {
            throw Error(ErrorCode::UnknownIndividual,
                        "line " + std::to_string(line) + ": unknown individual '" + std::string(id) + "'");
        }
        return static_cast<PersonIndex>(it - known_ids.begin());
    };

    ContactsLoad out;
    int late_rows = 0;
    for (const Row& row : split_rows(csv)) {
        if (row.fields.size() != 3) {
            malformed(row.line, "expected target,source,timestep");
        }
        std::string_view ts = row.fields[2];
        long long t = 0;
        auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), t);
        if (ec != std::errc{} || ptr != ts.data() + ts.size() || ts.empty()) {
            malformed(row.line, "timestep '" + std::string(ts) + "' is not an integer");
        }
        if (t < 1) {
            throw Error(ErrorCode::NonPositiveTimestep,
                        "line " + std::to_string(row.line) + ": timestep must be positive");
        }
        if (t > 1'000'000'000) {
            malformed(row.line, "timestep too large");
        }
        PersonIndex target = lookup(row.fields[0], row.line);
        PersonIndex source = lookup(row.fields[1], row.line);
        if (target == source) {
            malformed(row.line, "self-contact");
        }
        const int step = static_cast<int>(t);
        if (horizon && step > *horizon - 1) {
            ++late_rows;
        }
        out.events.push_back({target, source, step});
        if (undirected) {
            out.events.push_back({source, target, step});
        }
    }
    const auto before = out.events.size();
    std::sort(out.events.begin(), out.events.end());
    out.events.erase(std::unique(out.events.begin(), out.events.end()), out.events.end());
    if (out.events.size() != before) {
        out.warnings.push_back(std::to_string(before - out.events.size()) +
                               " duplicate contact events ignored");
    }
    if (late_rows > 0) {
        out.warnings.push_back(std::to_string(late_rows) + " contact rows have timestep >= horizon " +
                               std::to_string(*horizon) + " and can never cause an infection");
    }
    return out;
}

std::vector<ContactEvent> random_contacts(std::size_t n, double edge_prob, ContactRegime regime, int horizon,
                                          std::uint64_t seed)
{
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "edge probability must lie in [0,1]");
    }
    const Philox4x32 rng(seed);
    const std::uint64_t pairs = std::uint64_t(n) * (n == 0 ? 0 : n - 1) / 2;
    std::vector<ContactEvent> events;
    auto add_pair = [&](PersonIndex a, PersonIndex b, int t) {
        events.push_back({a, b, t});
        events.push_back({b, a, t});
    };
    std::uint64_t pair = 0;
    for (PersonIndex a = 0; a < n; ++a) {
        for (PersonIndex b = a + 1; b < n; ++b, ++pair) {
            if (regime == ContactRegime::Static) {
                if (rng.bernoulli(edge_prob, pair, 0, RngDomain::StaticContacts)) {
                    for (int t = 1; t <= horizon - 1; ++t) add_pair(a, b, t);
                }
            } else {
                for (int t = 1; t <= horizon - 1; ++t) {
                    const std::uint64_t item = std::uint64_t(t - 1) * pairs + pair;
                    if (rng.bernoulli(edge_prob, item, 0, RngDomain::PerStepContacts)) {
                        add_pair(a, b, t);
                    }
                }
            }
        }
    }
    std::sort(events.begin(), events.end());
    return events;
}

TemporalContactGraph generate_random(int n, double edge_prob, ContactRegime regime, int horizon,
                                     std::uint64_t seed)
{
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "random population needs at least one individual");
    }
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) ids.push_back("p" + std::to_string(i));
    std::sort(ids.begin(), ids.end());
    auto events = random_contacts(std::size_t(n), edge_prob, regime, horizon, seed);
    return TemporalContactGraph(std::move(ids), std::move(events));
}

std::string write_contacts_csv(const TemporalContactGraph& graph)
{
    std::ostringstream out;
    for (const ContactEvent& e : graph.events()) {
        out << graph.id(e.target) << ',' << graph.id(e.source) << ',' << e.timestep << '\n';
    }
    return out.str();
}

std::string write_individuals_csv(const TemporalContactGraph& graph)
{
    std::ostringstream out;
    for (const std::string& id : graph.individuals()) out << id << '\n';
    return out.str();
}

} // namespace netepi
