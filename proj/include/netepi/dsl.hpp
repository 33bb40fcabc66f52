#pragma once

// Model-file language: statements of the form `<compartment> <key> <value>`
// plus metaparameter statements, merged with a defaults file into a ModelSpec.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace netepi {

enum class Compartment { Susceptible, Infected, Recovered, Resistant };

inline constexpr Compartment kAllCompartments[] = {
    Compartment::Susceptible, Compartment::Infected, Compartment::Recovered,
    Compartment::Resistant};

std::string_view to_string(Compartment c);
std::optional<Compartment> parse_compartment(std::string_view word);

using QuerySet = std::set<Compartment>;

/// A step count that may be unlimited (`unbounded` infection, `permanent`
/// resistance).
class Duration {
public:
    constexpr Duration() = default;
    static constexpr Duration unlimited() { return Duration{}; }
    static constexpr Duration steps(int n) { return Duration{n}; }

    constexpr bool bounded() const { return steps_.has_value(); }
    constexpr int count() const { return *steps_; }

    friend constexpr bool operator==(const Duration&, const Duration&) = default;

private:
    constexpr explicit Duration(int n) : steps_(n) {}
    std::optional<int> steps_;
};

struct PopulationFile {
    std::string path;
    friend bool operator==(const PopulationFile&, const PopulationFile&) = default;
};
struct RandomPopulation {
    int size = 0;
    friend bool operator==(const RandomPopulation&, const RandomPopulation&) = default;
};
using PopulationSource = std::variant<PopulationFile, RandomPopulation>;

enum class ContactRegime { Static, PerTimestep };

struct ContactsFile {
    std::string path;
    friend bool operator==(const ContactsFile&, const ContactsFile&) = default;
};
struct RandomContacts {
    double edge_prob = 0.0;
    ContactRegime regime = ContactRegime::Static;
    friend bool operator==(const RandomContacts&, const RandomContacts&) = default;
};
using ContactsSource = std::variant<ContactsFile, RandomContacts>;

/// Either the number of individuals seeded infected at t=1 (taken from the
/// front of the sorted population) or an explicit list of identifiers.
using InitialInfected = std::variant<std::size_t, std::vector<std::string>>;

/// Partial assignment produced by one model or defaults file.
struct SpecFragment {
    std::optional<std::string> disease_name;
    std::optional<double> transmission_prob;
    std::optional<double> external_prob;
    std::optional<Duration> infectious_period;
    std::optional<double> persistence_prob;
    std::optional<InitialInfected> initial_infected;
    std::optional<double> immunity_prob;
    std::optional<Duration> immunity_period;
    std::optional<int> horizon;
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;
    std::optional<PopulationSource> population_source;
    std::optional<ContactsSource> contacts_source;
    std::optional<bool> contacts_undirected;
    std::optional<QuerySet> queries;

    bool empty() const;
    friend bool operator==(const SpecFragment&, const SpecFragment&) = default;
};

/// Fully resolved and validated disease model plus simulation metaparameters.
struct ModelSpec {
    std::string disease_name = "disease";
    double transmission_prob = 0.0;
    double external_prob = 0.0;
    Duration infectious_period = Duration::unlimited();
    double persistence_prob = 1.0;
    InitialInfected initial_infected = std::size_t{1};
    double immunity_prob = 0.0;
    Duration immunity_period = Duration::unlimited();
    int horizon = 12;
    int runs = 1;
    std::uint64_t seed = 0;
    PopulationSource population_source = PopulationFile{"individualsList.csv"};
    ContactsSource contacts_source = ContactsFile{"contactList.csv"};
    bool contacts_undirected = false;
    QuerySet queries{std::begin(kAllCompartments), std::end(kAllCompartments)};

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

enum class Severity { Error, Warning };

enum class DiagnosticCode {
    OutOfRange,
    UnknownKey,
    DuplicateKey,
    MalformedStatement,
    DuplicateIdentifier,
};

struct ParseDiagnostic {
    Severity severity = Severity::Error;
    DiagnosticCode code = DiagnosticCode::MalformedStatement;
    int line = 1;
    std::string message;
    std::string token;
};

std::string format_diagnostic(const ParseDiagnostic& d, std::string_view source_name = {});

struct ParseResult {
    SpecFragment fragment;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const;
};

ParseResult parse_model(std::string_view text);

/// Field-wise overlay: every field set in `top` replaces the one in `base`.
SpecFragment overlay(const SpecFragment& base, const SpecFragment& top);

/// Throws Error(InvalidMerge) when the merged result breaks a ModelSpec
/// invariant.
ModelSpec merge_specs(const SpecFragment& defaults, const SpecFragment& model);

void validate(const ModelSpec& spec);

/// Canonical model-file text for a fragment; parse_model(format_fragment(f))
/// yields f again.
std::string format_fragment(const SpecFragment& fragment);

/// Every field of a resolved spec as a fragment.
SpecFragment to_fragment(const ModelSpec& spec);

/// Shortest round-trip decimal text for a probability, always with a
/// fractional part ("0.8", "1.0").
std::string format_probability(double p);

} // namespace netepi
