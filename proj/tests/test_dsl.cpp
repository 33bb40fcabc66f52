#include "netepi/dsl.hpp"
#include "netepi/error.hpp"

#include <doctest.h>

#include <random>

using namespace netepi;

namespace {

bool has_error(const ParseResult& r, DiagnosticCode code, int line)
{
    for (const auto& d : r.diagnostics) {
        if (d.severity == Severity::Error && d.code == code && d.line == line) return true;
    }
    return false;
}

} // namespace

TEST_CASE("parse_model reads the three infection keys")
{
    const auto r = parse_model("infected transmission 0.8\ninfected external 0.1\ninfected period 7");
    CHECK(r.ok());
    CHECK(r.diagnostics.empty());
    SpecFragment expected;
    expected.transmission_prob = 0.8;
    expected.external_prob = 0.1;
    expected.infectious_period = Duration::steps(7);
    CHECK(r.fragment == expected);
}

TEST_CASE("empty input gives an empty fragment")
{
    const auto r = parse_model("");
    CHECK(r.fragment.empty());
    CHECK(r.diagnostics.empty());
}

TEST_CASE("comments, blank lines and keyword case")
{
    const auto r = parse_model("# flu model\n\n   \nINFECTED Transmission 0.5\r\nResistant PERIOD Permanent\n");
    REQUIRE(r.ok());
    CHECK(r.fragment.transmission_prob == 0.5);
    CHECK(r.fragment.immunity_period == Duration::unlimited());
}

TEST_CASE("out-of-range values")
{
    CHECK(has_error(parse_model("infected transmission 1.5"), DiagnosticCode::OutOfRange, 1));
    CHECK(has_error(parse_model("infected external -0.1"), DiagnosticCode::OutOfRange, 1));
    CHECK(has_error(parse_model("\ninfected period 0"), DiagnosticCode::OutOfRange, 2));
    CHECK(has_error(parse_model("resistant period -3"), DiagnosticCode::OutOfRange, 1));
    CHECK(has_error(parse_model("simulation runs 0"), DiagnosticCode::OutOfRange, 1));
}

TEST_CASE("unknown compartments and keys")
{
    CHECK(has_error(parse_model("vaccinated rate 0.3"), DiagnosticCode::UnknownKey, 1));
    CHECK(has_error(parse_model("infected duration 3"), DiagnosticCode::UnknownKey, 1));
    CHECK(has_error(parse_model("query exposed"), DiagnosticCode::UnknownKey, 1));
    CHECK(has_error(parse_model("simulation speed 3"), DiagnosticCode::UnknownKey, 1));
}

TEST_CASE("duplicate keys are reported on the repeated line")
{
    const auto r = parse_model("infected external 0.1\ninfected external 0.2\n");
    CHECK(has_error(r, DiagnosticCode::DuplicateKey, 2));
    CHECK(r.fragment.external_prob == 0.1);
    CHECK(has_error(parse_model("population random 5\npopulation file x.csv"), DiagnosticCode::DuplicateKey, 2));
    CHECK(has_error(parse_model("query infected\nquery infected"), DiagnosticCode::DuplicateKey, 2));
}

TEST_CASE("malformed statements")
{
    CHECK(has_error(parse_model("infected transmission"), DiagnosticCode::MalformedStatement, 1));
    CHECK(has_error(parse_model("infected transmission high"), DiagnosticCode::MalformedStatement, 1));
    CHECK(has_error(parse_model("infected transmission 0.5 0.6"), DiagnosticCode::MalformedStatement, 1));
    CHECK(has_error(parse_model("contacts random 0.5 sometimes"), DiagnosticCode::MalformedStatement, 1));
    CHECK(has_error(parse_model("disease Flu"), DiagnosticCode::MalformedStatement, 1));
    CHECK(has_error(parse_model("infected transmission nan"), DiagnosticCode::MalformedStatement, 1));
    CHECK(has_error(parse_model("infected initial a,,b"), DiagnosticCode::MalformedStatement, 1));
}

TEST_CASE("metaparameter statements")
{
    const auto r = parse_model("disease flu\n"
                               "simulation runs 5\nsimulation horizon 120\nsimulation seed 18446744073709551615\n"
                               "population random 50\ncontacts random 0.1 perstep\ncontacts undirected\n"
                               "query infected\nquery resistant\n"
                               "infected initial alice,bob\ninfected persistence 0.9\nresistant probability 0.9\n"
                               "resistant period 20\n");
    REQUIRE(r.ok());
    const auto& f = r.fragment;
    CHECK(f.disease_name == "flu");
    CHECK(f.runs == 5);
    CHECK(f.horizon == 120);
    CHECK(f.seed == 18446744073709551615ULL);
    CHECK(f.population_source == PopulationSource{RandomPopulation{50}});
    CHECK(f.contacts_source == ContactsSource{RandomContacts{0.1, ContactRegime::PerTimestep}});
    CHECK(f.contacts_undirected == true);
    CHECK(f.queries == QuerySet{Compartment::Infected, Compartment::Resistant});
    CHECK(f.initial_infected == InitialInfected{std::vector<std::string>{"alice", "bob"}});
    CHECK(f.persistence_prob == 0.9);
    CHECK(f.immunity_prob == 0.9);
    CHECK(f.immunity_period == Duration::steps(20));
}

TEST_CASE("duplicate seed identifiers warn without failing")
{
    const auto r = parse_model("infected initial a,b,a");
    CHECK(r.ok());
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].severity == Severity::Warning);
    CHECK(r.fragment.initial_infected == InitialInfected{std::vector<std::string>{"a", "b"}});
}

TEST_CASE("every diagnostic points at a real line")
{
    const std::string text = "infected transmission 2\n# ok\nbogus line here\n\ninfected period x\nquery nope";
    const auto r = parse_model(text);
    const auto lines = std::count(text.begin(), text.end(), '\n') + 1;
    CHECK(r.diagnostics.size() == 4);
    for (const auto& d : r.diagnostics) {
        CHECK(d.line >= 1);
        CHECK(d.line <= lines);
    }
}

TEST_CASE("merge_specs: defaults, overrides and built-ins")
{
    SpecFragment defaults;
    defaults.external_prob = 0.1;
    CHECK(merge_specs(defaults, {}).external_prob == 0.1);

    SpecFragment model;
    model.external_prob = 0.2;
    CHECK(merge_specs(defaults, model).external_prob == 0.2);

    const ModelSpec builtin = merge_specs({}, {});
    CHECK(builtin.transmission_prob == 0.0);
    CHECK(builtin.external_prob == 0.0);
    CHECK(builtin.infectious_period == Duration::unlimited());
    CHECK(builtin.persistence_prob == 1.0);
    CHECK(builtin.immunity_prob == 0.0);
    CHECK(builtin.immunity_period == Duration::unlimited());
    CHECK(builtin.horizon == 12);
    CHECK(builtin.runs == 1);
    CHECK(builtin.seed == 0);
    CHECK(builtin.initial_infected == InitialInfected{std::size_t{1}});
    CHECK(builtin.contacts_undirected == false);
    CHECK(builtin.queries.size() == 4);
    CHECK(builtin.disease_name == "disease");
}

TEST_CASE("merge_specs rejects an emptied query set")
{
    SpecFragment model;
    model.queries = QuerySet{};
    CHECK_THROWS_AS(merge_specs({}, model), Error);
    try {
        merge_specs({}, model);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidMerge);
    }
}

TEST_CASE("merge with an empty side equals the other side plus built-ins")
{
    const auto x = parse_model("infected transmission 0.3\nsimulation runs 4\nquery infected\n").fragment;
    CHECK(merge_specs(x, {}) == merge_specs({}, x));
    const ModelSpec m = merge_specs({}, x);
    CHECK(m.transmission_prob == 0.3);
    CHECK(m.runs == 4);
    CHECK(m.queries == QuerySet{Compartment::Infected});
    CHECK(m.horizon == 12);
}

TEST_CASE("format_probability is shortest round-trip with a fractional part")
{
    CHECK(format_probability(0.8) == "0.8");
    CHECK(format_probability(0.0) == "0.0");
    CHECK(format_probability(1.0) == "1.0");
    CHECK(format_probability(0.1 + 0.2) == "0.30000000000000004");
}

TEST_CASE("property: format then parse reproduces a parsed fragment")
{
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::bernoulli_distribution on(0.5);
    std::uniform_int_distribution<int> small(1, 500);
    for (int iter = 0; iter < 500; ++iter) {
        SpecFragment f;
        if (on(gen)) f.disease_name = "flu" + std::to_string(small(gen));
        if (on(gen)) f.transmission_prob = u(gen);
        if (on(gen)) f.external_prob = u(gen);
        if (on(gen)) f.infectious_period = on(gen) ? Duration::steps(small(gen)) : Duration::unlimited();
        if (on(gen)) f.persistence_prob = u(gen);
        if (on(gen)) {
            if (on(gen)) {
                f.initial_infected = std::size_t(small(gen));
            } else {
                f.initial_infected = std::vector<std::string>{"x" + std::to_string(small(gen)), "y"};
            }
        }
        if (on(gen)) f.immunity_prob = u(gen);
        if (on(gen)) f.immunity_period = on(gen) ? Duration::steps(small(gen)) : Duration::unlimited();
        if (on(gen)) f.horizon = small(gen);
        if (on(gen)) f.runs = small(gen);
        if (on(gen)) f.seed = gen();
        if (on(gen)) {
            f.population_source = on(gen) ? PopulationSource{PopulationFile{"data/people.csv"}}
                                          : PopulationSource{RandomPopulation{small(gen)}};
        }
        if (on(gen)) {
            f.contacts_source =
                on(gen) ? ContactsSource{ContactsFile{"c.csv"}}
                        : ContactsSource{RandomContacts{u(gen), on(gen) ? ContactRegime::Static : ContactRegime::PerTimestep}};
        }
        if (on(gen)) f.contacts_undirected = true;
        if (on(gen)) {
            QuerySet q;
            for (Compartment c : kAllCompartments) {
                if (on(gen)) q.insert(c);
            }
            if (!q.empty()) f.queries = q;
        }

        const std::string text = format_fragment(f);
        const auto reparsed = parse_model(text);
        REQUIRE_MESSAGE(reparsed.ok(), text);
        CHECK(reparsed.fragment == f);
        CHECK(format_fragment(reparsed.fragment) == text);
    }
}
