#include "netepi/dsl.hpp"

#include "netepi/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace netepi {

std::string_view to_string(Compartment c)
{
    switch (c) {
    case Compartment::Susceptible: return "susceptible";
    case Compartment::Infected: return "infected";
    case Compartment::Recovered: return "recovered";
    case Compartment::Resistant: return "resistant";
    }
    return "?";
}

std::optional<Compartment> parse_compartment(std::string_view word)
{
    for (Compartment c : kAllCompartments) {
        if (to_string(c) == word) {
            return c;
        }
    }
    return std::nullopt;
}

bool SpecFragment::empty() const
{
    return *this == SpecFragment{};
}

bool ParseResult::ok() const
{
    return std::none_of(diagnostics.begin(), diagnostics.end(),
                        [](const ParseDiagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_diagnostic(const ParseDiagnostic& d, std::string_view source_name)
{
    std::ostringstream out;
    if (!source_name.empty()) {
        out << source_name << ':';
    }
    out << d.line << ": " << (d.severity == Severity::Error ? "error" : "warning") << ": "
        << d.message;
    if (!d.token.empty()) {
        out << " ('" << d.token << "')";
    }
    return out.str();
}

std::string format_probability(double p)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
    std::string text(buf, end);
    if (text.find_first_of(".e") == std::string::npos) {
        text += ".0";
    }
    return text;
}

namespace {

std::string lowered(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> split_whitespace(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i > start) {
            tokens.push_back(line.substr(start, i - start));
        }
    }
    return tokens;
}

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

bool is_predicate_prefix(std::string_view s)
{
    if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) != 0 || c == '_';
    });
}

// Identifies one settable field for duplicate detection.
enum class Field {
    Disease,
    Transmission,
    External,
    InfectiousPeriod,
    Persistence,
    Initial,
    Immunity,
    ImmunityPeriod,
    Runs,
    Horizon,
    Seed,
    Population,
    Contacts,
    Undirected,
};

class StatementParser {
public:
    explicit StatementParser(ParseResult& result) : result_(result) {}

    void parse_line(int line_no, std::string_view line)
    {
        line_ = line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        auto tokens = split_whitespace(line);
        if (tokens.empty() || tokens.front().front() == '#') {
            return;
        }
        tokens_ = tokens;
        std::string head = lowered(tokens.front());
        if (head == "infected") {
            infected_statement();
        } else if (head == "resistant") {
            resistant_statement();
        } else if (head == "disease") {
            disease_statement();
        } else if (head == "simulation") {
            simulation_statement();
        } else if (head == "population") {
            population_statement();
        } else if (head == "contacts") {
            contacts_statement();
        } else if (head == "query") {
            query_statement();
        } else {
            error(DiagnosticCode::UnknownKey, "unknown compartment or statement", tokens.front());
        }
    }

private:
    SpecFragment& frag() { return result_.fragment; }

    void error(DiagnosticCode code, std::string message, std::string_view token)
    {
        result_.diagnostics.push_back(
            {Severity::Error, code, line_, std::move(message), std::string(token)});
    }

    void warning(DiagnosticCode code, std::string message, std::string_view token)
    {
        result_.diagnostics.push_back(
            {Severity::Warning, code, line_, std::move(message), std::string(token)});
    }

    bool arity(std::size_t n)
    {
        if (tokens_.size() != n) {
            error(DiagnosticCode::MalformedStatement,
                  "expected " + std::to_string(n) + " tokens, found " +
                      std::to_string(tokens_.size()),
                  tokens_.front());
            return false;
        }
        return true;
    }

    // Claims a field; reports DuplicateKey when it was already set by an
    // earlier line of the same file.
    bool claim(Field f)
    {
        if (!seen_.insert(f).second) {
            error(DiagnosticCode::DuplicateKey, "field already set earlier in this file",
                  tokens_[std::min<std::size_t>(1, tokens_.size() - 1)]);
            return false;
        }
        return true;
    }

    std::optional<double> probability(std::string_view tok)
    {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec == std::errc::result_out_of_range) {
            error(DiagnosticCode::OutOfRange, "probability must lie in [0,1]", tok);
            return std::nullopt;
        }
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
            error(DiagnosticCode::MalformedStatement, "expected a probability", tok);
            return std::nullopt;
        }
        if (value < 0.0 || value > 1.0) {
            error(DiagnosticCode::OutOfRange, "probability must lie in [0,1]", tok);
            return std::nullopt;
        }
        return value;
    }

    std::optional<int> positive_int(std::string_view tok)
    {
        long long value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec == std::errc::result_out_of_range) {
            error(DiagnosticCode::OutOfRange, "value too large", tok);
            return std::nullopt;
        }
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
            error(DiagnosticCode::MalformedStatement, "expected a positive integer", tok);
            return std::nullopt;
        }
        if (value < 1) {
            error(DiagnosticCode::OutOfRange, "value must be a positive integer", tok);
            return std::nullopt;
        }
        if (value > 100'000'000) {
            error(DiagnosticCode::OutOfRange, "value too large", tok);
            return std::nullopt;
        }
        return static_cast<int>(value);
    }

    std::optional<Duration> duration(std::string_view tok, std::string_view unlimited_word)
    {
        if (lowered(tok) == unlimited_word) {
            return Duration::unlimited();
        }
        if (auto n = positive_int(tok)) {
            return Duration::steps(*n);
        }
        return std::nullopt;
    }

    void infected_statement()
    {
        if (tokens_.size() < 2) {
            arity(3);
            return;
        }
        std::string key = lowered(tokens_[1]);
        std::optional<Field> field;
        if (key == "transmission") field = Field::Transmission;
        else if (key == "external") field = Field::External;
        else if (key == "period") field = Field::InfectiousPeriod;
        else if (key == "persistence") field = Field::Persistence;
        else if (key == "initial") field = Field::Initial;
        if (!field) {
            error(DiagnosticCode::UnknownKey, "unknown key for compartment 'infected'", tokens_[1]);
            return;
        }
        if (!arity(3) || !claim(*field)) {
            return;
        }
        std::string_view value = tokens_[2];
        switch (*field) {
        case Field::Transmission:
            if (auto p = probability(value)) frag().transmission_prob = p;
            break;
        case Field::External:
            if (auto p = probability(value)) frag().external_prob = p;
            break;
        case Field::Persistence:
            if (auto p = probability(value)) frag().persistence_prob = p;
            break;
        case Field::InfectiousPeriod:
            if (auto d = duration(value, "unbounded")) frag().infectious_period = d;
            break;
        case Field::Initial:
            initial(value);
            break;
        default:
            break;
        }
    }

    void initial(std::string_view value)
    {
        if (all_digits(value)) {
            unsigned long long count = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), count);
            if (ec != std::errc{}) {
                error(DiagnosticCode::OutOfRange, "seed count too large", value);
                return;
            }
            frag().initial_infected = InitialInfected{static_cast<std::size_t>(count)};
            return;
        }
        std::vector<std::string> ids;
        std::size_t start = 0;
        while (start <= value.size()) {
            std::size_t comma = value.find(',', start);
            if (comma == std::string_view::npos) {
                comma = value.size();
            }
            std::string_view id = value.substr(start, comma - start);
            if (id.empty()) {
                error(DiagnosticCode::MalformedStatement, "empty identifier in list", value);
                return;
            }
            if (std::find(ids.begin(), ids.end(), id) != ids.end()) {
                warning(DiagnosticCode::DuplicateIdentifier, "duplicate seed identifier ignored", id);
            } else {
                ids.emplace_back(id);
            }
            start = comma + 1;
        }
        frag().initial_infected = InitialInfected{std::move(ids)};
    }

    void resistant_statement()
    {
        if (tokens_.size() < 2) {
            arity(3);
            return;
        }
        std::string key = lowered(tokens_[1]);
        if (key == "probability") {
            if (arity(3) && claim(Field::Immunity)) {
                if (auto p = probability(tokens_[2])) frag().immunity_prob = p;
            }
        } else if (key == "period") {
            if (arity(3) && claim(Field::ImmunityPeriod)) {
                if (auto d = duration(tokens_[2], "permanent")) frag().immunity_period = d;
            }
        } else {
            error(DiagnosticCode::UnknownKey, "unknown key for compartment 'resistant'", tokens_[1]);
        }
    }

    void disease_statement()
    {
        if (!arity(2) || !claim(Field::Disease)) {
            return;
        }
        if (!is_predicate_prefix(tokens_[1])) {
            error(DiagnosticCode::MalformedStatement,
                  "disease name must start with a lowercase letter and contain only "
                  "letters, digits and underscores",
                  tokens_[1]);
            return;
        }
        frag().disease_name = std::string(tokens_[1]);
    }

    void simulation_statement()
    {
        if (tokens_.size() < 2) {
            arity(3);
            return;
        }
        std::string key = lowered(tokens_[1]);
        if (key == "runs") {
            if (arity(3) && claim(Field::Runs)) {
                if (auto n = positive_int(tokens_[2])) frag().runs = n;
            }
        } else if (key == "horizon") {
            if (arity(3) && claim(Field::Horizon)) {
                if (auto n = positive_int(tokens_[2])) frag().horizon = n;
            }
        } else if (key == "seed") {
            if (arity(3) && claim(Field::Seed)) {
                std::string_view tok = tokens_[2];
                std::uint64_t seed = 0;
                auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), seed);
                if (ec == std::errc::result_out_of_range) {
                    error(DiagnosticCode::OutOfRange, "seed exceeds 64 bits", tok);
                } else if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
                    error(DiagnosticCode::MalformedStatement, "expected an unsigned integer seed", tok);
                } else {
                    frag().seed = seed;
                }
            }
        } else {
            error(DiagnosticCode::UnknownKey, "unknown simulation setting", tokens_[1]);
        }
    }

    void population_statement()
    {
        if (tokens_.size() < 2) {
            arity(3);
            return;
        }
        std::string key = lowered(tokens_[1]);
        if (key != "file" && key != "random") {
            error(DiagnosticCode::UnknownKey, "unknown population source", tokens_[1]);
            return;
        }
        if (!arity(3) || !claim(Field::Population)) {
            return;
        }
        if (key == "file") {
            frag().population_source = PopulationFile{std::string(tokens_[2])};
        } else if (auto n = positive_int(tokens_[2])) {
            frag().population_source = RandomPopulation{*n};
        }
    }

    void contacts_statement()
    {
        if (tokens_.size() < 2) {
            arity(3);
            return;
        }
        std::string key = lowered(tokens_[1]);
        if (key == "undirected") {
            if (arity(2) && claim(Field::Undirected)) {
                frag().contacts_undirected = true;
            }
        } else if (key == "file") {
            if (arity(3) && claim(Field::Contacts)) {
                frag().contacts_source = ContactsFile{std::string(tokens_[2])};
            }
        } else if (key == "random") {
            if (!arity(4) || !claim(Field::Contacts)) {
                return;
            }
            auto p = probability(tokens_[2]);
            std::string regime = lowered(tokens_[3]);
            std::optional<ContactRegime> r;
            if (regime == "static") r = ContactRegime::Static;
            else if (regime == "perstep") r = ContactRegime::PerTimestep;
            else error(DiagnosticCode::MalformedStatement, "expected 'static' or 'perstep'", tokens_[3]);
            if (p && r) {
                frag().contacts_source = RandomContacts{*p, *r};
            }
        } else {
            error(DiagnosticCode::UnknownKey, "unknown contacts setting", tokens_[1]);
        }
    }

    void query_statement()
    {
        if (!arity(2)) {
            return;
        }
        auto c = parse_compartment(lowered(tokens_[1]));
        if (!c) {
            error(DiagnosticCode::UnknownKey, "unknown compartment in query", tokens_[1]);
            return;
        }
        if (!frag().queries) {
            frag().queries = QuerySet{};
        }
        if (!frag().queries->insert(*c).second) {
            error(DiagnosticCode::DuplicateKey, "compartment already queried", tokens_[1]);
        }
    }

    ParseResult& result_;
    int line_ = 1;
    std::vector<std::string_view> tokens_;
    std::set<Field> seen_;
};

template <typename T>
void take(std::optional<T>& into, const std::optional<T>& from)
{
    if (from) {
        into = from;
    }
}

} // namespace

ParseResult parse_model(std::string_view text)
{
    ParseResult result;
    StatementParser parser(result);
    int line_no = 1;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        parser.parse_line(line_no, text.substr(start, nl - start));
        start = nl + 1;
        ++line_no;
    }
    return result;
}

SpecFragment overlay(const SpecFragment& base, const SpecFragment& top)
{
    SpecFragment out = base;
    take(out.disease_name, top.disease_name);
    take(out.transmission_prob, top.transmission_prob);
    take(out.external_prob, top.external_prob);
    take(out.infectious_period, top.infectious_period);
    take(out.persistence_prob, top.persistence_prob);
    take(out.initial_infected, top.initial_infected);
    take(out.immunity_prob, top.immunity_prob);
    take(out.immunity_period, top.immunity_period);
    take(out.horizon, top.horizon);
    take(out.runs, top.runs);
    take(out.seed, top.seed);
    take(out.population_source, top.population_source);
    take(out.contacts_source, top.contacts_source);
    take(out.contacts_undirected, top.contacts_undirected);
    take(out.queries, top.queries);
    return out;
}

void validate(const ModelSpec& spec)
{
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidMerge, what); };
    auto check_prob = [&](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) {
            fail(std::string(name) + " must lie in [0,1]");
        }
    };
    check_prob(spec.transmission_prob, "transmission probability");
    check_prob(spec.external_prob, "external probability");
    check_prob(spec.persistence_prob, "persistence probability");
    check_prob(spec.immunity_prob, "immunity probability");
    if (const auto* rc = std::get_if<RandomContacts>(&spec.contacts_source)) {
        check_prob(rc->edge_prob, "contact edge probability");
    }
    if (spec.horizon < 1) fail("horizon must be at least 1");
    if (spec.runs < 1) fail("runs must be at least 1");
    if (spec.infectious_period.bounded() && spec.infectious_period.count() < 1) {
        fail("infectious period must be at least 1");
    }
    if (spec.immunity_period.bounded() && spec.immunity_period.count() < 1) {
        fail("immunity period must be at least 1");
    }
    if (const auto* rp = std::get_if<RandomPopulation>(&spec.population_source);
        rp && rp->size < 1) {
        fail("random population size must be at least 1");
    }
    if (spec.queries.empty()) fail("at least one compartment must be queried");
    if (!is_predicate_prefix(spec.disease_name)) fail("invalid disease name '" + spec.disease_name + "'");
}

ModelSpec merge_specs(const SpecFragment& defaults, const SpecFragment& model)
{
    SpecFragment merged = overlay(defaults, model);
    ModelSpec spec;
    if (merged.disease_name) spec.disease_name = *merged.disease_name;
    if (merged.transmission_prob) spec.transmission_prob = *merged.transmission_prob;
    if (merged.external_prob) spec.external_prob = *merged.external_prob;
    if (merged.infectious_period) spec.infectious_period = *merged.infectious_period;
    if (merged.persistence_prob) spec.persistence_prob = *merged.persistence_prob;
    if (merged.initial_infected) spec.initial_infected = *merged.initial_infected;
    if (merged.immunity_prob) spec.immunity_prob = *merged.immunity_prob;
    if (merged.immunity_period) spec.immunity_period = *merged.immunity_period;
    if (merged.horizon) spec.horizon = *merged.horizon;
    if (merged.runs) spec.runs = *merged.runs;
    if (merged.seed) spec.seed = *merged.seed;
    if (merged.population_source) spec.population_source = *merged.population_source;
    if (merged.contacts_source) spec.contacts_source = *merged.contacts_source;
    if (merged.contacts_undirected) spec.contacts_undirected = *merged.contacts_undirected;
    if (merged.queries) spec.queries = *merged.queries;
    validate(spec);
    return spec;
}

SpecFragment to_fragment(const ModelSpec& spec)
{
    SpecFragment f;
    f.disease_name = spec.disease_name;
    f.transmission_prob = spec.transmission_prob;
    f.external_prob = spec.external_prob;
    f.infectious_period = spec.infectious_period;
    f.persistence_prob = spec.persistence_prob;
    f.initial_infected = spec.initial_infected;
    f.immunity_prob = spec.immunity_prob;
    f.immunity_period = spec.immunity_period;
    f.horizon = spec.horizon;
    f.runs = spec.runs;
    f.seed = spec.seed;
    f.population_source = spec.population_source;
    f.contacts_source = spec.contacts_source;
    f.contacts_undirected = spec.contacts_undirected;
    f.queries = spec.queries;
    return f;
}

std::string format_fragment(const SpecFragment& f)
{
    std::ostringstream out;
    auto duration_text = [](const Duration& d, const char* unlimited) {
        return d.bounded() ? std::to_string(d.count()) : std::string(unlimited);
    };
    if (f.disease_name) out << "disease " << *f.disease_name << '\n';
    if (f.transmission_prob) out << "infected transmission " << format_probability(*f.transmission_prob) << '\n';
    if (f.external_prob) out << "infected external " << format_probability(*f.external_prob) << '\n';
    if (f.infectious_period) out << "infected period " << duration_text(*f.infectious_period, "unbounded") << '\n';
    if (f.persistence_prob) out << "infected persistence " << format_probability(*f.persistence_prob) << '\n';
    if (f.initial_infected) {
        out << "infected initial ";
        if (const auto* count = std::get_if<std::size_t>(&*f.initial_infected)) {
            out << *count;
        } else {
            const auto& ids = std::get<std::vector<std::string>>(*f.initial_infected);
            for (std::size_t i = 0; i < ids.size(); ++i) {
                out << (i ? "," : "") << ids[i];
            }
        }
        out << '\n';
    }
    if (f.immunity_prob) out << "resistant probability " << format_probability(*f.immunity_prob) << '\n';
    if (f.immunity_period) out << "resistant period " << duration_text(*f.immunity_period, "permanent") << '\n';
    if (f.runs) out << "simulation runs " << *f.runs << '\n';
    if (f.horizon) out << "simulation horizon " << *f.horizon << '\n';
    if (f.seed) out << "simulation seed " << *f.seed << '\n';
    if (f.population_source) {
        if (const auto* file = std::get_if<PopulationFile>(&*f.population_source)) {
            out << "population file " << file->path << '\n';
        } else {
            out << "population random " << std::get<RandomPopulation>(*f.population_source).size << '\n';
        }
    }
    if (f.contacts_source) {
        if (const auto* file = std::get_if<ContactsFile>(&*f.contacts_source)) {
            out << "contacts file " << file->path << '\n';
        } else {
            const auto& rc = std::get<RandomContacts>(*f.contacts_source);
            out << "contacts random " << format_probability(rc.edge_prob) << ' '
                << (rc.regime == ContactRegime::Static ? "static" : "perstep") << '\n';
        }
    }
    // `contacts undirected` has no negated form; false is the built-in default.
    if (f.contacts_undirected.value_or(false)) out << "contacts undirected\n";
    if (f.queries) {
        for (Compartment c : *f.queries) {
            out << "query " << to_string(c) << '\n';
        }
    }
    return out.str();
}

} // namespace netepi
