#include "netepi/session.hpp"

#include "netepi/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

namespace netepi {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::IoFailure, "error while reading " + path.string());
    }
    return buf.str();
}

void write_text_file(const fs::path& path, std::string_view text)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw Error(ErrorCode::IoFailure, "cannot create " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(text.data(), std::streamsize(text.size())) || !out.flush()) {
        throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    }
}

SpecFragment read_fragment(const fs::path& path, std::vector<std::string>& warnings)
{
    const std::string text = read_text_file(path);
    ParseResult parsed = parse_model(text);
    std::string errors;
    for (const ParseDiagnostic& d : parsed.diagnostics) {
        if (d.severity == Severity::Warning) {
            warnings.push_back(format_diagnostic(d, path.string()));
        } else {
            errors += (errors.empty() ? "" : "\n") + format_diagnostic(d, path.string());
        }
    }
    if (!errors.empty()) {
        throw Error(ErrorCode::Diagnostics, errors);
    }
    return std::move(parsed.fragment);
}

TemporalContactGraph build_graph(const ModelSpec& spec, const fs::path& base_dir, std::vector<std::string>& warnings)
{
    auto resolve = [&](const std::string& p) {
        fs::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };

    std::vector<std::string> ids;
    if (const auto* file = std::get_if<PopulationFile>(&spec.population_source)) {
        IndividualsLoad loaded = load_individuals(read_text_file(resolve(file->path)));
        warnings.insert(warnings.end(), loaded.warnings.begin(), loaded.warnings.end());
        ids = std::move(loaded.ids);
    } else {
        const int n = std::get<RandomPopulation>(spec.population_source).size;
        for (int i = 1; i <= n; ++i) ids.push_back("p" + std::to_string(i));
        std::sort(ids.begin(), ids.end());
    }

    std::vector<ContactEvent> events;
    if (const auto* file = std::get_if<ContactsFile>(&spec.contacts_source)) {
        ContactsLoad loaded =
            load_contacts(read_text_file(resolve(file->path)), ids, spec.contacts_undirected, spec.horizon);
        warnings.insert(warnings.end(), loaded.warnings.begin(), loaded.warnings.end());
        events = std::move(loaded.events);
    } else {
        const auto& rc = std::get<RandomContacts>(spec.contacts_source);
        events = random_contacts(ids.size(), rc.edge_prob, rc.regime, spec.horizon, spec.seed);
    }
    return TemporalContactGraph(std::move(ids), std::move(events));
}

void Session::resolve(SessionConfig candidate)
{
    candidate.spec = merge_specs(overlay(candidate.defaults, candidate.model), candidate.overrides);
    config_ = std::move(candidate);
    graph_.reset();
    runs_.clear();
}

fs::path Session::base_dir() const
{
    if (config_.model_path && config_.model_path->has_parent_path()) {
        return config_.model_path->parent_path();
    }
    return fs::path(".");
}

void Session::load_model(const fs::path& path)
{
    SessionConfig candidate = config_;
    candidate.model = read_fragment(path, warnings_);
    candidate.model_path = path;
    resolve(std::move(candidate));
}

void Session::load_defaults(const fs::path& path)
{
    SessionConfig candidate = config_;
    candidate.defaults = read_fragment(path, warnings_);
    candidate.defaults_path = path;
    resolve(std::move(candidate));
}

void Session::apply(const SpecFragment& fragment)
{
    SessionConfig candidate = config_;
    candidate.overrides = overlay(candidate.overrides, fragment);
    resolve(std::move(candidate));
}

void Session::set(std::string_view key, std::string_view value)
{
    std::string statement;
    if (key == "runs" || key == "seed" || key == "horizon") {
        statement = "simulation " + std::string(key) + " " + std::string(value);
    } else if (key == "out") {
        set_out_dir(fs::path(value));
        return;
    } else if (key == "threads") {
        unsigned n = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
        if (ec != std::errc{} || ptr != value.data() + value.size() || n == 0) {
            throw Error(ErrorCode::InvalidArgument, "threads must be a positive integer");
        }
        set_threads(n);
        return;
    } else if (key == "individuals" || key == "contacts") {
        // data paths given interactively are relative to the working directory
        SpecFragment f;
        const std::string path = fs::absolute(fs::path(value)).string();
        if (key == "individuals") {
            f.population_source = PopulationFile{path};
        } else {
            f.contacts_source = ContactsFile{path};
        }
        apply(f);
        return;
    } else if (key == "queries") {
        std::string list(value);
        for (char& c : list) {
            if (c == ',') c = '\n';
        }
        std::istringstream words(list);
        for (std::string word; std::getline(words, word);) statement += "query " + word + "\n";
    } else {
        statement = std::string(key) + " " + std::string(value);
    }
    ParseResult parsed = parse_model(statement);
    if (!parsed.ok()) {
        for (const ParseDiagnostic& d : parsed.diagnostics) {
            if (d.severity == Severity::Error) {
                throw Error(ErrorCode::Diagnostics, d.message + (d.token.empty() ? "" : " ('" + d.token + "')"));
            }
        }
    }
    if (parsed.fragment.empty()) {
        throw Error(ErrorCode::InvalidArgument, "nothing to set");
    }
    apply(parsed.fragment);
}

void Session::set_out_dir(fs::path dir)
{
    if (dir.empty()) {
        throw Error(ErrorCode::InvalidArgument, "output directory must not be empty");
    }
    config_.out_dir = std::move(dir);
}

void Session::set_threads(unsigned threads)
{
    config_.threads = std::max(1u, threads);
}

std::string Session::describe() const
{
    const ModelSpec& s = config_.spec;
    std::ostringstream out;
    auto duration = [](const Duration& d, const char* unlimited) {
        return d.bounded() ? std::to_string(d.count()) : std::string(unlimited);
    };
    out << "model=" << (config_.model_path ? config_.model_path->string() : "none") << '\n';
    out << "defaults=" << (config_.defaults_path ? config_.defaults_path->string() : "none") << '\n';
    out << "disease=" << s.disease_name << '\n';
    out << "transmission=" << format_probability(s.transmission_prob) << '\n';
    out << "external=" << format_probability(s.external_prob) << '\n';
    out << "period=" << duration(s.infectious_period, "unbounded") << '\n';
    out << "persistence=" << format_probability(s.persistence_prob) << '\n';
    out << "initial=";
    if (const auto* count = std::get_if<std::size_t>(&s.initial_infected)) {
        out << *count;
    } else {
        const auto& ids = std::get<std::vector<std::string>>(s.initial_infected);
        for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i];
    }
    out << '\n';
    out << "immunity=" << format_probability(s.immunity_prob) << '\n';
    out << "immunity_period=" << duration(s.immunity_period, "permanent") << '\n';
    out << "horizon=" << s.horizon << '\n';
    out << "runs=" << s.runs << '\n';
    out << "seed=" << s.seed << '\n';
    if (const auto* file = std::get_if<PopulationFile>(&s.population_source)) {
        out << "population=file:" << file->path << '\n';
    } else {
        out << "population=random:" << std::get<RandomPopulation>(s.population_source).size << '\n';
    }
    if (const auto* file = std::get_if<ContactsFile>(&s.contacts_source)) {
        out << "contacts=file:" << file->path << '\n';
    } else {
        const auto& rc = std::get<RandomContacts>(s.contacts_source);
        out << "contacts=random:" << format_probability(rc.edge_prob) << ':'
            << (rc.regime == ContactRegime::Static ? "static" : "perstep") << '\n';
    }
    out << "undirected=" << (s.contacts_undirected ? "true" : "false") << '\n';
    out << "queries=";
    bool first = true;
    for (Compartment c : s.queries) {
        out << (first ? "" : ",") << to_string(c);
        first = false;
    }
    out << '\n';
    out << "out=" << config_.out_dir.string() << '\n';
    out << "threads=" << config_.threads << '\n';
    return out.str();
}

const TemporalContactGraph& Session::graph()
{
    if (!graph_) {
        graph_ = build_graph(config_.spec, base_dir(), warnings_);
    }
    return *graph_;
}

GroundedModel Session::compile()
{
    return ground(config_.spec, graph());
}

std::string Session::emit(EmitMode mode)
{
    return emit_program(config_.spec, graph(), mode);
}

const std::vector<Trajectory>& Session::run()
{
    const GroundedModel model = compile();
    runs_ = run_batch(model, std::size_t(config_.spec.runs), config_.spec.seed, config_.threads);
    return runs_;
}

void Session::write_run_outputs() const
{
    if (runs_.empty()) {
        throw Error(ErrorCode::EmptyInput, "no simulation results; run first");
    }
    for (const Trajectory& traj : runs_) {
        const auto single = aggregate(std::span(&traj, 1), AggregateMode::Single);
        write_text_file(config_.out_dir / ("run_" + std::to_string(traj.run_index()) + ".csv"),
                        write_table_csv(single));
    }
    write_text_file(config_.out_dir / "aggregate.csv", write_table_csv(aggregate(runs_, AggregateMode::Mean)));
}

TimeSeriesTable Session::table(AggregateMode mode) const
{
    return aggregate(runs_, mode);
}

void Session::plot(const fs::path& path, PlotStyle style, bool mean) const
{
    const TimeSeriesTable t = aggregate(runs_, mean ? AggregateMode::Mean : AggregateMode::Stacked);
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    render_plot(t, style, config_.spec.queries, path);
}

MarginalTable Session::exact(std::size_t max_coins)
{
    const GroundedModel model = compile();
    return exact_marginals(model, ExactOptions{max_coins, config_.threads});
}

std::vector<std::string> Session::take_warnings()
{
    return std::exchange(warnings_, {});
}

} // namespace netepi
