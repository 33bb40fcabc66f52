#include "netepi/shell.hpp"

#include "netepi/error.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace netepi {

std::string_view shell_help()
{
    return "commands:\n"
           "  help                              show this list\n"
           "  load model <path>                 read a model file\n"
           "  load defaults <path>              read a defaults file (the model file overrides it)\n"
           "  set <key> <value>                 runs | seed | horizon | queries <c1,c2> | out <dir> |\n"
           "                                    threads <n> | individuals <csv> | contacts <csv>,\n"
           "                                    or any model statement, e.g. set infected transmission 0.5\n"
           "  show                              print the current configuration\n"
           "  compile [--emit <path>] [--grounded]  ground the model; optionally write the program text\n"
           "  run                               simulate all runs and write run_<k>.csv and aggregate.csv\n"
           "  exact                             exact marginals by enumeration (small models only)\n"
           "  table [--mean] [--peaks]          tabulate the last runs; --peaks lists infected maxima\n"
           "  plot [--scatter] [--mean] <path>  write an SVG plot of the last runs\n"
           "  quit                              leave the shell\n";
}

namespace {

std::vector<std::string> words(std::string_view line)
{
    std::istringstream in{std::string(line)};
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

void flush_warnings(Session& session, std::ostream& out)
{
    for (const std::string& w : session.take_warnings()) out << "warning: " << w << '\n';
}

void print_peaks(const TimeSeriesTable& table, std::ostream& out)
{
    for (const Series& s : table.series) {
        out << "peaks (infected, " << (s.run ? "run " + std::to_string(*s.run) : std::string("mean")) << "):";
        for (int t : peak_times(s, Compartment::Infected)) out << ' ' << t;
        out << '\n';
    }
}

void dispatch(Session& session, const std::vector<std::string>& w, std::ostream& out)
{
    const std::string& cmd = w[0];
    auto flag = [&](std::string_view name) {
        for (std::size_t i = 1; i < w.size(); ++i) {
            if (w[i] == name) return true;
        }
        return false;
    };
    auto usage = [](const char* text) { throw Error(ErrorCode::InvalidArgument, std::string("usage: ") + text); };

    if (cmd == "help") {
        out << shell_help();
    } else if (cmd == "load") {
        if (w.size() != 3 || (w[1] != "model" && w[1] != "defaults")) usage("load model|defaults <path>");
        if (w[1] == "model") {
            session.load_model(w[2]);
        } else {
            session.load_defaults(w[2]);
        }
        out << "loaded " << w[1] << ' ' << w[2] << '\n';
    } else if (cmd == "set") {
        if (w.size() < 3) usage("set <key> <value>");
        std::string value = w[2];
        for (std::size_t i = 3; i < w.size(); ++i) value += " " + w[i];
        session.set(w[1], value);
        out << "ok\n";
    } else if (cmd == "show") {
        out << session.describe();
    } else if (cmd == "compile") {
        std::optional<std::string> emit_path;
        for (std::size_t i = 1; i < w.size(); ++i) {
            if (w[i] == "--emit") {
                if (i + 1 >= w.size()) usage("compile [--emit <path>] [--grounded]");
                emit_path = w[++i];
            } else if (w[i] != "--grounded") {
                usage("compile [--emit <path>] [--grounded]");
            }
        }
        const GroundedModel model = session.compile();
        out << "coins: external=" << model.count(CoinKind::External)
            << " transmission=" << model.count(CoinKind::Transmission)
            << " persistence=" << model.count(CoinKind::Persistence)
            << " immunity=" << model.count(CoinKind::Immunity) << " total=" << model.coins.size() << '\n';
        if (emit_path) {
            write_text_file(*emit_path, session.emit(flag("--grounded") ? EmitMode::Grounded : EmitMode::Relational));
            out << "wrote " << *emit_path << '\n';
        }
    } else if (cmd == "run") {
        if (w.size() != 1) usage("run");
        const auto& runs = session.run();
        session.write_run_outputs();
        out << "completed " << runs.size() << " run(s); results in " << session.config().out_dir.string() << '\n';
    } else if (cmd == "exact") {
        if (w.size() != 1) usage("exact");
        out << write_marginals_csv(session.exact());
    } else if (cmd == "table") {
        for (std::size_t i = 1; i < w.size(); ++i) {
            if (w[i] != "--mean" && w[i] != "--peaks") usage("table [--mean] [--peaks]");
        }
        const auto& runs = session.last_runs();
        const AggregateMode mode = flag("--mean")      ? AggregateMode::Mean
                                   : runs.size() == 1 ? AggregateMode::Single
                                                      : AggregateMode::Stacked;
        const TimeSeriesTable table = session.table(mode);
        out << write_table_csv(table);
        if (flag("--peaks")) print_peaks(table, out);
    } else if (cmd == "plot") {
        std::optional<std::string> path;
        for (std::size_t i = 1; i < w.size(); ++i) {
            if (w[i] == "--scatter" || w[i] == "--mean") continue;
            if (path || w[i].starts_with("--")) usage("plot [--scatter] [--mean] <path>");
            path = w[i];
        }
        if (!path) usage("plot [--scatter] [--mean] <path>");
        session.plot(*path, flag("--scatter") ? PlotStyle::Scatter : PlotStyle::Line, flag("--mean"));
        out << "wrote " << *path << '\n';
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown command '" + cmd + "' (try 'help')");
    }
}

} // namespace

bool execute_command(Session& session, std::string_view line, std::ostream& out)
{
    const auto w = words(line);
    if (w.empty() || w[0].starts_with('#')) {
        return true;
    }
    if (w[0] == "quit" || w[0] == "exit") {
        return false;
    }
    try {
        dispatch(session, w, out);
    } catch (const Error& e) {
        std::string message = e.what();
        for (char& c : message) {
            if (c == '\n') c = ';';
        }
        out << "error: " << message << '\n';
    } catch (const std::exception& e) {
        out << "error: " << e.what() << '\n';
    }
    flush_warnings(session, out);
    return true;
}

int run_shell(Session& session, std::istream& in, std::ostream& out, bool interactive)
{
    std::string line;
    while (true) {
        if (interactive) out << "netepi> " << std::flush;
        if (!std::getline(in, line)) break;
        if (!execute_command(session, line, out)) break;
    }
    return 0;
}

} // namespace netepi
