// netepi: compile and simulate network epidemic models.
//
//   netepi run --model flu.model --runs 5 --out results --plot
//   netepi compile --model flu.model --emit flu.pl [--grounded]
//   netepi exact --model small.model
//   netepi shell

#include "netepi/error.hpp"
#include "netepi/session.hpp"
#include "netepi/shell.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <unistd.h>

namespace {

struct CommonOptions {
    std::string model;
    std::string defaults;
    std::string individuals;
    std::string contacts;
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;
    std::optional<int> horizon;
    std::string out = "out";
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool model_required)
{
    auto* model = cmd->add_option("--model", o.model, "model file");
    if (model_required) model->required();
    cmd->add_option("--defaults", o.defaults, "defaults file, overridden by the model file");
    cmd->add_option("--individuals", o.individuals, "individuals CSV (one id per row)");
    cmd->add_option("--contacts", o.contacts, "contacts CSV (target,source,timestep)");
    cmd->add_option("--runs", o.runs, "number of simulation runs")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--horizon", o.horizon, "number of timesteps")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
}

netepi::Session open_session(const CommonOptions& o)
{
    netepi::Session session;
    if (!o.defaults.empty()) session.load_defaults(o.defaults);
    if (!o.model.empty()) session.load_model(o.model);
    if (!o.individuals.empty()) session.set("individuals", o.individuals);
    if (!o.contacts.empty()) session.set("contacts", o.contacts);
    if (o.runs) session.set("runs", std::to_string(*o.runs));
    if (o.seed) session.set("seed", std::to_string(*o.seed));
    if (o.horizon) session.set("horizon", std::to_string(*o.horizon));
    session.set_out_dir(o.out);
    session.set_threads(o.threads);
    return session;
}

void print_warnings(netepi::Session& session)
{
    for (const std::string& w : session.take_warnings()) std::cerr << "warning: " << w << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Compile and simulate network-based epidemic models"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    bool plot = false;
    bool scatter = false;
    bool plot_mean = false;
    bool emit = false;
    bool emit_grounded = false;
    bool peaks = false;
    auto* run = app.add_subcommand("run", "simulate and write run_<k>.csv and aggregate.csv");
    add_common(run, run_opts, true);
    run->add_flag("--plot", plot, "also write plot.svg");
    run->add_flag("--scatter", scatter, "scatter plot instead of lines");
    run->add_flag("--mean", plot_mean, "plot the mean across runs instead of every run");
    run->add_flag("--emit", emit, "also write model.pl");
    run->add_flag("--grounded", emit_grounded, "emit the time-grounded program");
    run->add_flag("--peaks", peaks, "print peaks of the mean infected series");

    CommonOptions compile_opts;
    std::string emit_path;
    bool grounded = false;
    auto* compile = app.add_subcommand("compile", "write the probabilistic logic program for a model");
    add_common(compile, compile_opts, true);
    compile->add_option("--emit", emit_path, "output path for the program text")->required();
    compile->add_flag("--grounded", grounded, "ground out individuals and timesteps");

    CommonOptions exact_opts;
    std::size_t max_coins = netepi::ExactOptions{}.max_coins;
    bool exact_to_file = false;
    auto* exact = app.add_subcommand("exact", "exact marginals by enumeration");
    add_common(exact, exact_opts, true);
    exact->add_option("--max-coins", max_coins, "largest number of random choices to enumerate");
    exact->add_flag("--write", exact_to_file, "write marginals.csv to the output directory instead of stdout");

    CommonOptions shell_opts;
    auto* shell = app.add_subcommand("shell", "interactive session");
    add_common(shell, shell_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            netepi::Session session = open_session(run_opts);
            session.run();
            session.write_run_outputs();
            const auto& dir = session.config().out_dir;
            if (plot) {
                session.plot(dir / "plot.svg",
                             scatter ? netepi::PlotStyle::Scatter : netepi::PlotStyle::Line, plot_mean);
            }
            if (emit) {
                netepi::write_text_file(dir / "model.pl", session.emit(emit_grounded ? netepi::EmitMode::Grounded
                                                                                   : netepi::EmitMode::Relational));
            }
            if (peaks) {
                const auto table = session.table(netepi::AggregateMode::Mean);
                std::cout << "peaks:";
                for (int t : netepi::peak_times(table.series.front(), netepi::Compartment::Infected)) {
                    std::cout << ' ' << t;
                }
                std::cout << '\n';
            }
            print_warnings(session);
        } else if (compile->parsed()) {
            netepi::Session session = open_session(compile_opts);
            netepi::write_text_file(emit_path, session.emit(grounded ? netepi::EmitMode::Grounded
                                                                     : netepi::EmitMode::Relational));
            print_warnings(session);
        } else if (exact->parsed()) {
            netepi::Session session = open_session(exact_opts);
            const std::string csv = netepi::write_marginals_csv(session.exact(max_coins));
            if (exact_to_file) {
                netepi::write_text_file(session.config().out_dir / "marginals.csv", csv);
            } else {
                std::cout << csv;
            }
            print_warnings(session);
        } else if (shell->parsed()) {
            netepi::Session session = open_session(shell_opts);
            print_warnings(session);
            return netepi::run_shell(session, std::cin, std::cout, isatty(STDIN_FILENO) != 0);
        }
    } catch (const netepi::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == netepi::ErrorCode::IoFailure ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
