#pragma once

// Pipeline state shared by the batch CLI and the interactive shell: model and
// defaults files, interactive overrides, the resolved spec, and the results
// of the last run.

#include "netepi/dsl.hpp"
#include "netepi/emitter.hpp"
#include "netepi/engine.hpp"
#include "netepi/grounder.hpp"
#include "netepi/population.hpp"
#include "netepi/report.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace netepi {

/// Throws Error(IoFailure).
std::string read_text_file(const std::filesystem::path& path);
/// Creates missing parent directories. Throws Error(IoFailure).
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Parses a model or defaults file. Error diagnostics are raised as
/// Error(Diagnostics); warnings are appended to `warnings`.
SpecFragment read_fragment(const std::filesystem::path& path, std::vector<std::string>& warnings);

/// Builds the population and contacts a spec describes. Relative data paths
/// are resolved against `base_dir`.
TemporalContactGraph build_graph(const ModelSpec& spec, const std::filesystem::path& base_dir,
                                 std::vector<std::string>& warnings);

struct SessionConfig {
    std::optional<std::filesystem::path> model_path;
    std::optional<std::filesystem::path> defaults_path;
    SpecFragment defaults;
    SpecFragment model;
    SpecFragment overrides;
    std::filesystem::path out_dir = "out";
    unsigned threads = 1;
    ModelSpec spec;
};

class Session {
public:
    Session() = default;

    const SessionConfig& config() const { return config_; }
    const ModelSpec& spec() const { return config_.spec; }

    void load_model(const std::filesystem::path& path);
    void load_defaults(const std::filesystem::path& path);
    /// Overlays `fragment` onto the current overrides. On failure the session
    /// is left unchanged.
    void apply(const SpecFragment& fragment);
    /// Shell-style `set <key> <value>`; unknown keys are read as a model-file
    /// statement (`set infected transmission 0.5`).
    void set(std::string_view key, std::string_view value);
    void set_out_dir(std::filesystem::path dir);
    void set_threads(unsigned threads);

    /// `key=value` lines describing the resolved configuration.
    std::string describe() const;

    const TemporalContactGraph& graph();
    GroundedModel compile();
    std::string emit(EmitMode mode);

    /// Runs spec().runs simulations and keeps them as the last results.
    const std::vector<Trajectory>& run();
    const std::vector<Trajectory>& last_runs() const { return runs_; }
    /// run_<k>.csv per run and aggregate.csv under the output directory.
    void write_run_outputs() const;
    TimeSeriesTable table(AggregateMode mode) const;
    void plot(const std::filesystem::path& path, PlotStyle style, bool mean) const;

    MarginalTable exact(std::size_t max_coins = ExactOptions{}.max_coins);

    std::vector<std::string> take_warnings();

private:
    void resolve(SessionConfig candidate);
    std::filesystem::path base_dir() const;

    SessionConfig config_;
    std::optional<TemporalContactGraph> graph_;
    std::vector<Trajectory> runs_;
    std::vector<std::string> warnings_;
};

} // namespace netepi
