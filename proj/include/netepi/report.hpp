#pragma once

#include "netepi/engine.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace netepi {

enum class AggregateMode {
    Single,  ///< exactly one run
    Mean,    ///< per-timestep mean across runs
    Stacked, ///< every run, labelled by run index
};

struct SeriesRow {
    int time = 1;
    double susceptible = 0;
    double infected = 0;
    double recovered = 0;
    double resistant = 0;

    double value(Compartment c) const;
    friend bool operator==(const SeriesRow&, const SeriesRow&) = default;
};

struct Series {
    std::optional<std::size_t> run; ///< empty for a mean series
    std::vector<SeriesRow> rows;
    friend bool operator==(const Series&, const Series&) = default;
};

struct TimeSeriesTable {
    AggregateMode mode = AggregateMode::Single;
    std::size_t population = 0;
    std::vector<Series> series;
    friend bool operator==(const TimeSeriesTable&, const TimeSeriesTable&) = default;
};

/// Throws Error(EmptyInput) for no trajectories, Error(DimensionMismatch)
/// when they differ in shape, and Error(InvalidArgument) when Single mode
/// gets more than one.
TimeSeriesTable aggregate(std::span<const Trajectory> runs, AggregateMode mode);

/// `time,susceptible,infected,recovered,resistant` with a header row; stacked
/// tables get a leading `run` column. Means are written with four decimals.
std::string write_table_csv(const TimeSeriesTable& table);

/// `compartment,individual,time,probability` rows for the queried
/// compartments.
std::string write_marginals_csv(const MarginalTable& table);

/// Indices of local maxima: a maximal run of equal values counts once, and
/// only when both of its neighbours are strictly lower.
std::vector<std::size_t> find_peaks(std::span<const double> values);

/// Timesteps at which the given compartment of one series peaks.
std::vector<int> peak_times(const Series& series, Compartment c);

enum class PlotStyle { Line, Scatter };

/// 800x500 SVG with one polyline (Line) or point group (Scatter) per
/// compartment per series. Throws Error(EmptySeries) or Error(EmptyInput).
std::string render_svg(const TimeSeriesTable& table, PlotStyle style, const QuerySet& compartments);

/// render_svg written to `out`; throws Error(IoFailure) when it cannot be.
void render_plot(const TimeSeriesTable& table, PlotStyle style, const QuerySet& compartments,
                 const std::filesystem::path& out);

} // namespace netepi
