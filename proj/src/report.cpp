#include "netepi/report.hpp"

#include "netepi/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace netepi {

double SeriesRow::value(Compartment c) const
{
    switch (c) {
    case Compartment::Susceptible: return susceptible;
    case Compartment::Infected: return infected;
    case Compartment::Recovered: return recovered;
    case Compartment::Resistant: return resistant;
    }
    return 0.0;
}

namespace {

std::vector<SeriesRow> count_rows(const Trajectory& traj)
{
    std::vector<SeriesRow> rows;
    rows.reserve(std::size_t(traj.horizon()));
    for (int t = 1; t <= traj.horizon(); ++t) {
        rows.push_back({t, double(traj.count(Compartment::Susceptible, t)),
                        double(traj.count(Compartment::Infected, t)),
                        double(traj.count(Compartment::Recovered, t)),
                        double(traj.count(Compartment::Resistant, t))});
    }
    return rows;
}

std::string fixed(double v, int precision)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
    return std::string(buf, end);
}

} // namespace

TimeSeriesTable aggregate(std::span<const Trajectory> runs, AggregateMode mode)
{
    if (runs.empty()) {
        throw Error(ErrorCode::EmptyInput, "no trajectories to aggregate");
    }
    for (const Trajectory& r : runs) {
        if (r.population() != runs.front().population() || r.horizon() != runs.front().horizon()) {
            throw Error(ErrorCode::DimensionMismatch, "trajectories differ in population or horizon");
        }
    }
    TimeSeriesTable table;
    table.mode = mode;
    table.population = runs.front().population();
    switch (mode) {
    case AggregateMode::Single:
        if (runs.size() != 1) {
            throw Error(ErrorCode::InvalidArgument, "single mode takes exactly one trajectory");
        }
        table.series.push_back({runs.front().run_index(), count_rows(runs.front())});
        break;
    case AggregateMode::Stacked:
        for (const Trajectory& r : runs) table.series.push_back({r.run_index(), count_rows(r)});
        break;
    case AggregateMode::Mean: {
        Series mean{std::nullopt, count_rows(runs.front())};
        for (std::size_t k = 1; k < runs.size(); ++k) {
            const auto rows = count_rows(runs[k]);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                mean.rows[i].susceptible += rows[i].susceptible;
                mean.rows[i].infected += rows[i].infected;
                mean.rows[i].recovered += rows[i].recovered;
                mean.rows[i].resistant += rows[i].resistant;
            }
        }
        const double count = double(runs.size());
        for (SeriesRow& row : mean.rows) {
            row.susceptible /= count;
            row.infected /= count;
            row.recovered /= count;
            row.resistant /= count;
        }
        table.series.push_back(std::move(mean));
        break;
    }
    }
    return table;
}

std::string write_table_csv(const TimeSeriesTable& table)
{
    std::ostringstream out;
    const bool stacked = table.mode == AggregateMode::Stacked;
    const int precision = table.mode == AggregateMode::Mean ? 4 : 0;
    if (stacked) out << "run,";
    out << "time,susceptible,infected,recovered,resistant\n";
    for (const Series& s : table.series) {
        for (const SeriesRow& row : s.rows) {
            if (stacked) out << *s.run << ',';
            out << row.time;
            for (Compartment c : kAllCompartments) out << ',' << fixed(row.value(c), precision);
            out << '\n';
        }
    }
    return out.str();
}

std::string write_marginals_csv(const MarginalTable& table)
{
    std::ostringstream out;
    out << "compartment,individual,time,probability\n";
    for (Compartment c : table.queries()) {
        for (PersonIndex x = 0; x < table.population(); ++x) {
            for (int t = 1; t <= table.horizon(); ++t) {
                char buf[64];
                auto [end, ec] = std::to_chars(buf, buf + sizeof buf, table.at(c, x, t));
                out << to_string(c) << ',' << table.individuals()[x] << ',' << t << ','
                    << std::string_view(buf, std::size_t(end - buf)) << '\n';
            }
        }
    }
    return out.str();
}

std::vector<std::size_t> find_peaks(std::span<const double> values)
{
    std::vector<std::size_t> peaks;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i;
        while (j + 1 < values.size() && values[j + 1] == values[i]) ++j;
        if (i > 0 && j + 1 < values.size() && values[i - 1] < values[i] && values[j + 1] < values[i]) {
            peaks.push_back(i);
        }
        i = j + 1;
    }
    return peaks;
}

std::vector<int> peak_times(const Series& series, Compartment c)
{
    std::vector<double> values;
    values.reserve(series.rows.size());
    for (const SeriesRow& row : series.rows) values.push_back(row.value(c));
    std::vector<int> times;
    for (std::size_t i : find_peaks(values)) times.push_back(series.rows[i].time);
    return times;
}

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 500;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 20;
constexpr double kBottom = 50;

const char* colour(Compartment c)
{
    switch (c) {
    case Compartment::Susceptible: return "#1f77b4";
    case Compartment::Infected: return "#d62728";
    case Compartment::Recovered: return "#2ca02c";
    case Compartment::Resistant: return "#9467bd";
    }
    return "#000000";
}

} // namespace

std::string render_svg(const TimeSeriesTable& table, PlotStyle style, const QuerySet& compartments)
{
    if (compartments.empty()) {
        throw Error(ErrorCode::EmptySeries, "no compartments selected for plotting");
    }
    if (table.series.empty() || table.series.front().rows.empty()) {
        throw Error(ErrorCode::EmptyInput, "nothing to plot");
    }
    int t_min = table.series.front().rows.front().time;
    int t_max = table.series.front().rows.back().time;
    double y_max = 0;
    for (const Series& s : table.series) {
        for (const SeriesRow& row : s.rows) {
            for (Compartment c : compartments) y_max = std::max(y_max, row.value(c));
        }
    }
    if (y_max <= 0) y_max = 1;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](int t) {
        return t_max == t_min ? kLeft : kLeft + plot_w * double(t - t_min) / double(t_max - t_min);
    };
    auto py = [&](double v) { return kTop + plot_h * (1.0 - v / y_max); };

    std::string y_label = compartments.size() == 1 ? std::string(to_string(*compartments.begin())) : "count";
    y_label += " (individuals)";

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
    out << "<rect width=\"800\" height=\"500\" fill=\"#ffffff\"/>\n";
    out << "<g class=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << fixed(kLeft, 2) << "\" y1=\"" << fixed(py(0), 2) << "\" x2=\"" << fixed(kWidth - kRight, 2)
        << "\" y2=\"" << fixed(py(0), 2) << "\"/>\n";
    out << "<line x1=\"" << fixed(kLeft, 2) << "\" y1=\"" << fixed(kTop, 2) << "\" x2=\"" << fixed(kLeft, 2)
        << "\" y2=\"" << fixed(py(0), 2) << "\"/>\n";
    out << "</g>\n";
    out << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#000000\">\n";
    out << "<text x=\"" << fixed(px(t_min), 2) << "\" y=\"" << fixed(py(0) + 16, 2) << "\" text-anchor=\"middle\">"
        << t_min << "</text>\n";
    out << "<text x=\"" << fixed(px(t_max), 2) << "\" y=\"" << fixed(py(0) + 16, 2) << "\" text-anchor=\"middle\">"
        << t_max << "</text>\n";
    out << "<text x=\"" << fixed(kLeft - 6, 2) << "\" y=\"" << fixed(py(0) + 4, 2) << "\" text-anchor=\"end\">0</text>\n";
    out << "<text x=\"" << fixed(kLeft - 6, 2) << "\" y=\"" << fixed(kTop + 4, 2) << "\" text-anchor=\"end\">"
        << fixed(y_max, table.mode == AggregateMode::Mean ? 2 : 0) << "</text>\n";
    out << "</g>\n";
    out << "<text class=\"xlabel\" x=\"" << fixed(kLeft + plot_w / 2, 2) << "\" y=\"" << fixed(kHeight - 10, 2)
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">time (weeks)</text>\n";
    out << "<text class=\"ylabel\" x=\"18\" y=\"" << fixed(kTop + plot_h / 2, 2)
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << fixed(kTop + plot_h / 2, 2) << ")\">" << y_label << "</text>\n";

    for (const Series& s : table.series) {
        const std::string run = s.run ? std::to_string(*s.run) : "mean";
        for (Compartment c : compartments) {
            if (style == PlotStyle::Line) {
                out << "<polyline class=\"series\" data-compartment=\"" << to_string(c) << "\" data-run=\"" << run
                    << "\" fill=\"none\" stroke=\"" << colour(c) << "\" stroke-width=\"1.5\" points=\"";
                for (std::size_t i = 0; i < s.rows.size(); ++i) {
                    out << (i ? " " : "") << fixed(px(s.rows[i].time), 2) << ',' << fixed(py(s.rows[i].value(c)), 2);
                }
                out << "\"/>\n";
            } else {
                out << "<g class=\"series\" data-compartment=\"" << to_string(c) << "\" data-run=\"" << run
                    << "\" fill=\"" << colour(c) << "\">\n";
                for (const SeriesRow& row : s.rows) {
                    out << "<circle cx=\"" << fixed(px(row.time), 2) << "\" cy=\"" << fixed(py(row.value(c)), 2)
                        << "\" r=\"2.5\"/>\n";
                }
                out << "</g>\n";
            }
        }
    }
    out << "</svg>\n";
    return out.str();
}

void render_plot(const TimeSeriesTable& table, PlotStyle style, const QuerySet& compartments,
                 const std::filesystem::path& out)
{
    const std::string svg = render_svg(table, style, compartments);
    std::ofstream file(out, std::ios::binary);
    if (!file || !(file << svg) || !file.flush()) {
        throw Error(ErrorCode::IoFailure, "cannot write plot to " + out.string());
    }
}

} // namespace netepi
