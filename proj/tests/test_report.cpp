#include "netepi/error.hpp"
#include "netepi/report.hpp"

#include <doctest.h>

#include <filesystem>

using namespace netepi;

namespace {

GroundedModel inert_model(int n, int horizon)
{
    ModelSpec spec;
    spec.horizon = horizon;
    spec.initial_infected = std::size_t{0};
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    std::sort(ids.begin(), ids.end());
    return ground(spec, TemporalContactGraph(ids, {}));
}

std::size_t occurrences(const std::string& text, const std::string& needle)
{
    std::size_t count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++count;
    return count;
}

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("inert model tabulates a constant susceptible population")
{
    const GroundedModel m = inert_model(3, 2);
    const auto runs = run_batch(m, 1, 0);
    const TimeSeriesTable table = aggregate(runs, AggregateMode::Single);
    CHECK(write_table_csv(table) == "time,susceptible,infected,recovered,resistant\n1,3,0,0,0\n2,3,0,0,0\n");
}

TEST_CASE("mean of identical runs equals the single run")
{
    ModelSpec spec;
    spec.horizon = 10;
    spec.infectious_period = Duration::steps(3);
    spec.immunity_prob = 1.0;
    const GroundedModel m = ground(spec, TemporalContactGraph({"a", "b"}, {{1, 0, 1}}));
    const Trajectory one = run_simulation(m, 0, 1);
    const std::vector<Trajectory> same(5, one);
    const TimeSeriesTable mean = aggregate(same, AggregateMode::Mean);
    const TimeSeriesTable single = aggregate(std::span(same).first(1), AggregateMode::Single);
    REQUIRE(mean.series.size() == 1);
    CHECK_FALSE(mean.series[0].run.has_value());
    CHECK(mean.series[0].rows == single.series[0].rows);
    const std::string csv = write_table_csv(mean);
    CHECK(csv.find("\n1,1.0000,1.0000,0.0000,0.0000\n") != std::string::npos);
}

TEST_CASE("stacked tables carry the run index")
{
    const GroundedModel m = inert_model(2, 2);
    const auto runs = run_batch(m, 2, 0);
    const TimeSeriesTable stacked = aggregate(runs, AggregateMode::Stacked);
    CHECK(write_table_csv(stacked) == "run,time,susceptible,infected,recovered,resistant\n"
                                      "0,1,2,0,0,0\n0,2,2,0,0,0\n1,1,2,0,0,0\n1,2,2,0,0,0\n");
}

TEST_CASE("aggregate guards")
{
    const std::vector<Trajectory> none;
    CHECK(code_of([&] { aggregate(none, AggregateMode::Mean); }) == ErrorCode::EmptyInput);
    const std::vector<Trajectory> mixed{Trajectory(2, 3), Trajectory(2, 4)};
    CHECK(code_of([&] { aggregate(mixed, AggregateMode::Mean); }) == ErrorCode::DimensionMismatch);
    const std::vector<Trajectory> two{Trajectory(2, 3), Trajectory(2, 3)};
    CHECK(code_of([&] { aggregate(two, AggregateMode::Single); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("flat infected series draws one polyline on the x axis")
{
    const GroundedModel m = inert_model(4, 5);
    const TimeSeriesTable table = aggregate(run_batch(m, 1, 0), AggregateMode::Single);
    const std::string svg = render_svg(table, PlotStyle::Line, {Compartment::Infected});
    CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\"", 0) == 0);
    CHECK(occurrences(svg, "<polyline class=\"series\"") == 1);
    CHECK(svg.find("points=\"70.00,450.00 247.50,450.00 425.00,450.00 602.50,450.00 780.00,450.00\"") !=
          std::string::npos);
    CHECK(svg.find("time (weeks)") != std::string::npos);
    CHECK(svg.find("infected (individuals)") != std::string::npos);
}

TEST_CASE("scatter plot: one group per run and compartment")
{
    const GroundedModel m = inert_model(2, 3);
    const TimeSeriesTable table = aggregate(run_batch(m, 5, 0), AggregateMode::Stacked);
    const std::string svg = render_svg(table, PlotStyle::Scatter, {Compartment::Infected});
    CHECK(occurrences(svg, "<g class=\"series\"") == 5);
    CHECK(occurrences(svg, "<circle ") == 15);
    CHECK(svg.find("data-run=\"4\"") != std::string::npos);
    const std::string both = render_svg(table, PlotStyle::Line, {Compartment::Infected, Compartment::Susceptible});
    CHECK(occurrences(both, "<polyline ") == 10);
    CHECK(both.find("count (individuals)") != std::string::npos);
}

TEST_CASE("plot guards")
{
    const GroundedModel m = inert_model(2, 3);
    const TimeSeriesTable table = aggregate(run_batch(m, 1, 0), AggregateMode::Single);
    CHECK(code_of([&] { render_svg(table, PlotStyle::Line, {}); }) == ErrorCode::EmptySeries);
    CHECK(code_of([&] { render_svg(TimeSeriesTable{}, PlotStyle::Line, {Compartment::Infected}); }) ==
          ErrorCode::EmptyInput);
    const auto bad = std::filesystem::temp_directory_path() / "netepi-no-such-dir" / "x" / "plot.svg";
    CHECK(code_of([&] { render_plot(table, PlotStyle::Line, {Compartment::Infected}, bad); }) ==
          ErrorCode::IoFailure);
}

TEST_CASE("find_peaks")
{
    auto peaks = [](std::vector<double> v) { return find_peaks(v); };
    CHECK(peaks({0, 3, 1}) == std::vector<std::size_t>{1});
    CHECK(peaks({0, 3, 1, 4, 2}) == std::vector<std::size_t>{1, 3});
    CHECK(peaks({0, 2, 2, 2, 1}) == std::vector<std::size_t>{1});
    CHECK(peaks({0, 2, 2, 3, 1}) == std::vector<std::size_t>{3});
    CHECK(peaks({5, 4, 3}).empty());
    CHECK(peaks({1, 2, 3}).empty());
    CHECK(peaks({2, 2, 2}).empty());
    CHECK(peaks({}).empty());
    CHECK(peaks({7}).empty());
}

TEST_CASE("peak_times reports timesteps")
{
    Series s;
    const double infected[] = {1, 4, 2, 2, 5, 0};
    for (int t = 1; t <= 6; ++t) s.rows.push_back({t, 0, infected[t - 1], 0, 0});
    CHECK(peak_times(s, Compartment::Infected) == std::vector<int>{2, 5});
}

TEST_CASE("marginals CSV lists the queried compartments")
{
    MarginalTable t({"a"}, 2, {Compartment::Infected}, InferenceMethod::Exact);
    t.at(Compartment::Infected, 0, 2) = 0.82;
    CHECK(write_marginals_csv(t) == "compartment,individual,time,probability\ninfected,a,1,0\ninfected,a,2,0.82\n");
}
