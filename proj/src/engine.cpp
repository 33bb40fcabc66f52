#include "netepi/engine.hpp"

#include "netepi/error.hpp"
#include "netepi/parallel.hpp"
#include "netepi/rng.hpp"

#include <algorithm>

namespace netepi {

double noisy_or(std::span<const double> probs)
{
    double none = 1.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error(ErrorCode::OutOfRange, "noisy-or input outside [0,1]");
        }
        none *= 1.0 - p;
    }
    return 1.0 - none;
}

bool Trajectory::holds(Compartment c, PersonIndex x, int t) const
{
    switch (c) {
    case Compartment::Susceptible: return susceptible(x, t);
    case Compartment::Infected: return infected(x, t);
    case Compartment::Recovered: return recovered(x, t);
    case Compartment::Resistant: return resistant(x, t);
    }
    return false;
}

std::size_t Trajectory::count(Compartment c, int t) const
{
    std::size_t total = 0;
    for (PersonIndex x = 0; x < population_; ++x) total += holds(c, x, t) ? 1 : 0;
    return total;
}

void initialize(const GroundedModel& model, Trajectory& traj)
{
    auto first = traj.row(1);
    std::fill(first.begin(), first.end(), std::uint8_t{0});
    for (PersonIndex x : model.initial_infected) first[x] = cell::kInfected;
}

void advance_step(const GroundedModel& model, int t, Trajectory& traj,
                  std::span<const std::uint8_t> coin_values)
{
    advance_step(model, t, traj, [&](CoinIndex c) { return coin_values[c] != 0; });
}

Trajectory run_simulation(const GroundedModel& model, std::size_t run_index, std::uint64_t master_seed)
{
    Trajectory traj(model.population(), model.horizon, run_index, master_seed);
    const Philox4x32 rng(master_seed);
    const auto stream = static_cast<std::uint32_t>(run_index);
    auto fires = [&](CoinIndex c) {
        return rng.bernoulli(model.coins[c].probability, c, stream, RngDomain::Coins);
    };
    initialize(model, traj);
    for (int t = 2; t <= model.horizon; ++t) advance_step(model, t, traj, fires);
    return traj;
}

std::vector<Trajectory> run_batch(const GroundedModel& model, std::size_t runs, std::uint64_t master_seed,
                                  unsigned threads)
{
    std::vector<Trajectory> out(runs);
    parallel_for(runs, threads, [&](std::size_t r) { out[r] = run_simulation(model, r, master_seed); });
    return out;
}

MarginalTable::MarginalTable(std::vector<std::string> individuals, int horizon, QuerySet queries,
                             InferenceMethod method, std::size_t runs)
    : individuals_(std::move(individuals)), horizon_(horizon), queries_(std::move(queries)),
      method_(method), runs_(runs), values_(individuals_.size() * std::size_t(horizon) * 4, 0.0)
{
}

namespace {

void accumulate_row(const Trajectory& traj, int t, double weight, std::vector<double>& into)
{
    const std::size_t n = traj.population();
    double* base = into.data() + std::size_t(t - 1) * n * 4;
    for (PersonIndex x = 0; x < n; ++x) {
        for (Compartment c : kAllCompartments) {
            if (traj.holds(c, x, t)) base[x * 4 + static_cast<std::size_t>(c)] += weight;
        }
    }
}

// Depth-first enumeration over timesteps. Level t enumerates every value
// combination of the free coins acting at t that are not fixed by the chunk.
class Enumerator {
public:
    Enumerator(const GroundedModel& model, std::vector<std::vector<CoinIndex>> free_by_step,
               std::vector<std::uint8_t> values)
        : model_(model), free_by_step_(std::move(free_by_step)), values_(std::move(values)),
          traj_(model.population(), model.horizon),
          sums_(model.population() * std::size_t(model.horizon) * 4, 0.0)
    {
    }

    std::vector<double> run(double chunk_weight)
    {
        initialize(model_, traj_);
        level(1, chunk_weight);
        return std::move(sums_);
    }

private:
    void level(int t, double weight)
    {
        const auto& coins = free_by_step_[std::size_t(t)];
        const std::size_t combos = std::size_t{1} << coins.size();
        for (std::size_t mask = 0; mask < combos; ++mask) {
            double w = weight;
            for (std::size_t j = 0; j < coins.size(); ++j) {
                const bool on = (mask >> j) & 1U;
                const double p = model_.coins[coins[j]].probability;
                values_[coins[j]] = on ? 1 : 0;
                w *= on ? p : 1.0 - p;
            }
            if (t >= 2) {
                advance_step(model_, t, traj_, std::span<const std::uint8_t>(values_));
            }
            accumulate_row(traj_, t, w, sums_);
            if (t < model_.horizon) level(t + 1, w);
        }
    }

    const GroundedModel& model_;
    std::vector<std::vector<CoinIndex>> free_by_step_;
    std::vector<std::uint8_t> values_;
    Trajectory traj_;
    std::vector<double> sums_;
};

} // namespace

MarginalTable exact_marginals(const GroundedModel& model, const ExactOptions& options)
{
    // Coins with probability 0 or 1 have a single possible value.
    std::vector<std::uint8_t> values(model.coins.size(), 0);
    std::vector<CoinIndex> free;
    for (CoinIndex c = 0; c < model.coins.size(); ++c) {
        const double p = model.coins[c].probability;
        if (p >= 1.0) {
            values[c] = 1;
        } else if (p > 0.0) {
            free.push_back(c);
        }
    }
    if (free.size() > options.max_coins) {
        throw Error(ErrorCode::TooLarge,
                    std::to_string(free.size()) + " non-degenerate coins exceed the exact-inference cap of " +
                        std::to_string(options.max_coins) + "; use Monte Carlo instead");
    }
    std::stable_sort(free.begin(), free.end(), [&](CoinIndex a, CoinIndex b) {
        return model.coins[a].timestep < model.coins[b].timestep;
    });

    // The first `split` free coins select a chunk; chunks are summed in index
    // order whether or not they ran in parallel.
    const std::size_t split = std::min<std::size_t>(free.size(), 6);
    const std::size_t chunks = std::size_t{1} << split;
    std::vector<std::vector<CoinIndex>> free_by_step(std::size_t(model.horizon) + 1);
    for (std::size_t j = split; j < free.size(); ++j) {
        free_by_step[std::size_t(model.coins[free[j]].timestep)].push_back(free[j]);
    }

    std::vector<std::vector<double>> partial(chunks);
    parallel_for(chunks, options.threads, [&](std::size_t chunk) {
        std::vector<std::uint8_t> chunk_values = values;
        double weight = 1.0;
        for (std::size_t j = 0; j < split; ++j) {
            const bool on = (chunk >> j) & 1U;
            const double p = model.coins[free[j]].probability;
            chunk_values[free[j]] = on ? 1 : 0;
            weight *= on ? p : 1.0 - p;
        }
        partial[chunk] = Enumerator(model, free_by_step, std::move(chunk_values)).run(weight);
    });

    MarginalTable table(model.individuals, model.horizon, model.queries, InferenceMethod::Exact);
    for (int t = 1; t <= model.horizon; ++t) {
        for (PersonIndex x = 0; x < model.population(); ++x) {
            for (Compartment c : kAllCompartments) {
                const std::size_t i = (std::size_t(t - 1) * model.population() + x) * 4 + static_cast<std::size_t>(c);
                double sum = 0.0;
                for (const auto& part : partial) sum += part[i];
                table.at(c, x, t) = sum;
            }
        }
    }
    return table;
}

MarginalTable mc_marginals(const GroundedModel& model, std::size_t runs, std::uint64_t master_seed,
                           unsigned threads)
{
    if (runs == 0) {
        throw Error(ErrorCode::ZeroRuns, "Monte Carlo estimation needs at least one run");
    }
    const std::size_t n = model.population();
    const std::size_t cells = n * std::size_t(model.horizon) * 4;
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(runs, 1024))));
    std::vector<std::vector<std::uint64_t>> counts(workers, std::vector<std::uint64_t>(cells, 0));

    // Run r is counted by worker r % workers; integer counts make the merge
    // order irrelevant.
    parallel_for(workers, workers, [&](std::size_t w) {
        auto& mine = counts[w];
        for (std::size_t r = w; r < runs; r += workers) {
            const Trajectory traj = run_simulation(model, r, master_seed);
            for (int t = 1; t <= model.horizon; ++t) {
                for (PersonIndex x = 0; x < n; ++x) {
                    for (Compartment c : kAllCompartments) {
                        if (traj.holds(c, x, t)) {
                            ++mine[(std::size_t(t - 1) * n + x) * 4 + static_cast<std::size_t>(c)];
                        }
                    }
                }
            }
        }
    });

    MarginalTable table(model.individuals, model.horizon, model.queries, InferenceMethod::MonteCarlo, runs);
    for (int t = 1; t <= model.horizon; ++t) {
        for (PersonIndex x = 0; x < n; ++x) {
            for (Compartment c : kAllCompartments) {
                const std::size_t i = (std::size_t(t - 1) * n + x) * 4 + static_cast<std::size_t>(c);
                std::uint64_t total = 0;
                for (const auto& part : counts) total += part[i];
                table.at(c, x, t) = static_cast<double>(total) / static_cast<double>(runs);
            }
        }
    }
    return table;
}

} // namespace netepi
