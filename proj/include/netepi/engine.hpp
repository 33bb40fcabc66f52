#pragma once

// Forward simulation and exact enumeration over a GroundedModel.
//
// Step semantics for t >= 2, per individual x:
//   1. infected(x,t) if any gated cause fires: the external coin and every
//      transmission coin from a contact at t-1 need susceptible(x,t-1) (a
//      transmission also needs its source infected at t-1); persistence
//      needs infected(x,t-1) and is certain when its probability is 1.
//   2. With a bounded infectious period d, infected(x,t-d) forces
//      infected(x,t) false regardless of causes.
//   3. recovered(x,t) = infected(x,t-1) and not infected(x,t).
//   4. resistant(x,t) = (resistant(x,t-1) unless acquired exactly k steps
//      ago under a bounded immunity period k) or (recovered(x,t) and the
//      immunity coin for (x,t) fires).
//   5. susceptible(x,t) = not infected and not resistant.
// At t=1 the seeds are infected and everyone else is susceptible.

#include "netepi/grounder.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace netepi {

double noisy_or(std::span<const double> probs);

namespace cell {
inline constexpr std::uint8_t kInfected = 1;
inline constexpr std::uint8_t kResistant = 2;
inline constexpr std::uint8_t kRecovered = 4;
} // namespace cell

/// Compartment state of every individual at every timestep of one run.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::size_t population, int horizon, std::size_t run_index = 0, std::uint64_t seed = 0)
        : population_(population), horizon_(horizon), run_index_(run_index), seed_(seed),
          cells_(population * std::size_t(horizon), 0)
    {
    }

    std::size_t population() const { return population_; }
    int horizon() const { return horizon_; }
    std::size_t run_index() const { return run_index_; }
    std::uint64_t seed() const { return seed_; }

    /// t in 1..horizon
    std::span<const std::uint8_t> row(int t) const { return {cells_.data() + offset(t), population_}; }
    std::span<std::uint8_t> row(int t) { return {cells_.data() + offset(t), population_}; }

    std::uint8_t cell(PersonIndex x, int t) const { return cells_[offset(t) + x]; }
    bool infected(PersonIndex x, int t) const { return cell(x, t) & cell::kInfected; }
    bool resistant(PersonIndex x, int t) const { return cell(x, t) & cell::kResistant; }
    bool recovered(PersonIndex x, int t) const { return cell(x, t) & cell::kRecovered; }
    bool susceptible(PersonIndex x, int t) const
    {
        return (cell(x, t) & (cell::kInfected | cell::kResistant)) == 0;
    }
    bool holds(Compartment c, PersonIndex x, int t) const;

    std::size_t count(Compartment c, int t) const;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    std::size_t offset(int t) const { return std::size_t(t - 1) * population_; }

    std::size_t population_ = 0;
    int horizon_ = 0;
    std::size_t run_index_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::uint8_t> cells_;
};

/// Writes row 1 of `traj`: seeds infected, everyone else susceptible.
void initialize(const GroundedModel& model, Trajectory& traj);

/// Writes row t (2..T) of `traj` from rows 1..t-1. `fires(coin)` is queried
/// only for coins whose gate holds, so it may draw lazily.
template <typename CoinFn>
void advance_step(const GroundedModel& model, int t, Trajectory& traj, CoinFn&& fires)
{
    const std::size_t n = model.population();
    auto prev = std::as_const(traj).row(t - 1);
    auto cur = traj.row(t);
    const auto transmissions = model.transmissions_into(t);
    std::size_t tr = 0;
    const bool inhibit = model.infectious_period.bounded() && t - model.infectious_period.count() >= 1;
    const bool lapse = model.immunity_period.bounded() && t - model.immunity_period.count() >= 1;

    for (PersonIndex x = 0; x < n; ++x) {
        const std::uint8_t before = prev[x];
        bool infected = false;
        const bool blocked = inhibit && traj.infected(x, t - model.infectious_period.count());
        const bool was_infected = before & cell::kInfected;
        const bool was_susceptible = (before & (cell::kInfected | cell::kResistant)) == 0;

        while (tr < transmissions.size() && transmissions[tr].target < x) ++tr;
        if (!blocked) {
            if (was_infected) {
                infected = !model.persistence_is_random() || fires(model.persistence_coin(x, t));
            }
            if (!infected && was_susceptible) {
                infected = fires(model.external_coin(x, t));
                for (std::size_t k = tr; !infected && k < transmissions.size() && transmissions[k].target == x; ++k) {
                    if (prev[transmissions[k].source] & cell::kInfected) {
                        infected = fires(transmissions[k].coin);
                    }
                }
            }
        }

        const bool recovered = was_infected && !infected;
        bool resistant = false;
        if (before & cell::kResistant) {
            resistant = true;
            if (lapse) {
                const int acquired = t - model.immunity_period.count();
                resistant = !(traj.resistant(x, acquired) && traj.recovered(x, acquired));
            }
        }
        if (!resistant && recovered) {
            resistant = fires(model.immunity_coin(x, t));
        }
        cur[x] = static_cast<std::uint8_t>((infected ? cell::kInfected : 0) |
                                           (resistant ? cell::kResistant : 0) |
                                           (recovered ? cell::kRecovered : 0));
    }
}

/// advance_step with a full coin assignment (one 0/1 value per coin).
void advance_step(const GroundedModel& model, int t, Trajectory& traj,
                  std::span<const std::uint8_t> coin_values);

/// Coin decisions for one run are Bernoulli draws addressed by
/// (master_seed, run_index, coin index).
Trajectory run_simulation(const GroundedModel& model, std::size_t run_index, std::uint64_t master_seed);

/// Runs 0..runs-1 on up to `threads` workers; result is ordered by run index
/// and independent of the thread count.
std::vector<Trajectory> run_batch(const GroundedModel& model, std::size_t runs, std::uint64_t master_seed,
                                  unsigned threads = 1);

enum class InferenceMethod { Exact, MonteCarlo };

/// Probability (or frequency) of each (compartment, individual, timestep).
class MarginalTable {
public:
    MarginalTable(std::vector<std::string> individuals, int horizon, QuerySet queries,
                  InferenceMethod method, std::size_t runs = 0);

    double at(Compartment c, PersonIndex x, int t) const { return values_[index(c, x, t)]; }
    double& at(Compartment c, PersonIndex x, int t) { return values_[index(c, x, t)]; }

    std::span<const std::string> individuals() const { return individuals_; }
    std::size_t population() const { return individuals_.size(); }
    int horizon() const { return horizon_; }
    const QuerySet& queries() const { return queries_; }
    InferenceMethod method() const { return method_; }
    std::size_t runs() const { return runs_; }

    friend bool operator==(const MarginalTable&, const MarginalTable&) = default;

private:
    std::size_t index(Compartment c, PersonIndex x, int t) const
    {
        return (std::size_t(t - 1) * individuals_.size() + x) * 4 + static_cast<std::size_t>(c);
    }

    std::vector<std::string> individuals_;
    int horizon_;
    QuerySet queries_;
    InferenceMethod method_;
    std::size_t runs_;
    std::vector<double> values_;
};

struct ExactOptions {
    /// Maximum number of coins with probability strictly between 0 and 1.
    std::size_t max_coins = 24;
    unsigned threads = 1;
};

/// Brute-force distribution semantics: sums the weight of every assignment of
/// the non-degenerate coins. Throws Error(TooLarge) above the cap. The result
/// is bitwise identical for any thread count.
MarginalTable exact_marginals(const GroundedModel& model, const ExactOptions& options = {});

/// Throws Error(ZeroRuns) when runs == 0.
MarginalTable mc_marginals(const GroundedModel& model, std::size_t runs, std::uint64_t master_seed,
                           unsigned threads = 1);

} // namespace netepi
