#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "dermfuzz/core/error.hpp"
#include "dermfuzz/core/parallel.hpp"
#include "dermfuzz/core/rng.hpp"
#include "dermfuzz/optimize/objective.hpp"

namespace dermfuzz {

struct IcaConfig {
    std::size_t population = 200;
    std::size_t n_empires = 5;
    std::size_t iterations = 200;
    double revolution_rate = 0.1;
    /// Assimilation coefficient.
    double beta = 2.0;
    /// Weight of the mean colony cost in an empire's total cost.
    double xi = 0.1;
    /// Fraction of coordinates re-drawn by a revolution.
    double revolution_fraction = 0.3;
    std::uint64_t seed = 0;
    unsigned jobs = 1;

    void validate() const {
        if (population < 2) throw ArgumentError("ica: population must be >= 2");
        if (n_empires < 1 || n_empires >= population) throw ArgumentError("ica: need 1 <= n_empires < population");
        if (!(revolution_rate >= 0.0 && revolution_rate <= 1.0)) throw ArgumentError("ica: revolution_rate must lie in [0,1]");
        if (!(beta >= 0.0)) throw ArgumentError("ica: beta must be non-negative");
        if (!(revolution_fraction > 0.0 && revolution_fraction <= 1.0))
            throw ArgumentError("ica: revolution_fraction must lie in (0,1]");
    }
};

struct Country {
    std::vector<double> position;
    double cost = 0.0;
};

struct Empire {
    std::size_t imperialist = 0;
    std::vector<std::size_t> colonies;
    /// Imperialist cost + xi * mean colony cost; lower is stronger.
    double total_power = 0.0;
};

struct IcaState {
    std::vector<Country> countries;
    std::vector<Empire> empires;
    std::size_t iteration = 0;
    /// One stream per country index; stays with the index when roles swap.
    std::vector<Rng> streams;
    /// Stream for population-level decisions (colony shuffling, competition).
    Rng control;
    std::vector<double> best_position;
    double best_cost = std::numeric_limits<double>::infinity();
};

namespace detail {

inline void evaluate_countries(IcaState& st, const Objective& obj, std::span<const std::size_t> which, unsigned jobs) {
    parallel_for(which.size(), jobs, [&](std::size_t k) {
        Country& c = st.countries[which[k]];
        c.cost = obj.eval(c.position);
    });
}

inline void update_total_power(IcaState& st, const IcaConfig& cfg) {
    for (Empire& e : st.empires) {
        double mean = 0.0;
        for (std::size_t c : e.colonies) mean += st.countries[c].cost;
        if (!e.colonies.empty()) mean /= static_cast<double>(e.colonies.size());
        e.total_power = st.countries[e.imperialist].cost + cfg.xi * mean;
    }
}

inline void track_best(IcaState& st) {
    for (const Country& c : st.countries)
        if (c.cost < st.best_cost) {
            st.best_cost = c.cost;
            st.best_position = c.position;
        }
}

}  // namespace detail

/// Colony counts per imperialist (strongest first). Power is the population's
/// worst cost minus the imperialist's cost; each empire gets round(share * colonies),
/// overshoot is taken back from the weakest, the remainder goes to the strongest.
/// When no imperialist has positive power the colonies are split evenly.
inline std::vector<std::size_t> colony_allocation(std::span<const double> imperialist_costs, double max_cost,
                                                  std::size_t colonies) {
    const std::size_t n = imperialist_costs.size();
    std::vector<double> power(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        power[i] = max_cost - imperialist_costs[i];
        total += power[i];
    }
    std::vector<std::size_t> counts(n, 0);
    if (!(total > 0.0) || !std::isfinite(total)) {
        for (auto& c : counts) c = colonies / n;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            counts[i] = static_cast<std::size_t>(std::llround(power[i] / total * static_cast<double>(colonies)));
    }
    std::size_t sum = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    for (std::size_t i = n; sum > colonies && i-- > 0;) {
        const std::size_t take = std::min(counts[i], sum - colonies);
        counts[i] -= take;
        sum -= take;
    }
    counts[0] += colonies - sum;
    return counts;
}

/// Uniform random population (optionally starting from `seeds`), the n_empires
/// cheapest countries become imperialists and the shuffled colonies are dealt out
/// by colony_allocation.
inline IcaState ica_init(const Objective& obj, const IcaConfig& cfg, std::span<const std::vector<double>> seeds = {}) {
    obj.validate();
    cfg.validate();
    IcaState st;
    st.control = make_stream(cfg.seed, 0);
    st.streams.reserve(cfg.population);
    st.countries.resize(cfg.population);
    for (std::size_t i = 0; i < cfg.population; ++i) {
        st.streams.push_back(make_stream(cfg.seed, i + 1));
        auto& pos = st.countries[i].position;
        if (i < seeds.size()) {
            if (seeds[i].size() != obj.dim) throw ArgumentError("ica: seed position has the wrong dimension");
            pos = seeds[i];
            obj.clip(pos);
        } else {
            pos.resize(obj.dim);
            for (std::size_t j = 0; j < obj.dim; ++j) pos[j] = uniform(st.streams[i], obj.lo[j], obj.hi[j]);
        }
    }
    std::vector<std::size_t> all(cfg.population);
    std::iota(all.begin(), all.end(), 0);
    detail::evaluate_countries(st, obj, all, cfg.jobs);

    std::stable_sort(all.begin(), all.end(),
                     [&](std::size_t a, std::size_t b) { return st.countries[a].cost < st.countries[b].cost; });
    std::vector<std::size_t> colonies(all.begin() + static_cast<std::ptrdiff_t>(cfg.n_empires), all.end());
    for (std::size_t i = colonies.size(); i > 1; --i)
        std::swap(colonies[i - 1], colonies[uniform_index(st.control, i)]);

    std::vector<double> imp_costs;
    for (std::size_t e = 0; e < cfg.n_empires; ++e) imp_costs.push_back(st.countries[all[e]].cost);
    double max_cost = -std::numeric_limits<double>::infinity();
    for (const Country& c : st.countries) max_cost = std::max(max_cost, c.cost);
    const auto counts = colony_allocation(imp_costs, max_cost, colonies.size());

    std::size_t next = 0;
    for (std::size_t e = 0; e < cfg.n_empires; ++e) {
        Empire emp;
        emp.imperialist = all[e];
        for (std::size_t k = 0; k < counts[e]; ++k) emp.colonies.push_back(colonies[next++]);
        st.empires.push_back(std::move(emp));
    }
    detail::update_total_power(st, cfg);
    detail::track_best(st);
    return st;
}

/// Assimilation move x <- x + beta * u * (imp - x), coordinate-wise.
inline void assimilate(std::span<double> x, std::span<const double> imp, double beta, std::span<const double> u) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += beta * u[j] * (imp[j] - x[j]);
}

/// One iteration: assimilation, revolution, re-evaluation, imperialist swap,
/// imperialistic competition and elimination of colony-less empires.
inline void ica_step(IcaState& st, const Objective& obj, const IcaConfig& cfg) {
    const std::size_t dim = obj.dim;
    const auto n_revolve = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.revolution_fraction * static_cast<double>(dim))));
    std::vector<std::size_t> moved;
    std::vector<std::size_t> coords(dim);
    std::vector<double> u(dim);
    for (const Empire& e : st.empires) {
        const auto& imp = st.countries[e.imperialist].position;
        for (std::size_t c : e.colonies) {
            Rng& rng = st.streams[c];
            auto& x = st.countries[c].position;
            for (double& v : u) v = uniform01(rng);
            assimilate(x, imp, cfg.beta, u);
            obj.clip(x);
            if (uniform01(rng) < cfg.revolution_rate) {
                std::iota(coords.begin(), coords.end(), 0);
                for (std::size_t k = 0; k < n_revolve; ++k) {
                    std::swap(coords[k], coords[k + uniform_index(rng, dim - k)]);
                    const std::size_t j = coords[k];
                    x[j] = uniform(rng, obj.lo[j], obj.hi[j]);
                }
            }
            moved.push_back(c);
        }
    }
    detail::evaluate_countries(st, obj, moved, cfg.jobs);

    for (Empire& e : st.empires) {
        auto best = e.colonies.end();
        for (auto it = e.colonies.begin(); it != e.colonies.end(); ++it)
            if (st.countries[*it].cost < st.countries[e.imperialist].cost &&
                (best == e.colonies.end() || st.countries[*it].cost < st.countries[*best].cost))
                best = it;
        if (best != e.colonies.end()) std::swap(*best, e.imperialist);
    }
    detail::update_total_power(st, cfg);

    if (st.empires.size() > 1) {
        std::size_t weakest = 0;
        double max_tp = st.empires[0].total_power;
        for (std::size_t e = 1; e < st.empires.size(); ++e)
            if (st.empires[e].total_power >= max_tp) {
                max_tp = st.empires[e].total_power;
                weakest = e;
            }
        std::vector<double> weight(st.empires.size());
        double total = 0.0;
        for (std::size_t e = 0; e < st.empires.size(); ++e) {
            weight[e] = e == weakest ? 0.0 : max_tp - st.empires[e].total_power;
            if (!(weight[e] > 0.0) || !std::isfinite(weight[e])) weight[e] = 0.0;
            total += weight[e];
        }
        std::size_t winner = weakest == 0 ? 1 : 0;
        if (total > 0.0) {
            const double target = uniform01(st.control) * total;
            double acc = 0.0;
            for (std::size_t e = 0; e < weight.size(); ++e) {
                if (weight[e] <= 0.0) continue;
                acc += weight[e];
                winner = e;
                if (acc > target) break;
            }
        } else {
            for (std::size_t e = 0; e < st.empires.size(); ++e)
                if (e != weakest && st.empires[e].total_power < st.empires[winner].total_power) winner = e;
        }

        Empire& loser = st.empires[weakest];
        if (!loser.colonies.empty()) {
            auto worst = loser.colonies.begin();
            for (auto it = loser.colonies.begin(); it != loser.colonies.end(); ++it)
                if (st.countries[*it].cost > st.countries[*worst].cost) worst = it;
            st.empires[winner].colonies.push_back(*worst);
            loser.colonies.erase(worst);
        }

        std::vector<Empire> kept;
        std::vector<std::size_t> orphans;
        std::size_t winner_pos = 0;
        for (std::size_t e = 0; e < st.empires.size(); ++e) {
            if (e != winner && st.empires[e].colonies.empty()) {
                orphans.push_back(st.empires[e].imperialist);
                continue;
            }
            if (e == winner) winner_pos = kept.size();
            kept.push_back(std::move(st.empires[e]));
        }
        for (std::size_t o : orphans) kept[winner_pos].colonies.push_back(o);
        st.empires = std::move(kept);
        detail::update_total_power(st, cfg);
    }
    ++st.iteration;
    detail::track_best(st);
}

inline OptimizationResult ica_run(const Objective& obj, const IcaConfig& cfg,
                                  std::span<const std::vector<double>> seeds = {}) {
    IcaState st = ica_init(obj, cfg, seeds);
    OptimizationResult r;
    r.history.reserve(cfg.iterations + 1);
    r.history.push_back(st.best_cost);
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        ica_step(st, obj, cfg);
        r.history.push_back(st.best_cost);
    }
    r.best_position = st.best_position;
    r.best_cost = st.best_cost;
    return r;
}

}  // namespace dermfuzz
