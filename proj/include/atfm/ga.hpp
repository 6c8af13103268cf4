#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "atfm/util.hpp"

namespace atfm {

// Deterministic genetic minimizer over fixed-length vectors of bounded
// indices. Infeasible candidates are signalled by an infinite fitness value
// (death penalty); they can never displace the incumbent, which is injected
// into the initial population and protected by elitism.
struct GAConfig {
  int population_size = 50;
  double crossover_rate = 0.8;
  double mutation_rate = 0.1;  // per gene
  int max_generations = 100;
  std::uint64_t seed = 1;
  int elitism_count = 1;
  double seeding_mutation_rate = 0.3;  // used to spread the initial population
  int stall_generations = 20;          // early stop after this many flat generations

  void validate() const {
    if (population_size < 2) throw std::invalid_argument("ga: population_size must be >= 2");
    if (crossover_rate < 0.0 || crossover_rate > 1.0)
      throw std::invalid_argument("ga: crossover_rate must lie in [0, 1]");
    if (mutation_rate < 0.0 || mutation_rate > 1.0)
      throw std::invalid_argument("ga: mutation_rate must lie in [0, 1]");
    if (seeding_mutation_rate < 0.0 || seeding_mutation_rate > 1.0)
      throw std::invalid_argument("ga: seeding_mutation_rate must lie in [0, 1]");
    if (max_generations < 1) throw std::invalid_argument("ga: max_generations must be >= 1");
    if (elitism_count < 1 || elitism_count >= population_size)
      throw std::invalid_argument("ga: elitism_count must lie in [1, population_size)");
    if (stall_generations < 1) throw std::invalid_argument("ga: stall_generations must be >= 1");
  }
};

using Chromosome = std::vector<int>;
using FitnessFn = std::function<double(const Chromosome&)>;

inline double infeasible_fitness() { return std::numeric_limits<double>::infinity(); }

struct GAResult {
  Chromosome best;
  double best_fitness = 0.0;
  int generations_used = 0;
  bool incumbent_infeasible = false;
  std::vector<double> best_history;  // best-so-far after each generation, [0] = initial pop
};

namespace detail {

struct Individual {
  Chromosome genes;
  double fitness = 0.0;
};

// Strict weak order: lower fitness first, lexicographically smaller genes on
// ties. Keeps every selection step deterministic.
inline bool ga_better(const Individual& a, const Individual& b) {
  if (a.fitness != b.fitness) return a.fitness < b.fitness;
  return a.genes < b.genes;
}

}  // namespace detail

inline GAResult minimize(const std::vector<int>& arities, const FitnessFn& fitness,
                         const Chromosome& incumbent, const GAConfig& config) {
  config.validate();
  const std::size_t n = arities.size();
  if (incumbent.size() != n) throw std::invalid_argument("ga: incumbent length mismatch");
  for (std::size_t g = 0; g < n; ++g) {
    if (arities[g] < 1) throw std::invalid_argument("ga: gene arity must be >= 1");
    if (incumbent[g] < 0 || incumbent[g] >= arities[g])
      throw std::invalid_argument("ga: incumbent gene out of range");
  }

  GAResult result;
  const double f0 = fitness(incumbent);
  if (!(f0 < infeasible_fitness())) {
    result.best = incumbent;
    result.best_fitness = f0;
    result.incumbent_infeasible = true;
    result.best_history.push_back(f0);
    return result;
  }

  Rng rng(config.seed);
  const int pop_size = config.population_size;

  auto mutate = [&](Chromosome& c, double rate) {
    for (std::size_t g = 0; g < n; ++g)
      if (rng.chance(rate)) c[g] = rng.below(arities[g]);
  };

  std::vector<detail::Individual> pop;
  pop.reserve(static_cast<std::size_t>(pop_size));
  pop.push_back({incumbent, f0});
  for (int k = 1; k < pop_size; ++k) {
    Chromosome c = incumbent;
    mutate(c, config.seeding_mutation_rate);
    const double f = fitness(c);
    pop.push_back({std::move(c), f});
  }

  auto scan_best = [&](const std::vector<detail::Individual>& v) {
    std::size_t bi = 0;
    for (std::size_t k = 1; k < v.size(); ++k)
      if (detail::ga_better(v[k], v[bi])) bi = k;
    return v[bi];
  };

  detail::Individual best = scan_best(pop);
  result.best_history.push_back(best.fitness);

  auto tournament = [&]() -> const detail::Individual& {
    const auto& a = pop[static_cast<std::size_t>(rng.below(pop_size))];
    const auto& b = pop[static_cast<std::size_t>(rng.below(pop_size))];
    return detail::ga_better(a, b) ? a : b;
  };

  int stall = 0;
  std::vector<detail::Individual> next;
  next.reserve(static_cast<std::size_t>(pop_size));
  for (int gen = 1; gen <= config.max_generations; ++gen) {
    result.generations_used = gen;

    std::vector<detail::Individual> sorted = pop;
    std::sort(sorted.begin(), sorted.end(), detail::ga_better);
    next.assign(sorted.begin(), sorted.begin() + config.elitism_count);

    while (static_cast<int>(next.size()) < pop_size) {
      Chromosome c1 = tournament().genes;
      Chromosome c2 = tournament().genes;
      if (rng.chance(config.crossover_rate)) {
        for (std::size_t g = 0; g < n; ++g)
          if (rng.chance(0.5)) std::swap(c1[g], c2[g]);
      }
      mutate(c1, config.mutation_rate);
      mutate(c2, config.mutation_rate);
      next.push_back({std::move(c1), 0.0});
      next.back().fitness = fitness(next.back().genes);
      if (static_cast<int>(next.size()) < pop_size) {
        next.push_back({std::move(c2), 0.0});
        next.back().fitness = fitness(next.back().genes);
      }
    }
    pop.swap(next);

    const detail::Individual gen_best = scan_best(pop);
    if (gen_best.fitness < best.fitness)
      stall = 0;
    else
      ++stall;
    if (detail::ga_better(gen_best, best)) best = gen_best;
    result.best_history.push_back(best.fitness);
    if (stall >= config.stall_generations) break;
  }

  result.best = best.genes;
  result.best_fitness = best.fitness;
  return result;
}

}  // namespace atfm
