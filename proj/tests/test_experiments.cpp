#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "ipdmem/experiments.hpp"

using namespace ipdmem;

namespace {

RealizationResult fake_result(std::vector<Score> payoffs) {
  RealizationResult result;
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    result.config.roster.push_back({static_cast<AgentId>(i), 0.5, Strategy::FR});
    result.agents.push_back({payoffs[i], 1, 0});
  }
  result.config.n_agents = payoffs.size();
  return result;
}

SweepOptions quick_options() {
  SweepOptions options;
  options.realizations = 2;
  options.master_seed = 17;
  options.tau = 1;
  options.mu_values = {0.0, 0.5, 1.0};
  return options;
}

}  // namespace

TEST_CASE("grids") {
  const auto rho = rho_grid();
  CHECK(rho.size() == 21);
  CHECK(rho.front() == 0.0);
  CHECK(rho.back() == 1.0);
  for (std::size_t k = 1; k < rho.size(); ++k) CHECK(rho[k] - rho[k - 1] == doctest::Approx(0.05));
  CHECK(rho[10] == 0.5);
  CHECK(mu_grid() == rho);
}

TEST_CASE("payoff ratio") {
  const auto two = fake_result({10, 30});
  CHECK(payoff_ratio(two, GroupSelector::everyone()) == 1.0);
  CHECK(payoff_ratio(two, GroupSelector::single(1)) == 1.5);
  CHECK(payoff_ratio(two, GroupSelector::single(0)) == 0.5);
  CHECK_THROWS_AS(payoff_ratio(two, GroupSelector::cooperators()), std::invalid_argument);
  CHECK_FALSE(payoff_ratio(fake_result({0, 0}), GroupSelector::single(0)).has_value());
}

TEST_CASE("homogeneous rosters") {
  const auto big = build_homogeneous(Strategy::FMC, 6);
  CHECK(big.size() == 126);
  std::set<double> rhos;
  for (const AgentSpec& a : big) {
    CHECK(a.strategy == Strategy::FMC);
    rhos.insert(a.rho);
  }
  CHECK(rhos.size() == 21);
  for (double rho : rho_grid())
    CHECK(std::count_if(big.begin(), big.end(), [&](const AgentSpec& a) { return a.rho == rho; }) == 6);
  CHECK(std::count_if(big.begin(), big.end(), [](const AgentSpec& a) { return a.rho > 0.5; }) == 60);

  CHECK(build_homogeneous(Strategy::FR, 1).size() == 21);
  CHECK_THROWS_AS(build_homogeneous(Strategy::FR, 0), std::invalid_argument);
}

TEST_CASE("heterogeneous roster") {
  const auto roster = build_heterogeneous();
  CHECK(roster.size() == 126);
  std::set<std::pair<double, Strategy>> cells;
  for (const AgentSpec& a : roster) cells.insert({a.rho, a.strategy});
  CHECK(cells.size() == 126);
  CHECK(std::count_if(roster.begin(), roster.end(), [](const AgentSpec& a) { return a.strategy == Strategy::FMD; }) == 21);
  CHECK(std::count_if(roster.begin(), roster.end(), [](const AgentSpec& a) { return a.rho == 0.5; }) == 6);
  const auto fmd_coop = GroupSelector::cooperators_of(Strategy::FMD);
  CHECK(std::count_if(roster.begin(), roster.end(), [&](const AgentSpec& a) { return fmd_coop.contains(a); }) == 10);
}

TEST_CASE("size-weighted phi over a partition averages to one") {
  for (double mu : {0.0, 0.3, 0.8}) {
    const auto result = run_realization(make_config(build_heterogeneous(), mu, 5, {}, 2));
    double weighted = 0;
    for (Strategy s : kAllStrategies) {
      GroupSelector group{"s", [s](const AgentSpec& a) { return a.strategy == s; }};
      weighted += *payoff_ratio(result, group) * 21.0;
    }
    CHECK(weighted / 126.0 == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("homogeneous sweep shape and seeds") {
  auto options = quick_options();
  options.agents_per_rho = 1;
  const auto sweep = homogeneous_sweep(options);
  CHECK(sweep.mode == SweepMode::Homogeneous);
  CHECK(sweep.cells.size() == 6 * 3);
  for (const SweepCell& cell : sweep.cells) {
    CHECK(cell.realizations == 2);
    CHECK(cell.phi_mean > 0);
    CHECK_FALSE(cell.rho.has_value());
  }
  const SweepCell& cell = sweep.at(Strategy::FMU, 0.5);
  CHECK(cell.seed == homogeneous_cell_seed(17, Strategy::FMU, 1));

  // Recompute the cell from its recorded seed.
  const auto batch = run_batch(make_config(build_homogeneous(Strategy::FMU, 1), 0.5, 0, {}, 1), 2, cell.seed);
  const double a = *payoff_ratio(batch[0], GroupSelector::cooperators());
  const double b = *payoff_ratio(batch[1], GroupSelector::cooperators());
  CHECK(cell.phi_mean == (a + b) / 2);
  CHECK(cell.phi_sd == doctest::Approx(std::abs(a - b) / std::sqrt(2.0)));

  CHECK(homogeneous_sweep(options).cells.size() == sweep.cells.size());
  const auto again = homogeneous_sweep(options);
  for (std::size_t i = 0; i < sweep.cells.size(); ++i) CHECK(again.cells[i].phi_mean == sweep.cells[i].phi_mean);
}

TEST_CASE("homogeneous sweep can be restricted to one strategy") {
  auto options = quick_options();
  options.agents_per_rho = 1;
  options.strategies = {Strategy::FLP};
  const auto sweep = homogeneous_sweep(options);
  CHECK(sweep.cells.size() == 3);
  CHECK(sweep.find(Strategy::FR, 0.5) == nullptr);
  CHECK_THROWS_AS(sweep.at(Strategy::FR, 0.5), std::out_of_range);
}

TEST_CASE("heterogeneous sweep shape") {
  const auto sweep = heterogeneous_sweep(quick_options());
  CHECK(sweep.cells.size() == 6 * 3);
  for (const SweepCell& cell : sweep.cells) {
    CHECK(cell.phi_mean > 0);
    CHECK(cell.seed == heterogeneous_cell_seed(17, cell.mu == 0.0 ? 0 : cell.mu == 0.5 ? 1 : 2));
  }
}

TEST_CASE("heatmap sweep shape and agreement with the curves") {
  SweepOptions options = quick_options();
  const auto grid = mu_grid();
  options.mu_values = {grid.begin(), grid.end()};
  options.realizations = 1;
  const auto heatmap = heatmap_sweep(options);
  CHECK(heatmap.cells.size() == 6 * 441);
  const auto curves = heterogeneous_sweep(options);

  // The mean singleton phi over a strategy's cooperators is that group's phi.
  for (Strategy s : kAllStrategies) {
    for (double mu : {0.0, 0.45, 1.0}) {
      double sum = 0;
      for (double rho : rho_grid())
        if (rho > 0.5) sum += heatmap.at(s, mu, rho).phi_mean;
      CHECK(sum / 10 == doctest::Approx(curves.at(s, mu).phi_mean).epsilon(1e-12));
    }
  }
}

TEST_CASE("sweep option validation") {
  auto options = quick_options();
  options.realizations = 0;
  CHECK_THROWS_AS(heterogeneous_sweep(options), std::invalid_argument);
  options = quick_options();
  options.mu_values = {1.2};
  CHECK_THROWS_AS(homogeneous_sweep(options), std::invalid_argument);
}

TEST_CASE("endpoint verification") {
  const auto checks = verify_endpoints(7, 1, {}, 3);
  REQUIRE(checks.size() == 2);
  for (const EndpointCheck& check : checks) {
    CHECK(check.identical);
    CHECK(check.evictions == 0);
    CHECK(check.variants == 8);
  }
}
