// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one PASS/FAIL line per criterion; the exit code is
// nonzero if any selected criterion fails.
//
//   ordevo_acceptance                 run all criteria
//   ordevo_acceptance --criterion 4   run one criterion

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ordevo/cli.hpp"
#include "ordevo/evolution.hpp"
#include "ordevo/experiments.hpp"
#include "ordevo/noise.hpp"
#include "ordevo/oracle.hpp"
#include "ordevo/parallel.hpp"

namespace {

using namespace ordevo;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failed;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failed.push_back(what);
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

unsigned worker_threads() { return resolve_threads(0); }

// --- 1: zero-noise closed form --------------------------------------------

Outcome closed_form() {
  Outcome out;
  const auto start = Clock::now();
  std::vector<std::vector<std::int64_t>> c(31);
  for (int t = 0; t <= 30; ++t) {
    c[t].assign(t + 1, 1);
    for (int j = 1; j < t; ++j) c[t][j] = c[t - 1][j - 1] + c[t - 1][j];
  }
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> init(-1000, 1000);
  std::size_t checks = 0, mismatches = 0;
  for (std::size_t n = 0; n <= 4; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<std::int64_t> x0(n + 1);
      Population pop = init_population(n, {1, 4});
      for (auto& v : x0) v = init(rng);
      for (auto& g : pop.members) g.params.assign(x0.begin(), x0.end());
      std::vector<double> fit(4);
      for (int t = 1; t <= 30; ++t) {
        evaluate_population(FitnessTask::numeric(), pop, fit);
        pop = step_generation(pop, fit, {1, 4}, MutationConfig{}, ZeroNoise{});
        std::int64_t expected = 0;
        for (std::size_t j = 0; j <= n && j <= static_cast<std::size_t>(t); ++j) {
          expected += c[t][j] * x0[j];
        }
        for (const auto& g : pop.members) {
          ++checks;
          if (g.params[0] != static_cast<double>(expected)) ++mismatches;
        }
      }
    }
  }
  const double secs = seconds_since(start);
  out.detail << checks << " checks, " << mismatches << " mismatches, " << secs << " s";
  out.require(mismatches == 0, "trajectory equals binomial sum");
  out.require(secs < 1.0, "runtime < 1 s");
  return out;
}

// --- 2-4: coupled trials ---------------------------------------------------

TheoremGrid grid(std::vector<std::size_t> ns, std::vector<std::size_t> ks,
                 std::vector<std::size_t> pops, std::uint64_t trials) {
  TheoremGrid g;
  g.meta_orders = std::move(ns);
  g.ks = std::move(ks);
  g.population_sizes = std::move(pops);
  g.trials = trials;
  g.delta = 1.0;
  return g;
}

Outcome pathwise() {
  Outcome out;
  const auto start = Clock::now();
  const auto entries =
      run_theorem_checks(grid({1, 2, 3}, {2, 4}, {4, 8}, 10000), 0, worker_threads());
  std::uint64_t violations = 0;
  for (const auto& e : entries) violations += e.report.pathwise_violations;
  const double secs = seconds_since(start);
  out.detail << entries.size() << " configs x 10000 trials, " << violations
             << " violations, " << secs << " s";
  out.require(entries.size() == 12, "12 configurations");
  out.require(violations == 0, "zero pathwise violations");
  out.require(secs < 60.0, "runtime < 1 min");
  return out;
}

Outcome top1_exact() {
  Outcome out;
  const auto entries =
      run_theorem_checks(grid({2, 3}, {1}, {4, 8}, 10000), 0, worker_threads());
  std::uint64_t unequal = 0;
  for (const auto& e : entries) unequal += e.report.unequal_trials;
  out.detail << entries.size() << " configs x 10000 trials, " << unequal
             << " trials with unequal counts";
  out.require(entries.size() == 4, "4 configurations");
  out.require(unequal == 0, "counts equal in every trial");
  return out;
}

Outcome strict_advantage() {
  Outcome out;
  const auto start = Clock::now();
  const auto entries = run_theorem_checks(grid({1, 2}, {2}, {8}, 100000), 0, worker_threads());
  for (const auto& e : entries) {
    const auto& r = e.report;
    out.detail << "n=" << e.meta_order << ": diff " << r.mean_diff << " sem " << r.sem_diff
               << " (" << r.mean_diff / r.sem_diff << " sem), witnesses " << r.witness_count
               << "; ";
    out.require(r.mean_diff > 5.0 * r.sem_diff, "n=" + std::to_string(e.meta_order) + " > 5 SEM");
    out.require(r.witness_observed, "n=" + std::to_string(e.meta_order) + " witness");
  }
  const double secs = seconds_since(start);
  out.detail << secs << " s";
  out.require(entries.size() == 2, "2 configurations");
  out.require(secs < 120.0, "runtime < 2 min");
  return out;
}

// --- 5: growth orders ------------------------------------------------------

const Figure1Curve* find_curve(const Figure1Result& res, OrderSpec order, std::size_t k) {
  for (const auto& c : res.curves) {
    if (c.curve.key.order == order && c.curve.key.k == k) return &c;
  }
  return nullptr;
}

Outcome growth_orders() {
  Outcome out;
  const auto start = Clock::now();
  const ExperimentSpec spec = make_preset("figure1-desk");
  const Figure1Result res = run_figure1(spec, {2, 1}, worker_threads());
  const double secs = seconds_since(start);

  for (std::size_t n : {1u, 2u, 3u}) {
    const auto* c = find_curve(res, {n, false}, 2);
    if (c == nullptr || !c->fit) {
      out.detail << "n=" << n << ": no fit (" << (c ? c->fit_error : "missing") << "); ";
      out.require(false, "slope for n=" + std::to_string(n));
      continue;
    }
    const double slope = c->fit->slope;
    out.detail << "n=" << n << ": slope " << slope << " (n+1 off by " << slope - (n + 1.0)
               << "); ";
    out.require(std::abs(slope - static_cast<double>(n)) <= 0.5,
                "slope within 0.5 of " + std::to_string(n));
  }

  const auto* sr = find_curve(res, {1, true}, 2);
  if (sr != nullptr && sr->fit) {
    out.detail << "self-ref r2_loglin " << sr->fit->r2_loglin << " over "
               << sr->fit->window.first << ".." << sr->fit->window.last << "; ";
    out.require(sr->fit->r2_loglin > 0.99, "self-ref log-linear R^2 > 0.99");
  } else {
    out.require(false, "self-ref fit");
  }

  double worst = 0.0;
  bool top1_ok = true;
  for (std::size_t a = 0; a <= 3; ++a) {
    for (std::size_t b = a + 1; b <= 3; ++b) {
      const auto* ca = find_curve(res, {a, false}, 1);
      const auto* cb = find_curve(res, {b, false}, 1);
      if (ca == nullptr || cb == nullptr) {
        top1_ok = false;
        continue;
      }
      const FinalComparison cmp = compare_final(ca->curve, cb->curve);
      worst = std::max(worst, std::abs(cmp.difference) / cmp.combined_sem);
      top1_ok = top1_ok && cmp.within(2.0);
    }
  }
  out.detail << "top-1 worst |diff|/SEM " << worst << "; " << secs << " s";
  out.require(top1_ok, "top-1 final differences within 2 combined SEM");
  out.require(secs < 300.0, "runtime < 5 min");
  return out;
}

// --- 6: forecasting table --------------------------------------------------

Outcome forecasting_table() {
  Outcome out;
  const auto start = Clock::now();
  const ExperimentSpec spec = make_preset("table1-desk");
  const std::vector<Target> targets{Target::Linear, Target::Quadratic, Target::Sine,
                                    Target::SineOfTSineT};
  const Table1Result res = run_table1(spec, targets, worker_threads());
  const double secs = seconds_since(start);

  const auto best_order = [&](Target t) {
    std::size_t best = 0;
    double err = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n <= 3; ++n) {
      const Table1Cell* c = res.find(t, n);
      if (c != nullptr && c->best_error < err) {
        err = c->best_error;
        best = n;
      }
    }
    return best;
  };

  for (Target t : targets) {
    out.detail << target_name(t) << ":";
    for (std::size_t n = 0; n <= 3; ++n) {
      const Table1Cell* c = res.find(t, n);
      if (c != nullptr) out.detail << ' ' << c->best_error << "@" << c->best_beta;
    }
    out.detail << " best " << best_order(t) << "; ";
  }

  const std::size_t best_t = best_order(Target::Linear);
  const double err0 = res.find(Target::Linear, 0)->best_error;
  const double err_best = res.find(Target::Linear, best_t)->best_error;
  out.require(best_t >= 1 && err_best <= 0.1 * err0, "(a) t: best order >= 1 at <= 0.1x order 0");
  const std::size_t best_t2 = best_order(Target::Quadratic);
  out.require(best_t2 == 2 || best_t2 == 3, "(b) t2: best order in {2,3}");
  for (Target t : targets) {
    const double e0 = res.find(t, 0)->best_error;
    bool beaten = false;
    for (std::size_t n = 1; n <= 3; ++n) beaten = beaten || res.find(t, n)->best_error < e0;
    out.require(beaten, std::string("(c) some order >= 1 beats order 0 on ") +
                            std::string(target_name(t)));
  }
  out.detail << secs << " s";
  out.require(secs < 1800.0, "runtime < 30 min");
  return out;
}

// --- 7: determinism across thread counts -----------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome out;
  const auto base = std::filesystem::temp_directory_path() / "ordevo-acceptance-ac7";
  std::filesystem::remove_all(base);
  const std::vector<std::vector<std::string>> experiments{
      {"simulate", "--orders", "0,1,2,3,sr1", "--pop", "256", "--k", "8", "--gens", "300",
       "--seeds", "6", "--betas", "1,0.1"},
      {"simulate", "--task", "timeseries", "--targets", "t,t2,sin,tsint", "--orders",
       "0,1,2", "--pop", "128", "--k", "16", "--gens", "200", "--seeds", "4", "--betas",
       "0.5,0.05"},
      {"figure1", "--pop", "128", "--gens", "200", "--seeds", "4"},
  };
  std::size_t identical = 0;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    std::string runs[2];
    const char* threads[2] = {"1", "4"};
    for (int r = 0; r < 2; ++r) {
      auto args = experiments[i];
      const auto dir = base / (std::to_string(i) + "-" + threads[r]);
      args.insert(args.end(), {"--seed", "20260", "--threads", threads[r], "--out", dir.string()});
      std::ostringstream log, err;
      const int code = cli::run(args, log, err);
      out.require(code == 0, "run exits 0: " + err.str());
      runs[r] = slurp(dir / "runs.csv");
    }
    if (!runs[0].empty() && runs[0] == runs[1]) ++identical;
  }
  std::filesystem::remove_all(base);
  out.detail << identical << "/" << experiments.size() << " runs.csv byte-identical at 1 vs 4 threads";
  out.require(identical == experiments.size(), "byte-identical runs.csv");
  return out;
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "zero-noise closed form", closed_form},
    {2, "pathwise dominance", pathwise},
    {3, "top-1 child counts exact", top1_exact},
    {4, "top-2 strict advantage", strict_advantage},
    {5, "growth orders (figure1-desk)", growth_orders},
    {6, "forecasting order ranking (table1-desk)", forecasting_table},
    {7, "determinism across thread counts", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: ordevo_acceptance [--criterion N]\n";
      return 2;
    }
  }
  bool all_pass = true;
  bool ran = false;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    ran = true;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::cout << "AC" << c.id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << c.title << ": "
              << o.detail.str() << std::endl;
    for (const auto& f : o.failed) std::cout << "    failed: " << f << std::endl;
    all_pass = all_pass && o.pass;
  }
  if (!ran) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}
