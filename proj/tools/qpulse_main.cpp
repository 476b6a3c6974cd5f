// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

// qpulse: pulse-level state preparation experiments on coupled transmons.
//
//   qpulse optimize  --config h2_qubit.cfg [--seed N] [--duration T]
//   qpulse met-scan  --config h2_qutrit.cfg [--starts N] [--threads N]
//   qpulse certify   --config h2_qubit.cfg --schedule solution.csv
//   qpulse dyson     --config h2_qutrit.cfg --schedule solution.csv
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical
// failure, 4 capacity error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qpulse/config.hpp"
#include "qpulse/errors.hpp"
#include "qpulse/io.hpp"

namespace {

using namespace qpulse;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCapacity = 4;

struct Overrides {
  std::string config;
  std::optional<long long> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<double> duration;
  std::optional<int> levels;
  std::optional<int> starts;
  std::string schedule;
  std::optional<std::string> initial;
  std::optional<std::string> final;
};

ExperimentConfig resolve_config(const Overrides &o, bool duration_is_grid) {
  ExperimentConfig cfg = load_config(o.config);
  if (o.seed)
    cfg.set("seed", std::to_string(*o.seed));
  if (o.threads)
    cfg.threads = *o.threads;
  if (o.out)
    cfg.out = *o.out;
  if (o.duration) {
    cfg.duration = *o.duration;
    if (duration_is_grid) {
      cfg.durations = {*o.duration};
      cfg.scan_start.reset();
      cfg.scan_stop.reset();
      cfg.scan_step.reset();
    }
  }
  if (o.levels)
    cfg.levels = *o.levels;
  if (o.starts)
    cfg.starts = *o.starts;
  if (o.initial)
    cfg.dyson_initial = *o.initial;
  if (o.final)
    cfg.dyson_final = *o.final;
  cfg.validate();
  return cfg;
}

ScheduleHeader schedule_header(const CtrlProblem &p) {
  return {{"levels", std::to_string(p.device.levels)},
          {"frame", to_string(p.frame)}};
}

// A schedule written for one truncation cannot be certified against
// another: the state dimensions differ.
PulseSchedule load_schedule(const std::string &path, const CtrlProblem &p) {
  ScheduleHeader header;
  PulseSchedule s = read_schedule_file(path, &header);
  if (const auto it = header.find("levels"); it != header.end()) {
    const int levels = std::stoi(it->second);
    if (levels != p.device.levels) {
      const auto dim = [&](int l) {
        std::size_t d = 1;
        for (int i = 0; i < p.device.n_transmons; ++i)
          d *= static_cast<std::size_t>(l);
        return d;
      };
      throw InputError("dimension mismatch: " + path + " was made for levels=" +
                       std::to_string(levels) + " (dimension " +
                       std::to_string(dim(levels)) + ") but the device has levels=" +
                       std::to_string(p.device.levels) + " (dimension " +
                       std::to_string(dim(p.device.levels)) + ")");
    }
  }
  if (s.n_qubits() != p.device.n_transmons)
    throw InputError("dimension mismatch: " + path + " drives " +
                     std::to_string(s.n_qubits()) + " transmons, device has " +
                     std::to_string(p.device.n_transmons));
  s.validate(p.device.omega);
  return s;
}

void print_report(const char *what, const EnergyReport &r, double reference) {
  std::printf("%s: energy %.12f Hartree (error %.3e), leakage %.4f, "
              "penalty %.3e\n",
              what, r.energy, r.energy - reference, r.leakage_fraction,
              r.penalty);
}

int cmd_optimize(const Overrides &o) {
  const ExperimentConfig cfg = resolve_config(o, false);
  const CtrlProblem problem = make_problem(cfg);
  const PreparedProblem prepared(problem);
  const auto dir = cfg.out;
  std::filesystem::create_directories(dir);

  std::ofstream log(dir / "iterations.jsonl");
  if (!log)
    throw InputError("cannot write " + (dir / "iterations.jsonl").string());
  const RunResult r = optimize_schedule(
      prepared, prepared.random_start(cfg.seed), cfg.optimizer, true,
      [&](const IterationLog &entry) { log << to_json(entry).dump() << "\n"; },
      cfg.seed);

  nlohmann::json summary = to_json(r);
  summary["reference_energy_hartree"] = prepared.reference_energy();
  summary["energy_error_hartree"] = r.report.energy - prepared.reference_energy();
  summary["levels"] = problem.device.levels;
  summary["frame"] = to_string(problem.frame);
  write_json_file(dir / "run.json", summary);
  write_schedule_file(dir / "schedule.csv", r.schedule, schedule_header(problem));
  const auto evo = evolve(prepared.system(), r.schedule,
                          prepared.initial_state(), problem.n_trotter,
                          all_labels(problem.device), problem.frame);
  write_trace_csv(dir / "populations.csv", evo.trace);

  print_report("optimize", r.report, prepared.reference_energy());
  std::printf("success %s after %d iterations (%s); outputs in %s\n",
              r.success ? "true" : "false", r.iterations, r.stop_reason.c_str(),
              dir.string().c_str());
  return 0;
}

int cmd_met_scan(const Overrides &o) {
  const ExperimentConfig cfg = resolve_config(o, true);
  const CtrlProblem problem = make_problem(cfg);
  MetScanOptions opts;
  opts.durations = cfg.duration_grid();
  opts.multistart = multistart_options(cfg);
  const auto dir = cfg.out;
  std::filesystem::create_directories(dir);

  const MetScanResult r =
      met_scan(problem, cfg.optimizer, opts, [](const MetScanPoint &p) {
        std::printf("T = %7.3f ns: %d/%d successes (p = %.3f), best error %.3e\n",
                    p.duration, p.successes, p.attempted, p.success_probability,
                    p.best_energy_error);
        std::fflush(stdout);
      });
  write_met_csv(dir / "met_scan.csv", r);
  nlohmann::json j = to_json(r);
  j["levels"] = problem.device.levels;
  j["frame"] = to_string(problem.frame);
  write_json_file(dir / "met_scan.json", j);
  if (const MetScanPoint *p = r.met_point()) {
    write_schedule_file(dir / "met_solution.csv", p->solution->schedule,
                        schedule_header(problem));
    std::printf("MET estimate %.3f ns (seed %llu)\n", p->duration,
                static_cast<unsigned long long>(p->solution->seed));
  } else {
    std::printf("no duration in the grid reached the target\n");
  }
  return 0;
}

int cmd_certify(const Overrides &o) {
  const ExperimentConfig cfg = resolve_config(o, false);
  const CtrlProblem problem = make_problem(cfg);
  const PulseSchedule s = load_schedule(o.schedule, problem);
  const PreparedProblem prepared(problem.at_duration(s.duration));
  const auto dir = cfg.out;
  std::filesystem::create_directories(dir);

  const BangBangCertificate c = bang_bang_certificate(
      prepared.system(), s, prepared.observable(), problem.objective,
      problem.n_trotter, prepared.initial_state(), cfg.certificate);
  nlohmann::json j = to_json(c);
  j["normalized_costate"] = problem.objective.normalize;
  write_json_file(dir / "certificate.json", j);
  write_switching_csv(dir / "switching.csv", c.trace);
  std::printf("sign agreement %.4f over %d samples, saturation %.4f, "
              "%d pulse flips, max flip offset %.4f ns (segment %.4f ns), "
              "%zu violating intervals\n",
              c.sign_agreement_total, c.tested_samples, c.saturation_total,
              c.pulse_flips, c.max_flip_offset, c.segment_width,
              c.violations.size());
  return 0;
}

int cmd_dyson(const Overrides &o) {
  const ExperimentConfig cfg = resolve_config(o, false);
  const CtrlProblem problem = make_problem(cfg);
  const PulseSchedule s = load_schedule(o.schedule, problem);
  const PreparedProblem prepared(problem.at_duration(s.duration));
  const auto dir = cfg.out;
  std::filesystem::create_directories(dir);

  const DysonReport r = dyson_amplitudes(prepared.system(), s, cfg.dyson_initial,
                                         cfg.dyson_final, cfg.n_quad);
  const SecondOrderState so =
      second_order_state(prepared.system(), s, prepared.initial_state(),
                         problem.n_trotter, cfg.n_quad);
  nlohmann::json j = to_json(r);
  j["second_order_state_infidelity"] = so.infidelity;
  const auto ranked = r.ranked_channels();
  if (ranked.size() >= 2) {
    const Interference in = interference_test(r, ranked[0], ranked[1]);
    j["top_channels"] = {ranked[0], ranked[1]};
    j["top_channels_constructive"] = in.constructive;
    j["top_channels_margin"] = in.margin;
  }
  write_json_file(dir / "dyson.json", j);
  write_channel_csv(dir / "channels.csv", r);
  std::printf("A1 = %.3e, |A2|^2 = %.6f, channel sum error %.2e, "
              "second-order infidelity %.4f\n",
              std::abs(r.first_order), r.second_order_probability,
              std::abs(r.channel_sum() - r.second_order), so.infidelity);
  for (std::size_t k = 0; k < ranked.size() && k < 4; ++k)
    std::printf("  via %s: |A|^2 = %.6f\n", ranked[k].c_str(),
                std::norm(r.channels.at(ranked[k])));
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Pulse-level variational state preparation on transmon qudits"};
  app.require_subcommand(1);
  Overrides o;
  auto common = [&](CLI::App *sub) {
    sub->add_option("--config", o.config, "experiment config file")->required();
    sub->add_option("--seed", o.seed, "random seed (first seed for scans)");
    sub->add_option("--threads", o.threads, "worker threads");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--duration", o.duration, "pulse duration, ns");
    sub->add_option("--levels", o.levels, "levels per transmon");
    sub->add_option("--starts", o.starts, "random starts per duration");
  };
  auto *optimize = app.add_subcommand("optimize", "one optimization from a seed");
  auto *scan = app.add_subcommand("met-scan", "success probability vs duration");
  auto *certify = app.add_subcommand("certify", "switching-function certificate");
  auto *dyson = app.add_subcommand("dyson", "second-order channel analysis");
  for (auto *sub : {optimize, scan, certify, dyson})
    common(sub);
  for (auto *sub : {certify, dyson})
    sub->add_option("--schedule", o.schedule, "schedule file")->required();
  dyson->add_option("--initial", o.initial, "initial basis label");
  dyson->add_option("--final", o.final, "final basis label");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*optimize)
      return cmd_optimize(o);
    if (*scan)
      return cmd_met_scan(o);
    if (*certify)
      return cmd_certify(o);
    return cmd_dyson(o);
  } catch (const CapacityError &e) {
    std::cerr << "qpulse: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const NumericalError &e) {
    std::cerr << "qpulse: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const SingularProjectionError &e) {
    std::cerr << "qpulse: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception &e) {
    std::cerr << "qpulse: " << e.what() << "\n";
    return kExitConfig;
  }
}
