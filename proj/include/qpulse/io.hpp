// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

// Text formats. All parsers throw ParseError("path:line: ...") on bad
// input and InputError when a file cannot be opened.
//
// Device file: one `key = value` per line, `#` starts a comment.
//   n_transmons = 2
//   levels      = 3
//   omega       = 4.8080, 4.8333     # GHz, omega/2pi
//   delta       = 0.3102, 0.2916     # GHz
//   coupling    = 0 1 0.01831        # p q g (GHz), repeatable
//
// Hamiltonian file: `# key: value` metadata lines, then one
// `PAULI_WORD coefficient` term per line (Hartree). Character i of a word
// acts on transmon i.
//
// Schedule file: `# key: value` header (duration_ns, n_segments, nu_ghz,
// amp_bound_ghz, detuning_bound_ghz), a column header line, then one row
// per segment: index, t_start (ns), amplitude per qubit (GHz).

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpulse/analysis.hpp"

namespace qpulse {

DeviceSpec read_device_file(const std::filesystem::path &path);
DeviceSpec parse_device(std::istream &in, const std::string &name);
void write_device_file(const std::filesystem::path &path,
                       const DeviceSpec &spec);

PauliHamiltonian read_hamiltonian_file(const std::filesystem::path &path);
PauliHamiltonian parse_hamiltonian(std::istream &in, const std::string &name);

using ScheduleHeader = std::map<std::string, std::string>;

/// `header`, when given, receives every `# key: value` line.
PulseSchedule read_schedule_file(const std::filesystem::path &path,
                                 ScheduleHeader *header = nullptr);
PulseSchedule parse_schedule(std::istream &in, const std::string &name,
                             ScheduleHeader *header = nullptr);
/// `extra` adds header lines (e.g. levels) after the required ones.
void write_schedule(std::ostream &out, const PulseSchedule &s,
                    const ScheduleHeader &extra = {});
void write_schedule_file(const std::filesystem::path &path,
                         const PulseSchedule &s,
                         const ScheduleHeader &extra = {});

/// `time_ns,p01,p10,...`
void write_trace_csv(const std::filesystem::path &path,
                     const EvolutionTrace &trace);
/// `time_ns,phi_0,omega_0_ghz,phi_1,...`
void write_switching_csv(const std::filesystem::path &path,
                         const SwitchingTrace &trace);
/// `duration_ns,attempted,successes,success_probability,best_energy_error_hartree`
void write_met_csv(const std::filesystem::path &path, const MetScanResult &r);
/// `channel,re,im,abs,probability`
void write_channel_csv(const std::filesystem::path &path,
                       const DysonReport &r);
/// `time_ns,<name>_raw,<name>_normalized,...` for series on one time grid.
void write_population_csv(const std::filesystem::path &path,
                          const std::vector<PopulationSeries> &series);

nlohmann::json to_json(const EnergyReport &r);
nlohmann::json to_json(const RunResult &r);
nlohmann::json to_json(const IterationLog &log);
nlohmann::json to_json(const BangBangCertificate &c);
nlohmann::json to_json(const DysonReport &r);
nlohmann::json to_json(const MetScanResult &r);

void write_json_file(const std::filesystem::path &path,
                     const nlohmann::json &j);

/// Reads `key = value` lines (comments with `#`); keys may repeat only
/// when listed in `repeatable`.
std::multimap<std::string, std::pair<std::string, int>>
parse_key_values(std::istream &in, const std::string &name,
                 const std::vector<std::string> &repeatable = {});

} // namespace qpulse
