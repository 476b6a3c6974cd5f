// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include "qpulse/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "qpulse/errors.hpp"

namespace qpulse {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string &line) {
  return trim(line.substr(0, line.find('#')));
}

std::ifstream open_input(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path &path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out)
    throw InputError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

double parse_double(const std::string &text, const std::string &name, int line) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() ||
      !std::isfinite(v))
    throw ParseError(name, line, "expected a number, got '" + t + "'");
  return v;
}

int parse_int(const std::string &text, const std::string &name, int line) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ParseError(name, line, "expected an integer, got '" + t + "'");
  return v;
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep))
    out.push_back(trim(item));
  return out;
}

std::vector<std::string> split_ws(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w)
    out.push_back(w);
  return out;
}

std::vector<double> parse_list(const std::string &text, const std::string &name,
                               int line) {
  std::vector<double> out;
  for (const auto &item : split(text, ','))
    out.push_back(parse_double(item, name, line));
  return out;
}

} // namespace

std::multimap<std::string, std::pair<std::string, int>>
parse_key_values(std::istream &in, const std::string &name,
                 const std::vector<std::string> &repeatable) {
  std::multimap<std::string, std::pair<std::string, int>> out;
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    const std::string s = strip_comment(raw);
    if (s.empty())
      continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError(name, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty())
      throw ParseError(name, line, "missing key");
    if (value.empty())
      throw ParseError(name, line, "missing value for '" + key + "'");
    const bool may_repeat =
        std::find(repeatable.begin(), repeatable.end(), key) != repeatable.end();
    if (!may_repeat && out.count(key))
      throw ParseError(name, line, "duplicate key '" + key + "'");
    out.emplace(key, std::make_pair(value, line));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Device

DeviceSpec parse_device(std::istream &in, const std::string &name) {
  const auto kv = parse_key_values(in, name, {"coupling"});
  static const std::set<std::string> known{"n_transmons", "levels", "omega",
                                           "delta", "coupling"};
  for (const auto &[key, v] : kv)
    if (!known.count(key))
      throw ParseError(name, v.second, "unknown key '" + key + "'");
  auto required = [&](const std::string &key) {
    const auto it = kv.find(key);
    if (it == kv.end())
      throw ParseError(name, 0, "missing key '" + key + "'");
    return it->second;
  };
  DeviceSpec spec;
  auto [nt, nt_line] = required("n_transmons");
  spec.n_transmons = parse_int(nt, name, nt_line);
  auto [lv, lv_line] = required("levels");
  spec.levels = parse_int(lv, name, lv_line);
  auto [om, om_line] = required("omega");
  spec.omega = parse_list(om, name, om_line);
  auto [de, de_line] = required("delta");
  spec.delta = parse_list(de, name, de_line);
  const auto range = kv.equal_range("coupling");
  for (auto it = range.first; it != range.second; ++it) {
    const auto &[text, line] = it->second;
    const auto words = split_ws(text);
    if (words.size() != 3)
      throw ParseError(name, line, "coupling needs 'p q g'");
    spec.couplings.push_back({parse_int(words[0], name, line),
                              parse_int(words[1], name, line),
                              parse_double(words[2], name, line)});
  }
  try {
    spec.validate();
  } catch (const InputError &e) {
    throw ParseError(name, om_line, e.what());
  }
  return spec;
}

DeviceSpec read_device_file(const std::filesystem::path &path) {
  auto in = open_input(path);
  return parse_device(in, path.string());
}

void write_device_file(const std::filesystem::path &path,
                       const DeviceSpec &spec) {
  auto out = open_output(path);
  auto list = [&](const std::vector<double> &v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      out << (i ? ", " : "") << v[i];
  };
  out << "# frequencies in GHz (omega/2pi)\n";
  out << "n_transmons = " << spec.n_transmons << "\n";
  out << "levels = " << spec.levels << "\n";
  out << "omega = ";
  list(spec.omega);
  out << "\ndelta = ";
  list(spec.delta);
  out << "\n";
  for (const auto &c : spec.couplings)
    out << "coupling = " << c.p << " " << c.q << " " << c.g << "\n";
}

// ---------------------------------------------------------------------------
// Hamiltonian

PauliHamiltonian parse_hamiltonian(std::istream &in, const std::string &name) {
  PauliHamiltonian h;
  std::map<std::string, std::string> metadata;
  bool have_terms = false;
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    const std::string s = trim(raw);
    if (s.empty())
      continue;
    if (s[0] == '#') {
      const auto colon = s.find(':');
      if (colon != std::string::npos)
        metadata[trim(s.substr(1, colon - 1))] = trim(s.substr(colon + 1));
      continue;
    }
    const auto words = split_ws(strip_comment(s));
    if (words.size() != 2)
      throw ParseError(name, line, "expected 'PAULI_WORD coefficient'");
    const std::string &word = words[0];
    if (!have_terms) {
      h = PauliHamiltonian(static_cast<int>(word.size()));
      have_terms = true;
    }
    try {
      h.add_term(word, parse_double(words[1], name, line));
    } catch (const InputError &e) {
      throw ParseError(name, line, e.what());
    }
  }
  if (!have_terms)
    throw ParseError(name, 0, "no Hamiltonian terms");
  h.metadata = std::move(metadata);
  return h;
}

PauliHamiltonian read_hamiltonian_file(const std::filesystem::path &path) {
  auto in = open_input(path);
  return parse_hamiltonian(in, path.string());
}

// ---------------------------------------------------------------------------
// Schedule

void write_schedule(std::ostream &out, const PulseSchedule &s,
                    const ScheduleHeader &extra) {
  out << std::setprecision(17);
  out << "# duration_ns: " << s.duration << "\n";
  out << "# n_segments: " << s.n_segments << "\n";
  out << "# nu_ghz:";
  for (std::size_t q = 0; q < s.drive_freq.size(); ++q)
    out << (q ? ", " : " ") << s.drive_freq[q];
  out << "\n# amp_bound_ghz: " << s.amp_bound << "\n";
  out << "# detuning_bound_ghz: " << s.detuning_bound << "\n";
  for (const auto &[key, value] : extra)
    out << "# " << key << ": " << value << "\n";
  out << "segment,t_start_ns";
  for (int q = 0; q < s.n_qubits(); ++q)
    out << ",amp_" << q << "_ghz";
  out << "\n";
  for (int k = 0; k < s.n_segments; ++k) {
    out << k << "," << k * s.segment_width();
    for (int q = 0; q < s.n_qubits(); ++q)
      out << "," << s.amplitudes[q][k];
    out << "\n";
  }
}

void write_schedule_file(const std::filesystem::path &path,
                         const PulseSchedule &s, const ScheduleHeader &extra) {
  auto out = open_output(path);
  write_schedule(out, s, extra);
}

PulseSchedule parse_schedule(std::istream &in, const std::string &name,
                             ScheduleHeader *header_out) {
  std::map<std::string, std::pair<std::string, int>> header;
  PulseSchedule s;
  bool have_columns = false;
  std::vector<std::vector<double>> rows;
  std::vector<int> row_lines;
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    const std::string t = trim(raw);
    if (t.empty())
      continue;
    if (t[0] == '#') {
      const auto colon = t.find(':');
      if (colon == std::string::npos)
        continue;
      header[trim(t.substr(1, colon - 1))] = {trim(t.substr(colon + 1)), line};
      continue;
    }
    if (!have_columns) {
      if (t.rfind("segment", 0) != 0)
        throw ParseError(name, line, "expected the column header line");
      have_columns = true;
      continue;
    }
    std::vector<double> row;
    for (const auto &item : split(t, ','))
      row.push_back(parse_double(item, name, line));
    rows.push_back(std::move(row));
    row_lines.push_back(line);
  }
  if (header_out)
    for (const auto &[key, v] : header)
      (*header_out)[key] = v.first;
  auto get = [&](const std::string &key) {
    const auto it = header.find(key);
    if (it == header.end())
      throw ParseError(name, 0, "missing header '" + key + "'");
    return it->second;
  };
  const auto [dur, dur_line] = get("duration_ns");
  s.duration = parse_double(dur, name, dur_line);
  const auto [nseg, nseg_line] = get("n_segments");
  s.n_segments = parse_int(nseg, name, nseg_line);
  const auto [nu, nu_line] = get("nu_ghz");
  s.drive_freq = parse_list(nu, name, nu_line);
  const auto [ab, ab_line] = get("amp_bound_ghz");
  s.amp_bound = parse_double(ab, name, ab_line);
  const auto [db, db_line] = get("detuning_bound_ghz");
  s.detuning_bound = parse_double(db, name, db_line);
  if (!(s.duration > 0.0) || s.n_segments < 1)
    throw ParseError(name, dur_line, "duration and segment count must be positive");
  if (static_cast<int>(rows.size()) != s.n_segments)
    throw ParseError(name, rows.empty() ? nseg_line : row_lines.back(),
                     "expected " + std::to_string(s.n_segments) +
                         " segment rows, found " + std::to_string(rows.size()));
  const int nq = s.n_qubits();
  s.amplitudes.assign(nq, std::vector<double>(s.n_segments));
  for (int k = 0; k < s.n_segments; ++k) {
    const auto &row = rows[k];
    if (static_cast<int>(row.size()) != 2 + nq)
      throw ParseError(name, row_lines[k],
                       "expected " + std::to_string(2 + nq) + " columns");
    if (row[0] != k)
      throw ParseError(name, row_lines[k], "segments must be listed in order");
    for (int q = 0; q < nq; ++q)
      s.amplitudes[q][k] = row[2 + q];
  }
  return s;
}

PulseSchedule read_schedule_file(const std::filesystem::path &path,
                                 ScheduleHeader *header) {
  auto in = open_input(path);
  return parse_schedule(in, path.string(), header);
}

// ---------------------------------------------------------------------------
// CSV

void write_trace_csv(const std::filesystem::path &path,
                     const EvolutionTrace &trace) {
  auto out = open_output(path);
  out << "time_ns";
  for (const auto &l : trace.labels)
    out << ",p" << l;
  out << "\n";
  for (std::size_t j = 0; j < trace.times.size(); ++j) {
    out << trace.times[j];
    for (const auto &p : trace.populations)
      out << "," << p[j];
    out << "\n";
  }
}

void write_switching_csv(const std::filesystem::path &path,
                         const SwitchingTrace &trace) {
  auto out = open_output(path);
  out << "time_ns";
  for (std::size_t q = 0; q < trace.phi.size(); ++q)
    out << ",phi_" << q << ",omega_" << q << "_ghz";
  out << "\n";
  for (std::size_t j = 0; j < trace.times.size(); ++j) {
    out << trace.times[j];
    for (std::size_t q = 0; q < trace.phi.size(); ++q)
      out << "," << trace.phi[q][j] << "," << trace.pulse[q][j];
    out << "\n";
  }
}

void write_met_csv(const std::filesystem::path &path, const MetScanResult &r) {
  auto out = open_output(path);
  out << "duration_ns,attempted,successes,success_probability,"
         "best_energy_error_hartree\n";
  for (const auto &p : r.points)
    out << p.duration << "," << p.attempted << "," << p.successes << ","
        << p.success_probability << "," << p.best_energy_error << "\n";
}

void write_channel_csv(const std::filesystem::path &path,
                       const DysonReport &r) {
  auto out = open_output(path);
  out << "channel,re,im,abs,probability\n";
  for (const auto &m : r.ranked_channels()) {
    const cplx a = r.channels.at(m);
    out << m << "," << a.real() << "," << a.imag() << "," << std::abs(a) << ","
        << std::norm(a) << "\n";
  }
}

void write_population_csv(const std::filesystem::path &path,
                          const std::vector<PopulationSeries> &series) {
  if (series.empty())
    throw InputError("no population series to write");
  for (const auto &s : series)
    if (s.times.size() != series.front().times.size())
      throw InputError("population series are on different time grids");
  auto out = open_output(path);
  out << "time_ns";
  for (const auto &s : series)
    out << "," << s.name << "_raw," << s.name << "_normalized";
  out << "\n";
  for (std::size_t j = 0; j < series.front().times.size(); ++j) {
    out << series.front().times[j];
    for (const auto &s : series)
      out << "," << s.raw[j] << "," << s.normalized[j];
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

} // namespace

nlohmann::json to_json(const EnergyReport &r) {
  return {{"energy_hartree", r.energy},
          {"leakage_fraction", r.leakage_fraction},
          {"penalty_hartree", r.penalty},
          {"total_cost_hartree", r.total_cost}};
}

nlohmann::json to_json(const RunResult &r) {
  return {{"seed", r.seed},
          {"duration_ns", r.schedule.duration},
          {"report", to_json(r.report)},
          {"iterations", r.iterations},
          {"evaluations", r.evaluations},
          {"converged", r.converged},
          {"success", r.success},
          {"projected_grad_norm", r.projected_grad_norm},
          {"stop_reason", r.stop_reason},
          {"nu_ghz", r.schedule.drive_freq}};
}

nlohmann::json to_json(const IterationLog &log) {
  return {{"iteration", log.iteration},
          {"cost_hartree", log.report.total_cost},
          {"energy_hartree", log.report.energy},
          {"leakage_fraction", log.report.leakage_fraction},
          {"projected_grad_norm", log.projected_grad_norm}};
}

nlohmann::json to_json(const BangBangCertificate &c) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto &v : c.violations)
    violations.push_back({{"qubit", v.qubit}, {"start_ns", v.start}, {"end_ns", v.end}});
  return {{"sign_agreement", c.sign_agreement},
          {"sign_agreement_total", c.sign_agreement_total},
          {"tested_samples", c.tested_samples},
          {"saturation", c.saturation},
          {"saturation_total", c.saturation_total},
          {"pulse_flips", c.pulse_flips},
          {"max_flip_offset_ns", finite_or_null(c.max_flip_offset)},
          {"segment_width_ns", c.segment_width},
          {"violations", violations}};
}

nlohmann::json to_json(const DysonReport &r) {
  nlohmann::json channels = nlohmann::json::array();
  for (const auto &m : r.ranked_channels()) {
    const cplx a = r.channels.at(m);
    channels.push_back({{"channel", m},
                        {"amplitude", complex_json(a)},
                        {"probability", std::norm(a)}});
  }
  return {{"initial", r.initial},
          {"final", r.final},
          {"n_quad", r.n_quad},
          {"first_order", complex_json(r.first_order)},
          {"first_order_probability", r.first_order_probability},
          {"second_order", complex_json(r.second_order)},
          {"second_order_probability", r.second_order_probability},
          {"channel_sum", complex_json(r.channel_sum())},
          {"channels", channels}};
}

nlohmann::json to_json(const MetScanResult &r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto &p : r.points)
    points.push_back({{"duration_ns", p.duration},
                      {"attempted", p.attempted},
                      {"successes", p.successes},
                      {"success_probability", p.success_probability},
                      {"best_energy_error_hartree", finite_or_null(p.best_energy_error)},
                      {"solution_seed", p.solution ? nlohmann::json(p.solution->seed)
                                                   : nlohmann::json(nullptr)}});
  return {{"n_starts", r.n_starts},
          {"met_estimate_ns", r.met_estimate ? nlohmann::json(*r.met_estimate)
                                             : nlohmann::json(nullptr)},
          {"points", points}};
}

void write_json_file(const std::filesystem::path &path,
                     const nlohmann::json &j) {
  auto out = open_output(path);
  out << j.dump(2) << "\n";
}

} // namespace qpulse
