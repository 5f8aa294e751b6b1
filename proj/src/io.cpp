#include "hawkes/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hawkes::io {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

struct RawEvent {
  int trial;
  std::string unit;
  double t;
  long line;
};

[[noreturn]] void fail_line(const std::string& path, long line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

TrialSet assemble(const std::string& path, std::vector<RawEvent> events,
                  std::optional<double> horizon, std::optional<int> trials,
                  std::vector<std::string> unit_order) {
  if (!horizon.has_value())
    throw std::runtime_error(path + ": no horizon given (missing meta header and no override)");
  int n_trials = 0;
  if (trials.has_value()) {
    n_trials = *trials;
  } else {
    for (const auto& e : events) n_trials = std::max(n_trials, e.trial + 1);
  }
  const double T = *horizon;
  for (const auto& e : events) {
    if (e.trial < 0 || e.trial >= n_trials)
      fail_line(path, e.line, "trial index " + std::to_string(e.trial) + " out of range");
    if (!(e.t >= 0.0 && e.t <= T))
      fail_line(path, e.line, "timestamp " + format_double(e.t) + " outside [0, horizon]");
  }

  TrialSet data;
  data.process_ids = std::move(unit_order);
  data.trial_count = n_trials;
  data.horizon = T;
  std::map<std::string, std::size_t> unit_index;
  for (std::size_t k = 0; k < data.process_ids.size(); ++k)
    unit_index[data.process_ids[k]] = k;

  std::vector<std::vector<std::vector<std::pair<double, long>>>> buckets(
      data.process_ids.size(),
      std::vector<std::vector<std::pair<double, long>>>(static_cast<std::size_t>(n_trials)));
  for (const auto& e : events)
    buckets[unit_index.at(e.unit)][static_cast<std::size_t>(e.trial)].emplace_back(e.t, e.line);

  data.trials_by_process.resize(data.process_ids.size());
  for (std::size_t p = 0; p < buckets.size(); ++p) {
    data.trials_by_process[p].reserve(static_cast<std::size_t>(n_trials));
    for (auto& bucket : buckets[p]) {
      if (!std::is_sorted(bucket.begin(), bucket.end()))
        std::cerr << path << ": events for unit '" << data.process_ids[p]
                  << "' were not sorted within a trial; sorting\n";
      std::sort(bucket.begin(), bucket.end());
      std::vector<double> ts;
      ts.reserve(bucket.size());
      for (std::size_t k = 0; k < bucket.size(); ++k) {
        if (k > 0 && bucket[k].first == bucket[k - 1].first)
          fail_line(path, bucket[k].second,
                    "duplicate timestamp for unit '" + data.process_ids[p] + "'");
        ts.push_back(bucket[k].first);
      }
      data.trials_by_process[p].emplace_back(std::move(ts), T);
    }
  }
  data.validate();
  return data;
}

TrialSet read_jsonl(const std::string& path, std::optional<double> horizon,
                    std::optional<int> trials) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<RawEvent> events;
  std::vector<std::string> unit_order;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail_line(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (j.contains("meta")) {
      const auto& m = j["meta"];
      if (m.contains("horizon") && !horizon.has_value()) horizon = m["horizon"].get<double>();
      if (m.contains("trials") && !trials.has_value()) trials = m["trials"].get<int>();
      continue;
    }
    if (!j.contains("trial") || !j.contains("unit") || !j.contains("t"))
      fail_line(path, line_no, "record missing one of fields trial/unit/t");
    RawEvent e;
    try {
      e.trial = j["trial"].get<int>();
      e.unit = j["unit"].get<std::string>();
      e.t = j["t"].get<double>();
    } catch (const nlohmann::json::exception& ex) {
      fail_line(path, line_no, std::string("bad field type: ") + ex.what());
    }
    e.line = line_no;
    if (std::find(unit_order.begin(), unit_order.end(), e.unit) == unit_order.end())
      unit_order.push_back(e.unit);
    events.push_back(std::move(e));
  }
  return assemble(path, std::move(events), horizon, trials, std::move(unit_order));
}

TrialSet read_csv(const std::string& path, std::optional<double> horizon,
                  std::optional<int> trials) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<RawEvent> events;
  std::vector<std::string> unit_order;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string trial_s, unit_s, t_s;
    if (!std::getline(ss, trial_s, ',') || !std::getline(ss, unit_s, ',') ||
        !std::getline(ss, t_s))
      fail_line(path, line_no, "expected columns trial,unit,t");
    if (line_no == 1 && trial_s == "trial") continue;  // header row
    RawEvent e;
    try {
      e.trial = std::stoi(trial_s);
      e.t = std::stod(t_s);
    } catch (const std::exception&) {
      fail_line(path, line_no, "bad numeric field in 'trial' or 't'");
    }
    e.unit = unit_s;
    e.line = line_no;
    if (std::find(unit_order.begin(), unit_order.end(), e.unit) == unit_order.end())
      unit_order.push_back(e.unit);
    events.push_back(std::move(e));
  }
  return assemble(path, std::move(events), horizon, trials, std::move(unit_order));
}

}  // namespace

TrialSet read_spikes(const std::string& path, const std::string& format,
                     std::optional<double> horizon, std::optional<int> trials) {
  std::string fmt = format;
  if (fmt == "auto") {
    if (path.ends_with(".csv")) {
      fmt = "csv";
    } else if (path.ends_with(".jsonl") || path.ends_with(".json")) {
      fmt = "jsonl";
    } else {
      std::ifstream probe(path);
      if (!probe) throw std::runtime_error(path + ": cannot open");
      std::string first;
      std::getline(probe, first);
      fmt = (!first.empty() && first.front() == '{') ? "jsonl" : "csv";
    }
  }
  if (fmt == "jsonl") return read_jsonl(path, horizon, trials);
  if (fmt == "csv") return read_csv(path, horizon, trials);
  throw std::invalid_argument("read_spikes: unknown format '" + format + "'");
}

void write_spikes_jsonl(const TrialSet& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "{\"meta\": {\"trials\": " << data.trial_count
      << ", \"horizon\": " << format_double(data.horizon) << "}}\n";
  for (int trial = 0; trial < data.trial_count; ++trial) {
    for (std::size_t p = 0; p < data.process_ids.size(); ++p) {
      for (double t : data.trials_by_process[p][static_cast<std::size_t>(trial)].timestamps) {
        out << "{\"trial\": " << trial << ", \"unit\": \"" << data.process_ids[p]
            << "\", \"t\": " << format_double(t) << "}\n";
      }
    }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

namespace {

nlohmann::json background_to_json(const BackgroundSpec& b) {
  nlohmann::json j;
  switch (b.kind) {
    case BackgroundSpec::Kind::constant:
      j["kind"] = "constant";
      j["level"] = b.level;
      break;
    case BackgroundSpec::Kind::sinusoid:
      j["kind"] = "sinusoid";
      j["amplitude"] = b.amplitude;
      j["period"] = b.period;
      j["phase_lag"] = b.phase_lag;
      j["randomize_phase"] = b.randomize_phase;
      break;
    case BackgroundSpec::Kind::linear_cox:
      j["kind"] = "linear_cox";
      j["rho"] = b.rho;
      j["sigma_i"] = b.sigma_i;
      break;
    case BackgroundSpec::Kind::varying_cox:
      j["kind"] = "varying_cox";
      j["rho"] = b.rho;
      j["sigma_i_lo"] = b.sigma_i_lo;
      j["sigma_i_hi"] = b.sigma_i_hi;
      break;
    case BackgroundSpec::Kind::tabulated:
      j["kind"] = "tabulated";
      j["t0"] = b.table.t0;
      j["dt"] = b.table.dt;
      j["values"] = b.table.values;
      break;
  }
  return j;
}

BackgroundSpec background_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return BackgroundSpec::constant_level(j.at("level").get<double>());
  if (kind == "sinusoid")
    return BackgroundSpec::sinusoid(j.at("amplitude").get<double>(),
                                    j.at("period").get<double>(),
                                    j.at("phase_lag").get<double>(),
                                    j.value("randomize_phase", true));
  if (kind == "linear_cox")
    return BackgroundSpec::linear_cox(j.at("rho").get<double>(), j.at("sigma_i").get<double>());
  if (kind == "varying_cox")
    return BackgroundSpec::varying_cox(j.at("rho").get<double>(),
                                       j.at("sigma_i_lo").get<double>(),
                                       j.at("sigma_i_hi").get<double>());
  if (kind == "tabulated")
    return BackgroundSpec::tabulated(TabulatedFn::from_samples(
        j.at("t0").get<double>(), j.at("dt").get<double>(),
        j.at("values").get<std::vector<double>>()));
  throw std::invalid_argument("background_from_json: unknown kind '" + kind + "'");
}

}  // namespace

nlohmann::json network_spec_to_json(const NetworkSpec& spec) {
  nlohmann::json j;
  j["process_ids"] = spec.process_ids;
  j["baselines"] = spec.baselines;
  nlohmann::json bg = nlohmann::json::array();
  for (const auto& b : spec.backgrounds) bg.push_back(background_to_json(b));
  j["backgrounds"] = bg;
  j["shared_background"] = spec.shared_background;
  nlohmann::json imps = nlohmann::json::array();
  for (const auto& [key, imp] : spec.impacts) {
    nlohmann::json e;
    e["source"] = spec.process_ids[static_cast<std::size_t>(key.first)];
    e["target"] = spec.process_ids[static_cast<std::size_t>(key.second)];
    if (imp.kind == ImpactSpec::Kind::square) {
      e["kind"] = "square";
      e["width"] = imp.square.width;
      e["amplitude"] = imp.square.amplitude;
    } else {
      e["kind"] = "spline";
      e["degree"] = imp.basis->degree();
      e["knots"] = imp.basis->distinct_knots();
      e["coeffs"] = imp.coeffs;
    }
    imps.push_back(e);
  }
  j["impacts"] = imps;
  j["horizon"] = spec.horizon;
  j["trials"] = spec.trial_count;
  j["seed"] = spec.seed;
  return j;
}

NetworkSpec network_spec_from_json(const nlohmann::json& j) {
  NetworkSpec spec;
  spec.process_ids = j.at("process_ids").get<std::vector<std::string>>();
  spec.baselines = j.at("baselines").get<std::vector<double>>();
  for (const auto& b : j.at("backgrounds")) spec.backgrounds.push_back(background_from_json(b));
  spec.shared_background = j.value("shared_background", true);
  spec.horizon = j.at("horizon").get<double>();
  spec.trial_count = j.at("trials").get<int>();
  spec.seed = j.value("seed", 0ull);
  for (const auto& e : j.at("impacts")) {
    const std::string kind = e.value("kind", "square");
    ImpactSpec imp;
    if (kind == "square") {
      imp = ImpactSpec::square_impact(e.at("width").get<double>(),
                                      e.at("amplitude").get<double>());
    } else if (kind == "spline") {
      imp = ImpactSpec::spline_impact(
          BSplineBasis(e.at("degree").get<int>(),
                       e.at("knots").get<std::vector<double>>()),
          e.at("coeffs").get<std::vector<double>>());
    } else {
      throw std::invalid_argument("network_spec_from_json: unknown impact kind");
    }
    spec.add_impact(e.at("source").get<std::string>(),
                    e.at("target").get<std::string>(), std::move(imp));
  }
  spec.validate();
  return spec;
}

nlohmann::json fit_result_to_json(const FitResult& fit) {
  nlohmann::json j;
  j["coeff_names"] = fit.coeff_names;
  std::vector<double> coeffs(fit.coeffs.data(), fit.coeffs.data() + fit.coeffs.size());
  std::vector<double> ses(fit.std_errors.data(),
                          fit.std_errors.data() + fit.std_errors.size());
  j["coeffs"] = coeffs;
  j["std_errors"] = ses;
  j["sigma_w_selected"] = fit.sigma_w_selected;
  j["neg_loglik"] = fit.neg_loglik;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["grad_sup_norm"] = fit.grad_sup_norm;
  nlohmann::json hess = nlohmann::json::array();
  for (long r = 0; r < fit.hessian.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (long c = 0; c < fit.hessian.cols(); ++c) row.push_back(fit.hessian(r, c));
    hess.push_back(row);
  }
  j["hessian"] = hess;
  if (!fit.grid_profile.empty()) {
    nlohmann::json prof = nlohmann::json::array();
    for (const auto& [sw, nll] : fit.grid_profile)
      prof.push_back({{"sigma_w", sw}, {"neg_loglik", nll}});
    j["grid_profile"] = prof;
  }
  return j;
}

nlohmann::json network_edges_to_json(const inference::NetworkEdges& net,
                                     const std::vector<std::string>& nodes) {
  nlohmann::json j;
  j["nodes"] = nodes;
  j["level"] = net.level;
  j["tests"] = net.tests;
  j["threshold"] = net.threshold;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : net.edges) {
    edges.push_back({{"source", e.source},
                     {"target", e.target},
                     {"alpha_hat", e.alpha_hat},
                     {"se", e.se},
                     {"p", e.p},
                     {"sign", e.sign}});
  }
  j["edges"] = edges;
  return j;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw std::runtime_error(dir_.string() + ": cannot create directory");
}

std::filesystem::path ArtifactWriter::write_csv(
    const std::string& name, const std::vector<std::string>& header,
    const std::vector<std::vector<double>>& rows) {
  const auto path = dir_ / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  for (std::size_t c = 0; c < header.size(); ++c)
    out << header[c] << (c + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << format_double(row[c]) << (c + 1 < row.size() ? "," : "\n");
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");
  note_artifact(name, "csv", path);
  return path;
}

std::filesystem::path ArtifactWriter::write_text(const std::string& name,
                                                 const std::string& kind,
                                                 const std::string& content) {
  const auto path = dir_ / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << content;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
  note_artifact(name, kind, path);
  return path;
}

std::filesystem::path ArtifactWriter::write_json(const std::string& name,
                                                 const nlohmann::json& j) {
  return write_text(name, "json", j.dump(2) + "\n");
}

void ArtifactWriter::note_artifact(const std::string& name, const std::string& kind,
                                   const std::filesystem::path& path) {
  nlohmann::json a;
  a["name"] = name;
  a["kind"] = kind;
  a["path"] = path.filename().string();
  artifacts_.push_back(a);
}

std::filesystem::path ArtifactWriter::finalize(const nlohmann::json& config,
                                               std::uint64_t seed) {
  nlohmann::json manifest;
  manifest["version"] = kToolkitVersion;
  manifest["config_hash"] = fnv1a64(config.dump());
  manifest["seed"] = seed;
  manifest["artifacts"] = artifacts_;
  const auto path = dir_ / "manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << manifest.dump(2) << "\n";
  if (!out) throw std::runtime_error(path.string() + ": write failed");
  return path;
}

}  // namespace hawkes::io
