#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fock/common.hpp"
#include "fock/distinguishability.hpp"
#include "fock/entanglement.hpp"
#include "fock/hubbard.hpp"
#include "fock/interference.hpp"

namespace fock {

using json = nlohmann::json;

class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Declarative description of one simulation run, parsed from a JSON file:
//
//   {
//     "scenario": "hom-dip",
//     "params":   { ... },
//     "output":   { "format": "csv", "path": "hom_dip.csv" },
//     "sampling": { "shots": 10000, "seed": 7 }   // optional
//   }
struct ScenarioConfig {
  std::string scenario;
  json params = json::object();
  std::string format = "csv";  // csv | json
  std::string path;            // empty: derived from the scenario name
  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;

  static ScenarioConfig parse(const std::string& text) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw config_error(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("config: top level must be an object");
    ScenarioConfig c;
    if (!doc.contains("scenario") || !doc["scenario"].is_string())
      throw config_error("config: field 'scenario' (string) is required");
    c.scenario = doc["scenario"].get<std::string>();
    if (doc.contains("params")) {
      if (!doc["params"].is_object()) throw config_error("config: field 'params' must be an object");
      c.params = doc["params"];
    }
    if (doc.contains("output")) {
      const auto& out = doc["output"];
      if (!out.is_object()) throw config_error("config: field 'output' must be an object");
      if (out.contains("format")) {
        c.format = out["format"].get<std::string>();
        if (c.format != "csv" && c.format != "json")
          throw config_error("config: output.format must be 'csv' or 'json'");
      }
      if (out.contains("path")) c.path = out["path"].get<std::string>();
    }
    if (doc.contains("sampling")) {
      const auto& s = doc["sampling"];
      if (!s.is_object()) throw config_error("config: field 'sampling' must be an object");
      if (!s.contains("shots") || !s["shots"].is_number_unsigned() || s["shots"] == 0)
        throw config_error("config: sampling.shots must be a positive integer");
      if (!s.contains("seed") || !s["seed"].is_number_unsigned())
        throw config_error("config: sampling.seed is mandatory when sampling is enabled");
      c.shots = s["shots"].get<std::uint64_t>();
      c.seed = s["seed"].get<std::uint64_t>();
    }
    for (const auto& [key, value] : doc.items()) {
      (void)value;
      if (key != "scenario" && key != "params" && key != "output" && key != "sampling")
        throw config_error("config: unknown top-level field '" + key + "'");
    }
    return c;
  }

  json to_json() const {
    json doc;
    doc["scenario"] = scenario;
    doc["params"] = params;
    doc["output"] = {{"format", format}};
    if (!path.empty()) doc["output"]["path"] = path;
    if (shots) doc["sampling"] = {{"shots", *shots}, {"seed", *seed}};
    return doc;
  }

  std::string serialize() const { return to_json().dump(2) + "\n"; }
};

// ---------------------------------------------------------------------------
// result tables

// Rectangular table plus a structured document; either view can be written.
struct ScenarioResult {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  json document = json::object();
};

// shortest decimal that round-trips a double
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string to_csv(const ScenarioResult& r) {
  std::ostringstream os;
  for (std::size_t c = 0; c < r.columns.size(); ++c) {
    if (c) os << ',';
    os << r.columns[c];
  }
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << row[c];
    }
    os << '\n';
  }
  return os.str();
}

inline json complex_to_json(const cxd& z) { return json::array({z.real(), z.imag()}); }

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// finite-shot sampling

// Multinomial counts over an OutputDistribution, reproducible from the seed.
inline std::vector<std::uint64_t> sample_outcomes(const OutputDistribution& dist,
                                                  std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::domain_error("sample_outcomes: need at least one shot");
  std::vector<double> cumulative(dist.basis->size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.basis->size(); ++i) {
    acc += std::max(0.0, dist.probabilities[static_cast<Eigen::Index>(i)]);
    cumulative[i] = acc;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> counts(dist.basis->size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    // top 53 bits -> uniform double in [0, 1)
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t idx = std::min(dist.basis->size() - 1,
                                     static_cast<std::size_t>(it - cumulative.begin()));
    ++counts[idx];
  }
  return counts;
}

// ---------------------------------------------------------------------------
// scenario registry

namespace scenario_detail {

inline double require_number(const json& params, const std::string& key) {
  if (!params.contains(key) || !params[key].is_number())
    throw config_error("params." + key + ": number required");
  return params[key].get<double>();
}

inline double number_or(const json& params, const std::string& key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number()) throw config_error("params." + key + ": number required");
  return params[key].get<double>();
}

inline int int_or(const json& params, const std::string& key, int fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number_integer()) throw config_error("params." + key + ": integer required");
  return params[key].get<int>();
}

inline std::string string_or(const json& params, const std::string& key,
                             const std::string& fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_string()) throw config_error("params." + key + ": string required");
  return params[key].get<std::string>();
}

inline Statistics statistics_or(const json& params, Statistics fallback) {
  const std::string s = string_or(params, "statistics",
                                  fallback == Statistics::Boson       ? "boson"
                                  : fallback == Statistics::Fermion   ? "fermion"
                                                                      : "distinguishable");
  if (s == "boson") return Statistics::Boson;
  if (s == "fermion") return Statistics::Fermion;
  if (s == "distinguishable") return Statistics::Distinguishable;
  throw config_error("params.statistics: expected boson|fermion|distinguishable");
}

inline std::vector<double> grid(const json& params, const std::string& prefix, double def_max,
                                int def_steps) {
  const double lo = number_or(params, prefix + "_min", 0.0);
  const double hi = number_or(params, prefix + "_max", def_max);
  const int steps = int_or(params, prefix + "_steps", def_steps);
  if (steps < 1) throw config_error("params." + prefix + "_steps: must be positive");
  if (hi < lo) throw config_error("params." + prefix + "_max: must be >= " + prefix + "_min");
  std::vector<double> g;
  for (int i = 0; i <= steps; ++i) g.push_back(lo + (hi - lo) * i / steps);
  return g;
}

inline std::vector<double> list_or_grid(const json& params, const std::string& key,
                                        std::vector<double> fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_array()) throw config_error("params." + key + ": array of numbers required");
  std::vector<double> values;
  for (const auto& v : params[key]) {
    if (!v.is_number()) throw config_error("params." + key + ": array of numbers required");
    values.push_back(v.get<double>());
  }
  if (values.empty()) throw config_error("params." + key + ": must not be empty");
  return values;
}

inline std::vector<int> int_list(const json& params, const std::string& key,
                                 std::vector<int> fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_array()) throw config_error("params." + key + ": array of integers required");
  std::vector<int> values;
  for (const auto& v : params[key]) {
    if (!v.is_number_integer()) throw config_error("params." + key + ": array of integers required");
    values.push_back(v.get<int>());
  }
  return values;
}

inline ModeUnitary network_from(const json& params, int default_modes) {
  const std::string kind = string_or(params, "network", "beamsplitter");
  if (kind == "beamsplitter")
    return beamsplitter(number_or(params, "reflectivity", 0.5), number_or(params, "phase", 0.0));
  if (kind == "fourier") return ModeUnitary::fourier(int_or(params, "modes", default_modes));
  throw config_error("params.network: expected beamsplitter|fourier");
}

}  // namespace scenario_detail

struct Scenario {
  std::string description;
  std::function<ScenarioResult(const ScenarioConfig&)> run;
};

inline ScenarioResult run_hom_dip(const ScenarioConfig& config) {
  using namespace scenario_detail;
  const double R = number_or(config.params, "reflectivity", 0.5);
  const Statistics stats = statistics_or(config.params, Statistics::Boson);
  const auto thetas = grid(config.params, "theta", M_PI / 2, 50);

  ScenarioResult result;
  result.columns = {"theta", "p20", "p11", "p02"};
  json series = json::array();
  for (double theta : thetas) {
    const auto p = partial_overlap_probs(R, theta, stats);
    result.rows.push_back({format_double(theta), format_double(p.p20), format_double(p.p11),
                           format_double(p.p02)});
    series.push_back({{"theta", theta}, {"p20", p.p20}, {"p11", p.p11}, {"p02", p.p02}});
  }
  result.document = {{"scenario", "hom-dip"},
                     {"reflectivity", R},
                     {"statistics", to_string(stats)},
                     {"points", series}};
  return result;
}

inline ScenarioResult run_mach_zehnder(const ScenarioConfig& config) {
  using namespace scenario_detail;
  const double R = number_or(config.params, "reflectivity", 0.5);
  const auto phis = grid(config.params, "phi", 2 * M_PI, 64);

  ScenarioResult result;
  result.columns = {"phi", "p_upper", "p_lower"};
  json series = json::array();
  for (double phi : phis) {
    const auto p = mach_zehnder_probs(R, phi);
    result.rows.push_back({format_double(phi), format_double(p.p_upper), format_double(p.p_lower)});
    series.push_back({{"phi", phi}, {"p_upper", p.p_upper}, {"p_lower", p.p_lower}});
  }
  result.document = {{"scenario", "mach-zehnder"}, {"reflectivity", R}, {"points", series}};
  return result;
}

inline ScenarioResult run_output_distribution(const ScenarioConfig& config) {
  using namespace scenario_detail;
  const std::vector<int> input = int_list(config.params, "input", {1, 1});
  for (int n : input)
    if (n < 0) throw config_error("params.input: occupations must be non-negative");
  const Statistics stats = statistics_or(config.params, Statistics::Boson);
  const ModeUnitary u = network_from(config.params, static_cast<int>(input.size()));
  if (u.modes() != static_cast<int>(input.size()))
    throw config_error("params.input: length must match the network mode count");

  const auto dist = output_distribution(input, u, stats);
  ScenarioResult result;
  json table = json::array();
  if (config.shots) {
    const auto counts = sample_outcomes(dist, *config.shots, *config.seed);
    result.columns = {"occupation", "probability", "count"};
    for (std::size_t i = 0; i < dist.basis->size(); ++i) {
      const auto occ = format_occupations(dist.basis->occupations(i));
      const double p = dist.probabilities[static_cast<Eigen::Index>(i)];
      result.rows.push_back({occ, format_double(p), std::to_string(counts[i])});
      table.push_back(
          {{"occupation", dist.basis->occupations(i)}, {"probability", p}, {"count", counts[i]}});
    }
  } else {
    result.columns = {"occupation", "probability"};
    for (std::size_t i = 0; i < dist.basis->size(); ++i) {
      const double p = dist.probabilities[static_cast<Eigen::Index>(i)];
      result.rows.push_back(
          {format_occupations(dist.basis->occupations(i)), format_double(p)});
      table.push_back({{"occupation", dist.basis->occupations(i)}, {"probability", p}});
    }
  }
  result.document = {{"scenario", "output-distribution"},
                     {"statistics", to_string(stats)},
                     {"input", input},
                     {"entries", table}};
  if (config.shots) {
    result.document["shots"] = *config.shots;
    result.document["seed"] = *config.seed;
  }
  return result;
}

inline ScenarioResult run_two_mode_nn(const ScenarioConfig& config) {
  using namespace scenario_detail;
  const int n = int_or(config.params, "particles_per_mode", 4);
  const double R = number_or(config.params, "reflectivity", 0.5);
  const Statistics stats = statistics_or(config.params, Statistics::Boson);
  const auto dist = two_mode_nn_distribution(n, R, stats);

  ScenarioResult result;
  result.columns = {"k", "probability"};
  json series = json::array();
  for (int k = 2 * n; k >= 0; --k) {
    const double p = dist.probability({k, 2 * n - k});
    result.rows.push_back({std::to_string(k), format_double(p)});
    series.push_back({{"k", k}, {"probability", p}});
  }
  std::reverse(result.rows.begin(), result.rows.end());
  result.document = {{"scenario", "two-mode-nn"},
                     {"particles_per_mode", n},
                     {"reflectivity", R},
                     {"statistics", to_string(stats)},
                     {"points", series}};
  return result;
}

inline ScenarioResult run_double_well(const ScenarioConfig& config) {
  using namespace scenario_detail;
  const double J = number_or(config.params, "tunneling", 1.0);
  const auto u_over_j = list_or_grid(config.params, "u_over_j", {0.0, 1.0, 4.0, 16.0});
  const auto times = grid(config.params, "t", 10.0 / J, 200);

  HubbardParams p;
  p.tunneling = J;
  p.sites = 2;
  p.particles = 2;
  auto basis = hubbard_basis(p);
  const auto initial = FockStateVector::basis_state(basis, {1, 1});

  ScenarioResult result;
  result.columns = {"u_over_j", "t", "p11_exact", "p11_closed_form"};
  json series = json::array();
  for (double uj : u_over_j) {
    p.interaction = uj * J;
    SpectralEvolver evolver(build_hamiltonian(p, *basis));
    for (double t : times) {
      const auto evolved = evolver.evolve(initial, t);
      const double exact =
          std::norm(evolved.amplitudes[static_cast<Eigen::Index>(basis->index_of({1, 1}))]);
      const double closed = double_well_p11(J, p.interaction, t);
      result.rows.push_back({format_double(uj), format_double(t), format_double(exact),
                             format_double(closed)});
      series.push_back({{"u_over_j", uj}, {"t", t}, {"p11_exact", exact}, {"p11", closed}});
    }
  }
  result.document = {{"scenario", "double-well"}, {"tunneling", J}, {"points", series}};
  return result;
}

inline ScenarioResult run_lmg_sweep(const ScenarioConfig& config) {
  using namespace scenario_detail;
  const int n = int_or(config.params, "particles", 22);
  const double J = number_or(config.params, "tunneling", 1.0);
  const double U = number_or(config.params, "interaction", 0.0);
  const auto times =
      list_or_grid(config.params, "times", {double_well_hom_time(J)});

  ScenarioResult result;
  result.columns = {"t", "n1", "probability"};
  json series = json::array();
  for (double t : times) {
    const auto dist = lmg_distribution(n, J, U, t);
    for (int m = 0; m <= n; ++m) {
      result.rows.push_back(
          {format_double(t), std::to_string(m), format_double(dist.direct[m])});
      series.push_back({{"t", t}, {"n1", m}, {"probability", dist.direct[m]}});
    }
  }
  result.document = {{"scenario", "lmg-sweep"},
                     {"particles", n},
                     {"tunneling", J},
                     {"interaction", U},
                     {"points", series}};
  return result;
}

inline ScenarioResult run_lattice_walk(const ScenarioConfig& config) {
  using namespace scenario_detail;
  const double J = number_or(config.params, "tunneling", 1.0);
  const int L = int_or(config.params, "sites", 41);
  const std::string boundary = string_or(config.params, "boundary", "periodic");
  if (boundary != "periodic" && boundary != "open")
    throw config_error("params.boundary: expected periodic|open");
  const int origin = int_or(config.params, "origin", L / 2);
  if (origin < 0 || origin >= L) throw config_error("params.origin: outside the lattice");
  const auto times = grid(config.params, "t", 6.0 / J, 24);

  const Boundary b = boundary == "periodic" ? Boundary::Periodic : Boundary::Open;
  ScenarioResult result;
  result.columns = {"t", "site", "density"};
  json series = json::array();
  for (double t : times) {
    const Eigen::MatrixXcd a = lattice_propagator_matrix(L, b, J, t);
    for (int m = 0; m < L; ++m) {
      const double density = std::norm(a(m, origin));
      result.rows.push_back({format_double(t), std::to_string(m), format_double(density)});
      series.push_back({{"t", t}, {"site", m}, {"density", density}});
    }
  }
  result.document = {{"scenario", "lattice-walk"}, {"sites", L},      {"boundary", boundary},
                     {"tunneling", J},             {"origin", origin}, {"points", series}};
  return result;
}

inline ScenarioResult run_doublon(const ScenarioConfig& config) {
  using namespace scenario_detail;
  const double J = number_or(config.params, "tunneling", 1.0);
  const double U = number_or(config.params, "interaction", 20.0);
  const int L = int_or(config.params, "sites", 7);
  const bool with_exact = config.params.contains("exact") && config.params["exact"].get<bool>();
  const auto times = grid(config.params, "t", 2.0 * U / (4 * J * J), 20);

  std::optional<SpectralEvolver> evolver;
  std::shared_ptr<const FockBasis> basis;
  FockStateVector initial;
  if (with_exact) {
    HubbardParams p;
    p.tunneling = J;
    p.interaction = U;
    p.sites = L;
    p.particles = 2;
    basis = hubbard_basis(p);
    evolver.emplace(build_hamiltonian(p, *basis));
    std::vector<int> occ(L, 0);
    occ[L / 2] = 2;
    initial = FockStateVector::basis_state(basis, occ);
  }

  ScenarioResult result;
  result.columns = {"t", "site", "double_occupancy_model"};
  if (with_exact) result.columns.push_back("double_occupancy_exact");
  json series = json::array();
  bool validity = true;
  for (double t : times) {
    const auto walk = doublon_walk(J, U, t, L);
    validity = validity && walk.within_validity;
    const auto model = double_occupancy_profile(walk.state);
    std::vector<double> exact;
    if (with_exact) exact = double_occupancy_profile(evolver->evolve(initial, t));
    for (int s = 0; s < L; ++s) {
      std::vector<std::string> row{format_double(t), std::to_string(s), format_double(model[s])};
      json point = {{"t", t}, {"site", s}, {"model", model[s]}};
      if (with_exact) {
        row.push_back(format_double(exact[s]));
        point["exact"] = exact[s];
      }
      result.rows.push_back(std::move(row));
      series.push_back(std::move(point));
    }
  }
  result.document = {{"scenario", "doublon"},   {"tunneling", J},
                     {"interaction", U},        {"sites", L},
                     {"model_valid", validity}, {"points", series}};
  return result;
}

inline ScenarioResult run_schmidt(const ScenarioConfig& config) {
  using namespace scenario_detail;
  Eigen::MatrixXcd v;
  const std::string named = string_or(config.params, "state", "");
  if (!named.empty()) {
    if (named == "hom-input") {
      v = Eigen::MatrixXcd::Zero(2, 2);
      v(0, 1) = v(1, 0) = 1.0;
    } else if (named == "hom-output") {
      v = Eigen::MatrixXcd::Identity(2, 2);
    } else if (named == "bell-phi-x") {
      v = Eigen::MatrixXcd::Zero(4, 4);
      v(0, 3) = v(3, 0) = v(1, 2) = v(2, 1) = 0.5;
    } else {
      throw config_error("params.state: expected hom-input|hom-output|bell-phi-x");
    }
  } else if (config.params.contains("amplitude")) {
    const auto& rows = config.params["amplitude"];
    if (!rows.is_array() || rows.empty())
      throw config_error("params.amplitude: nested array of [re, im] pairs required");
    const int d = static_cast<int>(rows.size());
    v.resize(d, d);
    for (int i = 0; i < d; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d)
        throw config_error("params.amplitude: matrix must be square");
      for (int j = 0; j < d; ++j) {
        const auto& e = rows[i][j];
        if (!e.is_array() || e.size() != 2)
          throw config_error("params.amplitude: entries must be [re, im] pairs");
        v(i, j) = cxd(e[0].get<double>(), e[1].get<double>());
      }
    }
  } else {
    throw config_error("params: either 'state' or 'amplitude' is required");
  }

  TwoParticleAmplitude amp(v);
  const auto spectrum = schmidt_spectrum(amp);
  const auto classification = particle_entangled(amp);
  const auto csop = csop_check(amp);

  ScenarioResult result;
  result.columns = {"index", "coefficient"};
  for (Eigen::Index k = 0; k < spectrum.coefficients.size(); ++k)
    result.rows.push_back({std::to_string(k), format_double(spectrum.coefficients[k])});

  const char* class_name = classification == ParticleClassification::SameState
                               ? "same-state"
                               : classification == ParticleClassification::SymmetrizedProduct
                                     ? "symmetrized-product"
                                     : "particle-entangled";
  json csop_doc = {{"kind", csop.kind == CsopResult::Kind::SameState        ? "same-state"
                            : csop.kind == CsopResult::Kind::ProjectorFound ? "projector-found"
                                                                            : "no-projector"}};
  if (csop.projector_state) {
    csop_doc["expectation"] = csop.expectation;
    json p = json::array();
    for (Eigen::Index i = 0; i < csop.projector_state->size(); ++i)
      p.push_back(complex_to_json((*csop.projector_state)[i]));
    csop_doc["projector_state"] = p;
  } else if (csop.kind == CsopResult::Kind::NoProjector) {
    csop_doc["sweep_max"] = csop.sweep_max;
  }

  json coeffs = json::array();
  for (Eigen::Index k = 0; k < spectrum.coefficients.size(); ++k)
    coeffs.push_back(spectrum.coefficients[k]);
  result.document = {{"scenario", "schmidt"},
                     {"rank", spectrum.rank},
                     {"classification", class_name},
                     {"coefficients", coeffs},
                     {"diagonal_basis", matrix_to_json(spectrum.basis)},
                     {"csop", csop_doc}};
  return result;
}

inline ScenarioResult run_entropy_quench(const ScenarioConfig& config) {
  using namespace scenario_detail;
  const double J = number_or(config.params, "tunneling", 1.0);
  const double U = number_or(config.params, "interaction", 0.0);
  const auto times = grid(config.params, "t", M_PI / J, 128);

  const auto trace = quench_entropy_trace(J, U, times);
  ScenarioResult result;
  result.columns = {"t", "renyi2"};
  json series = json::array();
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    result.rows.push_back({format_double(trace.times[i]), format_double(trace.renyi2[i])});
    series.push_back({{"t", trace.times[i]}, {"renyi2", trace.renyi2[i]}});
  }
  result.document = {{"scenario", "entropy-quench"},
                     {"tunneling", J},
                     {"interaction", U},
                     {"peak", {{"t", trace.peak_time}, {"renyi2", trace.peak_renyi2}}},
                     {"dip", {{"t", trace.dip_time}, {"renyi2", trace.dip_renyi2}}},
                     {"points", series}};
  return result;
}

inline ScenarioResult run_twin_purity(const ScenarioConfig& config) {
  using namespace scenario_detail;
  const double J = number_or(config.params, "tunneling", 1.0);
  const auto u_over_j = list_or_grid(config.params, "u_over_j", {1.0, 2.0, 5.0, 10.0, 20.0});
  const std::string protocol_name = string_or(config.params, "protocol", "direct");
  TwinProtocol protocol;
  if (protocol_name == "direct") protocol = TwinProtocol::Direct;
  else if (protocol_name == "tunneling-corrected") protocol = TwinProtocol::TunnelingCorrected;
  else if (protocol_name == "tunneling-uncorrected") protocol = TwinProtocol::TunnelingUncorrected;
  else throw config_error("params.protocol: expected direct|tunneling-corrected|tunneling-uncorrected");

  HubbardParams p;
  p.tunneling = J;
  p.sites = 2;
  p.particles = 2;
  auto basis = hubbard_basis(p);

  ScenarioResult result;
  result.columns = {"u_over_j", "purity_protocol", "purity_partial_trace", "renyi2"};
  json series = json::array();
  for (double uj : u_over_j) {
    p.interaction = uj * J;
    SpectralEvolver evolver(build_hamiltonian(p, *basis));
    const auto ground = evolver.ground_state(basis);
    const double protocol_purity = twin_parity_purity(ground, {0}, protocol);
    const auto rho = reduced_density_matrix(ground, BipartiteCut::first_modes(1));
    const double trace_purity = rho.purity();
    const double s2 = entropies(rho).renyi2;
    result.rows.push_back({format_double(uj), format_double(protocol_purity),
                           format_double(trace_purity), format_double(s2)});
    series.push_back({{"u_over_j", uj},
                      {"purity_protocol", protocol_purity},
                      {"purity_partial_trace", trace_purity},
                      {"renyi2", s2}});
  }
  result.document = {{"scenario", "twin-purity"},
                     {"tunneling", J},
                     {"protocol", protocol_name},
                     {"points", series}};
  return result;
}

inline const std::map<std::string, Scenario>& scenario_registry() {
  static const std::map<std::string, Scenario> registry{
      {"hom-dip",
       {"two-particle coincidence probabilities against the overlap angle", run_hom_dip}},
      {"mach-zehnder", {"single-particle interference fringe", run_mach_zehnder}},
      {"output-distribution",
       {"full output table of a mode network, optionally sampled", run_output_distribution}},
      {"two-mode-nn", {"(N, N) input on a beamsplitter", run_two_mode_nn}},
      {"double-well", {"interacting pair in a double well", run_double_well}},
      {"lmg-sweep", {"N-particle double-well occupation distribution", run_lmg_sweep}},
      {"lattice-walk", {"single-particle lattice walk density", run_lattice_walk}},
      {"doublon", {"bound-pair walk against the exact evolution", run_doublon}},
      {"schmidt", {"two-particle Schmidt spectrum and classification", run_schmidt}},
      {"entropy-quench", {"half-system entropy after a double-well quench", run_entropy_quench}},
      {"twin-purity", {"twin-copy parity purity of ground states", run_twin_purity}},
  };
  return registry;
}

// Executes a parsed config and writes the result file; returns the path.
inline std::filesystem::path run_scenario(const ScenarioConfig& config,
                                          const std::filesystem::path& out_dir) {
  const auto& registry = scenario_registry();
  const auto it = registry.find(config.scenario);
  if (it == registry.end()) {
    std::string names;
    for (const auto& [name, sc] : registry) {
      (void)sc;
      names += names.empty() ? name : ", " + name;
    }
    throw config_error("unknown scenario '" + config.scenario + "' (valid: " + names + ")");
  }
  const ScenarioResult result = it->second.run(config);

  std::filesystem::path path = config.path.empty()
                                   ? std::filesystem::path(config.scenario + "." + config.format)
                                   : std::filesystem::path(config.path);
  if (path.is_relative()) path = out_dir / path;
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  if (config.format == "csv")
    out << to_csv(result);
  else
    out << result.document.dump(2) << '\n';
  return path;
}

}  // namespace fock
