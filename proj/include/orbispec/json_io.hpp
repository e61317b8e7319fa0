#ifndef ORBISPEC_JSON_IO_HPP
#define ORBISPEC_JSON_IO_HPP

// JSON interchange for spectra, fits, reports, actions and point clouds.
// Doubles are written in shortest round-trip form, so reading a report back
// recovers every value bit for bit.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orbispec/bounds.hpp"
#include "orbispec/groups.hpp"
#include "orbispec/modelspectra.hpp"
#include "orbispec/netpack.hpp"
#include "orbispec/weyl.hpp"

namespace orbispec {

using json = nlohmann::ordered_json;

/// Input is not valid JSON or lacks the expected structure.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class F>
auto parsing(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

inline json parse_json(const std::string& text) {
  return detail::parsing("malformed JSON", [&] { return json::parse(text); });
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

// --- Spectrum ---------------------------------------------------------------

inline json to_json(const Spectrum& spec) {
  json j = json::object();
  if (spec.dimension) j["dimension"] = *spec.dimension;
  j["truncation"] = spec.truncation;
  json ev = json::array();
  for (const auto& e : spec.entries) ev.push_back(json::array({e.value, e.multiplicity}));
  j["eigenvalues"] = std::move(ev);
  return j;
}

inline Spectrum spectrum_from_json(const json& j) {
  Spectrum spec = detail::parsing("spectrum JSON", [&] {
    Spectrum s;
    if (!j.is_object()) throw FormatError("spectrum JSON: expected an object");
    if (j.contains("dimension") && !j.at("dimension").is_null()) s.dimension = j.at("dimension").get<int>();
    s.truncation = j.at("truncation").get<double>();
    for (const auto& e : j.at("eigenvalues")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("spectrum JSON: eigenvalue entries are [value, multiplicity]");
      s.entries.push_back({e.at(0).get<double>(), e.at(1).get<std::int64_t>()});
    }
    return s;
  });
  spec.validate();
  return spec;
}

// --- Weyl fit -----------------------------------------------------------------

inline json to_json(const WeylFit& fit) {
  return json{{"dimension", fit.dimension},
              {"volume", fit.volume},
              {"window", json::array({fit.window.first, fit.window.second})},
              {"residual", fit.residual},
              {"slope", fit.slope},
              {"slope_defect", fit.slope_defect}};
}

// --- Bound report ---------------------------------------------------------------

template <class T>
json optional_json(const std::optional<T>& x) {
  return x ? json(*x) : json(nullptr);
}

inline json to_json(const BoundReport& rep) {
  json j;
  j["inputs"] = {{"spectrum_id", rep.spectrum_id}, {"kappa", rep.kappa}, {"n", rep.n}, {"v", rep.v}, {"source", rep.source}};
  j["weyl"] = rep.weyl ? to_json(*rep.weyl) : json(nullptr);
  j["diameter_bound"] = rep.diameter;
  j["r_used"] = rep.r_used;
  j["rho"] = rep.rho;
  j["isotropy_cap"] = rep.isotropy_cap;
  j["isotropy_types"] = {{"groups", rep.isotropy_types.groups}, {"note", rep.isotropy_types.note}};
  j["alpha"] = optional_json(rep.alpha);
  j["ell"] = optional_json(rep.ell);
  j["r_sep"] = optional_json(rep.r_sep);
  j["singular_cap"] = optional_json(rep.singular_cap);
  j["notes"] = rep.notes;
  json trace = json::array();
  for (const auto& st : rep.stage_trace) {
    json in = json::object(), out = json::object();
    for (const auto& [k, v] : st.inputs) in[k] = v;
    for (const auto& [k, v] : st.outputs) out[k] = v;
    trace.push_back({{"stage", st.stage}, {"inputs", in}, {"outputs", out}});
  }
  j["stage_trace"] = std::move(trace);
  return j;
}

// --- Actions --------------------------------------------------------------------

inline OrthogonalAction action_from_json(const json& j) {
  return detail::parsing("action JSON", [&] {
    const auto type = j.at("type").get<std::string>();
    if (type == "cyclic") {
      return cyclic_generator(j.at("order").get<int>(), j.at("exponents").get<std::vector<int>>());
    }
    if (type == "matrix") {
      std::vector<Matrix> gens;
      for (const auto& g : j.at("generators")) {
        const auto rows = g.get<std::vector<std::vector<double>>>();
        if (rows.empty()) throw FormatError("action JSON: empty generator");
        Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].size() != rows.front().size()) throw FormatError("action JSON: ragged generator");
          for (std::size_t k = 0; k < rows[i].size(); ++k) m(i, k) = rows[i][k];
        }
        gens.push_back(std::move(m));
      }
      return OrthogonalAction::from_generators(gens);
    }
    throw FormatError("action JSON: unknown type '" + type + "'");
  });
}

// --- Point clouds -----------------------------------------------------------------

inline FiniteMetricSpace metric_space_from_json(const json& j) {
  auto [n, dist] = detail::parsing("point-cloud JSON", [&] {
    const auto rows = j.at("dist").get<std::vector<std::vector<double>>>();
    const std::size_t count = j.at("points").is_array() ? j.at("points").size() : j.at("points").get<std::size_t>();
    if (rows.size() != count) throw FormatError("point-cloud JSON: dist has " + std::to_string(rows.size()) + " rows");
    std::vector<double> flat;
    for (const auto& row : rows) {
      if (row.size() != count) throw FormatError("point-cloud JSON: dist must be square");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return std::pair{count, flat};
  });
  return FiniteMetricSpace(n, std::move(dist));
}

inline json to_json(const FiniteMetricSpace& space) {
  json rows = json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < space.size(); ++k) row.push_back(space(i, k));
    rows.push_back(std::move(row));
  }
  return json{{"points", space.size()}, {"dist", std::move(rows)}};
}

}  // namespace orbispec

#endif  // ORBISPEC_JSON_IO_HPP
