#pragma once

#include "tanaka/distribution.hpp"
#include "tanaka/gnla.hpp"
#include "tanaka/prolong.hpp"
#include "tanaka/symmetry.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace tanaka {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// graded nilpotent Lie algebra documents (schema gnla/1)

inline json gnla_to_json(const GnlaSpec& spec) {
  json j;
  j["schema"] = "gnla/1";
  json degs = json::object();
  for (const auto& [deg, names] : spec.degrees) degs[std::to_string(deg)] = names;
  j["degrees"] = std::move(degs);
  json brs = json::object();
  for (const auto& br : spec.brackets) {
    json terms = json::object();
    for (const auto& [name, c] : br.terms) terms[name] = rat_str(c);
    brs["[" + br.a + "," + br.b + "]"] = std::move(terms);
  }
  j["brackets"] = std::move(brs);
  return j;
}

inline json gnla_to_json(const Gnla& g) { return gnla_to_json(g.to_spec()); }

inline GnlaSpec gnla_from_json(const json& j) {
  if (!j.is_object() || !j.contains("degrees"))
    throw parse_error("gnla document: missing 'degrees'");
  if (j.contains("schema") && j["schema"] != "gnla/1")
    throw parse_error("gnla document: unsupported schema");
  GnlaSpec spec;
  for (const auto& [key, names] : j["degrees"].items()) {
    int deg = 0;
    try {
      deg = std::stoi(key);
    } catch (const std::exception&) {
      throw parse_error("gnla document: bad degree key '" + key + "'");
    }
    if (!names.is_array()) throw parse_error("gnla document: degree entry must be a name list");
    spec.degrees[deg] = names.get<std::vector<std::string>>();
  }
  if (j.contains("brackets")) {
    for (const auto& [key, terms] : j["brackets"].items()) {
      if (key.size() < 5 || key.front() != '[' || key.back() != ']')
        throw parse_error("gnla document: bad bracket key '" + key + "'");
      auto comma = key.find(',');
      if (comma == std::string::npos)
        throw parse_error("gnla document: bad bracket key '" + key + "'");
      GnlaSpec::Bracket br;
      br.a = key.substr(1, comma - 1);
      br.b = key.substr(comma + 1, key.size() - comma - 2);
      for (const auto& [name, val] : terms.items())
        br.terms.push_back({name, parse_rational(val.get<std::string>())});
      spec.brackets.push_back(std::move(br));
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// polynomial vector field documents (schema fields/1)

struct FieldsDoc {
  std::vector<std::string> coords;
  std::vector<PolyVectorField> fields;
};

inline json fields_to_json(const FieldsDoc& doc) {
  json j;
  j["schema"] = "fields/1";
  j["coords"] = doc.coords;
  json fs = json::array();
  for (const auto& f : doc.fields) {
    json row = json::array();
    for (const Poly& p : f.comp) row.push_back(p.str(doc.coords));
    fs.push_back(std::move(row));
  }
  j["fields"] = std::move(fs);
  return j;
}

inline FieldsDoc fields_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coords") || !j.contains("fields"))
    throw parse_error("fields document: need 'coords' and 'fields'");
  if (j.contains("schema") && j["schema"] != "fields/1")
    throw parse_error("fields document: unsupported schema");
  FieldsDoc doc;
  doc.coords = j["coords"].get<std::vector<std::string>>();
  for (const auto& row : j["fields"]) {
    auto coeffs = row.get<std::vector<std::string>>();
    doc.fields.push_back(PolyVectorField::parse(coeffs, doc.coords));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// component / map documents (schema maps/1): elements of one non-negative
// degree as g_{-1}-block matrices over the canonical basis of the previous
// component (for degree 0 the block is the action on g_{-1} itself)

struct MapsDoc {
  int degree = 0;
  std::size_t source_dim = 0, target_dim = 0;
  std::vector<Matrix> elements;
};

inline json maps_to_json(const MapsDoc& doc) {
  json j;
  j["schema"] = "maps/1";
  j["degree"] = doc.degree;
  j["source_dim"] = doc.source_dim;
  j["target_dim"] = doc.target_dim;
  json els = json::array();
  for (const Matrix& m : doc.elements) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rat_str(m(r, c)));
      rows.push_back(std::move(row));
    }
    els.push_back(std::move(rows));
  }
  j["elements"] = std::move(els);
  return j;
}

inline MapsDoc maps_from_json(const json& j) {
  if (!j.is_object() || !j.contains("elements"))
    throw parse_error("maps document: missing 'elements'");
  if (j.contains("schema") && j["schema"] != "maps/1")
    throw parse_error("maps document: unsupported schema");
  MapsDoc doc;
  doc.degree = j.value("degree", 0);
  doc.source_dim = j.value("source_dim", 0);
  doc.target_dim = j.value("target_dim", 0);
  for (const auto& rows : j["elements"]) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows[0].size() : doc.target_dim;
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw parse_error("maps document: ragged matrix");
      for (std::size_t k = 0; k < c; ++k)
        m(i, k) = parse_rational(rows[i][k].get<std::string>());
    }
    if (doc.source_dim == 0) doc.source_dim = r;
    if (doc.target_dim == 0) doc.target_dim = c;
    if (m.rows() != doc.source_dim || m.cols() != doc.target_dim)
      throw parse_error("maps document: inconsistent matrix shapes");
    doc.elements.push_back(std::move(m));
  }
  return doc;
}

inline Subspace maps_doc_span(const MapsDoc& doc) {
  std::vector<Vec> rows;
  for (const Matrix& m : doc.elements) rows.push_back(m.flatten());
  return Subspace::span_of_rows(rows, doc.source_dim * doc.target_dim);
}

inline MapsDoc component_to_maps(const ProlongedAlgebra& state, int degree) {
  MapsDoc doc;
  doc.degree = degree;
  doc.source_dim = state.base().dim(-1);
  doc.target_dim = state.dim_at(degree - 1);
  for (std::size_t i = 0; i < state.dim_at(degree); ++i)
    doc.elements.push_back(state.g1_block(degree, i));
  return doc;
}

// ---------------------------------------------------------------------------
// prolongation report (schema prolong-report/1)

inline json prolong_report_json(const ProlongedAlgebra& state, bool dump_components) {
  json j;
  j["schema"] = "prolong-report/1";
  DimsTable t = dims(state);
  json dd = json::array();
  for (const auto& [d, n] : t.by_degree) dd.push_back(json::array({d, n}));
  j["dims"] = std::move(dd);
  j["total"] = t.total;
  j["finite_type"] = t.kappa.has_value();
  if (t.kappa)
    j["kappa"] = *t.kappa;
  else
    j["kappa"] = nullptr;
  j["truncation_degree"] = state.computed_depth();
  json reds = json::array();
  for (const ReductionRecord& r : state.reductions()) {
    json jr;
    jr["degree"] = r.degree;
    jr["kind"] = r.kind;
    jr["dim_before"] = r.dim_before;
    jr["dim_after"] = r.dim_after;
    jr["g0_invariant"] = r.g0_invariant;
    if (!r.note.empty()) jr["note"] = r.note;
    reds.push_back(std::move(jr));
  }
  j["reductions"] = std::move(reds);
  if (dump_components) {
    json comps = json::object();
    for (int k = 0; k <= state.computed_depth(); ++k)
      comps[std::to_string(k)] = maps_to_json(component_to_maps(state, k));
    j["components"] = std::move(comps);
  }
  return j;
}

inline std::string prolong_report_text(const ProlongedAlgebra& state) {
  std::ostringstream os;
  os << dims(state).str();
  for (const ReductionRecord& r : state.reductions()) {
    os << "reduction at degree " << r.degree << " (" << r.kind << "): " << r.dim_before
       << " -> " << r.dim_after;
    if (!r.g0_invariant) os << "  [warning: " << r.note << "]";
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// file helpers

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error("json parse error in " + path + ": " + e.what());
  }
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace tanaka
