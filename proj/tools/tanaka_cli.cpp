// Command-line front end: validate graded nilpotent Lie algebras, compute
// Tanaka prolongations with reductions, analyze polynomial distributions,
// and verify symmetry filtrations on flat graded models.

#include "tanaka/flat_models.hpp"
#include "tanaka/models.hpp"
#include "tanaka/serialize.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace tanaka;

Matrix matrix_from_json(const json& rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? rows[0].size() : 0;
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw parse_error("ragged matrix in input");
    for (std::size_t k = 0; k < c; ++k)
      m(i, k) = parse_rational(rows[i][k].get<std::string>());
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rat_str(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix load_matrix_file(const std::string& path) {
  json j = load_json(path);
  if (!j.contains("matrix")) throw parse_error("matrix file needs a 'matrix' field: " + path);
  return matrix_from_json(j["matrix"]);
}

ReductionSpec parse_reduction(const std::string& arg, std::size_t n1) {
  auto first = arg.find(':');
  if (first == std::string::npos)
    throw parse_error("--reduce expects DEGREE:KIND[:FILE], got '" + arg + "'");
  int degree = 0;
  try {
    degree = std::stoi(arg.substr(0, first));
  } catch (const std::exception&) {
    throw parse_error("--reduce: bad degree in '" + arg + "'");
  }
  auto second = arg.find(':', first + 1);
  std::string kind = arg.substr(first + 1, second == std::string::npos
                                               ? std::string::npos
                                               : second - first - 1);
  std::string file = second == std::string::npos ? "" : arg.substr(second + 1);
  if (kind == "orthogonal" || kind == "conformal" || kind == "complex") {
    Matrix form;
    if (!file.empty()) {
      form = load_matrix_file(file);
    } else if (kind == "complex") {
      if (n1 % 2 != 0) throw math_error("standard complex structure needs even rank");
      form = Matrix(n1, n1);
      for (std::size_t i = 0; i < n1 / 2; ++i) {
        form(i, n1 / 2 + i) = -1;
        form(n1 / 2 + i, i) = 1;
      }
    } else {
      form = Matrix::identity(n1);
    }
    ReductionSpec spec = kind == "orthogonal"  ? ReductionSpec::orthogonal(form)
                         : kind == "conformal" ? ReductionSpec::conformal(form)
                                               : ReductionSpec::complex_structure(form);
    spec.degree = degree;
    return spec;
  }
  if (kind == "divfree") return ReductionSpec::divergence_free(degree);
  if (kind == "custom") {
    if (file.empty()) throw parse_error("--reduce custom needs a maps file");
    return ReductionSpec::custom(degree, maps_doc_span(maps_from_json(load_json(file))));
  }
  throw parse_error("--reduce: unknown kind '" + kind + "'");
}

Vec parse_point(const std::string& s, std::size_t n) {
  Vec pt;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos
                                                                 : comma - start);
    if (!tok.empty()) pt.push_back(parse_rational(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (pt.size() != n)
    throw parse_error("point '" + s + "' has " + std::to_string(pt.size()) +
                      " coordinates, expected " + std::to_string(n));
  return pt;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    save_json(out_path, j);
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& path) {
  GnlaSpec spec = gnla_from_json(load_json(path));
  ValidationReport report = validate_gnla(spec);
  if (!report.ok()) {
    std::cout << report.str();
    return 1;
  }
  Gnla g = Gnla::from_spec(spec);
  bool fundamental = check_fundamental(g);
  std::cout << "valid graded nilpotent Lie algebra, depth " << g.depth() << ", dims";
  for (int d = -1; d >= -g.depth(); --d) std::cout << " " << g.dim(d);
  std::cout << "\nfundamental: " << (fundamental ? "yes" : "no") << "\n";
  return fundamental ? 0 : 1;
}

int cmd_prolong(const std::string& path, const std::string& g0_arg,
                const std::vector<std::string>& reduce_args, int max_degree, bool as_json,
                bool dump_components, const std::string& out_path) {
  Gnla g = Gnla::from_spec(gnla_from_json(load_json(path)));
  std::size_t n1 = g.dim(-1);
  std::optional<Subspace> g0;
  std::vector<ReductionSpec> reductions;
  if (!g0_arg.empty() && g0_arg != "der0") {
    if (g0_arg == "so")
      reductions.push_back(ReductionSpec::orthogonal(Matrix::identity(n1)));
    else if (g0_arg == "co")
      reductions.push_back(ReductionSpec::conformal(Matrix::identity(n1)));
    else
      g0 = maps_doc_span(maps_from_json(load_json(g0_arg)));
  }
  for (const std::string& arg : reduce_args) reductions.push_back(parse_reduction(arg, n1));
  std::stable_sort(reductions.begin(), reductions.end(),
                   [](const ReductionSpec& a, const ReductionSpec& b) {
                     return a.degree < b.degree;
                   });
  for (std::size_t i = 0; i + 1 < reductions.size(); ++i)
    if (reductions[i].degree == reductions[i + 1].degree)
      throw math_error("reduction degrees must be strictly increasing");
  ProlongedAlgebra state = prolong(g, g0, reductions, max_degree);
  if (as_json)
    emit(prolong_report_json(state, dump_components), out_path);
  else
    std::cout << prolong_report_text(state);
  return 0;
}

int cmd_flag(const std::string& path, const std::vector<std::string>& points, int max_step,
             bool as_json, const std::string& gnla_out, const std::string& out_path) {
  FieldsDoc doc = fields_from_json(load_json(path));
  std::size_t n = doc.coords.size();
  std::size_t steps = max_step > 0 ? static_cast<std::size_t>(max_step) : n + 1;
  Flag flag = derived_flag(doc.fields, doc.coords, steps);

  json j;
  j["schema"] = "flag-report/1";
  j["coords"] = doc.coords;
  j["generic_growth"] = flag.generic_growth();
  j["bracket_generating"] = flag.bracket_generating;
  j["nu_hat"] = flag.nu_hat;
  json jsteps = json::array();
  for (const FlagStep& s : flag.steps)
    jsteps.push_back({{"generators", s.generators.size()}, {"generic_rank", s.generic_rank}});
  j["steps"] = std::move(jsteps);

  int exit_code = 0;
  json jpoints = json::array();
  std::optional<json> gnla_doc;
  for (const std::string& ps : points) {
    Vec pt = parse_point(ps, n);
    auto growth = growth_vector_at(flag, pt);
    bool reg = regular_at(flag, pt);
    json jp;
    json coords = json::array();
    for (const Rat& x : pt) coords.push_back(rat_str(x));
    jp["point"] = std::move(coords);
    jp["growth"] = growth;
    jp["regular"] = reg;
    if (reg) {
      auto [gl, frame] = gnla_at(flag, pt);
      jp["gnla"] = gnla_to_json(gl);
      if (!gnla_doc) gnla_doc = gnla_to_json(gl);
    } else if (!gnla_out.empty()) {
      exit_code = 1;  // an irregular point cannot provide the algebra
    }
    jpoints.push_back(std::move(jp));
  }
  j["points"] = std::move(jpoints);
  if (!gnla_out.empty()) {
    if (gnla_doc)
      save_json(gnla_out, *gnla_doc);
    else
      exit_code = 1;
  }

  if (as_json) {
    emit(j, out_path);
  } else {
    std::cout << "generic growth vector:";
    for (auto r : flag.generic_growth()) std::cout << " " << r;
    std::cout << (flag.bracket_generating ? "  (bracket generating)" : "  (not certified)")
              << "\n";
    for (const auto& jp : j["points"]) {
      std::cout << "point (";
      bool first = true;
      for (const auto& c : jp["point"]) {
        if (!first) std::cout << ",";
        std::cout << c.get<std::string>();
        first = false;
      }
      std::cout << "): growth";
      for (const auto& r : jp["growth"]) std::cout << " " << r.get<std::size_t>();
      std::cout << (jp["regular"].get<bool>() ? "  regular" : "  irregular") << "\n";
    }
  }
  return exit_code;
}

GradedModel scenario_model(const json& j) {
  std::vector<std::string> coords;
  std::vector<int> weights;
  std::vector<PolyVectorField> frame;
  const json& jm = j.at("model");
  if (jm.is_string()) {
    std::string name = jm.get<std::string>();
    if (name == "heisenberg") {
      coords = models::heisenberg_coords();
      weights = models::heisenberg_weights();
      frame = models::heisenberg_frame();
    } else if (name == "m235") {
      coords = models::coords_235();
      weights = models::weights_235();
      frame = models::frame_235();
    } else {
      throw parse_error("unknown named model '" + name + "'");
    }
  } else {
    coords = jm.at("coords").get<std::vector<std::string>>();
    weights = jm.at("weights").get<std::vector<int>>();
    for (const auto& row : jm.at("frame"))
      frame.push_back(PolyVectorField::parse(row.get<std::vector<std::string>>(), coords));
  }
  std::optional<Subspace> g0;
  if (j.contains("g0") && !j["g0"].is_null()) {
    if (j["g0"].is_string()) {
      std::string name = j["g0"].get<std::string>();
      if (name == "lagrangian")
        g0 = models::sl3_g0_span();
      else if (name != "der0")
        throw parse_error("unknown named g0 '" + name + "'");
    } else {
      g0 = maps_doc_span(maps_from_json(j["g0"]));
    }
  }
  std::vector<ReductionSpec> reductions;
  if (j.contains("reductions")) {
    for (const auto& jr : j["reductions"]) {
      std::string kind = jr.at("kind").get<std::string>();
      int degree = jr.at("degree").get<int>();
      if (kind == "orthogonal")
        reductions.push_back(ReductionSpec::orthogonal(matrix_from_json(jr.at("form"))));
      else if (kind == "conformal")
        reductions.push_back(ReductionSpec::conformal(matrix_from_json(jr.at("form"))));
      else if (kind == "complex")
        reductions.push_back(
            ReductionSpec::complex_structure(matrix_from_json(jr.at("form"))));
      else if (kind == "divfree")
        reductions.push_back(ReductionSpec::divergence_free(degree));
      else if (kind == "custom")
        reductions.push_back(
            ReductionSpec::custom(degree, maps_doc_span(maps_from_json(jr.at("maps")))));
      else
        throw parse_error("unknown reduction kind '" + kind + "'");
      reductions.back().degree = degree;
    }
  }
  int cap = j.value("cap", 3);
  return GradedModel(coords, weights, frame, g0, reductions, cap);
}

int cmd_symmetry(const std::string& path, bool as_json, const std::string& out_path) {
  json j = load_json(path);
  if (j.contains("schema") && j["schema"] != "scenario/1")
    throw parse_error("scenario document: unsupported schema");
  GradedModel model = scenario_model(j);
  std::vector<PolyVectorField> symmetries;
  if (j.contains("symmetries"))
    for (const auto& row : j["symmetries"])
      symmetries.push_back(
          PolyVectorField::parse(row.get<std::vector<std::string>>(), model.coords()));

  // verify first so a non-symmetry is reported with its residual witness
  for (std::size_t i = 0; i < symmetries.size(); ++i) {
    SymmetryCheck chk = is_symmetry(symmetries[i], model);
    if (!chk.ok) {
      std::cerr << "field #" << i + 1 << " is not a symmetry; bracket with frame generator "
                << chk.frame_index + 1 << " has residual:";
      for (std::size_t c = 0; c < chk.residual.comp.size(); ++c)
        if (!chk.residual.comp[c].is_zero())
          std::cerr << "  [" << model.coords()[c]
                    << "] " << chk.residual.comp[c].str(model.coords());
      std::cerr << "\n";
      return 1;
    }
  }
  int cap = model.cap();
  SymmetryReport rep = filtration_report(symmetries, model, cap);
  BracketCompat compat = check_bracket_compat(rep, model);

  json out;
  out["schema"] = "symmetry-report/1";
  out["verified"] = symmetries.size();
  out["independent"] = rep.independent;
  json fd = json::array(), ad = json::array();
  for (const auto& [d, n] : rep.filtration_dims) fd.push_back(json::array({d, n}));
  for (const auto& [d, n] : rep.algebra_dims) ad.push_back(json::array({d, n}));
  out["filtration_dims"] = std::move(fd);
  out["algebra_dims"] = std::move(ad);
  out["per_degree_bound"] = rep.per_degree_bound;
  out["total_bound"] = rep.total_bound;
  out["bracket_compat"] = {{"ok", compat.ok}, {"witnesses", compat.witnesses}};
  json det = json::array();
  for (const DeterminacyRow& r : rep.determinacy)
    det.push_back({{"order", r.order},
                   {"jet_order", r.jet_order},
                   {"lo", rat_str(r.lo)},
                   {"hi", rat_str(r.hi)},
                   {"lo_int", r.lo_int},
                   {"hi_int", r.hi_int},
                   {"ok", r.ok}});
  out["determinacy"] = std::move(det);

  if (as_json) {
    emit(out, out_path);
  } else {
    std::cout << symmetries.size() << " symmetries verified, " << rep.independent
              << " independent\n";
    std::cout << "filtration dims:";
    for (const auto& [d, n] : rep.filtration_dims)
      if (n) std::cout << "  " << d << ":" << n;
    std::cout << "\nalgebra dims:   ";
    for (const auto& [d, n] : rep.algebra_dims) std::cout << "  " << d << ":" << n;
    std::cout << "\nper-degree bound: " << (rep.per_degree_bound ? "holds" : "VIOLATED")
              << "\ntotal bound: " << (rep.total_bound ? "holds" : "VIOLATED")
              << "\nbracket compatibility: " << (compat.ok ? "holds" : "fails") << "\n";
    for (const std::string& w : compat.witnesses) std::cout << "  witness: " << w << "\n";
    for (const DeterminacyRow& r : rep.determinacy)
      std::cout << "jet determinacy: order " << r.order << ", jet " << r.jet_order << ", range ["
                << rat_str(r.lo) << ", " << rat_str(r.hi) << "] = {" << r.lo_int << ".."
                << r.hi_int << "}  " << (r.ok ? "ok" : "VIOLATED") << "\n";
  }
  bool all_ok = rep.per_degree_bound && rep.total_bound;
  for (const DeterminacyRow& r : rep.determinacy) all_ok = all_ok && r.ok;
  return all_ok ? 0 : 1;
}

int cmd_model(const std::string& name, int n, const std::string& out_path) {
  json j;
  if (name == "gnla:heisenberg") {
    j = gnla_to_json(Gnla::heisenberg(n));
  } else if (name == "gnla:abelian") {
    j = gnla_to_json(Gnla::abelian(n));
  } else if (name == "gnla:235") {
    j = gnla_to_json(models::gnla_235());
  } else if (name == "fields:heisenberg") {
    j = fields_to_json({models::heisenberg_coords(), models::heisenberg_frame()});
  } else if (name == "fields:martinet") {
    j = fields_to_json({models::heisenberg_coords(), models::martinet_frame()});
  } else if (name == "fields:235") {
    j = fields_to_json({models::coords_235(), models::frame_235()});
  } else if (name == "reduce:contact-W" || name == "reduce:contact-S3W") {
    ContactModel cm(n);
    Gnla heis = Gnla::heisenberg(n - 1);
    ProlongedAlgebra st(heis);
    st.advance();
    st.advance();
    ContactG1Split split = decompose_g1_contact(cm);
    std::vector<Poly> hams;
    for (const auto& e : (name == "reduce:contact-W" ? split.w_monomials : split.s3w_monomials))
      hams.push_back(cm.monomial(e));
    Subspace span = encode_contact_span(cm, st, hams, 1);
    MapsDoc doc;
    doc.degree = 1;
    doc.source_dim = heis.dim(-1);
    doc.target_dim = st.dim_at(0);
    for (std::size_t r = 0; r < span.dim(); ++r)
      doc.elements.push_back(
          Matrix::from_flat(doc.source_dim, doc.target_dim, span.basis().row(r)));
    j = maps_to_json(doc);
  } else if (name == "reduce:projective-embed") {
    Gnla ab = Gnla::abelian(n);
    VectorFieldModel vm(n);
    ProlongedAlgebra st(ab);
    st.advance();
    st.advance();
    Subspace span = vm.encode_tensor_span(st, vm.radial_embedding(), 1);
    MapsDoc doc;
    doc.degree = 1;
    doc.source_dim = ab.dim(-1);
    doc.target_dim = st.dim_at(0);
    for (std::size_t r = 0; r < span.dim(); ++r)
      doc.elements.push_back(
          Matrix::from_flat(doc.source_dim, doc.target_dim, span.basis().row(r)));
    j = maps_to_json(doc);
  } else if (name == "g0:lagrangian") {
    ContactModel cm(n);
    Gnla heis = Gnla::heisenberg(n - 1);
    ProlongedAlgebra st(heis);
    st.advance();
    Subspace span = encode_contact_span(cm, st, lagrangian_contact_g0(cm), 0);
    MapsDoc doc;
    doc.degree = 0;
    doc.source_dim = heis.dim(-1);
    doc.target_dim = heis.dim(-1);
    for (std::size_t r = 0; r < span.dim(); ++r)
      doc.elements.push_back(
          Matrix::from_flat(doc.source_dim, doc.target_dim, span.basis().row(r)));
    j = maps_to_json(doc);
  } else {
    throw parse_error(
        "unknown model '" + name +
        "'; available: gnla:heisenberg gnla:abelian gnla:235 fields:heisenberg "
        "fields:martinet fields:235 reduce:contact-W reduce:contact-S3W "
        "reduce:projective-embed g0:lagrangian");
  }
  emit(j, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tanaka prolongations of graded nilpotent Lie algebras,\n"
               "distribution analysis, and symmetry filtration checks"};
  app.require_subcommand(1);

  std::string file, g0_arg, out_path, gnla_out, model_name;
  std::vector<std::string> reduce_args, points;
  int max_degree = 6, max_step = 0, model_n = 2;
  bool as_json = false, dump_components = false;

  auto* check = app.add_subcommand("check", "validate a graded algebra file");
  check->add_option("file", file)->required();

  auto* pro = app.add_subcommand("prolong", "compute the Tanaka prolongation");
  pro->add_option("file", file)->required();
  pro->add_option("--g0", g0_arg, "der0 (default), so, co, or a maps file");
  pro->add_option("--reduce", reduce_args,
                  "DEGREE:KIND[:FILE], kinds orthogonal|conformal|complex|divfree|custom");
  pro->add_option("--max-degree", max_degree)->required();
  pro->add_flag("--json", as_json);
  pro->add_flag("--dump-components", dump_components);
  pro->add_option("-o,--out", out_path);

  auto* fl = app.add_subcommand("flag", "weak derived flag of polynomial fields");
  fl->add_option("file", file)->required();
  fl->add_option("--point", points, "rational point a,b,c (repeatable)");
  fl->add_option("--max-step", max_step);
  fl->add_option("--gnla-out", gnla_out, "write the nilpotent approximation at a regular point");
  fl->add_flag("--json", as_json);
  fl->add_option("-o,--out", out_path);

  auto* sym = app.add_subcommand("symmetry", "verify a symmetry scenario");
  sym->add_option("file", file)->required();
  sym->add_flag("--json", as_json);
  sym->add_option("-o,--out", out_path);

  auto* mdl = app.add_subcommand("model", "emit a shipped model or reduction document");
  mdl->add_option("name", model_name)->required();
  mdl->add_option("-n", model_n, "size parameter (dimension or contact n)");
  mdl->add_option("-o,--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(file);
    if (pro->parsed())
      return cmd_prolong(file, g0_arg, reduce_args, max_degree, as_json, dump_components,
                         out_path);
    if (fl->parsed()) return cmd_flag(file, points, max_step, as_json, gnla_out, out_path);
    if (sym->parsed()) return cmd_symmetry(file, as_json, out_path);
    if (mdl->parsed()) return cmd_model(model_name, model_n, out_path);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const math_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
