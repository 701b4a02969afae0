#include "geoctx/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "geoctx/dsl.hpp"

namespace geoctx::cli {

namespace {

using json = nlohmann::ordered_json;

struct Report {
  std::vector<std::pair<std::string, Verdict>> verdicts;
  json result = json::object();

  void add(std::string check, Verdict v) { verdicts.emplace_back(std::move(check), std::move(v)); }
  int exit_code() const {
    bool inconclusive = false;
    for (const auto& [name, v] : verdicts) {
      if (v.status == Status::fail) return kExitFail;
      if (v.status == Status::inconclusive) inconclusive = true;
    }
    return inconclusive ? kExitInconclusive : kExitPass;
  }
};

json fields_json(const Witness& w) {
  json out = json::object();
  for (const auto& [k, v] : w.fields) {
    std::string key = k;
    for (int n = 2; out.contains(key); ++n) key = k + "#" + std::to_string(n);
    out[key] = v;
  }
  return out;
}

json sheaf_json(const Presheaf& f, bool sections) {
  const FiniteCategory& c = f.category();
  json sizes = json::object();
  for (ObjectId u = 0; u < c.object_count(); ++u) sizes[c.object_name(u)] = f.size(u);
  json out{{"sizes", sizes}};
  if (sections) {
    json s = json::object();
    for (ObjectId u = 0; u < c.object_count(); ++u) s[c.object_name(u)] = f.labels(u);
    out["sections"] = s;
  }
  return out;
}

json map_json(const NatTrans& f) {
  const FiniteCategory& c = f.category();
  json out = json::object();
  for (ObjectId u = 0; u < c.object_count(); ++u) {
    json m = json::object();
    for (int x = 0; x < f.source->size(u); ++x) m[f.source->label(u, x)] = f.target->label(u, f(u, x));
    out[c.object_name(u)] = m;
  }
  return out;
}

json atlas_json(const Atlas& a) {
  const FiniteCategory& c = a.target->category();
  json out = json::array();
  for (const Chart& ch : a.charts)
    out.push_back({{"object", c.object_name(ch.object)}, {"section", a.target->label(ch.object, ch.section)}});
  return out;
}

// The first representable isomorphic to x, if any.
json representable_json(const GeometricContext& ctx, const PresheafPtr& x) {
  const FiniteCategory& c = ctx.cat();
  for (ObjectId u = 0; u < c.object_count(); ++u)
    if (isomorphic(yoneda(ctx.category(), u), x)) return "h(" + c.object_name(u) + ")";
  return nullptr;
}

class Session {
 public:
  Session(const Request& req, dsl::Model model) : req_(req), model_(std::move(model)) {}

  Report execute() {
    static const std::map<std::string, void (Session::*)(Report&)> table{
        {"validate-context", &Session::validate_context},
        {"sheafify", &Session::sheafify_cmd},
        {"check-sheaf", &Session::check_sheaf},
        {"check-epi", &Session::check_epi},
        {"check-mono", &Session::check_mono},
        {"check-open-immersion", &Session::check_open_immersion},
        {"check-p-morphism", &Session::check_p_morphism},
        {"check-schematic", &Session::check_schematic},
        {"is-scheme", &Session::is_scheme},
        {"glue", &Session::glue_cmd},
        {"decompose", &Session::decompose_cmd},
        {"fibre-product", &Session::fibre_product},
    };
    auto it = table.find(req_.command);
    if (it == table.end()) throw Error(ErrorCode::UnknownIdentifier, "unknown command '" + req_.command + "'");
    Report r;
    (this->*(it->second))(r);
    return r;
  }

 private:
  const Site& site() const { return model_.site; }
  GeometricContext ctx() const { return model_.context(); }

  void require_topology() const {
    Verdict v = validate_topology(site().cat(), site().topology);
    if (!v) throw Error(ErrorCode::PreconditionViolated, "the topology is invalid: " + v.witness->summary);
  }
  void require_context() const {
    require_topology();
    ContextReport rep = validate_geometric_context(site(), model_.P);
    for (std::size_t i = 0; i < rep.checks.size(); ++i)
      if (!rep.checks[i])
        throw Error(ErrorCode::PreconditionViolated,
                    std::string("not a geometric context, ") + kContextChecks[i] + " fails: " + rep.checks[i].witness->summary);
  }
  void require_sheaf(const PresheafPtr& f, const std::string& what) const {
    Verdict v = is_sheaf(site(), *f);
    if (!v) throw Error(ErrorCode::NotASheaf, what + " is not a sheaf: " + v.witness->summary);
  }

  std::string name_arg(std::size_t i, const std::string& fallback, const char* what) const {
    if (i < req_.names.size()) return req_.names[i];
    if (fallback.empty()) throw Error(ErrorCode::UnknownIdentifier, std::string("no ") + what + " named and none declared");
    return fallback;
  }
  std::string first_presheaf() const { return model_.presheaf_names.empty() ? "" : model_.presheaf_names.front(); }
  std::string first_morphism() const { return model_.morphism_names.empty() ? "" : model_.morphism_names.front(); }
  std::string first_sheaf() const {
    return model_.glue_blocks.empty() ? first_presheaf() : model_.glue_blocks.front().name;
  }

  // A presheaf id, h(U), or a glue block (the glued sheaf).
  PresheafPtr resolve_sheaf(const std::string& name) {
    const FiniteCategory& c = site().cat();
    if (name.size() > 3 && name.compare(0, 2, "h(") == 0 && name.back() == ')') {
      auto u = c.find_object(name.substr(2, name.size() - 3));
      if (!u) throw Error(ErrorCode::UnknownIdentifier, "unknown object in '" + name + "'");
      return yoneda(site().category, *u);
    }
    if (auto it = model_.presheaves.find(name); it != model_.presheaves.end()) return it->second;
    if (const dsl::GlueBlock* g = model_.find_glue(name)) {
      require_context();
      return geoctx::glue(ctx(), g->data).sheaf;
    }
    throw Error(ErrorCode::UnknownIdentifier, "unknown presheaf '" + name + "'");
  }
  PresheafPtr presheaf_arg(std::size_t i) {
    std::string name = name_arg(i, first_presheaf(), "presheaf");
    auto it = model_.presheaves.find(name);
    if (it == model_.presheaves.end()) return resolve_sheaf(name);
    return it->second;
  }
  const NatTrans& morphism_arg(std::size_t i) const {
    std::string name = name_arg(i, first_morphism(), "morphism");
    auto it = model_.morphisms.find(name);
    if (it == model_.morphisms.end()) throw Error(ErrorCode::UnknownIdentifier, "unknown morphism '" + name + "'");
    return it->second;
  }
  const NatTrans& sheaf_morphism_arg(std::size_t i) const {
    const NatTrans& f = morphism_arg(i);
    require_sheaf(f.source, "the source");
    require_sheaf(f.target, "the target");
    return f;
  }

  void validate_context(Report& r) {
    const FiniteCategory& c = site().cat();
    r.result["objects"] = c.object_count();
    r.result["arrows"] = c.arrow_count();
    r.result["P"] = popcount(model_.P);
    // The covering families only generate J; J itself is what the checks use.
    if (site().cov) r.result["pretopology_axioms"] = validate_pretopology(c, *site().cov).passed();
    r.add("topology", validate_topology(c, site().topology));
    ContextReport rep = validate_geometric_context(site(), model_.P);
    for (std::size_t i = 0; i < rep.checks.size(); ++i) r.add(kContextChecks[i], rep.checks[i]);
    if (rep.checks[2]) r.result["isomorphisms_in_P"] = contains_isomorphisms(c, model_.P);
  }

  void sheafify_cmd(Report& r) {
    require_topology();
    PresheafPtr f = presheaf_arg(0);
    Sheafification s = sheafify(site(), f);
    r.add("sheaf", is_sheaf(site(), *s.sheaf));
    r.result["input"] = sheaf_json(*f, req_.witnesses);
    r.result["sheaf"] = sheaf_json(*s.sheaf, req_.witnesses);
    if (req_.witnesses) r.result["unit"] = map_json(s.unit);
  }

  void check_sheaf(Report& r) {
    require_topology();
    PresheafPtr f = presheaf_arg(0);
    r.add("separated", is_separated(site(), *f));
    r.add("sheaf", is_sheaf(site(), *f));
    r.result["presheaf"] = sheaf_json(*f, req_.witnesses);
  }

  void check_epi(Report& r) {
    require_topology();
    r.add("epimorphism", is_epimorphism(site(), morphism_arg(0)));
  }

  void check_mono(Report& r) {
    require_topology();
    r.add("monomorphism", is_monomorphism(site(), morphism_arg(0)));
  }

  void check_open_immersion(Report& r) {
    require_context();
    r.add("open-immersion", is_open_immersion(ctx(), sheaf_morphism_arg(0)));
  }

  void check_p_morphism(Report& r) {
    require_context();
    r.add("p-morphism", is_P_morphism_of_sheaves(ctx(), model_.P, sheaf_morphism_arg(0), req_.budget));
  }

  void check_schematic(Report& r) {
    require_context();
    r.add("schematic", is_schematic_morphism(ctx(), sheaf_morphism_arg(0)));
  }

  void is_scheme(Report& r) {
    require_context();
    PresheafPtr x = resolve_sheaf(name_arg(0, first_sheaf(), "sheaf"));
    require_sheaf(x, "the input");
    std::optional<Atlas> atlas = find_open_atlas(ctx(), x);
    r.add("elementary-scheme", atlas ? Verdict::pass()
                                     : Verdict::fail(Witness{"no family of open charts covers the sheaf", {}}));
    r.result["sheaf"] = sheaf_json(*x, req_.witnesses);
    if (atlas) {
      r.result["charts"] = atlas->charts.size();
      if (req_.witnesses) r.result["atlas"] = atlas_json(*atlas);
    }
  }

  void glue_cmd(Report& r) {
    require_context();
    std::string name = name_arg(0, model_.glue_blocks.empty() ? "" : model_.glue_blocks.front().name, "glue block");
    const dsl::GlueBlock* g = model_.find_glue(name);
    if (!g) throw Error(ErrorCode::UnknownIdentifier, "unknown glue block '" + name + "'");
    Verdict v = validate_gluing_data(ctx(), g->data);
    r.add("gluing-data", v);
    if (!v) return;
    GluedScheme s = geoctx::glue(ctx(), g->data);
    r.add("elementary-scheme", verify_atlas(ctx(), s.atlas));
    r.result["sheaf"] = sheaf_json(*s.sheaf, req_.witnesses);
    r.result["representable"] = representable_json(ctx(), s.sheaf);
    r.result["charts"] = s.atlas.charts.size();
    if (req_.witnesses) r.result["atlas"] = atlas_json(s.atlas);
  }

  void decompose_cmd(Report& r) {
    require_context();
    PresheafPtr x = resolve_sheaf(name_arg(0, first_sheaf(), "sheaf"));
    require_sheaf(x, "the input");
    std::optional<Atlas> atlas = find_open_atlas(ctx(), x);
    if (!atlas) {
      r.add("open-atlas", Verdict::fail(Witness{"no family of open charts covers the sheaf", {}}));
      return;
    }
    r.add("open-atlas", Verdict::pass());
    GluingData data = decompose(ctx(), *atlas);
    Verdict v = validate_gluing_data(ctx(), data);
    r.add("gluing-data", v);
    if (v) {
      GluedScheme s = geoctx::glue(ctx(), data);
      r.add("round-trip", isomorphic(s.sheaf, x) ? Verdict::pass()
                                                 : Verdict::fail(Witness{"glued sheaf is not isomorphic to the input", {}}));
    }
    const FiniteCategory& c = site().cat();
    json charts = json::array();
    for (ObjectId u : data.charts) charts.push_back(c.object_name(u));
    r.result["charts"] = charts;
    if (!req_.witnesses) return;
    r.result["atlas"] = atlas_json(*atlas);
    json overlaps = json::array();
    for (std::size_t i = 0; i < data.charts.size(); ++i)
      for (std::size_t j = 0; j < data.charts.size(); ++j) {
        const Subpresheaf& s = data.overlaps[i][j];
        json members = json::object();
        for (ObjectId w = 0; w < c.object_count(); ++w) {
          json at = json::array();
          for (int e = 0; e < s.parent->size(w); ++e)
            if (s.contains(w, e)) at.push_back(s.parent->label(w, e));
          if (!at.empty()) members[c.object_name(w)] = at;
        }
        overlaps.push_back({{"pair", {i + 1, j + 1}}, {"members", members}});
      }
    r.result["overlaps"] = overlaps;
  }

  void fibre_product(Report& r) {
    require_context();
    if (req_.names.size() != 2) throw Error(ErrorCode::UnknownIdentifier, "fibre-product needs two morphism ids");
    const NatTrans& f = sheaf_morphism_arg(0);
    const NatTrans& g = sheaf_morphism_arg(1);
    FibredProduct fp = scheme_fibred_product(ctx(), f, g);
    r.add("elementary-scheme", fp.atlas ? verify_atlas(ctx(), *fp.atlas)
                                        : Verdict::fail(Witness{"no open atlas for the fibred product", {}}));
    r.result["sheaf"] = sheaf_json(*fp.cone.apex, req_.witnesses);
    r.result["atlas_from_chart_products"] = fp.from_chart_products;
    if (fp.atlas) {
      r.result["charts"] = fp.atlas->charts.size();
      if (req_.witnesses) r.result["atlas"] = atlas_json(*fp.atlas);
    }
  }

  static int popcount(ArrowSet s) { return __builtin_popcountll(s); }

  const Request& req_;
  dsl::Model model_;
};

json command_json(const Request& req) {
  json names = json::array();
  for (const auto& n : req.names) names.push_back(n);
  return {{"name", req.command}, {"file", req.file}, {"args", names}, {"budget", req.budget}};
}

std::string render_text(const Request& req, const Report& r, std::optional<double> ms) {
  std::ostringstream os;
  os << req.command << " " << req.file;
  for (const auto& n : req.names) os << " " << n;
  os << "\n";
  for (const auto& [name, v] : r.verdicts) {
    os << name << ": " << to_string(v.status);
    if (v.witness) {
      os << " (" << v.witness->summary << ")";
      for (const auto& [k, val] : v.witness->fields) os << "\n  " << k << " = " << val;
    }
    os << "\n";
  }
  for (const auto& [k, v] : r.result.items()) os << k << ": " << v.dump() << "\n";
  if (ms) os << "elapsed_ms: " << *ms << "\n";
  return os.str();
}

Outcome input_error(const Request& req, const Error& e) {
  Outcome o;
  o.exit_code = kExitInputError;
  o.err = std::string("geoctx: ") + e.what() + "\n";
  if (req.format == Format::json) {
    json err{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (auto* pe = dynamic_cast<const dsl::ParseError*>(&e)) {
      err["line"] = pe->loc().line;
      err["column"] = pe->loc().col;
    }
    json doc{{"schema", 1}, {"command", command_json(req)}, {"error", err}};
    o.out = doc.dump(2) + "\n";
  }
  return o;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{
      "validate-context", "sheafify",         "check-sheaf",     "check-epi", "check-mono",
      "check-open-immersion", "check-p-morphism", "check-schematic", "is-scheme", "glue",
      "decompose",        "fibre-product"};
  return names;
}

Outcome run_text(const Request& req, std::string_view text) {
  auto start = std::chrono::steady_clock::now();
  Report report;
  try {
    Session session(req, dsl::load_text(text));
    report = session.execute();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SearchBudgetExceeded) return input_error(req, e);
    report.add("search", Verdict::inconclusive(Witness{"search budget exceeded", {}}.with("budget", std::to_string(req.budget))));
  } catch (const std::exception& e) {
    return input_error(req, Error(ErrorCode::Internal, e.what()));
  }
  std::optional<double> ms;
  if (req.timing)
    ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  Outcome o;
  o.exit_code = report.exit_code();
  if (req.format == Format::text) {
    o.out = render_text(req, report, ms);
    return o;
  }
  json verdicts = json::array(), witnesses = json::array();
  for (const auto& [name, v] : report.verdicts) {
    verdicts.push_back({{"check", name}, {"status", to_string(v.status)}});
    if (v.witness)
      witnesses.push_back({{"check", name}, {"summary", v.witness->summary}, {"fields", fields_json(*v.witness)}});
  }
  json doc{{"schema", 1},           {"command", command_json(req)}, {"verdicts", verdicts},
           {"witnesses", witnesses}, {"result", report.result},      {"elapsed_ms", nullptr}};
  if (ms) doc["elapsed_ms"] = *ms;
  o.out = doc.dump(2) + "\n";
  return o;
}

Outcome run(const Request& req) {
  std::ifstream in(req.file, std::ios::binary);
  if (!in) return input_error(req, Error(ErrorCode::UnknownIdentifier, "cannot read '" + req.file + "'"));
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_text(req, buf.str());
}

}  // namespace geoctx::cli
