#include "dq/commands.hpp"

#include <chrono>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "dq/errors.hpp"

namespace dq {

using json = nlohmann::ordered_json;

namespace {

struct CommandInfo {
  std::string name;
  std::vector<std::string> positionals;
  std::vector<std::string> options;  // subset of order, deg, dord, bounds
  std::string help;
};

const std::vector<CommandInfo>& command_table() {
  static const std::vector<CommandInfo> table = {
      {"verify-mc", {"S"}, {"order"}, "Check associativity of a star product order by order"},
      {"mc-extend", {"S"}, {"order", "deg", "dord", "bounds"}, "Extend a star product by solving for the next terms"},
      {"star-mul", {"S", "f", "g"}, {}, "Star product of two functions"},
      {"lift-field", {"S", "X"}, {"order", "bounds"}, "Lift a Poisson vector field to a derivation"},
      {"obstruction-first", {"S", "X"}, {"deg", "bounds"}, "First obstruction class for lifting a vector field"},
      {"lift-action", {"S", "phi0"}, {"order", "bounds"}, "Lift a Lie algebra action by Poisson fields"},
      {"inner", {"S", "D"}, {"deg", "bounds"}, "Decide whether a derivation series is inner"},
      {"poisson-cohomology", {"pi", "Z"}, {"deg"}, "Decide whether a d_pi-closed polyvector is exact"},
      {"ce-check", {"g", "phi0", "c"}, {"deg"}, "Chevalley-Eilenberg differential of a cochain"},
      {"gauge", {"S", "T"}, {}, "Conjugate a star product by an operator series"},
  };
  return table;
}

const CommandInfo& info_for(const std::string& name) {
  for (const auto& c : command_table())
    if (c.name == name) return c;
  throw Error(ErrorCode::UsageError, "unknown command '" + name + "'");
}

std::string rat(const Rational& r) { return r.get_str(); }

json certificate_json(const std::vector<Rational>& cert) {
  json nz = json::object();
  for (std::size_t i = 0; i < cert.size(); ++i)
    if (cert[i] != 0) nz[std::to_string(i)] = rat(cert[i]);
  return json{{"size", cert.size()}, {"nonzero", nz}};
}

json bounds_json(const AnsatzBounds& b) { return json{{"dord", b.max_order}, {"deg", b.max_degree}}; }

std::string verdict_string(bool trivial, int bound) {
  return trivial ? "Trivial" : "NontrivialAtBound(deg<=" + std::to_string(bound) + ")";
}

json cochain_json(const CECochain& c) {
  json values = json::object();
  for (const auto& [t, v] : c.values()) {
    std::string key = "[";
    for (int i : mask_indices(t)) key += (key.size() > 1 ? ",e" : "e") + std::to_string(i + 1);
    values[key + "]"] = canonical_string(v);
  }
  return json{{"degree", c.degree()}, {"kind", std::string(to_string(c.kind()))}, {"values", values}};
}

json obstruction_json(const ObstructionReport& r) {
  json classes = json::array();
  for (const auto& c : r.classes) {
    json j{{"kind", std::string(to_string(c.kind))}};
    if (c.kind == ObstructionKind::PoissonClass) {
      j["representative"] = canonical_string(c.polyvector);
    } else {
      json parts = json::array();
      for (const auto& part : c.cochains) parts.push_back(cochain_json(part));
      j["representative"] = parts;
    }
    j["representative_closed"] = c.representative_closed;
    j["verdict_attempted"] = c.verdict_attempted;
    if (c.verdict_attempted) j["verdict"] = verdict_string(c.trivial_at_bound, c.degree_bound);
    j["degree_bound"] = c.degree_bound;
    if (c.kind == ObstructionKind::BicomplexClass) j["restricted"] = c.restricted;
    if (c.verdict_attempted && !c.trivial_at_bound) j["certificate"] = certificate_json(c.certificate);
    if (!c.primitive.empty()) j["primitive"] = c.primitive;
    classes.push_back(std::move(j));
  }
  json partial = json::array();
  for (const auto& t : r.partial_terms) partial.push_back(canonical_string(t));
  return json{{"order", r.order}, {"ansatz", bounds_json(r.ansatz)}, {"classes", classes}, {"partial_terms", partial}};
}

json mc_json(const std::vector<MCDefectReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) out.push_back(json{{"order", r.order}, {"zero", r.is_zero}, {"defect", canonical_string(r.defect)}});
  return out;
}

json star_json(const StarProduct& s) {
  json out = json::array();
  for (int k = 1; k <= s.truncation_order(); ++k) out.push_back(json{{"order", k}, {"B", canonical_string(s.b(k))}});
  return out;
}

json formal_json(const FormalFunction& f) {
  json out = json::array();
  for (int k = 0; k <= f.truncation_order(); ++k) out.push_back(json{{"order", k}, {"coefficient", f[k].to_string()}});
  return out;
}

void parse_bounds_string(const std::string& text, AnsatzBounds& a, int* class_degree) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::UsageError, "bounds entry '" + item + "' lacks '='");
    const std::string key = item.substr(0, eq);
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::UsageError, "bounds entry '" + item + "' needs an integer");
    }
    if (value < 0 || value > 12) throw Error(ErrorCode::UsageError, "bounds entry '" + item + "' outside 0..12");
    if (key == "deg") {
      a.max_degree = value;
    } else if (key == "dord") {
      a.max_order = value;
    } else if (key == "class" && class_degree) {
      *class_degree = value;
    } else {
      throw Error(ErrorCode::UsageError, "unknown bounds key '" + key + "'");
    }
  }
}

class Runner {
 public:
  Runner(const SessionFile& s, const CommandRequest& r) : session_(s), req_(r) {}

  void run(Report& rep) {
    const std::string& n = req_.name;
    if (n == "verify-mc") verify_mc_cmd(rep);
    else if (n == "mc-extend") mc_extend_cmd(rep);
    else if (n == "star-mul") star_mul_cmd(rep);
    else if (n == "lift-field") lift_field_cmd(rep);
    else if (n == "obstruction-first") obstruction_first_cmd(rep);
    else if (n == "lift-action") lift_action_cmd(rep);
    else if (n == "inner") inner_cmd(rep);
    else if (n == "poisson-cohomology") poisson_cmd(rep);
    else if (n == "ce-check") ce_check_cmd(rep);
    else if (n == "gauge") gauge_cmd(rep);
    else throw Error(ErrorCode::UsageError, "unknown command '" + n + "'");
  }

 private:
  const std::string& arg(std::size_t i) const { return req_.args.at(i); }

  const StarProduct& star(const std::string& name) const {
    return std::get<StarDefinition>(session_.require(name, DefinitionKind::Star).value).star;
  }

  // A defined name of an accepted kind, or an inline expression.
  Value value_arg(const std::string& text) const {
    if (const Definition* d = session_.find(text)) {
      if (auto* p = std::get_if<Polynomial>(&d->value)) return *p;
      if (auto* x = std::get_if<PolyVectorField>(&d->value)) return *x;
      if (auto* o = std::get_if<PolyDiffOp>(&d->value)) return *o;
      throw Error(ErrorCode::ResolveError, "'" + text + "' is a " + std::string(to_string(d->kind)) + ", expected an expression");
    }
    if (session_.dim == 0) throw Error(ErrorCode::ResolveError, "session declares no dimension");
    try {
      return parse_expression(text, session_.dim);
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.column(), e.token(), "in argument '" + text + "': " + e.what(), e.code());
    }
  }

  PolyVectorField field_arg(const std::string& text) const { return value_as_polyvector(value_arg(text), session_.dim); }
  Polynomial poly_arg(const std::string& text) const { return value_as_polynomial(value_arg(text), session_.dim); }

  LiftBounds lift_bounds() const {
    LiftBounds b;
    if (req_.bounds) parse_bounds_string(*req_.bounds, b.ansatz, &b.class_degree);
    if (req_.deg) b.ansatz.max_degree = *req_.deg;
    if (req_.dord) b.ansatz.max_order = *req_.dord;
    return b;
  }

  int class_degree(int fallback) const {
    LiftBounds b;
    b.class_degree = fallback;
    if (req_.bounds) parse_bounds_string(*req_.bounds, b.ansatz, &b.class_degree);
    if (req_.bounds && req_.bounds->find("class=") == std::string::npos && req_.bounds->find("deg=") != std::string::npos)
      b.class_degree = b.ansatz.max_degree;
    if (req_.deg) b.class_degree = *req_.deg;
    return b.class_degree;
  }

  static void set_error(Report& rep, ErrorCode code, const std::string& msg) {
    rep.status = "error";
    rep.exit_code = kExitError;
    rep.error_code = std::string(to_string(code));
    rep.error_message = msg;
  }

  void verify_mc_cmd(Report& rep) {
    const StarProduct& s = star(arg(0));
    const int order = req_.order ? *req_.order : default_order(s.truncation_order());
    const auto reports = verify_mc(s, order);
    rep.result["star"] = arg(0);
    rep.result["order"] = order;
    rep.result["defects"] = mc_json(reports);
    const bool ok = mc_all_zero(reports);
    rep.result["associative"] = ok;
    if (!ok) {
      for (const auto& r : reports)
        if (!r.is_zero) {
          set_error(rep, ErrorCode::MCDefect, "associativity fails at order " + std::to_string(r.order));
          break;
        }
    }
  }

  void mc_extend_cmd(Report& rep) {
    StarProduct s = star(arg(0));
    const int target = req_.order ? *req_.order : default_order(s.truncation_order() + 1);
    AnsatzBounds b{2, 1};
    if (req_.bounds) parse_bounds_string(*req_.bounds, b, nullptr);
    if (req_.deg) b.max_degree = *req_.deg;
    if (req_.dord) b.max_order = *req_.dord;
    rep.result["star"] = arg(0);
    rep.result["from_order"] = s.truncation_order();
    rep.result["target_order"] = target;
    rep.result["bounds"] = bounds_json(b);
    if (target < s.truncation_order())
      throw Error(ErrorCode::TruncationMismatch, "target order below the current truncation " + std::to_string(s.truncation_order()));
    json added = json::array();
    while (s.truncation_order() < target) {
      auto r = mc_extend(s, b);
      if (auto* e = std::get_if<MCExtension>(&r)) {
        added.push_back(json{{"order", e->extended.truncation_order()}, {"B", canonical_string(e->next)}});
        s = e->extended;
        continue;
      }
      auto& none = std::get<MCExtensionNoneAtBound>(r);
      rep.result["added"] = added;
      rep.result["failed_order"] = s.truncation_order() + 1;
      rep.result["rhs"] = canonical_string(none.rhs);
      rep.result["rhs_closed"] = true;
      rep.result["verdict"] = "NoPrimitiveAtBound";
      rep.result["certificate"] = certificate_json(none.certificate);
      rep.status = "obstruction";
      rep.exit_code = kExitObstruction;
      return;
    }
    rep.result["added"] = added;
    const auto reports = verify_mc(s, s.truncation_order());
    rep.result["verify_mc"] = mc_json(reports);
    rep.result["associative"] = mc_all_zero(reports);
    rep.result["coefficients"] = star_json(s);
  }

  void star_mul_cmd(Report& rep) {
    const StarProduct& s = star(arg(0));
    const int n = s.truncation_order();
    const auto f = FormalFunction::constant_series(poly_arg(arg(1)), n);
    const auto g = FormalFunction::constant_series(poly_arg(arg(2)), n);
    const auto fg = star_multiply(s, f, g);
    const auto gf = star_multiply(s, g, f);
    rep.result["star"] = arg(0);
    rep.result["f"] = f[0].to_string();
    rep.result["g"] = g[0].to_string();
    rep.result["truncation"] = n;
    rep.result["product"] = formal_json(fg);
    rep.result["commutator"] = formal_json(fg - gf);
  }

  void lift_field_cmd(Report& rep) {
    const StarProduct& s = star(arg(0));
    const PolyVectorField x = field_arg(arg(1));
    const int order = req_.order ? *req_.order : default_order(s.truncation_order());
    const LiftBounds b = lift_bounds();
    rep.result["star"] = arg(0);
    rep.result["x0"] = canonical_string(x);
    rep.result["order"] = order;
    rep.result["ansatz"] = bounds_json(b.ansatz);
    rep.result["class_degree"] = b.class_degree;
    auto r = lift_vector_field(s, x, order, b);
    if (auto* d = std::get_if<DerivationSeries>(&r)) {
      json terms = json::array();
      bool zero = true;
      for (std::size_t n = 0; n < d->terms.size(); ++n) {
        terms.push_back(json{{"order", n}, {"term", canonical_string(d->terms[n])}});
        if (n > 0 && !d->terms[n].is_zero()) zero = false;
      }
      rep.result["terms"] = terms;
      rep.result["zero_corrections"] = zero;
      rep.result["certified_order"] = d->certified_order;
      rep.result["perturbed_orders"] = d->perturbed_orders;
      return;
    }
    report_obstruction(rep, std::get<ObstructionReport>(r));
  }

  void report_obstruction(Report& rep, const ObstructionReport& o) {
    rep.result["obstruction"] = obstruction_json(o);
    if (o.has_nontrivial_class()) {
      rep.status = "obstruction";
      rep.exit_code = kExitObstruction;
    } else {
      set_error(rep, ErrorCode::AnsatzExhausted,
                "no solution at order " + std::to_string(o.order) + " although every class is trivial at its bound");
    }
  }

  void obstruction_first_cmd(Report& rep) {
    const StarProduct& s = star(arg(0));
    const PolyVectorField x = field_arg(arg(1));
    const int deg = class_degree(3);
    rep.result["star"] = arg(0);
    rep.result["x0"] = canonical_string(x);
    auto o = obstruction_first(s, x, deg);
    rep.result["obstruction"] = obstruction_json(o);
    const auto& c = o.classes.front();
    if (!c.representative_closed) {
      set_error(rep, ErrorCode::IntegrityFailure, "obstruction representative is not d_pi-closed");
    } else if (c.trivial_at_bound) {
      rep.status = "trivial";
    } else {
      rep.status = "obstruction";
      rep.exit_code = kExitObstruction;
    }
  }

  void lift_action_cmd(Report& rep) {
    const StarProduct& s = star(arg(0));
    const auto& a = std::get<ActionDefinition>(session_.require(arg(1), DefinitionKind::Action).value);
    const int order = req_.order ? *req_.order : default_order(s.truncation_order());
    const LiftBounds b = lift_bounds();
    rep.result["star"] = arg(0);
    rep.result["action"] = arg(1);
    rep.result["algebra"] = a.algebra;
    rep.result["order"] = order;
    rep.result["ansatz"] = bounds_json(b.ansatz);
    auto r = lift_action(s, a.action, order, b);
    if (auto* series = std::get_if<ActionSeries>(&r)) {
      json phi = json::array();
      bool zero = true;
      for (std::size_t n = 0; n < series->phi.size(); ++n) {
        json images = json::object();
        for (std::size_t i = 0; i < series->phi[n].size(); ++i) {
          images["e" + std::to_string(i + 1)] = canonical_string(series->phi[n][i]);
          if (n > 0 && !series->phi[n][i].is_zero()) zero = false;
        }
        phi.push_back(json{{"order", n}, {"images", images}});
      }
      rep.result["phi"] = phi;
      rep.result["zero_corrections"] = zero;
      rep.result["certified_order_derivation"] = series->certified_order_derivation;
      rep.result["certified_order_homomorphism"] = series->certified_order_homomorphism;
      rep.result["warnings"] = series->warnings;
      return;
    }
    report_obstruction(rep, std::get<ObstructionReport>(r));
  }

  void inner_cmd(Report& rep) {
    const StarProduct& s = star(arg(0));
    const auto& d = std::get<SeriesDefinition>(session_.require(arg(1), DefinitionKind::Series).value);
    const int deg = class_degree(3);
    const int top = std::max(d.max_order(), 0);
    const auto terms = d.dense(s.dim(), 0, top);
    rep.result["star"] = arg(0);
    rep.result["derivation"] = arg(1);
    rep.result["degree_bound"] = deg;
    auto r = inner_derivation_solve(s, terms, deg);
    if (auto* in = std::get_if<InnerResult>(&r)) {
      rep.status = "trivial";
      rep.result["inner"] = true;
      rep.result["f"] = formal_json(in->f);
      return;
    }
    rep.result["inner"] = false;
    rep.result["verdict"] = "NotInnerAtBound(deg<=" + std::to_string(deg) + ")";
    rep.result["certificate"] = certificate_json(std::get<NotInnerAtBound>(r).certificate);
    rep.status = "obstruction";
    rep.exit_code = kExitObstruction;
  }

  void poisson_cmd(Report& rep) {
    const PoissonStructure pi(field_arg(arg(0)));
    const PolyVectorField z = field_arg(arg(1));
    const int deg = req_.deg ? *req_.deg : 3;
    rep.result["pi"] = canonical_string(pi.bivector());
    rep.result["z"] = canonical_string(z);
    rep.result["degree_bound"] = deg;
    auto v = poisson_class_is_trivial(pi, z, deg);
    if (auto* t = std::get_if<PoissonTrivial>(&v)) {
      rep.status = "trivial";
      rep.result["verdict"] = "Trivial";
      rep.result["primitive"] = canonical_string(t->primitive);
      return;
    }
    rep.result["verdict"] = verdict_string(false, deg);
    rep.result["certificate"] = certificate_json(std::get<PoissonNontrivialAtBound>(v).certificate);
    rep.status = "obstruction";
    rep.exit_code = kExitObstruction;
  }

  void ce_check_cmd(Report& rep) {
    const auto& g = session_.require(arg(0), DefinitionKind::Lie);
    const auto& a = std::get<ActionDefinition>(session_.require(arg(1), DefinitionKind::Action).value);
    const auto& c = std::get<CochainDefinition>(session_.require(arg(2), DefinitionKind::Cochain).value);
    if (a.algebra != g.name) throw Error(ErrorCode::ResolveError, "action '" + arg(1) + "' is defined over '" + a.algebra + "'");
    if (c.algebra != g.name) throw Error(ErrorCode::ResolveError, "cochain '" + arg(2) + "' is defined over '" + c.algebra + "'");
    const int deg = req_.deg ? *req_.deg : 3;
    rep.result["algebra"] = arg(0);
    rep.result["action"] = arg(1);
    rep.result["cochain"] = cochain_json(c.cochain);
    const CECochain dc = ce_differential(a.action, c.cochain);
    rep.result["differential"] = cochain_json(dc);
    rep.result["closed"] = dc.is_zero();
    if (!dc.is_zero()) {
      set_error(rep, ErrorCode::NotClosed, "cochain '" + arg(2) + "' is not closed");
      return;
    }
    if (c.cochain.degree() == 0 || c.cochain.kind() != CoefficientKind::PolyVector) return;
    int grade = -1;
    for (const auto& [t, v] : c.cochain.values()) grade = std::get<PolyVectorField>(v).grade();
    if (grade < 0) {
      rep.status = "trivial";
      rep.result["verdict"] = "Trivial";
      return;
    }
    rep.result["degree_bound"] = deg;
    auto v = chevalley_class_is_trivial(a.action, c.cochain, grade, deg);
    if (auto* t = std::get_if<ChevalleyTrivial>(&v)) {
      rep.status = "trivial";
      rep.result["verdict"] = "Trivial";
      rep.result["primitive"] = cochain_json(t->primitive);
      return;
    }
    rep.result["verdict"] = verdict_string(false, deg);
    rep.result["certificate"] = certificate_json(std::get<ChevalleyNontrivialAtBound>(v).certificate);
    rep.status = "obstruction";
    rep.exit_code = kExitObstruction;
  }

  void gauge_cmd(Report& rep) {
    const StarProduct& s = star(arg(0));
    const auto& t = std::get<SeriesDefinition>(session_.require(arg(1), DefinitionKind::Series).value);
    if (auto it = t.entries.find(0); it != t.entries.end() && !(it->second == PolyDiffOp::identity(s.dim())))
      throw Error(ErrorCode::MalformedInput, "gauge series must start with the identity");
    if (t.max_order() > s.truncation_order())
      throw Error(ErrorCode::TruncationMismatch, "gauge series longer than the star product truncation");
    const auto terms = t.max_order() >= 1 ? t.dense(s.dim(), 1, t.max_order()) : std::vector<PolyDiffOp>{};
    const StarProduct out = gauge_transform(s, terms);
    rep.result["star"] = arg(0);
    rep.result["gauge"] = arg(1);
    rep.result["coefficients"] = star_json(out);
    const auto before = verify_mc(s, s.truncation_order());
    const auto after = verify_mc(out, out.truncation_order());
    rep.result["input_associative"] = mc_all_zero(before);
    rep.result["verify_mc"] = mc_json(after);
    rep.result["associative"] = mc_all_zero(after);
    if (mc_all_zero(before) && !mc_all_zero(after))
      set_error(rep, ErrorCode::IntegrityFailure, "gauge transform broke associativity");
  }

  const SessionFile& session_;
  const CommandRequest& req_;
};

}  // namespace

std::string CommandRequest::echo() const {
  std::string out = name;
  for (const auto& a : args) out += a.find_first_of(" \t") == std::string::npos ? " " + a : " \"" + a + "\"";
  if (order) out += " --order " + std::to_string(*order);
  if (deg) out += " --deg " + std::to_string(*deg);
  if (dord) out += " --dord " + std::to_string(*dord);
  if (bounds) out += " --bounds " + *bounds;
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& c : command_table()) v.push_back(c.name);
    return v;
  }();
  return names;
}

void add_command_subcommands(CLI::App& app, CommandRequest& req, bool with_session) {
  for (const auto& info : command_table()) {
    CLI::App* sub = app.add_subcommand(info.name, info.help);
    std::string names;
    for (const auto& p : info.positionals) names += (names.empty() ? "" : " ") + p;
    sub->add_option("args", req.args, names)->expected(static_cast<int>(info.positionals.size()))->required();
    for (const auto& o : info.options) {
      if (o == "order") sub->add_option("--order", req.order, "Truncation order (default: DQ_DEFAULT_ORDER or command default)");
      if (o == "deg") sub->add_option("--deg", req.deg, "Coefficient degree bound");
      if (o == "dord") sub->add_option("--dord", req.dord, "Per-slot derivative order bound");
      if (o == "bounds") sub->add_option("--bounds", req.bounds, "Ansatz bounds deg=D,dord=R[,class=C]");
    }
    if (with_session) sub->add_option("-s,--session", req.session_path, "Session file")->required();
    sub->callback([&req, name = info.name] { req.name = name; });
  }
}

CommandRequest parse_command_line(const std::string& line) {
  CommandRequest req;
  CLI::App app{"run directive"};
  app.require_subcommand(1);
  add_command_subcommands(app, req, false);
  try {
    app.parse(line, false);
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::UsageError, "run " + line + ": " + e.what());
  }
  return req;
}

Report run_command(const SessionFile& session, const CommandRequest& request) {
  Report rep;
  rep.command = request.echo();
  rep.status = "success";
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto& info = info_for(request.name);
    if (request.args.size() != info.positionals.size())
      throw Error(ErrorCode::UsageError, request.name + " expects " + std::to_string(info.positionals.size()) + " arguments");
    Runner(session, request).run(rep);
  } catch (const Error& e) {
    rep.status = "error";
    rep.exit_code = kExitError;
    rep.error_code = std::string(to_string(e.code()));
    rep.error_message = e.what();
  }
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

Report error_report(const std::string& command, const Error& e) {
  Report rep;
  rep.command = command;
  rep.status = "error";
  rep.exit_code = kExitError;
  rep.error_code = std::string(to_string(e.code()));
  rep.error_message = e.what();
  return rep;
}

std::string render_json(const Report& report, bool include_timing) {
  json j;
  j["schema"] = kReportSchema;
  j["command"] = report.command;
  j["status"] = report.status;
  j["exit_code"] = report.exit_code;
  if (report.error_code) j["error"] = json{{"code", *report.error_code}, {"message", report.error_message.value_or("")}};
  j["result"] = report.result;
  if (include_timing) j["timing_ms"] = report.elapsed_ms;
  return j.dump(2) + "\n";
}

namespace {

void text_lines(const json& j, const std::string& indent, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !v.empty()) {
        os << indent << k << ":\n";
        text_lines(v, indent + "  ", os);
      } else {
        os << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_structured() && !v.empty()) {
        os << indent << "-\n";
        text_lines(v, indent + "  ", os);
      } else {
        os << indent << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  }
}

}  // namespace

std::string render_text(const Report& report) {
  std::ostringstream os;
  os << "command: " << report.command << "\n";
  os << "status: " << report.status << " (exit " << report.exit_code << ")\n";
  if (report.error_code) os << "error: " << *report.error_code << ": " << report.error_message.value_or("") << "\n";
  text_lines(report.result, "", os);
  std::ostringstream t;
  t.setf(std::ios::fixed);
  t.precision(1);
  t << report.elapsed_ms;
  os << "timing_ms: " << t.str() << "\n";
  return os.str();
}

}  // namespace dq
