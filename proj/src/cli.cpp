#include "gptent/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "gptent/analysis.hpp"
#include "gptent/catalog.hpp"
#include "gptent/model_io.hpp"
#include "gptent/verify_paper.hpp"

namespace gptent::cli {

namespace {

using ojson = nlohmann::ordered_json;

class InputError : public Error {
 public:
  using Error::Error;
};

struct Outcome {
  ojson report = ojson::object();
  std::string table;
  bool is_check = false;
  bool passed = true;
};

struct Globals {
  std::vector<std::string> builtins;
  std::vector<std::string> models;
  std::string format = "table";
  std::uint64_t seed = 0;
  std::string expect = "satisfied";
};

ModelBundle load_bundle(const Globals& g) {
  ModelBundle b;
  for (const auto& name : g.builtins) b.merge(catalog::builtin(name));
  for (const auto& path : g.models) b.merge(load_model(path));
  return b;
}

template <class Map>
const typename Map::mapped_type& pick(const Map& m, const std::string& name, const std::string& kind) {
  if (!name.empty()) {
    auto it = m.find(name);
    if (it == m.end()) {
      std::string known;
      for (const auto& [k, v] : m) known += (known.empty() ? "" : ", ") + k;
      throw InputError("unknown " + kind + " '" + name + "'" + (known.empty() ? "" : " (available: " + known + ")"));
    }
    return it->second;
  }
  if (m.size() == 1) return m.begin()->second;
  if (m.empty()) throw InputError("no " + kind + " loaded; use --builtin or --model");
  std::string known;
  for (const auto& [k, v] : m) known += (known.empty() ? "" : ", ") + k;
  throw InputError("several " + kind + "s loaded; choose one of: " + known);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string show(const Rational& r) { return to_string(r); }

std::string show(const RationalVector& v) {
  std::vector<std::string> parts;
  for (const auto& x : v) parts.push_back(to_string(x));
  return "(" + join(parts, ", ") + ")";
}

std::string show_labeled(const std::vector<std::string>& labels, const RationalVector& v) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < v.size(); ++i) parts.push_back(labels[i] + "=" + to_string(v[i]));
  return join(parts, " ");
}

ojson labeled_json(const std::vector<std::string>& labels, const RationalVector& v) {
  ojson o = ojson::object();
  for (std::size_t i = 0; i < v.size(); ++i) o[labels[i]] = rational_json(v[i]);
  return o;
}

ojson joint_json(const JointState& j) {
  ojson o = ojson::object();
  for (std::size_t c = 0; c < j.values().size(); ++c)
    if (!is_zero(j.values()[c])) o[j.system()->cell_key(c)] = rational_json(j.values()[c]);
  return o;
}

std::string joint_table(const JointState& j) {
  std::string s;
  for (std::size_t c = 0; c < j.values().size(); ++c)
    if (!is_zero(j.values()[c])) s += "  (" + j.system()->cell_key(c) + ") " + to_string(j.values()[c]) + "\n";
  return s;
}

std::string show_decomposition(const Decomposition& d) {
  std::vector<std::string> parts;
  for (const auto& t : d.terms) parts.push_back(to_string(t.weight) + "*v" + std::to_string(t.vertex));
  return join(parts, " + ");
}

ojson decomposition_json(const Decomposition& d) {
  ojson terms = ojson::array();
  for (const auto& t : d.terms) terms.push_back({{"weight", rational_json(t.weight)}, {"vertex", t.vertex}});
  return terms;
}

/// Parses "0,2" or component names "A,C".
Subset components_of(const CompositeSystem& sys, const std::string& text) {
  Subset out;
  for (const auto& item : split(text, ',')) {
    bool numeric = item.find_first_not_of("0123456789") == std::string::npos;
    std::size_t idx = sys.size();
    if (numeric) {
      idx = std::stoul(item);
    } else {
      for (std::size_t i = 0; i < sys.size(); ++i)
        if (sys.component(i).name() == item) idx = i;
    }
    if (idx >= sys.size()) throw InputError("unknown component '" + item + "'");
    out.push_back(idx);
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw InputError("repeated component in '" + text + "'");
  return out;
}

std::string subset_name(const CompositeSystem& sys, const Subset& s) {
  std::string n;
  for (auto i : s) n += sys.component(i).name();
  return n;
}

std::string bits_line(const std::string& label, double bits) { return label + " = " + format_bits(bits) + "\n"; }

const StateSpacePolytope& resolve_polytope(const ModelBundle& b, const std::string& ref,
                                           std::optional<StateSpacePolytope>& holder) {
  if (!ref.empty() && b.polytopes.find(ref) == b.polytopes.end() && std::filesystem::exists(ref)) {
    ModelBundle file = load_model(ref);
    holder.emplace(pick(file.polytopes, "", "polytope"));
    return *holder;
  }
  return pick(b.polytopes, ref, "polytope");
}

RationalVector parse_point(const std::string& text) {
  RationalVector p;
  for (const auto& item : split(text, ',')) p.push_back(parse_rational(item));
  return p;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropies, composites and communication protocols on finite test spaces", "gptent"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--builtin", g.builtins, "Load a builtin model (repeatable)");
  app.add_option("--model", g.models, "Load a JSON model file (repeatable)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--seed", g.seed, "Seed for sampling commands");
  app.add_option("--expect", g.expect, "Exit 0 when a check is satisfied, violated, or any")
      ->check(CLI::IsMember({"satisfied", "violated", "any"}));

  std::function<Outcome()> action;
  auto on = [&](CLI::App* sub, std::function<Outcome()> fn) { sub->callback([&action, fn] { action = fn; }); };

  std::string state_ref, joint_ref, polytope_ref, system_ref, ensemble_ref, protocol_ref, point_text;
  std::string kind = "measurement", functional_text = "shannon", mode_text = "fr", systems_text;
  std::string keep_text, a_text = "0", b_text = "1", c_text = "2", on_text, outcome_text, filter, box = "";
  std::size_t samples = 100;
  std::string ic_name;

  // validate
  auto* validate = app.add_subcommand("validate", "Load and validate every object");
  on(validate, [&] {
    Outcome o;
    o.is_check = true;
    try {
      ModelBundle b = load_bundle(g);
      o.report = {{"valid", true},
                  {"systems", b.systems.size()},
                  {"polytopes", b.polytopes.size()},
                  {"states", b.states.size()},
                  {"composites", b.composites.size()},
                  {"joint_states", b.joint_states.size()},
                  {"ensembles", b.ensembles.size()},
                  {"protocols", b.protocols.size()}};
      ojson warnings = ojson::array();
      for (const auto& [name, s] : b.systems)
        for (const auto& w : s->warnings()) warnings.push_back(name + ": " + w);
      o.report["warnings"] = warnings;
      o.table = "valid: " + std::to_string(b.systems.size()) + " systems, " + std::to_string(b.states.size()) +
                " states, " + std::to_string(b.polytopes.size()) + " polytopes, " +
                std::to_string(b.joint_states.size()) + " joint states\n";
      for (const auto& w : warnings) o.table += "warning: " + w.get<std::string>() + "\n";
    } catch (const ParseError&) {
      throw;
    } catch (const FileError&) {
      throw;
    } catch (const Error& e) {
      o.passed = false;
      o.report = {{"valid", false}, {"error", e.what()}};
      o.table = std::string("invalid: ") + e.what() + "\n";
    }
    return o;
  });

  // dump
  auto* dump = app.add_subcommand("dump", "Print the loaded bundle as canonical JSON");
  on(dump, [&] {
    Outcome o;
    o.report = to_json(load_bundle(g));
    o.table = o.report.dump(2) + "\n";
    return o;
  });

  // vertices
  auto* vertices = app.add_subcommand("vertices", "Pure states of a test space");
  vertices->add_option("--system", system_ref);
  vertices->add_option("--polytope", polytope_ref);
  on(vertices, [&] {
    ModelBundle b = load_bundle(g);
    std::optional<StateSpacePolytope> holder;
    const StateSpacePolytope* poly = nullptr;
    if (!polytope_ref.empty() || (system_ref.empty() && b.systems.empty())) {
      poly = &resolve_polytope(b, polytope_ref, holder);
    } else {
      holder.emplace(enumerate_vertices(*pick(b.systems, system_ref, "system")));
      poly = &*holder;
    }
    Outcome o;
    ojson vs = ojson::array();
    o.table = std::to_string(poly->vertex_count()) + " vertices, dimension " + std::to_string(poly->dim()) + "\n";
    for (std::size_t i = 0; i < poly->vertex_count(); ++i) {
      vs.push_back(labeled_json(poly->labels(), poly->vertices()[i]));
      o.table += "  v" + std::to_string(i) + ": " + show_labeled(poly->labels(), poly->vertices()[i]) + "\n";
    }
    o.report = {{"count", poly->vertex_count()}, {"dim", poly->dim()}, {"labels", poly->labels()}, {"vertices", vs}};
    return o;
  });

  // facets
  auto* facets = app.add_subcommand("facets", "Facets with supporting functionals");
  facets->add_option("--system", system_ref);
  facets->add_option("--polytope", polytope_ref);
  on(facets, [&] {
    ModelBundle b = load_bundle(g);
    std::optional<StateSpacePolytope> holder;
    const StateSpacePolytope* poly = nullptr;
    if (!system_ref.empty() || (polytope_ref.empty() && b.polytopes.empty())) {
      holder.emplace(enumerate_vertices(*pick(b.systems, system_ref, "system")));
      poly = &*holder;
    } else {
      poly = &resolve_polytope(b, polytope_ref, holder);
    }
    Outcome o;
    auto fs = enumerate_facets(*poly);
    ojson arr = ojson::array();
    std::size_t non_simplicial = 0;
    for (const auto& f : fs) {
      non_simplicial += !f.simplicial;
      arr.push_back({{"vertices", f.vertices},
                     {"normal", vector_json(f.functional.normal)},
                     {"offset", rational_json(f.functional.offset)},
                     {"dim", f.dim},
                     {"simplicial", f.simplicial}});
      std::vector<std::string> vs;
      for (auto v : f.vertices) vs.push_back("v" + std::to_string(v));
      o.table += "  {" + join(vs, ",") + "} " + show(f.functional.normal) + " . v >= " + show(f.functional.offset) +
                 (f.simplicial ? "  simplicial" : "  non-simplicial") + "\n";
    }
    o.table = std::to_string(fs.size()) + " facets, " + std::to_string(non_simplicial) + " non-simplicial\n" + o.table;
    o.report = {{"count", fs.size()}, {"non_simplicial", non_simplicial}, {"facets", arr}};
    return o;
  });

  // entropy
  auto* entropy = app.add_subcommand("entropy", "Measurement, mixing or generalized entropy");
  entropy->add_option("--state", state_ref);
  entropy->add_option("--joint", joint_ref);
  entropy->add_option("--polytope", polytope_ref);
  entropy->add_option("--point", point_text, "Comma-separated coordinates for --kind mixing");
  entropy->add_option("--kind", kind)->check(CLI::IsMember({"measurement", "mixing", "T"}));
  entropy->add_option("--functional", functional_text, "shannon, min, renyi:<a>, tsallis:<q>");
  on(entropy, [&] {
    ModelBundle b = load_bundle(g);
    auto functional = SchurConcaveFunctional::parse(functional_text);
    Outcome o;
    if (!joint_ref.empty() || (state_ref.empty() && point_text.empty() && b.states.empty() && !b.joint_states.empty())) {
      const JointState& j = pick(b.joint_states, joint_ref, "joint state");
      auto r = joint_measurement_entropy(j);
      o.report = {{"kind", "measurement"}, {"bits", round_bits(r.bits)}, {"witness", describe(r.witness, *j.system())}};
      o.table = format_bits(r.bits) + "\nwitness: " + describe(r.witness, *j.system()) + "\n";
      return o;
    }
    if (kind == "mixing") {
      std::optional<StateSpacePolytope> holder;
      RationalVector point;
      const StateSpacePolytope* poly = nullptr;
      if (!point_text.empty()) {
        point = parse_point(point_text);
        poly = &resolve_polytope(b, polytope_ref, holder);
      } else {
        const State& s = pick(b.states, state_ref, "state");
        point = s.values();
        if (!polytope_ref.empty()) {
          poly = &resolve_polytope(b, polytope_ref, holder);
        } else {
          holder.emplace(enumerate_vertices(*s.space()));
          poly = &*holder;
        }
      }
      auto r = mixing_entropy(*poly, point, functional);
      o.report = {{"kind", "mixing"},
                  {"functional", functional.name()},
                  {"bits", round_bits(r.bits)},
                  {"witness", decomposition_json(r.witness)}};
      o.table = format_bits(r.bits) + "\nwitness: " + show_decomposition(r.witness) + "\n";
      return o;
    }
    const State& s = pick(b.states, state_ref, "state");
    auto r = kind == "T" ? generalized_entropy(s, functional) : measurement_entropy(s);
    o.report = {{"kind", kind}, {"bits", round_bits(r.bits)}, {"witness", r.witness.id}};
    if (kind == "T") o.report["functional"] = functional.name();
    o.table = format_bits(r.bits) + "\nwitness: test " + r.witness.id + "\n";
    return o;
  });

  // product
  auto* product = app.add_subcommand("product", "List the tests of a composite");
  product->add_option("--systems", systems_text, "Comma-separated system names");
  product->add_option("--mode", mode_text)->check(CLI::IsMember({"cartesian", "fr", "adaptive"}));
  on(product, [&] {
    ModelBundle b = load_bundle(g);
    std::vector<TestSpacePtr> parts;
    for (const auto& name : split(systems_text, ',')) parts.push_back(pick(b.systems, name, "system"));
    if (parts.size() < 2) throw InputError("--systems needs at least two system names");
    CompositeSystem sys(parts, parse_mode(mode_text));
    Outcome o;
    ojson tests = ojson::array();
    if (sys.mode() == CompositeMode::cartesian) {
      std::vector<std::size_t> counts;
      for (const auto& p : parts) counts.push_back(p->test_count());
      std::vector<std::size_t> idx(parts.size(), 0);
      while (true) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < parts.size(); ++i) names.push_back(parts[i]->name() + parts[i]->tests()[idx[i]].id);
        tests.push_back(join(names, " x "));
        std::size_t i = parts.size();
        while (i > 0 && ++idx[i - 1] == counts[i - 1]) idx[--i] = 0;
        if (i == 0) break;
      }
    } else {
      auto list = parts.size() == 2 && sys.mode() == CompositeMode::foulis_randall ? fr_product(*parts[0], *parts[1])
                                                                                  : adaptive_tests(sys);
      for (const auto& t : list) tests.push_back(describe(t, sys));
    }
    o.report = {{"mode", to_string(sys.mode())}, {"count", tests.size()}, {"tests", tests}};
    o.table = std::to_string(tests.size()) + " tests (" + to_string(sys.mode()) + ")\n";
    for (const auto& t : tests) o.table += "  " + t.get<std::string>() + "\n";
    return o;
  });

  // nonsignaling
  auto* nonsignaling = app.add_subcommand("nonsignaling", "Check the non-signaling condition");
  nonsignaling->add_option("--joint", joint_ref);
  on(nonsignaling, [&] {
    ModelBundle b = load_bundle(g);
    const JointState& j = pick(b.joint_states, joint_ref, "joint state");
    auto r = is_nonsignaling(j);
    Outcome o;
    o.is_check = true;
    o.passed = r.ok();
    o.report = {{"nonsignaling", r.ok()}};
    if (!r.ok()) {
      o.report["violation"] = {{"component", r.violation->component},
                               {"others", r.violation->others},
                               {"tests", {r.violation->test_a, r.violation->test_b}},
                               {"sums", {rational_json(r.violation->sum_a), rational_json(r.violation->sum_b)}},
                               {"message", r.violation->message}};
    }
    o.table = r.ok() ? "non-signaling: ok\n" : "non-signaling: violated\n" + r.violation->message + "\n";
    return o;
  });

  // marginal
  auto* marg = app.add_subcommand("marginal", "Marginal on a set of components");
  marg->add_option("--joint", joint_ref);
  marg->add_option("--keep", keep_text, "Components to keep, e.g. 0 or A,C")->required();
  on(marg, [&] {
    ModelBundle b = load_bundle(g);
    const JointState& j = pick(b.joint_states, joint_ref, "joint state");
    Subset keep = components_of(*j.system(), keep_text);
    Outcome o;
    if (keep.size() == 1) {
      State s = marginal_state(j, keep[0]);
      o.report = {{"components", keep}, {"values", labeled_json(s.space()->outcomes(), s.values())}};
      o.table = subset_name(*j.system(), keep) + ": " + show_labeled(s.space()->outcomes(), s.values()) + "\n";
    } else {
      JointState m = marginal(j, keep);
      o.report = {{"components", keep}, {"values", joint_json(m)}};
      o.table = subset_name(*j.system(), keep) + ":\n" + joint_table(m);
    }
    return o;
  });

  // conditional
  auto* cond = app.add_subcommand("conditional", "Conditional state given one outcome");
  cond->add_option("--joint", joint_ref);
  cond->add_option("--on", on_text, "Conditioning component")->required();
  cond->add_option("--outcome", outcome_text)->required();
  on(cond, [&] {
    ModelBundle b = load_bundle(g);
    const JointState& j = pick(b.joint_states, joint_ref, "joint state");
    Subset c = components_of(*j.system(), on_text);
    if (c.size() != 1) throw InputError("--on takes a single component");
    auto v = conditional(j, c[0], outcome_text);
    Outcome o;
    o.report = {{"components", v.components}, {"probability", rational_json(v.probability)}, {"zero", v.zero}};
    if (v.state) {
      o.report["values"] = labeled_json(v.state->space()->outcomes(), v.state->values());
      o.table = "p = " + show(v.probability) + "\n" + show_labeled(v.state->space()->outcomes(), v.state->values()) + "\n";
    } else if (v.joint) {
      o.report["values"] = joint_json(*v.joint);
      o.table = "p = " + show(v.probability) + "\n" + joint_table(*v.joint);
    } else {
      o.report["values"] = nullptr;
      o.table = "p = 0: conditional state is zero by convention\n";
    }
    return o;
  });

  // mutual-info, cmi, ssa
  auto add_abc = [&](CLI::App* sub, bool with_c) {
    sub->add_option("--joint", joint_ref);
    sub->add_option("--a", a_text);
    sub->add_option("--b", b_text);
    if (with_c) sub->add_option("--c", c_text);
  };
  auto* mi = app.add_subcommand("mutual-info", "I(A:B) = H(A) + H(B) - H(AB)");
  add_abc(mi, false);
  on(mi, [&] {
    ModelBundle b = load_bundle(g);
    const JointState& j = pick(b.joint_states, joint_ref, "joint state");
    Subset x = components_of(*j.system(), a_text), y = components_of(*j.system(), b_text);
    double v = mutual_information(j, x, y);
    Outcome o;
    o.report = {{"a", x}, {"b", y}, {"bits", round_bits(v)}};
    o.table = bits_line("I(" + subset_name(*j.system(), x) + ":" + subset_name(*j.system(), y) + ")", v);
    return o;
  });
  auto* cmi = app.add_subcommand("cmi", "I(A:B|C)");
  add_abc(cmi, true);
  on(cmi, [&] {
    ModelBundle b = load_bundle(g);
    const JointState& j = pick(b.joint_states, joint_ref, "joint state");
    const auto& sys = *j.system();
    Subset x = components_of(sys, a_text), y = components_of(sys, b_text), z = components_of(sys, c_text);
    double v = conditional_mutual_information(j, x, y, z);
    Outcome o;
    o.report = {{"a", x}, {"b", y}, {"c", z}, {"bits", round_bits(v)}};
    o.table = bits_line("I(" + subset_name(sys, x) + ":" + subset_name(sys, y) + "|" + subset_name(sys, z) + ")", v);
    return o;
  });
  auto* ssa = app.add_subcommand("ssa", "Strong subadditivity report, C the conditioner");
  add_abc(ssa, true);
  on(ssa, [&] {
    ModelBundle b = load_bundle(g);
    const JointState& j = pick(b.joint_states, joint_ref, "joint state");
    const auto& sys = *j.system();
    Subset x = components_of(sys, a_text), y = components_of(sys, b_text), z = components_of(sys, c_text);
    auto r = ssa_report(j, x, y, z);
    std::string A = subset_name(sys, x), B = subset_name(sys, y), C = subset_name(sys, z);
    Outcome o;
    o.is_check = true;
    o.passed = r.satisfied;
    o.report = {{"entropies",
                 {{"H(A)", round_bits(r.h_a)},
                  {"H(C)", round_bits(r.h_c)},
                  {"H(AC)", round_bits(r.h_ac)},
                  {"H(BC)", round_bits(r.h_bc)},
                  {"H(ABC)", round_bits(r.h_abc)}}},
                {"form_a", {{"value", round_bits(r.form_a)}, {"satisfied", r.satisfied_a}}},
                {"form_b", {{"value", round_bits(r.form_b)}, {"satisfied", r.satisfied_b}}},
                {"form_c", {{"value", round_bits(r.form_c)}, {"satisfied", r.satisfied_c}}},
                {"form_d", {{"value", round_bits(r.form_d)}, {"satisfied", r.satisfied_d}}},
                {"forms_agree", r.forms_agree},
                {"satisfied", r.satisfied}};
    auto flag = [](bool s) { return s ? "  satisfied\n" : "  violated\n"; };
    o.table = bits_line("H(" + A + ")", r.h_a) + bits_line("H(" + C + ")", r.h_c) + bits_line("H(" + A + C + ")", r.h_ac) +
              bits_line("H(" + B + C + ")", r.h_bc) + bits_line("H(" + A + B + C + ")", r.h_abc);
    o.table += "form_a I(A:BC) - I(A:C) = " + format_bits(r.form_a) + flag(r.satisfied_a);
    o.table += "form_b H(A|C) - H(A|BC) = " + format_bits(r.form_b) + flag(r.satisfied_b);
    o.table += "form_c H(ABC) - H(AC) - H(BC) + H(C) = " + format_bits(r.form_c) + flag(r.satisfied_c);
    o.table += "form_d I(A:B|C) = " + format_bits(r.form_d) + flag(r.satisfied_d);
    o.table += std::string("strong subadditivity: ") + (r.satisfied ? "satisfied" : "violated") + "\n";
    return o;
  });

  // holevo
  auto* holevo = app.add_subcommand("holevo", "Holevo bound report for an ensemble");
  holevo->add_option("--ensemble", ensemble_ref);
  on(holevo, [&] {
    ModelBundle b = load_bundle(g);
    auto r = holevo_report(pick(b.ensembles, ensemble_ref, "ensemble"));
    Outcome o;
    o.is_check = true;
    o.passed = r.satisfied;
    o.report = {{"chi", round_bits(r.chi)},
                {"mutual_AB", round_bits(r.mutual_ab)},
                {"max_product_info", round_bits(r.max_product_info)},
                {"best_test", r.best_test_id},
                {"chi_matches_mutual", r.chi_matches_mutual},
                {"satisfied", r.satisfied}};
    o.table = bits_line("chi", r.chi) + bits_line("I(A:B)", r.mutual_ab) +
              bits_line("max I(E:F)", r.max_product_info) + "attained by " + r.best_test_id + "\n" +
              "Holevo bound: " + (r.satisfied ? "satisfied" : "violated") + "\n";
    return o;
  });

  // chsh
  auto* chsh = app.add_subcommand("chsh", "CHSH value, maximized over sign placements");
  chsh->add_option("--box", box, "pr for the builtin PR box");
  chsh->add_option("--joint", joint_ref);
  on(chsh, [&] {
    std::optional<JointState> pr;
    const JointState* j = nullptr;
    ModelBundle b = load_bundle(g);
    if (box == "pr") {
      pr = pr_box();
      j = &*pr;
    } else if (!box.empty()) {
      throw InputError("unknown box '" + box + "'");
    } else {
      j = &pick(b.joint_states, joint_ref, "joint state");
    }
    double v = chsh_value(*j);
    Outcome o;
    ojson placements = ojson::array();
    for (std::size_t k = 0; k < 4; ++k) placements.push_back(round_bits(chsh_expression(*j, {}, k)));
    o.report = {{"chsh", round_bits(v)}, {"placements", placements}};
    o.table = format_bits(v) + "\n";
    return o;
  });

  // ic
  auto* ic = app.add_subcommand("ic", "Information causality left-hand side");
  ic->add_option("name", ic_name, "vandam for the builtin protocol");
  ic->add_option("--protocol", protocol_ref);
  on(ic, [&] {
    ModelBundle b = load_bundle(g);
    ICProtocol p;
    bool vandam = ic_name == "vandam" && protocol_ref.empty() && b.protocols.empty();
    if (vandam) p = van_dam_protocol();
    else if (!ic_name.empty() && ic_name != "vandam") p = pick(b.protocols, ic_name, "protocol");
    else p = pick(b.protocols, protocol_ref, "protocol");
    auto r = ic_lhs(p);
    Outcome o;
    o.is_check = true;
    o.passed = r.satisfied;
    ojson per_k = ojson::array(), joint_k = ojson::array(), success = ojson::array();
    for (std::size_t k = 0; k < r.per_k.size(); ++k) {
      per_k.push_back(round_bits(r.per_k[k]));
      joint_k.push_back(round_bits(r.per_k_joint[k]));
      success.push_back(rational_json(r.success[k]));
    }
    if (p.shared && p.m >= 1) {
      JointState mid = intermediate_state(p);
      std::vector<std::size_t> all(mid.system()->size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      const std::size_t f = p.n, bob = p.n + 1;
      o.report["intermediate_state"] = joint_json(mid);
      o.table = "intermediate state (E1..EN, F, B):\n" + joint_table(mid);
      if (p.n == 2) {
        double h1 = subset_entropy(mid, {0, f, bob}), h2 = subset_entropy(mid, {1, f, bob});
        double hfb = subset_entropy(mid, {f, bob}), hall = subset_entropy(mid, all);
        double cmi_v = conditional_mutual_information(mid, {0}, {1}, {f, bob});
        o.report["entropies"] = {{"H(E1,F,B)", round_bits(h1)},
                                 {"H(E2,F,B)", round_bits(h2)},
                                 {"H(F,B)", round_bits(hfb)},
                                 {"H(E1,E2,F,B)", round_bits(hall)},
                                 {"I(E1:E2|F,B)", round_bits(cmi_v)}};
        o.table += bits_line("H(E1,F,B)", h1) + bits_line("H(E2,F,B)", h2) + bits_line("H(F,B)", hfb) +
                   bits_line("H(E1,E2,F,B)", hall) + bits_line("I(E1:E2|F,B)", cmi_v);
      }
    }
    o.report["per_k"] = per_k;
    o.report["per_k_joint_readout"] = joint_k;
    o.report["success"] = success;
    o.report["lhs"] = round_bits(r.lhs);
    o.report["m"] = r.m;
    o.report["satisfied"] = r.satisfied;
    for (std::size_t k = 0; k < r.per_k.size(); ++k)
      o.table += bits_line("I(E" + std::to_string(k + 1) + ":b" + std::to_string(k + 1) + ")", r.per_k[k]);
    o.table += bits_line("lhs", r.lhs) + "m = " + std::to_string(r.m) + "\n" +
               "information causality: " + (r.satisfied ? "satisfied" : "violated") + "\n";
    return o;
  });

  // concavity
  auto* concavity = app.add_subcommand("concavity", "Construct a non-concavity witness for mixing entropy");
  concavity->add_option("--polytope", polytope_ref, "Polytope name or JSON file");
  concavity->add_option("--system", system_ref, "Use the state space of a test space");
  concavity->add_option("--functional", functional_text, "Functional for the witness check");
  on(concavity, [&] {
    ModelBundle b = load_bundle(g);
    std::optional<StateSpacePolytope> holder;
    const StateSpacePolytope* poly = nullptr;
    if (!system_ref.empty()) {
      holder.emplace(enumerate_vertices(*pick(b.systems, system_ref, "system")));
      poly = &*holder;
    } else {
      poly = &resolve_polytope(b, polytope_ref, holder);
    }
    auto functional = SchurConcaveFunctional::parse(functional_text);
    auto r = find_concavity_violation(*poly);
    Outcome o;
    o.is_check = true;
    if (auto* na = std::get_if<NotApplicable>(&r)) {
      o.report = {{"applicable", false},
                  {"reason", na->reason == NotApplicable::Reason::simplex ? "simplex" : "degenerate"},
                  {"message", na->message}};
      o.table = "not applicable: " + na->message + "\n";
      return o;
    }
    const auto& w = std::get<ConcavityWitness>(r);
    bool ok = verify_witness(*poly, w, functional);
    o.passed = ok;
    ojson mixture = ojson::array();
    for (const auto& t : w.mixture)
      mixture.push_back({{"weight", rational_json(t.weight)}, {"point", vector_json(t.point)}, {"S", round_bits(t.entropy)}});
    const auto& tr = w.trace;
    ojson descent = ojson::array();
    for (const auto& d : tr.descent) descent.push_back(d);
    o.report = {{"applicable", true},
                {"rho", vector_json(w.rho)},
                {"mixture", mixture},
                {"S_rho", round_bits(w.s_rho)},
                {"mixture_avg", round_bits(w.mixture_avg)},
                {"gap", round_bits(w.gap)},
                {"verified", ok},
                {"functional", functional.name()},
                {"trace",
                 {{"descent", descent},
                  {"dim", tr.dim},
                  {"F1", tr.f1},
                  {"F2", tr.f2},
                  {"V", tr.v},
                  {"rho1", vector_json(tr.rho1)},
                  {"rho2", vector_json(tr.rho2)},
                  {"rho3", vector_json(tr.rho3)},
                  {"L", {vector_json(tr.l_start), vector_json(tr.l_end)}},
                  {"case", tr.case_number == 1 ? "i" : "ii"}}}};
    o.table = "rho = " + show(w.rho) + "\n";
    for (const auto& t : w.mixture) o.table += "  " + show(t.weight) + " * " + show(t.point) + "  S = " + format_bits(t.entropy) + "\n";
    o.table += bits_line("S(rho)", w.s_rho) + bits_line("sum p_i S(rho_i)", w.mixture_avg) + bits_line("gap", w.gap);
    o.table += std::string("case ") + (tr.case_number == 1 ? "i" : "ii") + ", verified: " + (ok ? "yes" : "no") + "\n";
    return o;
  });

  // monoentropic-scan
  auto* scan = app.add_subcommand("monoentropic-scan", "Compare H and S on sampled states");
  scan->add_option("--system", system_ref);
  scan->add_option("--polytope", polytope_ref);
  scan->add_option("--samples", samples);
  on(scan, [&] {
    ModelBundle b = load_bundle(g);
    const TestSpacePtr& space = pick(b.systems, system_ref, "system");
    std::optional<StateSpacePolytope> holder;
    const StateSpacePolytope* poly = nullptr;
    if (!polytope_ref.empty()) {
      poly = &resolve_polytope(b, polytope_ref, holder);
    } else {
      holder.emplace(enumerate_vertices(*space));
      poly = &*holder;
    }
    auto r = monoentropicity_scan(space, *poly, samples, g.seed);
    Outcome o;
    o.is_check = true;
    o.passed = r.clean();
    ojson ws = ojson::array();
    for (const auto& w : r.witnesses)
      ws.push_back({{"kind", w.kind},
                    {"point", labeled_json(poly->labels(), w.point)},
                    {"H", round_bits(w.measurement)},
                    {"S", round_bits(w.mixing)}});
    o.report = {{"evaluated", r.evaluated}, {"max_gap", round_bits(r.max_gap)}, {"seed", g.seed}, {"witnesses", ws}};
    o.table = "evaluated " + std::to_string(r.evaluated) + " states, max |H - S| = " + format_bits(r.max_gap) + "\n";
    for (const auto& w : r.witnesses)
      o.table += "  " + w.kind + " " + show_labeled(poly->labels(), w.point) + "  H = " + format_bits(w.measurement) +
                 "  S = " + format_bits(w.mixing) + "\n";
    o.table += r.clean() ? "no witness\n" : std::to_string(r.witnesses.size()) + " witnesses\n";
    return o;
  });

  // verify-paper
  auto* vp = app.add_subcommand("verify-paper", "Reproduce every published example");
  vp->add_option("--filter", filter, "Run only checks whose id contains this text");
  on(vp, [&] {
    auto checks = verify_paper(filter);
    Outcome o;
    o.is_check = true;
    ojson arr = ojson::array();
    std::size_t passed = 0;
    for (const auto& c : checks) {
      passed += c.pass;
      arr.push_back({{"id", c.id}, {"description", c.description}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
      o.table += std::string(c.pass ? "PASS " : "FAIL ") + c.id + ": " + c.description + " (expected " + c.expected +
                 ", got " + c.actual + ")\n";
    }
    o.passed = passed == checks.size() && !checks.empty();
    o.report = {{"checks", arr}, {"passed", passed}, {"total", checks.size()}};
    o.table += std::to_string(passed) + "/" + std::to_string(checks.size()) + " checks passed\n";
    return o;
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInputError;
  }
  if (!action) {
    err << app.help();
    return kExitInputError;
  }

  try {
    Outcome o = action();
    if (g.format == "json") out << o.report.dump(2) << "\n";
    else out << o.table;
    if (!o.is_check || g.expect == "any") return kExitOk;
    bool wanted = g.expect == "satisfied" ? o.passed : !o.passed;
    return wanted ? kExitOk : kExitCheckFailed;
  } catch (const ConstructionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace gptent::cli
