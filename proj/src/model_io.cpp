#include "gptent/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gptent {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

// Re-raises a library error with a prefix, keeping its type.
template <class Fn>
auto in_context(const std::string& where, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidDistribution& e) {
    throw InvalidDistribution(where + ": " + e.what());
  } catch (const SignalingError& e) {
    throw SignalingError(where + ": " + e.what());
  } catch (const GeometryError& e) {
    throw GeometryError(where + ": " + e.what());
  } catch (const ModelError& e) {
    throw ModelError(where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelError(where + ": " + e.what());
  } catch (const json::exception& e) {
    throw ModelError(where + ": " + e.what());
  }
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ModelError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::vector<std::string> string_list(const json& arr) {
  if (!arr.is_array()) throw ModelError("expected a list of labels");
  std::vector<std::string> out;
  for (const auto& v : arr) out.push_back(v.get<std::string>());
  return out;
}

TestSpacePtr parse_system(const std::string& key, const json& j) {
  std::string name = j.contains("name") ? j.at("name").get<std::string>() : key;
  std::vector<std::string> outcomes;
  if (j.contains("outcomes")) outcomes = string_list(j.at("outcomes"));
  std::vector<Test> tests;
  for (const auto& t : field(j, "tests")) {
    if (t.is_object()) {
      tests.push_back({t.contains("id") ? t.at("id").get<std::string>() : "", string_list(field(t, "outcomes"))});
    } else {
      tests.push_back({"", string_list(t)});
    }
  }
  return make_space(std::move(name), std::move(outcomes), std::move(tests));
}

State parse_state(const TestSpacePtr& space, const json& values) {
  if (!values.is_object()) throw ModelError("state values must be an object of outcome -> probability");
  std::map<std::string, Rational> candidate;
  for (auto it = values.begin(); it != values.end(); ++it) candidate[it.key()] = rational_from_json(it.value());
  auto v = validate_state(space, candidate);
  if (!v.ok()) {
    std::string msg;
    for (const auto& x : v.violations) msg += (msg.empty() ? "" : "; ") + x.message;
    throw ModelError(msg);
  }
  return *v.state;
}

const TestSpacePtr& lookup_system(const ModelBundle& b, const std::string& name) {
  auto it = b.systems.find(name);
  if (it == b.systems.end()) throw ModelError("unknown system '" + name + "'");
  return it->second;
}

CompositePtr parse_composite(ModelBundle& b, const std::string& key, const json& j) {
  std::vector<TestSpacePtr> parts;
  std::size_t inline_count = 0;
  for (const auto& c : field(j, "components")) {
    if (c.is_string()) {
      parts.push_back(lookup_system(b, c.get<std::string>()));
    } else {
      auto space = parse_system(key + "." + std::to_string(inline_count++), c);
      b.systems.emplace(space->name(), space);
      parts.push_back(space);
    }
  }
  CompositeMode mode = j.contains("mode") ? parse_mode(j.at("mode").get<std::string>()) : CompositeMode::foulis_randall;
  return std::make_shared<const CompositeSystem>(std::move(parts), mode);
}

JointState parse_joint(const CompositePtr& sys, const json& values) {
  if (!values.is_object()) throw ModelError("joint values must be an object of \"e,f,...\" -> probability");
  RationalVector v(sys->cell_count(), Rational(0));
  for (auto it = values.begin(); it != values.end(); ++it) v[sys->parse_cell_key(it.key())] = rational_from_json(it.value());
  return JointState(sys, std::move(v));
}

template <class T>
std::vector<T> list_of(const json& j) {
  return j.get<std::vector<T>>();
}

ICProtocol parse_protocol(const ModelBundle& b, const json& j) {
  ICProtocol p;
  p.n = field(j, "n").get<std::size_t>();
  p.m = field(j, "m").get<std::size_t>();
  if (j.contains("shared") && !j.at("shared").is_null()) {
    std::string ref = j.at("shared").get<std::string>();
    auto it = b.joint_states.find(ref);
    if (it == b.joint_states.end()) throw ModelError("unknown joint state '" + ref + "'");
    p.shared = it->second;
  }
  if (j.contains("alice_test")) p.alice_test = list_of<std::size_t>(j.at("alice_test"));
  p.alice_message = list_of<std::vector<std::size_t>>(field(j, "alice_message"));
  p.bob_test = list_of<std::vector<std::size_t>>(field(j, "bob_test"));
  p.bob_guess = list_of<std::vector<std::vector<int>>>(field(j, "bob_guess"));
  validate_protocol(p);
  return p;
}

std::string system_name(const ModelBundle& b, const TestSpace& s) {
  auto it = b.systems.find(s.name());
  if (it != b.systems.end() && *it->second == s) return it->first;
  for (const auto& [name, space] : b.systems)
    if (*space == s) return name;
  throw ModelError("system '" + s.name() + "' is not registered in the bundle");
}

bool same_composite(const CompositeSystem& a, const CompositeSystem& b) {
  if (a.mode() != b.mode() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a.component(i) == b.component(i))) return false;
  return true;
}

std::string composite_name(const ModelBundle& b, const CompositeSystem& c) {
  for (const auto& [name, sys] : b.composites)
    if (same_composite(*sys, c)) return name;
  throw ModelError("composite is not registered in the bundle");
}

bool same_joint(const JointState& a, const JointState& b) {
  return same_composite(*a.system(), *b.system()) && a.values() == b.values();
}

bool same_polytope(const StateSpacePolytope& a, const StateSpacePolytope& b) {
  return a.labels() == b.labels() && a.vertices() == b.vertices() && a.source() == b.source();
}

bool same_protocol(const ICProtocol& a, const ICProtocol& b) {
  if (a.shared.has_value() != b.shared.has_value()) return false;
  if (a.shared && !same_joint(*a.shared, *b.shared)) return false;
  return a.n == b.n && a.m == b.m && a.alice_test == b.alice_test && a.alice_message == b.alice_message &&
         a.bob_test == b.bob_test && a.bob_guess == b.bob_guess;
}

ojson state_values(const State& s) {
  ojson v = ojson::object();
  for (std::size_t i = 0; i < s.space()->outcome_count(); ++i) v[s.space()->outcomes()[i]] = rational_json(s[i]);
  return v;
}

}  // namespace

void ModelBundle::merge(const ModelBundle& other) {
  auto add = [](auto& into, const auto& from, const char* kind) {
    for (const auto& [k, v] : from)
      if (!into.emplace(k, v).second) throw ModelError(std::string("duplicate ") + kind + " '" + k + "'");
  };
  for (const auto& [k, v] : other.systems) {
    auto it = systems.find(k);
    if (it != systems.end() && !(*it->second == *v)) throw ModelError("duplicate system '" + k + "'");
    systems.emplace(k, v);
  }
  add(polytopes, other.polytopes, "polytope");
  add(states, other.states, "state");
  add(composites, other.composites, "composite");
  add(joint_states, other.joint_states, "joint state");
  add(ensembles, other.ensembles, "ensemble");
  add(protocols, other.protocols, "protocol");
}

ojson rational_json(const Rational& value) { return to_string(value); }

Rational rational_from_json(const json& value) {
  if (value.is_number_integer()) return Rational(value.get<long long>());
  if (value.is_string()) return parse_rational(value.get<std::string>());
  throw ModelError("probabilities must be \"p/q\" strings or integers, got " + value.dump());
}

ojson vector_json(const RationalVector& values) {
  ojson arr = ojson::array();
  for (const auto& v : values) arr.push_back(rational_json(v));
  return arr;
}

std::string format_bits(double bits) {
  if (std::abs(bits) < 5e-13) bits = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", bits);
  return buf;
}

double round_bits(double bits) {
  double r = std::round(bits * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;
}

ModelBundle parse_model(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         e.what(),
                     line, column);
  }
  if (!root.is_object()) throw ModelError("model file must be a JSON object");

  ModelBundle b;
  if (root.contains("system")) {
    auto space = in_context("system", [&] { return parse_system("system", root.at("system")); });
    b.systems.emplace(space->name(), space);
  }
  if (root.contains("systems")) {
    for (auto it = root.at("systems").begin(); it != root.at("systems").end(); ++it) {
      auto space = in_context("system '" + it.key() + "'", [&] { return parse_system(it.key(), it.value()); });
      b.systems.emplace(it.key(), space);
    }
  }
  auto parse_polytope = [&](const std::string& name, const json& j) {
    if (j.contains("from_system")) return enumerate_vertices(*lookup_system(b, j.at("from_system").get<std::string>()));
    std::vector<RationalVector> vertices;
    for (const auto& row : field(j, "vertices")) {
      RationalVector v;
      for (const auto& x : row) v.push_back(rational_from_json(x));
      vertices.push_back(std::move(v));
    }
    auto source = j.value("source", std::string("explicit")) == "test_space" ? StateSpacePolytope::Source::test_space
                                                                           : StateSpacePolytope::Source::explicit_vertices;
    (void)name;
    return StateSpacePolytope(string_list(field(j, "labels")), std::move(vertices), source);
  };
  if (root.contains("polytope")) {
    b.polytopes.emplace("polytope", in_context("polytope", [&] { return parse_polytope("polytope", root.at("polytope")); }));
  }
  if (root.contains("polytopes")) {
    for (auto it = root.at("polytopes").begin(); it != root.at("polytopes").end(); ++it)
      b.polytopes.emplace(it.key(), in_context("polytope '" + it.key() + "'", [&] { return parse_polytope(it.key(), it.value()); }));
  }
  if (root.contains("states")) {
    for (auto it = root.at("states").begin(); it != root.at("states").end(); ++it) {
      State s = in_context("state '" + it.key() + "'", [&] {
        const json& j = it.value();
        if (j.is_object() && j.contains("system") && j.contains("values")) {
          return parse_state(lookup_system(b, j.at("system").get<std::string>()), j.at("values"));
        }
        if (b.systems.size() != 1) throw ModelError("state must name its system when the file has several");
        return parse_state(b.systems.begin()->second, j);
      });
      b.states.emplace(it.key(), std::move(s));
    }
  }
  if (root.contains("composite")) {
    b.composites.emplace("composite", in_context("composite", [&] { return parse_composite(b, "composite", root.at("composite")); }));
  }
  if (root.contains("composites")) {
    for (auto it = root.at("composites").begin(); it != root.at("composites").end(); ++it)
      b.composites.emplace(it.key(), in_context("composite '" + it.key() + "'", [&] { return parse_composite(b, it.key(), it.value()); }));
  }
  if (root.contains("joint_states")) {
    for (auto it = root.at("joint_states").begin(); it != root.at("joint_states").end(); ++it) {
      JointState s = in_context("joint state '" + it.key() + "'", [&] {
        const json& j = it.value();
        if (j.is_object() && j.contains("composite") && j.contains("values")) {
          std::string ref = j.at("composite").get<std::string>();
          auto c = b.composites.find(ref);
          if (c == b.composites.end()) throw ModelError("unknown composite '" + ref + "'");
          return parse_joint(c->second, j.at("values"));
        }
        if (b.composites.size() != 1) throw ModelError("joint state must name its composite when the file has several");
        return parse_joint(b.composites.begin()->second, j);
      });
      b.joint_states.emplace(it.key(), std::move(s));
    }
  }
  if (root.contains("ensembles")) {
    for (auto it = root.at("ensembles").begin(); it != root.at("ensembles").end(); ++it) {
      Ensemble e = in_context("ensemble '" + it.key() + "'", [&] {
        const json& j = it.value();
        const TestSpacePtr& space = lookup_system(b, field(j, "system").get<std::string>());
        Ensemble out;
        for (const auto& entry : field(j, "entries")) {
          out.weights.push_back(rational_from_json(field(entry, "weight")));
          out.states.push_back(parse_state(space, field(entry, "values")));
          if (entry.contains("label")) out.labels.push_back(entry.at("label").get<std::string>());
        }
        if (!out.labels.empty() && out.labels.size() != out.states.size()) throw ModelError("label every entry or none");
        validate_ensemble(out);
        return out;
      });
      b.ensembles.emplace(it.key(), std::move(e));
    }
  }
  if (root.contains("protocols")) {
    for (auto it = root.at("protocols").begin(); it != root.at("protocols").end(); ++it)
      b.protocols.emplace(it.key(), in_context("protocol '" + it.key() + "'", [&] { return parse_protocol(b, it.value()); }));
  }
  return b;
}

ModelBundle load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

ojson to_json(const ModelBundle& b) {
  ojson root = ojson::object();
  if (!b.systems.empty()) {
    ojson systems = ojson::object();
    for (const auto& [name, s] : b.systems) {
      ojson tests = ojson::array();
      for (const auto& t : s->tests()) tests.push_back({{"id", t.id}, {"outcomes", t.outcomes}});
      systems[name] = {{"name", s->name()}, {"outcomes", s->outcomes()}, {"tests", tests}};
    }
    root["systems"] = systems;
  }
  if (!b.polytopes.empty()) {
    ojson polys = ojson::object();
    for (const auto& [name, p] : b.polytopes) {
      ojson vs = ojson::array();
      for (const auto& v : p.vertices()) vs.push_back(vector_json(v));
      polys[name] = {{"labels", p.labels()},
                     {"vertices", vs},
                     {"source", p.source() == StateSpacePolytope::Source::test_space ? "test_space" : "explicit"}};
    }
    root["polytopes"] = polys;
  }
  if (!b.states.empty()) {
    ojson states = ojson::object();
    for (const auto& [name, s] : b.states)
      states[name] = {{"system", system_name(b, *s.space())}, {"values", state_values(s)}};
    root["states"] = states;
  }
  if (!b.composites.empty()) {
    ojson comps = ojson::object();
    for (const auto& [name, c] : b.composites) {
      ojson parts = ojson::array();
      for (const auto& s : c->components()) parts.push_back(system_name(b, *s));
      comps[name] = {{"components", parts}, {"mode", to_string(c->mode())}};
    }
    root["composites"] = comps;
  }
  if (!b.joint_states.empty()) {
    ojson joints = ojson::object();
    for (const auto& [name, j] : b.joint_states) {
      ojson values = ojson::object();
      for (std::size_t cell = 0; cell < j.values().size(); ++cell)
        if (!is_zero(j.values()[cell])) values[j.system()->cell_key(cell)] = rational_json(j.values()[cell]);
      joints[name] = {{"composite", composite_name(b, *j.system())}, {"values", values}};
    }
    root["joint_states"] = joints;
  }
  if (!b.ensembles.empty()) {
    ojson ens = ojson::object();
    for (const auto& [name, e] : b.ensembles) {
      ojson entries = ojson::array();
      for (std::size_t i = 0; i < e.states.size(); ++i) {
        ojson entry = {{"weight", rational_json(e.weights[i])}, {"values", state_values(e.states[i])}};
        if (!e.labels.empty()) entry["label"] = e.labels[i];
        entries.push_back(entry);
      }
      ens[name] = {{"system", system_name(b, *e.states.front().space())}, {"entries", entries}};
    }
    root["ensembles"] = ens;
  }
  if (!b.protocols.empty()) {
    ojson protos = ojson::object();
    for (const auto& [name, p] : b.protocols) {
      ojson shared = nullptr;
      if (p.shared) {
        for (const auto& [jn, js] : b.joint_states)
          if (same_joint(js, *p.shared)) shared = jn;
        if (shared.is_null()) throw ModelError("protocol '" + name + "' shares an unregistered joint state");
      }
      protos[name] = {{"n", p.n},
                      {"m", p.m},
                      {"shared", shared},
                      {"alice_test", p.alice_test},
                      {"alice_message", p.alice_message},
                      {"bob_test", p.bob_test},
                      {"bob_guess", p.bob_guess}};
    }
    root["protocols"] = protos;
  }
  return root;
}

bool operator==(const ModelBundle& a, const ModelBundle& b) {
  auto same_keys = [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return false;
    for (auto i = x.begin(), j = y.begin(); i != x.end(); ++i, ++j)
      if (i->first != j->first) return false;
    return true;
  };
  if (!same_keys(a.systems, b.systems) || !same_keys(a.polytopes, b.polytopes) || !same_keys(a.states, b.states) ||
      !same_keys(a.composites, b.composites) || !same_keys(a.joint_states, b.joint_states) ||
      !same_keys(a.ensembles, b.ensembles) || !same_keys(a.protocols, b.protocols)) {
    return false;
  }
  for (const auto& [k, v] : a.systems)
    if (!(*v == *b.systems.at(k))) return false;
  for (const auto& [k, v] : a.polytopes)
    if (!same_polytope(v, b.polytopes.at(k))) return false;
  for (const auto& [k, v] : a.states)
    if (!(v == b.states.at(k))) return false;
  for (const auto& [k, v] : a.composites)
    if (!same_composite(*v, *b.composites.at(k))) return false;
  for (const auto& [k, v] : a.joint_states)
    if (!same_joint(v, b.joint_states.at(k))) return false;
  for (const auto& [k, v] : a.ensembles) {
    const auto& w = b.ensembles.at(k);
    if (v.weights != w.weights || v.labels != w.labels || v.states.size() != w.states.size()) return false;
    for (std::size_t i = 0; i < v.states.size(); ++i)
      if (!(v.states[i] == w.states[i])) return false;
  }
  for (const auto& [k, v] : a.protocols)
    if (!same_protocol(v, b.protocols.at(k))) return false;
  return true;
}

}  // namespace gptent
