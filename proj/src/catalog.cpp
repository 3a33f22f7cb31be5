#include "gptent/catalog.hpp"

#include <cmath>
#include <numbers>

namespace gptent::catalog {

namespace {

RationalVector rationals(std::initializer_list<const char*> texts) {
  RationalVector v;
  for (const char* t : texts) v.push_back(parse_rational(t));
  return v;
}

State state_of(const TestSpacePtr& space, const std::map<std::string, Rational>& values) {
  auto v = validate_state(space, values);
  if (!v.ok()) throw ModelError("builtin state is invalid: " + v.violations.front().message);
  return *v.state;
}

void add_system(ModelBundle& b, const TestSpacePtr& s) { b.systems.emplace(s->name(), s); }

}  // namespace

TestSpacePtr squit() { return make_space("squit", {{"a", "a'"}, {"b", "b'"}}); }

TestSpacePtr firefly() { return make_space("firefly", {{"a", "x", "b"}, {"b", "y", "c"}, {"c", "z", "a"}}); }

TestSpacePtr bit(std::string name) { return classical_space(std::move(name), {"0", "1"}); }

TestSpacePtr classical(std::size_t n) {
  if (n == 0) throw ModelError("a classical system needs at least one outcome");
  std::vector<std::string> outcomes;
  for (std::size_t i = 0; i < n; ++i) outcomes.push_back(std::to_string(i));
  return classical_space("classical" + std::to_string(n), outcomes);
}

State firefly_state(std::string_view name) {
  auto space = firefly();
  const Rational h(1, 2), one(1), zero(0);
  if (name == "alpha") return state_of(space, {{"a", h}, {"b", h}, {"c", h}, {"x", zero}, {"y", zero}, {"z", zero}});
  if (name == "beta") return state_of(space, {{"a", zero}, {"b", one}, {"c", zero}, {"x", zero}, {"y", zero}, {"z", one}});
  if (name == "gamma") return state_of(space, {{"a", zero}, {"b", zero}, {"c", zero}, {"x", one}, {"y", one}, {"z", one}});
  if (name == "omega") return mix({h, h}, {firefly_state("beta"), firefly_state("gamma")});
  throw ModelError("unknown firefly state '" + std::string(name) + "'");
}

JointState example4_state() {
  auto a = bit("A");
  auto b = bit("B");
  auto c = make_space("C", {{"e", "e'"}, {"f", "f'"}});
  auto sys = std::make_shared<const CompositeSystem>(std::vector<TestSpacePtr>{a, b, c}, CompositeMode::adaptive);
  RationalVector values(sys->cell_count(), Rational(0));
  const Rational q(1, 4);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      values[sys->encode({x, y, c->outcome_index(x ? "e'" : "e")})] = q;
      values[sys->encode({x, y, c->outcome_index(y ? "f'" : "f")})] = q;
    }
  return JointState(sys, std::move(values));
}

Ensemble example5_ensemble() {
  auto b = make_space("B", {{"f", "f'"}, {"g", "g'"}});
  const Rational one(1), zero(0), h(1, 2);
  Ensemble e;
  e.weights = {h, h};
  e.states = {state_of(b, {{"f", one}, {"f'", zero}, {"g", one}, {"g'", zero}}),
              state_of(b, {{"f", one}, {"f'", zero}, {"g", zero}, {"g'", one}})};
  e.labels = {"0", "1"};
  return e;
}

JointState example5_state() { return record_state(example5_ensemble()); }

JointState van_dam_table() {
  auto e1 = classical_space("E1", {"0", "1"});
  auto e2 = classical_space("E2", {"0", "1"});
  auto f = classical_space("F", {"0", "1"});
  auto b = pr_side('B');
  auto sys = std::make_shared<const CompositeSystem>(std::vector<TestSpacePtr>{e1, e2, f, b}, CompositeMode::adaptive);
  RationalVector values(sys->cell_count(), Rational(0));
  // Row E1 E2 F, then Bob's outcome on {b1,b1'} and on {b2,b2'}.
  const std::vector<std::tuple<const char*, const char*, const char*>> rows = {
      {"000", "b1", "b2"}, {"001", "b1'", "b2'"}, {"111", "b1", "b2"}, {"110", "b1'", "b2'"},
      {"010", "b1", "b2'"}, {"011", "b1'", "b2"}, {"101", "b1", "b2'"}, {"100", "b1'", "b2"}};
  const Rational eighth(1, 8);
  for (const auto& [row, first, second] : rows) {
    std::string r(row);
    std::vector<std::size_t> tuple{static_cast<std::size_t>(r[0] - '0'), static_cast<std::size_t>(r[1] - '0'),
                                   static_cast<std::size_t>(r[2] - '0'), 0};
    tuple[3] = b->outcome_index(first);
    values[sys->encode(tuple)] = eighth;
    tuple[3] = b->outcome_index(second);
    values[sys->encode(tuple)] = eighth;
  }
  return JointState(sys, std::move(values));
}

StateSpacePolytope square() {
  return StateSpacePolytope({"x", "y"}, {rationals({"0", "0"}), rationals({"1", "0"}), rationals({"1", "1"}),
                                         rationals({"0", "1"})});
}

StateSpacePolytope pentagon() {
  std::vector<RationalVector> vs;
  for (int k = 0; k < 5; ++k) {
    double angle = 2.0 * std::numbers::pi * k / 5.0;
    vs.push_back({Rational(static_cast<long>(std::lround(1000 * std::cos(angle))), 1000),
                  Rational(static_cast<long>(std::lround(1000 * std::sin(angle))), 1000)});
  }
  return StateSpacePolytope({"x", "y"}, std::move(vs));
}

StateSpacePolytope prism() {
  std::vector<RationalVector> vs;
  for (const char* z : {"0", "1"}) {
    vs.push_back(rationals({"0", "0", z}));
    vs.push_back(rationals({"1", "0", z}));
    vs.push_back(rationals({"1", "1", z}));
    vs.push_back(rationals({"0", "1", z}));
  }
  return StateSpacePolytope({"x", "y", "z"}, std::move(vs));
}

StateSpacePolytope tetrahedron() {
  return StateSpacePolytope({"x", "y", "z"}, {rationals({"0", "0", "0"}), rationals({"1", "0", "0"}),
                                              rationals({"0", "1", "0"}), rationals({"0", "0", "1"})});
}

std::vector<std::string> builtin_names() {
  return {"squit",   "firefly",  "bit",    "classical3", "pr_box", "example4",
          "example5", "vandam", "square", "pentagon",   "prism",  "tetrahedron"};
}

ModelBundle builtin(std::string_view name) {
  ModelBundle b;
  const Rational h(1, 2), one(1), zero(0), q(1, 4), tq(3, 4);
  if (name == "squit") {
    auto s = squit();
    add_system(b, s);
    b.polytopes.emplace("squit", enumerate_vertices(*s));
    b.states.emplace("mixed", state_of(s, {{"a", h}, {"a'", h}, {"b", h}, {"b'", h}}));
    b.states.emplace("edge", state_of(s, {{"a", one}, {"a'", zero}, {"b", h}, {"b'", h}}));
    b.states.emplace("quarter", state_of(s, {{"a", q}, {"a'", tq}, {"b", h}, {"b'", h}}));
    b.states.emplace("alpha1", state_of(s, {{"a", one}, {"a'", zero}, {"b", one}, {"b'", zero}}));
  } else if (name == "firefly") {
    auto s = firefly();
    add_system(b, s);
    b.polytopes.emplace("firefly", enumerate_vertices(*s));
    for (const char* n : {"alpha", "beta", "gamma", "omega"}) b.states.emplace(n, firefly_state(n));
  } else if (name == "bit") {
    auto s = bit();
    add_system(b, s);
    b.polytopes.emplace("bit", enumerate_vertices(*s));
    b.states.emplace("zero", state_of(s, {{"0", one}, {"1", zero}}));
    b.states.emplace("uniform", state_of(s, {{"0", h}, {"1", h}}));
    b.states.emplace("biased", state_of(s, {{"0", q}, {"1", tq}}));
  } else if (name.substr(0, 9) == "classical") {
    std::size_t n = 0;
    std::string digits(name.substr(9));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 3) {
      throw ModelError("unknown builtin '" + std::string(name) + "'");
    }
    n = std::stoul(digits);
    auto s = classical(n);
    add_system(b, s);
    b.polytopes.emplace(s->name(), enumerate_vertices(*s));
    std::map<std::string, Rational> uniform;
    for (const auto& x : s->outcomes()) uniform[x] = Rational(1, static_cast<long>(n));
    b.states.emplace("uniform", state_of(s, uniform));
  } else if (name == "pr_box") {
    JointState pr = pr_box();
    for (const auto& c : pr.system()->components()) add_system(b, c);
    b.composites.emplace("AB", pr.system());
    b.joint_states.emplace("pr", pr);
  } else if (name == "example4") {
    JointState j = example4_state();
    for (const auto& c : j.system()->components()) add_system(b, c);
    b.composites.emplace("ABC", j.system());
    b.joint_states.emplace("omega", j);
  } else if (name == "example5") {
    Ensemble e = example5_ensemble();
    JointState j = record_state(e);
    for (const auto& c : j.system()->components()) add_system(b, c);
    b.composites.emplace("AB", j.system());
    b.joint_states.emplace("omega", j);
    b.ensembles.emplace("ensemble", e);
  } else if (name == "vandam") {
    JointState table = van_dam_table();
    ICProtocol p = van_dam_protocol();
    for (const auto& c : table.system()->components()) add_system(b, c);
    for (const auto& c : p.shared->system()->components()) add_system(b, c);
    b.composites.emplace("EFB", table.system());
    b.composites.emplace("AB", p.shared->system());
    b.joint_states.emplace("efb", table);
    b.joint_states.emplace("pr", *p.shared);
    b.protocols.emplace("vandam", p);
  } else if (name == "square") {
    b.polytopes.emplace("square", square());
  } else if (name == "pentagon") {
    b.polytopes.emplace("pentagon", pentagon());
  } else if (name == "prism") {
    b.polytopes.emplace("prism", prism());
  } else if (name == "tetrahedron") {
    b.polytopes.emplace("tetrahedron", tetrahedron());
  } else {
    throw ModelError("unknown builtin '" + std::string(name) + "'");
  }
  return b;
}

}  // namespace gptent::catalog
