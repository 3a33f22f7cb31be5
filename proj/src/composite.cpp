#include "gptent/composite.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>

namespace gptent {

namespace {

using Spaces = std::vector<const TestSpace*>;

Spaces spaces_of(const CompositeSystem& system) {
  Spaces out;
  for (const auto& c : system.components()) out.push_back(c.get());
  return out;
}

// Row-major cell indexing over a list of spaces.
struct Layout {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> strides;
  std::size_t cells = 1;

  explicit Layout(const Spaces& spaces) {
    sizes.reserve(spaces.size());
    for (const auto* s : spaces) sizes.push_back(s->outcome_count());
    strides.assign(sizes.size(), 1);
    for (std::size_t i = sizes.size(); i-- > 0;) {
      strides[i] = cells;
      cells *= sizes[i];
    }
  }
  std::size_t digit(std::size_t cell, std::size_t pos) const { return cell / strides[pos] % sizes[pos]; }
};

std::vector<std::vector<bool>> first_test_masks(const Spaces& spaces) {
  std::vector<std::vector<bool>> masks;
  for (const auto* s : spaces) {
    std::vector<bool> m(s->outcome_count(), false);
    for (auto x : s->test_outcomes(0)) m[x] = true;
    masks.push_back(std::move(m));
  }
  return masks;
}

// Sums the discarded positions over their first tests.
RationalVector project(const Spaces& spaces, const RationalVector& values, const std::vector<std::size_t>& keep) {
  Layout from(spaces);
  Spaces kept;
  for (auto p : keep) kept.push_back(spaces[p]);
  Layout to(kept);
  auto masks = first_test_masks(spaces);
  std::vector<bool> is_kept(spaces.size(), false);
  for (auto p : keep) is_kept[p] = true;
  RationalVector out(to.cells, Rational(0));
  for (std::size_t cell = 0; cell < from.cells; ++cell) {
    if (is_zero(values[cell])) continue;
    std::size_t target = 0;
    bool counted = true;
    for (std::size_t p = 0, k = 0; p < spaces.size(); ++p) {
      std::size_t d = from.digit(cell, p);
      if (is_kept[p]) {
        target += d * to.strides[k++];
      } else if (!masks[p][d]) {
        counted = false;
        break;
      }
    }
    if (counted) out[target] += values[cell];
  }
  return out;
}

// Cells with position `pos` fixed to `outcome`, indexed over the other positions.
RationalVector slice(const Spaces& spaces, const RationalVector& values, std::size_t pos, std::size_t outcome) {
  Layout from(spaces);
  std::size_t rest_cells = from.cells / from.sizes[pos];
  RationalVector out(rest_cells);
  std::size_t high = from.strides[pos] * from.sizes[pos];
  for (std::size_t r = 0; r < rest_cells; ++r) {
    std::size_t upper = r / from.strides[pos];
    std::size_t lower = r % from.strides[pos];
    out[r] = values[upper * high + outcome * from.strides[pos] + lower];
  }
  return out;
}

// Odometer over one entry per slot, slot i ranging over [0, bounds[i]).
template <class Fn>
void odometer(const std::vector<std::size_t>& bounds, Fn&& fn) {
  for (auto b : bounds)
    if (b == 0) return;
  std::vector<std::size_t> idx(bounds.size(), 0);
  while (true) {
    fn(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = bounds.size();
    while (i > 0) {
      --i;
      if (++idx[i] < bounds[i]) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (bounds.empty()) return;
  }
}

void collect_leaves(const AdaptiveTest& node, const Spaces& spaces, std::vector<std::size_t>& tuple,
                    std::vector<std::vector<std::size_t>>& out) {
  const auto& outcomes = spaces[node.component]->test_outcomes(node.test);
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    tuple[node.component] = outcomes[k];
    if (node.next.empty()) out.push_back(tuple);
    else collect_leaves(node.next[k], spaces, tuple, out);
  }
}

std::vector<std::vector<std::size_t>> leaves_of(const AdaptiveTest& tree, const Spaces& spaces) {
  std::vector<std::size_t> tuple(spaces.size(), 0);
  std::vector<std::vector<std::size_t>> out;
  collect_leaves(tree, spaces, tuple, out);
  std::sort(out.begin(), out.end());
  return out;
}

// All adaptive trees over the remaining positions, by first component then test.
std::vector<AdaptiveTest> trees_over(const Spaces& spaces, const std::vector<std::size_t>& remaining,
                                     std::map<std::vector<std::size_t>, std::vector<AdaptiveTest>>& memo) {
  auto it = memo.find(remaining);
  if (it != memo.end()) return it->second;
  std::vector<AdaptiveTest> out;
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    std::size_t c = remaining[i];
    std::vector<std::size_t> rest = remaining;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    std::vector<AdaptiveTest> subs;
    if (!rest.empty()) subs = trees_over(spaces, rest, memo);
    for (std::size_t t = 0; t < spaces[c]->test_count(); ++t) {
      std::size_t arity = spaces[c]->test_outcomes(t).size();
      if (rest.empty()) {
        out.push_back({c, t, {}});
        continue;
      }
      odometer(std::vector<std::size_t>(arity, subs.size()), [&](const std::vector<std::size_t>& pick) {
        AdaptiveTest node{c, t, {}};
        for (auto k : pick) node.next.push_back(subs[k]);
        out.push_back(std::move(node));
      });
    }
  }
  memo.emplace(remaining, out);
  return out;
}

AdaptiveTest default_tree(const std::vector<std::size_t>& comps, const Spaces& spaces, std::size_t from = 0) {
  AdaptiveTest node{comps[from], 0, {}};
  if (from + 1 < comps.size()) {
    node.next.assign(spaces[comps[from]]->test_outcomes(0).size(), default_tree(comps, spaces, from + 1));
  }
  return node;
}

double restricted_entropy(const RationalVector& dist, const std::vector<std::size_t>& outcomes) {
  RationalVector r;
  r.reserve(outcomes.size());
  for (auto x : outcomes) r.push_back(dist[x]);
  return shannon_entropy(std::span<const Rational>(r));
}

// Chain-rule recursion: f(R, w) = min over (c, E) of H_E(w^c) + sum_e w^c(e) f(R\c, w|e).
class ChainRule {
 public:
  explicit ChainRule(const Spaces& all) : all_(all) {}

  const std::pair<double, AdaptiveTest>& solve(const std::vector<std::size_t>& comps, const RationalVector& values) {
    std::uint64_t mask = 0;
    for (auto c : comps) mask |= std::uint64_t{1} << c;
    auto key = std::make_pair(mask, values);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    Spaces local;
    for (auto c : comps) local.push_back(all_[c]);
    std::pair<double, AdaptiveTest> best{std::numeric_limits<double>::infinity(), {}};

    if (comps.size() == 1) {
      const TestSpace& s = *local[0];
      for (std::size_t t = 0; t < s.test_count(); ++t) {
        double h = restricted_entropy(values, s.test_outcomes(t));
        if (h < best.first) best = {h, AdaptiveTest{comps[0], t, {}}};
      }
      return memo_.emplace(std::move(key), std::move(best)).first->second;
    }

    for (std::size_t pos = 0; pos < comps.size(); ++pos) {
      const TestSpace& s = *local[pos];
      RationalVector p = project(local, values, {pos});
      std::vector<std::size_t> rest = comps;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
      std::vector<std::optional<std::pair<double, AdaptiveTest>>> child(s.outcome_count());
      auto child_of = [&](std::size_t x) -> const std::pair<double, AdaptiveTest>& {
        if (!child[x]) {
          if (is_zero(p[x])) {
            child[x].emplace(0.0, default_tree(rest, all_));
          } else {
            RationalVector cond = slice(local, values, pos, x);
            for (auto& v : cond) v /= p[x];
            child[x] = solve(rest, cond);
          }
        }
        return *child[x];
      };
      for (std::size_t t = 0; t < s.test_count(); ++t) {
        const auto& outcomes = s.test_outcomes(t);
        double h = restricted_entropy(p, outcomes);
        for (auto x : outcomes)
          if (!is_zero(p[x])) h += to_double(p[x]) * child_of(x).first;
        if (h < best.first) {
          AdaptiveTest node{comps[pos], t, {}};
          for (auto x : outcomes) node.next.push_back(child_of(x).second);
          best = {h, std::move(node)};
        }
      }
    }
    return memo_.emplace(std::move(key), std::move(best)).first->second;
  }

 private:
  Spaces all_;
  std::map<std::pair<std::uint64_t, RationalVector>, std::pair<double, AdaptiveTest>> memo_;
};

std::string join_labels(const std::vector<std::string>& labels) {
  std::string s;
  for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? "," : "") + labels[i];
  return s;
}

}  // namespace

std::string to_string(CompositeMode mode) {
  switch (mode) {
    case CompositeMode::cartesian: return "cartesian";
    case CompositeMode::foulis_randall: return "fr";
    case CompositeMode::adaptive: return "adaptive";
  }
  return "fr";
}

CompositeMode parse_mode(std::string_view text) {
  if (text == "cartesian") return CompositeMode::cartesian;
  if (text == "fr" || text == "foulis_randall") return CompositeMode::foulis_randall;
  if (text == "adaptive") return CompositeMode::adaptive;
  throw ModelError("unknown composite mode '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// CompositeSystem

CompositeSystem::CompositeSystem(std::vector<TestSpacePtr> components, CompositeMode mode)
    : components_(std::move(components)), mode_(mode) {
  if (components_.size() < 2) throw ModelError("a composite needs at least two components");
  if (components_.size() > 63) throw ModelError("too many components");
  for (const auto& c : components_)
    if (!c) throw ModelError("null component");
  Layout layout(spaces_of(*this));
  strides_ = layout.strides;
  cells_ = layout.cells;
}

std::size_t CompositeSystem::encode(const std::vector<std::size_t>& tuple) const {
  if (tuple.size() != size()) throw ModelError("tuple arity does not match the composite");
  std::size_t cell = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= components_[i]->outcome_count()) throw ModelError("outcome index out of range");
    cell += tuple[i] * strides_[i];
  }
  return cell;
}

std::vector<std::size_t> CompositeSystem::decode(std::size_t cell) const {
  std::vector<std::size_t> tuple(size());
  for (std::size_t i = 0; i < size(); ++i) tuple[i] = cell / strides_[i] % components_[i]->outcome_count();
  return tuple;
}

std::string CompositeSystem::cell_key(std::size_t cell) const {
  auto tuple = decode(cell);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < size(); ++i) labels.push_back(components_[i]->outcomes()[tuple[i]]);
  return join_labels(labels);
}

std::size_t CompositeSystem::parse_cell_key(std::string_view key) const {
  std::vector<std::size_t> tuple;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = key.find(',', start);
    std::string_view part = key.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (tuple.size() >= size()) throw ModelError("tuple '" + std::string(key) + "' has too many outcomes");
    auto idx = components_[tuple.size()]->find_outcome(part);
    if (!idx) {
      throw ModelError("tuple '" + std::string(key) + "': unknown outcome '" + std::string(part) + "' for " +
                       components_[tuple.size()]->name());
    }
    tuple.push_back(*idx);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (tuple.size() != size()) throw ModelError("tuple '" + std::string(key) + "' has too few outcomes");
  return encode(tuple);
}

CompositeSystem CompositeSystem::subsystem(const std::vector<std::size_t>& keep) const {
  std::vector<TestSpacePtr> parts;
  for (auto k : keep) parts.push_back(components_.at(k));
  return CompositeSystem(std::move(parts), mode_);
}

// ---------------------------------------------------------------------------
// Test families

std::vector<std::vector<std::size_t>> leaf_tuples(const AdaptiveTest& tree, const CompositeSystem& system) {
  return leaves_of(tree, spaces_of(system));
}

std::string describe(const AdaptiveTest& tree, const CompositeSystem& system) {
  const TestSpace& s = system.component(tree.component);
  std::string out = s.name() + s.tests()[tree.test].id;
  if (tree.next.empty()) return out;
  out += " -> [";
  const auto& outcomes = s.test_outcomes(tree.test);
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    out += (k ? ", " : "") + s.outcomes()[outcomes[k]] + ": " + describe(tree.next[k], system);
  }
  return out + "]";
}

std::vector<std::vector<std::pair<std::string, std::string>>> cartesian_product(const TestSpace& a,
                                                                               const TestSpace& b) {
  std::vector<std::vector<std::pair<std::string, std::string>>> tests;
  for (const auto& e : a.tests())
    for (const auto& f : b.tests()) {
      std::vector<std::pair<std::string, std::string>> cells;
      for (const auto& x : e.outcomes)
        for (const auto& y : f.outcomes) cells.emplace_back(x, y);
      tests.push_back(std::move(cells));
    }
  return tests;
}

std::vector<AdaptiveTest> fr_product(const TestSpace& a, const TestSpace& b) {
  Spaces spaces{&a, &b};
  std::vector<AdaptiveTest> out;
  std::set<std::vector<std::vector<std::size_t>>> seen;
  for (std::size_t first = 0; first < 2; ++first) {
    const TestSpace& s = *spaces[first];
    const TestSpace& o = *spaces[1 - first];
    for (std::size_t t = 0; t < s.test_count(); ++t) {
      std::size_t arity = s.test_outcomes(t).size();
      odometer(std::vector<std::size_t>(arity, o.test_count()), [&](const std::vector<std::size_t>& pick) {
        AdaptiveTest node{first, t, {}};
        for (auto u : pick) node.next.push_back({1 - first, u, {}});
        if (seen.insert(leaves_of(node, spaces)).second) out.push_back(std::move(node));
      });
    }
  }
  return out;
}

void for_each_adaptive_test(const CompositeSystem& system, const std::function<bool(const AdaptiveTest&)>& visit) {
  Spaces spaces = spaces_of(system);
  std::vector<std::size_t> all(system.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::map<std::vector<std::size_t>, std::vector<AdaptiveTest>> memo;
  for (const auto& t : trees_over(spaces, all, memo))
    if (!visit(t)) return;
}

std::vector<AdaptiveTest> adaptive_tests(const CompositeSystem& system) {
  Spaces spaces = spaces_of(system);
  std::vector<AdaptiveTest> out;
  std::set<std::vector<std::vector<std::size_t>>> seen;
  for_each_adaptive_test(system, [&](const AdaptiveTest& t) {
    if (seen.insert(leaves_of(t, spaces)).second) out.push_back(t);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// JointState

JointState::JointState(CompositePtr system, RationalVector values)
    : system_(std::move(system)), values_(std::move(values)) {
  if (!system_) throw ModelError("joint state without a composite");
  if (values_.size() != system_->cell_count()) {
    throw ModelError("joint state has " + std::to_string(values_.size()) + " values, composite has " +
                     std::to_string(system_->cell_count()) + " cells");
  }
  for (std::size_t cell = 0; cell < values_.size(); ++cell) {
    if (values_[cell] < 0 || values_[cell] > 1) {
      throw ModelError("value of (" + system_->cell_key(cell) + ") is " + to_string(values_[cell]) +
                       ", outside [0,1]");
    }
  }
  std::vector<std::size_t> test_counts;
  for (const auto& c : system_->components()) test_counts.push_back(c->test_count());
  std::string error;
  odometer(test_counts, [&](const std::vector<std::size_t>& tests) {
    if (!error.empty()) return;
    std::vector<std::size_t> arity;
    for (std::size_t i = 0; i < tests.size(); ++i) arity.push_back(system_->component(i).test_outcomes(tests[i]).size());
    Rational sum = 0;
    odometer(arity, [&](const std::vector<std::size_t>& pick) {
      std::vector<std::size_t> tuple(tests.size());
      for (std::size_t i = 0; i < tests.size(); ++i) tuple[i] = system_->component(i).test_outcomes(tests[i])[pick[i]];
      sum += values_[system_->encode(tuple)];
    });
    if (sum != 1) {
      std::string name;
      for (std::size_t i = 0; i < tests.size(); ++i) name += (i ? " x " : "") + system_->component(i).tests()[tests[i]].id;
      error = "product test " + name + " sums to " + to_string(sum);
    }
  });
  if (!error.empty()) throw ModelError(error);
}

NonSignalingResult is_nonsignaling(const JointState& joint) {
  const CompositeSystem& sys = *joint.system();
  NonSignalingResult result;
  for (std::size_t c = 0; c < sys.size(); ++c) {
    const TestSpace& s = sys.component(c);
    if (s.test_count() < 2) continue;
    std::vector<std::size_t> bounds;
    for (std::size_t i = 0; i < sys.size(); ++i) bounds.push_back(i == c ? 1 : sys.component(i).outcome_count());
    bool found = false;
    odometer(bounds, [&](const std::vector<std::size_t>& fixed) {
      if (found) return;
      std::vector<std::size_t> tuple = fixed;
      auto sum_over = [&](std::size_t t) {
        Rational sum = 0;
        for (auto x : s.test_outcomes(t)) {
          tuple[c] = x;
          sum += joint.values()[sys.encode(tuple)];
        }
        return sum;
      };
      Rational base = sum_over(0);
      for (std::size_t t = 1; t < s.test_count(); ++t) {
        Rational other = sum_over(t);
        if (other == base) continue;
        SignalingViolation v;
        v.component = c;
        std::string where;
        for (std::size_t i = 0; i < sys.size(); ++i) {
          v.others.push_back(i == c ? "" : sys.component(i).outcomes()[fixed[i]]);
          if (i != c) where += (where.empty() ? "" : ", ") + sys.component(i).name() + " = " + v.others.back();
        }
        v.test_a = 0;
        v.test_b = t;
        v.sum_a = base;
        v.sum_b = other;
        v.message = "signaling at " + s.name() + " given " + where + ": test " + s.tests()[0].id + " sums to " +
                    to_string(base) + " but " + s.tests()[t].id + " sums to " + to_string(other);
        result.violation = std::move(v);
        found = true;
        return;
      }
    });
    if (found) return result;
  }
  return result;
}

void require_nonsignaling(const JointState& joint) {
  auto r = is_nonsignaling(joint);
  if (!r.ok()) throw SignalingError(r.violation->message);
}

State marginal_state(const JointState& joint, std::size_t component) {
  require_nonsignaling(joint);
  const auto& sys = *joint.system();
  if (component >= sys.size()) throw ModelError("component index out of range");
  return State(sys.components()[component], project(spaces_of(sys), joint.values(), {component}));
}

JointState marginal(const JointState& joint, const std::vector<std::size_t>& keep) {
  require_nonsignaling(joint);
  const auto& sys = *joint.system();
  if (!std::is_sorted(keep.begin(), keep.end()) || std::adjacent_find(keep.begin(), keep.end()) != keep.end() ||
      (!keep.empty() && keep.back() >= sys.size())) {
    throw ModelError("marginal components must be distinct, ascending and in range");
  }
  auto sub = std::make_shared<const CompositeSystem>(sys.subsystem(keep));
  return JointState(sub, project(spaces_of(sys), joint.values(), keep));
}

ConditionalView conditional(const JointState& joint, std::size_t component, std::string_view outcome) {
  const auto& sys = *joint.system();
  if (component >= sys.size()) throw ModelError("component index out of range");
  std::size_t x = sys.component(component).outcome_index(outcome);
  require_nonsignaling(joint);
  Spaces spaces = spaces_of(sys);
  ConditionalView view;
  for (std::size_t i = 0; i < sys.size(); ++i)
    if (i != component) view.components.push_back(i);
  view.probability = project(spaces, joint.values(), {component})[x];
  view.values = slice(spaces, joint.values(), component, x);
  if (is_zero(view.probability)) {
    view.zero = true;
    for (auto& v : view.values) v = 0;
    return view;
  }
  for (auto& v : view.values) v /= view.probability;
  if (view.components.size() == 1) {
    view.state.emplace(sys.components()[view.components[0]], view.values);
  } else {
    view.joint.emplace(std::make_shared<const CompositeSystem>(sys.subsystem(view.components)), view.values);
  }
  return view;
}

JointState product_state(const std::vector<State>& states, CompositeMode mode) {
  std::vector<TestSpacePtr> spaces;
  for (const auto& s : states) spaces.push_back(s.space());
  auto sys = std::make_shared<const CompositeSystem>(spaces, mode);
  RationalVector values(sys->cell_count());
  for (std::size_t cell = 0; cell < values.size(); ++cell) {
    auto tuple = sys->decode(cell);
    Rational v = 1;
    for (std::size_t i = 0; i < tuple.size(); ++i) v *= states[i][tuple[i]];
    values[cell] = v;
  }
  return JointState(sys, std::move(values));
}

double tree_entropy(const JointState& joint, const AdaptiveTest& tree) {
  RationalVector p;
  for (const auto& t : leaf_tuples(tree, *joint.system())) p.push_back(joint.value(t));
  return shannon_entropy(std::span<const Rational>(p));
}

EntropyResult<AdaptiveTest> joint_measurement_entropy(const JointState& joint) {
  require_nonsignaling(joint);
  const auto& sys = *joint.system();
  if (sys.adaptive()) {
    std::vector<std::size_t> all(sys.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    ChainRule dp(spaces_of(sys));
    const auto& r = dp.solve(all, joint.values());
    return {r.first, r.second};
  }
  std::vector<std::size_t> test_counts;
  for (const auto& c : sys.components()) test_counts.push_back(c->test_count());
  EntropyResult<AdaptiveTest> best{std::numeric_limits<double>::infinity(), {}};
  odometer(test_counts, [&](const std::vector<std::size_t>& tests) {
    AdaptiveTest tree{sys.size() - 1, tests.back(), {}};
    for (std::size_t i = sys.size() - 1; i-- > 0;) {
      AdaptiveTest parent{i, tests[i], {}};
      parent.next.assign(sys.component(i).test_outcomes(tests[i]).size(), tree);
      tree = std::move(parent);
    }
    double h = tree_entropy(joint, tree);
    if (h < best.bits) best = {h, std::move(tree)};
  });
  return best;
}

double subset_entropy(const JointState& joint, const std::vector<std::size_t>& subset) {
  if (subset.empty()) return 0.0;
  if (subset.size() == 1) return measurement_entropy(marginal_state(joint, subset[0])).bits;
  if (subset.size() == joint.system()->size()) return joint_measurement_entropy(joint).bits;
  return joint_measurement_entropy(marginal(joint, subset)).bits;
}

}  // namespace gptent
