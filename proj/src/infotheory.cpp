#include "gptent/infotheory.hpp"

#include "gptent/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace gptent {

namespace {

Subset unite(const Subset& a, const Subset& b) {
  Subset u;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return u;
}

void check_disjoint(const JointState& joint, std::initializer_list<const Subset*> subsets) {
  std::vector<bool> used(joint.system()->size(), false);
  for (const Subset* s : subsets) {
    for (auto i : *s) {
      if (i >= used.size()) throw ModelError("component index " + std::to_string(i) + " out of range");
      if (used[i]) throw ModelError("component subsets overlap at index " + std::to_string(i));
      used[i] = true;
    }
  }
}

Subset sorted(Subset s) {
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

double conditional_entropy(const JointState& joint, const Subset& target, const Subset& given) {
  Subset t = sorted(target), g = sorted(given);
  check_disjoint(joint, {&t, &g});
  return subset_entropy(joint, unite(t, g)) - subset_entropy(joint, g);
}

double mutual_information(const JointState& joint, const Subset& a, const Subset& b) {
  Subset x = sorted(a), y = sorted(b);
  check_disjoint(joint, {&x, &y});
  return subset_entropy(joint, x) + subset_entropy(joint, y) - subset_entropy(joint, unite(x, y));
}

double conditional_mutual_information(const JointState& joint, const Subset& a, const Subset& b, const Subset& c) {
  Subset x = sorted(a), y = sorted(b), z = sorted(c);
  check_disjoint(joint, {&x, &y, &z});
  double h_c = subset_entropy(joint, z);
  double h_ac = subset_entropy(joint, unite(x, z));
  double h_bc = subset_entropy(joint, unite(y, z));
  double h_abc = subset_entropy(joint, unite(unite(x, y), z));
  return (h_ac - h_c) + (h_bc - h_c) - (h_abc - h_c);
}

SSAReport ssa_report(const JointState& joint, const Subset& a, const Subset& b, const Subset& c) {
  Subset x = sorted(a), y = sorted(b), z = sorted(c);
  check_disjoint(joint, {&x, &y, &z});
  SSAReport r;
  r.h_a = subset_entropy(joint, x);
  r.h_c = subset_entropy(joint, z);
  r.h_ac = subset_entropy(joint, unite(x, z));
  r.h_bc = subset_entropy(joint, unite(y, z));
  r.h_abc = subset_entropy(joint, unite(unite(x, y), z));

  double i_a_bc = r.h_a + r.h_bc - r.h_abc;
  double i_a_c = r.h_a + r.h_c - r.h_ac;
  r.form_a = i_a_bc - i_a_c;
  r.form_b = (r.h_ac - r.h_c) - (r.h_abc - r.h_bc);
  r.form_c = r.h_abc - r.h_ac - r.h_bc + r.h_c;
  r.form_d = (r.h_ac - r.h_c) + (r.h_bc - r.h_c) - (r.h_abc - r.h_c);

  r.satisfied_a = r.form_a >= -kTolerance;
  r.satisfied_b = r.form_b >= -kTolerance;
  r.satisfied_c = r.form_c <= kTolerance;
  r.satisfied_d = r.form_d >= -kTolerance;
  r.satisfied = r.satisfied_d;
  r.forms_agree = r.satisfied_a == r.satisfied_d && r.satisfied_b == r.satisfied_d && r.satisfied_c == r.satisfied_d &&
                  std::abs(r.form_a - r.form_d) <= kTolerance && std::abs(r.form_b - r.form_d) <= kTolerance &&
                  std::abs(r.form_c + r.form_d) <= kTolerance;
  return r;
}

void validate_ensemble(const Ensemble& ensemble) {
  if (ensemble.states.empty()) throw InvalidDistribution("ensemble is empty");
  if (ensemble.weights.size() != ensemble.states.size()) {
    throw InvalidDistribution("ensemble has " + std::to_string(ensemble.weights.size()) + " weights for " +
                              std::to_string(ensemble.states.size()) + " states");
  }
  if (!ensemble.labels.empty() && ensemble.labels.size() != ensemble.states.size()) {
    throw ModelError("ensemble label count does not match its states");
  }
  Rational total = 0;
  for (const auto& w : ensemble.weights) {
    if (w <= 0) throw InvalidDistribution("ensemble weight " + to_string(w) + " is not positive");
    total += w;
  }
  if (total != 1) throw InvalidDistribution("ensemble weights sum to " + to_string(total));
  for (const auto& s : ensemble.states)
    if (!(*s.space() == *ensemble.states.front().space())) throw ModelError("ensemble states live on different systems");
}

JointState record_state(const Ensemble& ensemble) {
  validate_ensemble(ensemble);
  std::vector<std::string> labels = ensemble.labels;
  if (labels.empty())
    for (std::size_t i = 0; i < ensemble.states.size(); ++i) labels.push_back("x" + std::to_string(i + 1));
  TestSpacePtr record = classical_space("A", labels);
  TestSpacePtr b = ensemble.states.front().space();
  auto sys = std::make_shared<const CompositeSystem>(std::vector<TestSpacePtr>{record, b}, CompositeMode::foulis_randall);
  RationalVector values(sys->cell_count());
  for (std::size_t x = 0; x < labels.size(); ++x)
    for (std::size_t f = 0; f < b->outcome_count(); ++f)
      values[sys->encode({x, f})] = ensemble.weights[x] * ensemble.states[x][f];
  return JointState(sys, std::move(values));
}

double classical_mutual_information(const std::vector<RationalVector>& joint) {
  RationalVector flat, rows, cols;
  for (const auto& row : joint) {
    Rational r = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (cols.size() <= j) cols.resize(j + 1, Rational(0));
      cols[j] += row[j];
      r += row[j];
      flat.push_back(row[j]);
    }
    rows.push_back(r);
  }
  return shannon_entropy(std::span<const Rational>(rows)) + shannon_entropy(std::span<const Rational>(cols)) -
         shannon_entropy(std::span<const Rational>(flat));
}

HolevoReport holevo_report(const Ensemble& ensemble) {
  JointState record = record_state(ensemble);
  HolevoReport r;
  const TestSpace& b = *ensemble.states.front().space();

  RationalVector average(b.outcome_count(), Rational(0));
  double member_entropy = 0.0;
  for (std::size_t x = 0; x < ensemble.states.size(); ++x) {
    average = linalg::add(average, linalg::scale(ensemble.states[x].values(), ensemble.weights[x]));
    member_entropy += to_double(ensemble.weights[x]) * measurement_entropy(ensemble.states[x]).bits;
  }
  State avg(ensemble.states.front().space(), average);
  r.chi = measurement_entropy(avg).bits - member_entropy;
  r.mutual_ab = mutual_information(record, {0}, {1});
  r.chi_matches_mutual = std::abs(r.chi - r.mutual_ab) <= kTolerance;

  r.max_product_info = -1.0;
  for (std::size_t t = 0; t < b.test_count(); ++t) {
    std::vector<RationalVector> joint;
    for (std::size_t x = 0; x < ensemble.states.size(); ++x) {
      RationalVector row;
      for (auto f : b.test_outcomes(t)) row.push_back(ensemble.weights[x] * ensemble.states[x][f]);
      joint.push_back(std::move(row));
    }
    double info = classical_mutual_information(joint);
    if (info > r.max_product_info + 1e-12) {
      r.max_product_info = info;
      r.best_test = t;
      r.best_test_id = b.tests()[t].id;
    }
  }
  r.satisfied = r.max_product_info <= r.chi + kTolerance;
  return r;
}

}  // namespace gptent
