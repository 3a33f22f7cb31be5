#include "gptent/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gptent/infotheory.hpp"

namespace gptent {

namespace {

std::string bit_string(std::size_t value, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i)
    if (value >> (width - 1 - i) & 1U) s[i] = '1';
  return s;
}

int input_bit(std::size_t input, std::size_t k, std::size_t n) { return static_cast<int>(input >> (n - 1 - k) & 1U); }

void check_two_outcome(const TestSpace& s, std::size_t t) {
  if (t >= s.test_count()) throw ModelError("test index " + std::to_string(t) + " out of range for " + s.name());
  if (s.test_outcomes(t).size() != 2) {
    throw ModelError("CHSH needs two-outcome tests; " + s.name() + s.tests()[t].id + " has " +
                     std::to_string(s.test_outcomes(t).size()));
  }
}

// Probability of (k-th outcome of A test ta, j-th outcome of B test tb).
Rational cell(const ICProtocol& p, std::size_t ta, std::size_t ka, std::size_t tb, std::size_t jb) {
  if (!p.shared) return 1;
  const auto& sys = *p.shared->system();
  return p.shared->value({sys.component(0).test_outcomes(ta)[ka], sys.component(1).test_outcomes(tb)[jb]});
}

std::size_t a_outcomes(const ICProtocol& p, std::size_t ta) {
  return p.shared ? p.shared->system()->component(0).test_outcomes(ta).size() : 1;
}

std::size_t b_outcomes(const ICProtocol& p, std::size_t tb) {
  return p.shared ? p.shared->system()->component(1).test_outcomes(tb).size() : 1;
}

}  // namespace

TestSpacePtr pr_side(char party) {
  std::string lower(1, static_cast<char>(party - 'A' + 'a'));
  return make_space(std::string(1, party), {{lower + "1", lower + "1'"}, {lower + "2", lower + "2'"}});
}

JointState pr_box() {
  auto a = pr_side('A');
  auto b = pr_side('B');
  auto sys = std::make_shared<const CompositeSystem>(std::vector<TestSpacePtr>{a, b}, CompositeMode::foulis_randall);
  RationalVector values(sys->cell_count(), Rational(0));
  const Rational half(1, 2);
  // Rows of the table are B outcomes, columns the A outcomes carrying 1/2.
  const std::vector<std::pair<std::string, std::vector<std::string>>> rows = {
      {"b1", {"a1'", "a2'"}}, {"b1'", {"a1", "a2"}}, {"b2", {"a1'", "a2"}}, {"b2'", {"a1", "a2'"}}};
  for (const auto& [bl, as] : rows)
    for (const auto& al : as) values[sys->encode({a->outcome_index(al), b->outcome_index(bl)})] = half;
  return JointState(sys, std::move(values));
}

double correlator(const JointState& box, std::size_t test_a, std::size_t test_b) {
  const auto& sys = *box.system();
  if (sys.size() != 2) throw ModelError("CHSH needs a bipartite box");
  check_two_outcome(sys.component(0), test_a);
  check_two_outcome(sys.component(1), test_b);
  Rational e = 0;
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t j = 0; j < 2; ++j) {
      const Rational& p =
          box.value({sys.component(0).test_outcomes(test_a)[k], sys.component(1).test_outcomes(test_b)[j]});
      e += (k == j) ? p : Rational(-p);
    }
  return to_double(e);
}

double chsh_expression(const JointState& box, const ChshSettings& s, std::size_t minus) {
  if (minus > 3) throw ModelError("CHSH sign placement must be 0..3");
  const double terms[4] = {correlator(box, s.a0, s.b0), correlator(box, s.a0, s.b1), correlator(box, s.a1, s.b0),
                           correlator(box, s.a1, s.b1)};
  double total = 0;
  for (std::size_t i = 0; i < 4; ++i) total += (i == minus ? -terms[i] : terms[i]);
  return total;
}

double chsh_value(const JointState& box, const ChshSettings& settings) {
  double best = 0;
  for (std::size_t minus = 0; minus < 4; ++minus) best = std::max(best, std::abs(chsh_expression(box, settings, minus)));
  return best;
}

void validate_protocol(const ICProtocol& p) {
  if (p.n == 0 || p.n > 16) throw ModelError("protocol input length must be 1..16 bits");
  if (p.m > 16) throw ModelError("protocol message length must be at most 16 bits");
  const std::size_t inputs = std::size_t{1} << p.n;
  const std::size_t messages = std::size_t{1} << p.m;
  if (p.shared) {
    if (p.shared->system()->size() != 2) throw ModelError("shared state must be bipartite");
    require_nonsignaling(*p.shared);
    if (p.alice_test.size() != inputs) throw ModelError("alice_test must list one A test per input");
    for (auto t : p.alice_test)
      if (t >= p.shared->system()->component(0).test_count()) throw ModelError("alice_test names an unknown A test");
  }
  if (p.alice_message.size() != inputs) throw ModelError("alice_message must have one row per input");
  for (std::size_t i = 0; i < inputs; ++i) {
    std::size_t ta = p.shared ? p.alice_test[i] : 0;
    if (p.alice_message[i].size() != a_outcomes(p, ta)) {
      throw ModelError("alice_message row " + std::to_string(i) + " must cover every outcome of Alice's test");
    }
    for (auto msg : p.alice_message[i])
      if (msg >= messages) throw ModelError("message " + std::to_string(msg) + " exceeds " + std::to_string(p.m) + " bits");
  }
  if (p.bob_test.size() != p.n || p.bob_guess.size() != p.n) throw ModelError("Bob needs one strategy per k");
  for (std::size_t k = 0; k < p.n; ++k) {
    if (p.bob_test[k].size() != messages || p.bob_guess[k].size() != messages) {
      throw ModelError("Bob's strategy for k = " + std::to_string(k + 1) + " must cover every message");
    }
    for (std::size_t msg = 0; msg < messages; ++msg) {
      std::size_t tb = p.bob_test[k][msg];
      if (p.shared && tb >= p.shared->system()->component(1).test_count()) throw ModelError("bob_test names an unknown B test");
      if (!p.shared && tb != 0) throw ModelError("bob_test must be 0 without a shared state");
      if (p.bob_guess[k][msg].size() != b_outcomes(p, tb)) throw ModelError("bob_guess must cover every outcome of Bob's test");
      for (int g : p.bob_guess[k][msg])
        if (g != 0 && g != 1) throw ModelError("guesses must be bits");
    }
  }
}

ICReport ic_lhs(const ICProtocol& p) {
  validate_protocol(p);
  const std::size_t inputs = std::size_t{1} << p.n;
  const Rational w(1, static_cast<long>(inputs));
  ICReport report;
  report.m = p.m;
  for (std::size_t k = 0; k < p.n; ++k) {
    std::vector<RationalVector> guess_table(2, RationalVector(2, Rational(0)));
    std::map<std::pair<std::size_t, std::size_t>, RationalVector> readout;
    for (std::size_t i = 0; i < inputs; ++i) {
      int e = input_bit(i, k, p.n);
      std::size_t ta = p.shared ? p.alice_test[i] : 0;
      for (std::size_t ka = 0; ka < a_outcomes(p, ta); ++ka) {
        std::size_t msg = p.alice_message[i][ka];
        std::size_t tb = p.bob_test[k][msg];
        for (std::size_t jb = 0; jb < b_outcomes(p, tb); ++jb) {
          Rational q = w * cell(p, ta, ka, tb, jb);
          if (is_zero(q)) continue;
          guess_table[e][p.bob_guess[k][msg][jb]] += q;
          std::size_t b_label = p.shared ? p.shared->system()->component(1).test_outcomes(tb)[jb] : 0;
          auto& col = readout[{msg, b_label}];
          col.resize(2, Rational(0));
          col[e] += q;
        }
      }
    }
    std::vector<RationalVector> joint(2);
    for (const auto& [key, col] : readout)
      for (std::size_t e = 0; e < 2; ++e) joint[e].push_back(col[e]);
    report.per_k.push_back(classical_mutual_information(guess_table));
    report.per_k_joint.push_back(classical_mutual_information(joint));
    report.success.push_back(guess_table[0][0] + guess_table[1][1]);
  }
  for (double v : report.per_k) report.lhs += v;
  report.satisfied = report.lhs <= static_cast<double>(p.m) + kTolerance;
  return report;
}

JointState intermediate_state(const ICProtocol& p) {
  validate_protocol(p);
  if (!p.shared) throw ModelError("the intermediate state needs a shared state");
  const std::size_t inputs = std::size_t{1} << p.n;
  const std::size_t messages = std::size_t{1} << p.m;
  std::vector<TestSpacePtr> parts;
  for (std::size_t k = 0; k < p.n; ++k) parts.push_back(classical_space("E" + std::to_string(k + 1), {"0", "1"}));
  std::vector<std::string> message_labels;
  for (std::size_t msg = 0; msg < messages; ++msg) message_labels.push_back(p.m ? bit_string(msg, p.m) : "-");
  parts.push_back(classical_space("F", message_labels));
  const auto& shared_sys = *p.shared->system();
  parts.push_back(shared_sys.components()[1]);
  auto sys = std::make_shared<const CompositeSystem>(parts, CompositeMode::adaptive);

  const Rational w(1, static_cast<long>(inputs));
  const TestSpace& a = shared_sys.component(0);
  const TestSpace& b = shared_sys.component(1);
  RationalVector values(sys->cell_count(), Rational(0));
  for (std::size_t i = 0; i < inputs; ++i) {
    std::vector<std::size_t> tuple;
    for (std::size_t k = 0; k < p.n; ++k) tuple.push_back(static_cast<std::size_t>(input_bit(i, k, p.n)));
    tuple.push_back(0);
    tuple.push_back(0);
    const auto& outcomes = a.test_outcomes(p.alice_test[i]);
    for (std::size_t ka = 0; ka < outcomes.size(); ++ka) {
      tuple[p.n] = p.alice_message[i][ka];
      for (std::size_t y = 0; y < b.outcome_count(); ++y) {
        tuple[p.n + 1] = y;
        values[sys->encode(tuple)] += w * p.shared->value({outcomes[ka], y});
      }
    }
  }
  return JointState(sys, std::move(values));
}

ICProtocol van_dam_protocol() {
  ICProtocol p;
  p.n = 2;
  p.m = 1;
  p.shared = pr_box();
  for (std::size_t input = 0; input < 4; ++input) {
    std::size_t e1 = input >> 1 & 1U, e2 = input & 1U;
    p.alice_test.push_back(e1 ^ e2);
    // Outcome index 0 is unprimed (bit 0), index 1 primed (bit 1).
    p.alice_message.push_back({0 ^ e1 ^ 1U, 1 ^ e1 ^ 1U});
  }
  p.bob_test.assign(2, std::vector<std::size_t>(2));
  p.bob_guess.assign(2, std::vector<std::vector<int>>(2));
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t f = 0; f < 2; ++f) {
      p.bob_test[k][f] = k;
      p.bob_guess[k][f] = {static_cast<int>(f ^ 0U), static_cast<int>(f ^ 1U)};
    }
  return p;
}

VanDamReport van_dam_intermediate_state() {
  JointState state = intermediate_state(van_dam_protocol());
  VanDamReport r{state};
  r.h_e1fb = subset_entropy(state, {0, 2, 3});
  r.h_e2fb = subset_entropy(state, {1, 2, 3});
  r.h_fb = subset_entropy(state, {2, 3});
  r.h_e1e2fb = subset_entropy(state, {0, 1, 2, 3});
  r.cmi = conditional_mutual_information(state, {0}, {1}, {2, 3});
  return r;
}

}  // namespace gptent
