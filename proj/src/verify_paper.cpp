#include "gptent/verify_paper.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "gptent/analysis.hpp"
#include "gptent/catalog.hpp"
#include "gptent/cli.hpp"

namespace gptent {

namespace {

class Suite {
 public:
  explicit Suite(std::string_view filter) : filter_(filter) {}

  /// `compute` runs only when the id passes the filter; a throw is a failure.
  void number(const std::string& id, const std::string& description, double expected,
              const std::function<double()>& compute) {
    run(id, description, format_bits(expected), [&](std::string& actual) {
      double v = compute();
      actual = format_bits(v);
      return std::fabs(v - expected) <= kTolerance;
    });
  }

  void flag(const std::string& id, const std::string& description, bool expected, const std::function<bool()>& compute) {
    run(id, description, expected ? "true" : "false", [&](std::string& actual) {
      bool v = compute();
      actual = v ? "true" : "false";
      return v == expected;
    });
  }

  void text(const std::string& id, const std::string& description, const std::string& expected,
            const std::function<std::string()>& compute) {
    run(id, description, expected, [&](std::string& actual) {
      actual = compute();
      return actual == expected;
    });
  }

  std::vector<PaperCheck> take() { return std::move(checks_); }

 private:
  void run(const std::string& id, const std::string& description, const std::string& expected,
           const std::function<bool(std::string&)>& body) {
    if (id.find(filter_) == std::string::npos) return;
    PaperCheck c{id, description, expected, "", false};
    try {
      c.pass = body(c.actual);
    } catch (const std::exception& e) {
      c.actual = std::string("error: ") + e.what();
    }
    checks_.push_back(std::move(c));
  }

  std::string filter_;
  std::vector<PaperCheck> checks_;
};

std::size_t firefly_vertex(const StateSpacePolytope& poly, std::string_view name) {
  const auto target = catalog::firefly_state(name).values();
  for (std::size_t i = 0; i < poly.vertex_count(); ++i)
    if (poly.vertices()[i] == target) return i;
  throw GeometryError("state " + std::string(name) + " is not a vertex");
}

}  // namespace

std::vector<PaperCheck> verify_paper(std::string_view filter) {
  Suite s(filter);

  // Firefly.
  auto firefly = catalog::firefly();
  auto firefly_poly = [&] { return enumerate_vertices(*firefly); };
  s.flag("firefly.alpha.valid", "alpha is a state of the firefly", true,
         [] { return catalog::firefly_state("alpha").values().size() == 6; });
  s.number("firefly.alpha.local", "local entropy of alpha on {a,x,b}", 1.0,
           [] { return local_entropy(catalog::firefly_state("alpha"), 0); });
  s.number("firefly.alpha.measurement", "H(alpha)", 1.0,
           [] { return measurement_entropy(catalog::firefly_state("alpha")).bits; });
  s.number("firefly.alpha.mixing", "S(alpha), alpha pure", 0.0,
           [&] { return mixing_entropy(firefly_poly(), catalog::firefly_state("alpha").values()).bits; });
  s.number("firefly.omega.measurement", "H(omega)", 0.0,
           [] { return measurement_entropy(catalog::firefly_state("omega")).bits; });
  s.text("firefly.omega.certainty", "outcome certain in omega", "z", [] {
    auto w = certainty_witness(catalog::firefly_state("omega"));
    return w ? *w : std::string("none");
  });
  s.text("firefly.omega.decomposition", "unique extreme decomposition of omega", "1/2 beta + 1/2 gamma", [&] {
    auto poly = firefly_poly();
    auto ds = extreme_decompositions(poly, catalog::firefly_state("omega").values());
    if (ds.size() != 1) return std::to_string(ds.size()) + " decompositions";
    std::size_t beta = firefly_vertex(poly, "beta"), gamma = firefly_vertex(poly, "gamma");
    std::string out;
    for (const auto& t : ds[0].terms) {
      std::string name = t.vertex == beta ? "beta" : t.vertex == gamma ? "gamma" : "v" + std::to_string(t.vertex);
      out += (out.empty() ? "" : " + ") + to_string(t.weight) + " " + name;
    }
    return out;
  });
  s.number("firefly.omega.mixing", "S(omega)", 1.0,
           [&] { return mixing_entropy(firefly_poly(), catalog::firefly_state("omega").values()).bits; });
  s.number("firefly.vertices", "pure states of the firefly", 5.0,
           [&] { return static_cast<double>(firefly_poly().vertex_count()); });
  s.flag("firefly.scan", "monoentropicity scan finds alpha", true, [&] {
    auto poly = firefly_poly();
    auto r = monoentropicity_scan(firefly, poly, 100, 0);
    const auto alpha = catalog::firefly_state("alpha").values();
    for (const auto& w : r.witnesses)
      if (w.point == alpha) return true;
    return false;
  });

  // Squit and classical systems.
  s.number("squit.vertices", "pure states of the squit", 4.0,
           [] { return static_cast<double>(enumerate_vertices(*catalog::squit()).vertex_count()); });
  s.flag("classical.scan", "classical bit is monoentropic", true, [] {
    auto bit = catalog::bit();
    return monoentropicity_scan(bit, enumerate_vertices(*bit), 100, 0).clean();
  });

  // PR box.
  s.flag("prbox.nonsignaling", "PR box is non-signaling", true, [] { return is_nonsignaling(pr_box()).ok(); });
  s.number("prbox.chsh", "CHSH value of the PR box", 4.0, [] { return chsh_value(pr_box()); });

  // The example4 state.
  const Subset A{0}, B{1}, C{2};
  s.flag("example4.nonsignaling", "example4 state is non-signaling", true,
         [] { return is_nonsignaling(catalog::example4_state()).ok(); });
  s.number("example4.h_c", "H(C)", 1.0, [] { return measurement_entropy(marginal_state(catalog::example4_state(), 2)).bits; });
  s.number("example4.h_ac", "H(AC)", 1.0, [] { return subset_entropy(catalog::example4_state(), {0, 2}); });
  s.number("example4.h_bc", "H(BC)", 1.0, [] { return subset_entropy(catalog::example4_state(), {1, 2}); });
  s.number("example4.h_abc", "H(ABC)", 2.0, [] { return joint_measurement_entropy(catalog::example4_state()).bits; });
  s.number("example4.cmi", "I(A:B|C)", -1.0,
           [&] { return conditional_mutual_information(catalog::example4_state(), A, B, C); });
  s.flag("example4.ssa", "strong subadditivity holds", false, [&] { return ssa_report(catalog::example4_state(), A, B, C).satisfied; });
  s.flag("example4.forms", "the four SSA forms agree", true,
         [&] { return ssa_report(catalog::example4_state(), A, B, C).forms_agree; });

  // The example5 ensemble.
  s.number("example5.h_a", "H(A)", 1.0, [] { return subset_entropy(catalog::example5_state(), {0}); });
  s.number("example5.h_b", "H(B)", 0.0, [] { return subset_entropy(catalog::example5_state(), {1}); });
  s.number("example5.h_ab", "H(AB)", 1.0, [] { return subset_entropy(catalog::example5_state(), {0, 1}); });
  s.number("example5.h_a_given_b", "H(A|B)", 1.0, [&] { return conditional_entropy(catalog::example5_state(), A, B); });
  s.number("example5.mutual", "I(A:B)", 0.0, [&] { return mutual_information(catalog::example5_state(), A, B); });
  s.number("example5.chi", "Holevo quantity", 0.0, [] { return holevo_report(catalog::example5_ensemble()).chi; });
  s.number("example5.max_info", "max I(E:F) over product tests", 1.0,
           [] { return holevo_report(catalog::example5_ensemble()).max_product_info; });
  s.flag("example5.holevo", "Holevo bound holds", false, [] { return holevo_report(catalog::example5_ensemble()).satisfied; });

  // van Dam.
  s.flag("vandam.table", "intermediate state equals the published table", true,
         [] { return van_dam_intermediate_state().state.values() == catalog::van_dam_table().values(); });
  s.number("vandam.h_e1fb", "H(E1,F,B)", 2.0, [] { return van_dam_intermediate_state().h_e1fb; });
  s.number("vandam.h_e2fb", "H(E2,F,B)", 2.0, [] { return van_dam_intermediate_state().h_e2fb; });
  s.number("vandam.h_fb", "H(F,B)", 2.0, [] { return van_dam_intermediate_state().h_fb; });
  s.number("vandam.h_e1e2fb", "H(E1,E2,F,B)", 3.0, [] { return van_dam_intermediate_state().h_e1e2fb; });
  s.number("vandam.cmi", "I(E1:E2|F,B)", -1.0, [] { return van_dam_intermediate_state().cmi; });
  s.number("vandam.ic_lhs", "information causality left-hand side", 2.0, [] { return ic_lhs(van_dam_protocol()).lhs; });
  s.flag("vandam.ic", "information causality holds with m = 1", false, [] { return ic_lhs(van_dam_protocol()).satisfied; });

  // Composites.
  s.number("composite.classical_record", "I(E:B) for uniform E and a squit state", 0.0, [] {
    auto e = classical_space("E", {"0", "1"});
    State ue(e, {Rational(1, 2), Rational(1, 2)});
    State sq(catalog::squit(), {Rational(1, 3), Rational(2, 3), Rational(1, 4), Rational(3, 4)});
    return mutual_information(product_state({ue, sq}), {0}, {1});
  });
  s.flag("composite.adaptive", "adaptive tests measure C conditioned on both A and B", true, [] {
    CompositeSystem sys({catalog::bit("A"), catalog::bit("B"), catalog::squit()}, CompositeMode::adaptive);
    bool found = false;
    for_each_adaptive_test(sys, [&](const AdaptiveTest& t) {
      if (t.component == 2 || t.next.size() != 2) return true;
      auto c_test = [&](std::size_t i, std::size_t j) -> std::optional<std::size_t> {
        const auto& mid = t.next[i];
        if (mid.component == 2 || mid.next.size() != 2) return std::nullopt;
        return mid.next[j].test;
      };
      auto c00 = c_test(0, 0), c01 = c_test(0, 1), c10 = c_test(1, 0);
      found = c00 && c01 && c10 && *c00 != *c01 && *c00 != *c10;
      return !found;
    });
    return found;
  });

  // Command line.
  s.text("cli.entropy", "gptent entropy --builtin firefly --state alpha --kind measurement", "1.000000000000", [] {
    std::ostringstream out, err;
    int code = cli::run_command({"entropy", "--builtin", "firefly", "--state", "alpha", "--kind", "measurement"}, out, err);
    std::string first = out.str().substr(0, out.str().find('\n'));
    return code == cli::kExitOk ? first : "exit " + std::to_string(code);
  });

  return s.take();
}

}  // namespace gptent
