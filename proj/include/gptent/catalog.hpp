#ifndef GPTENT_CATALOG_HPP
#define GPTENT_CATALOG_HPP

#include <string>
#include <string_view>
#include <vector>

#include "gptent/model_io.hpp"

namespace gptent::catalog {

/// Tests {a,a'} and {b,b'}.
TestSpacePtr squit();
/// Tests {a,x,b}, {b,y,c}, {c,z,a}.
TestSpacePtr firefly();
TestSpacePtr bit(std::string name = "bit");
/// Outcomes 0..n-1 in a single test.
TestSpacePtr classical(std::size_t n);

/// Firefly states: alpha (a = b = c = 1/2), beta (b = z = 1), gamma (x = y = z = 1), omega = (beta + gamma)/2.
State firefly_state(std::string_view name);

/// A, B classical bits, C the squit {e,e'}, {f,f'}; e tracks A and f tracks B.
JointState example4_state();
/// Record bit {0,1} and squit {f,f'}, {g,g'}: f certain, g tracks the record.
JointState example5_state();
Ensemble example5_ensemble();

/// The van Dam intermediate table on E1, E2, F, B as printed, rows E1 E2 F.
JointState van_dam_table();

StateSpacePolytope square();
/// Regular pentagon with coordinates rounded to thousandths.
StateSpacePolytope pentagon();
/// Unit square times [0, 1].
StateSpacePolytope prism();
StateSpacePolytope tetrahedron();

/// squit, firefly, bit, classical3, pr_box, example4, example5, vandam,
/// square, pentagon, prism, tetrahedron.
std::vector<std::string> builtin_names();
/// Also accepts "classical<n>". Throws ModelError for unknown names.
ModelBundle builtin(std::string_view name);

}  // namespace gptent::catalog

#endif  // GPTENT_CATALOG_HPP
