#ifndef GPTENT_VERIFY_PAPER_HPP
#define GPTENT_VERIFY_PAPER_HPP

#include <string>
#include <string_view>
#include <vector>

namespace gptent {

struct PaperCheck {
  std::string id;  // e.g. "firefly.alpha.measurement"
  std::string description;
  std::string expected;
  std::string actual;
  bool pass = false;
};

/// Every published example reproduced by the library; `filter` keeps the
/// checks whose id contains it.
std::vector<PaperCheck> verify_paper(std::string_view filter = "");

}  // namespace gptent

#endif  // GPTENT_VERIFY_PAPER_HPP
