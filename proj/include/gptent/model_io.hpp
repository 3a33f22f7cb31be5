#ifndef GPTENT_MODEL_IO_HPP
#define GPTENT_MODEL_IO_HPP

#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gptent/composite.hpp"
#include "gptent/geometry.hpp"
#include "gptent/infotheory.hpp"
#include "gptent/protocols.hpp"

namespace gptent {

/// Named, validated model objects. Cross-references are by name.
struct ModelBundle {
  std::map<std::string, TestSpacePtr> systems;
  std::map<std::string, StateSpacePolytope> polytopes;
  std::map<std::string, State> states;
  std::map<std::string, CompositePtr> composites;
  std::map<std::string, JointState> joint_states;
  std::map<std::string, Ensemble> ensembles;
  std::map<std::string, ICProtocol> protocols;

  /// Adds every object of `other`; throws ModelError on a name clash.
  void merge(const ModelBundle& other);
};

/// Raised for malformed JSON; the message carries line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

/// A model file that cannot be read.
class FileError : public Error {
 public:
  using Error::Error;
};

/// Parses and validates a bundle. Throws ParseError for bad JSON and
/// ModelError (or a subclass) naming the object whose invariant fails.
ModelBundle parse_model(std::string_view text);
/// Throws FileError when the file cannot be opened.
ModelBundle load_model(const std::string& path);

/// Canonical JSON form; parse_model(dump) reproduces an equal bundle.
nlohmann::ordered_json to_json(const ModelBundle& bundle);

nlohmann::ordered_json rational_json(const Rational& value);
Rational rational_from_json(const nlohmann::json& value);
nlohmann::ordered_json vector_json(const RationalVector& values);

/// 12 decimal places, the entropy output format.
std::string format_bits(double bits);
/// Entropy rounded to 12 decimals for JSON output.
double round_bits(double bits);

bool operator==(const ModelBundle& a, const ModelBundle& b);

}  // namespace gptent

#endif  // GPTENT_MODEL_IO_HPP
