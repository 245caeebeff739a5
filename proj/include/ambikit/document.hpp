// JSON model documents and serialization of results.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "ambikit/implicitize.hpp"

namespace ambikit {

using json = nlohmann::ordered_json;

struct DocumentOptions {
  std::uint64_t seed = 0;
  std::string order = "grevlex";  // grevlex or lex, for printed bases
  std::optional<SampleBox> box;   // overrides every parameter box
  double timeout_seconds = 0;     // 0 = none
  bool prime_asserted = false;
  bool operator==(const DocumentOptions&) const = default;
};

struct ModelDocument {
  std::string family;  // concentration, sem, staged_tree, lyapunov
  std::string label;
  GraphSpec graph;
  StagedTreeSpec tree;
  LyapunovSpec lyapunov;
  DocumentOptions options;
};

bool operator==(const GraphSpec& a, const GraphSpec& b);
bool operator==(const StagedTreeSpec& a, const StagedTreeSpec& b);
bool operator==(const LyapunovSpec& a, const LyapunovSpec& b);
bool operator==(const ModelDocument& a, const ModelDocument& b);

/// Throws SchemaError with a path to the offending field.
ModelDocument parse_document(const json& j);
ModelDocument parse_document_text(const std::string& text);
ModelDocument load_document(const std::string& path);
json to_json(const ModelDocument& d);

/// Builds the ModelSpec and applies the document options.
ModelSpec build_model(const ModelDocument& d);

json to_json(const MarkovProperty& mp);
MarkovProperty markov_from_json(const json& j);

json to_json(const GroebnerBasis& G);
GroebnerBasis basis_from_json(const json& j);

json to_json(const EquivalenceVerdict& v);
EquivalenceVerdict verdict_from_json(const json& j);

json to_json(const std::vector<PointCheck>& checks);

const char* to_string(EquivResult r);

}  // namespace ambikit
