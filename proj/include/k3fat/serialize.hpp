#pragma once

#include <string>

#include "json.hpp"
#include "k3fat/classify.hpp"
#include "k3fat/degeneration.hpp"
#include "k3fat/oracle/oracle.hpp"

namespace k3fat {

using Json = nlohmann::ordered_json;

Json to_json(const BranchSummary& b);
Json to_json(const DegenerationStep& s);
/// Whole subtree, children nested under "children".
Json to_json(const TraceNode& node);
Json to_json(const DimensionReport& r);
Json to_json(const VerificationOutcome& v);

/// Debug dump of a sampled surface, optionally with its condition matrix.
Json instance_to_json(const oracle::PrimeField& f, const oracle::QuarticSurfaceInstance& inst,
                      const oracle::Matrix* matrix = nullptr);

/// Two-space indented document with a trailing newline.
std::string to_document(const Json& j);

} // namespace k3fat
