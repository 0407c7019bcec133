#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "ktinv/analysis.hpp"
#include "ktinv/invariants.hpp"
#include "ktinv/nullspace.hpp"

namespace ktinv {

using Json = nlohmann::ordered_json;

Json to_json(const KtParams& k);
Json to_json(const Point2& p);
Json to_json(const SampleConfig& cfg);
Json to_json(const FociPair& f);
Json to_json(const InvariantVector& v);
Json to_json(const DerivedInvariants& d);
Json to_json(const PairClass& c);
Json to_json(const NullspaceResult& r);
Json to_json(const FamilyNullspaceResult& r);
Json to_json(const SwReport& r);
Json to_json(const DegeneracyRow& r);
Json to_json(const TtwScanRow& r);
Json to_json(const AuditReport& r);

/// Indented JSON with every float written to 17 significant digits;
/// non-finite values become null.
std::string dump_json(const Json& j);

/// Header line plus one line per array element (objects are flattened with
/// dotted keys). A non-array value is written as key,value pairs.
std::string to_csv(const Json& j);
/// Markdown table with the same layout as to_csv.
std::string to_markdown(const Json& j);

}  // namespace ktinv
