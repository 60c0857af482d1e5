#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "holodyn/operators.hpp"
#include "holodyn/taylor.hpp"

namespace holodyn {

using json = nlohmann::json;

/// TaylorPoly wire format:
///   {dim, trunc_degree, valid_degree, entire, terms: [{alpha, re, im}]}
/// with "contaminated" present only when set.  Writing a non-finite
/// coefficient throws; round-trips of finite values are bit-exact.  On read,
/// a missing "entire" defaults to valid_degree == trunc_degree (a hand
/// written list of terms is naturally the polynomial itself).
json poly_to_json(const TaylorPoly& f);
TaylorPoly poly_from_json(const json& j);

/// Operator wire format: {dim, kind, z0? / a? / lambda? / terms?}.
/// Parsing validates shapes and reports the offending field by name.
json operator_to_json(const OperatorSymbol& op);
OperatorSymbol operator_from_json(const json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

OperatorSymbol load_operator(const std::string& path);

/// FNV-1a over the canonical dump; embedded in every report so runs are
/// diffable against their exact configuration.
std::uint64_t fnv1a64(const std::string& data);
std::string config_hash(const json& config);

}  // namespace holodyn
