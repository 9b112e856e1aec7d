#pragma once

#include "kqch/verify.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace kqch {

using Json = nlohmann::ordered_json;

Json to_json(const CheckReport& report);

// Top-level report document: {config, checks, summary}.  Field order is
// fixed and no timestamps are embedded, so identical configurations yield
// byte-identical documents.
Json make_report(const Json& config, const std::vector<CheckReport>& checks);

// Writes text to path; throws std::runtime_error on failure.
void write_file(const std::string& path, const std::string& text);

// CSV with a header row and 15 significant digits.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

}  // namespace kqch
