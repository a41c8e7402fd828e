// Command dispatch shared by the command-line binary and the tests: each
// command takes a structured argument map, validates it against its schema,
// runs the underlying modules, and returns a serializable result.
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bfgrow {

/// Result of one command: the validated inputs echoed back, the outputs
/// (numeric results in log scale where applicable), and any warnings.
/// JSON emission round-trips doubles losslessly; the CSV form is a flat
/// table whose layout depends on the command.
struct CommandResult {
    std::string command;
    nlohmann::json inputs_echo;
    nlohmann::json outputs;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

/// Runs one of {compare, threshold, simulate, anova}. Unknown commands,
/// unknown argument keys, and mistyped or missing arguments raise
/// SchemaError; everything else propagates from the underlying modules.
CommandResult execute(const std::string& command, const nlohmann::json& args);

}  // namespace bfgrow
