#pragma once

#include "saito/orbifold.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace saito {

inline constexpr const char* version = "1.0.0";

struct RunConfig {
    std::vector<int> families;  // empty means all
    std::optional<int> k;
    std::optional<int> k_max;
    std::string format = "text";
    bool stable = false;
    int round_cap = default_round_cap;
    unsigned jobs = 1;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// (family, k) pairs in report order. Throws ConfigError on bounds violations.
std::vector<std::pair<int, int>> grid(const RunConfig& c);

struct VerifyResult {
    std::vector<ReportEntry> entries;
    std::vector<std::pair<std::pair<int, int>, double>> seconds;
};

VerifyResult run_verify(const RunConfig& c);

nlohmann::ordered_json entry_json(const ReportEntry& e);
nlohmann::ordered_json report_json(const RunConfig& c, const VerifyResult& r);
std::string report_text(const VerifyResult& r);

bool all_pass(const std::vector<ReportEntry>& entries);

// Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace saito
