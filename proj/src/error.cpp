#include "ehd/error.hpp"

namespace ehd {

std::string Error::tagged() const {
    return "EHD-E" + std::to_string(static_cast<int>(code_)) + ": " + what();
}

namespace {
std::string join_violations(const std::vector<std::string>& v) {
    std::string out = "invalid configuration (" + std::to_string(v.size()) + " problem" +
                      (v.size() == 1 ? "" : "s") + ")";
    for (const auto& s : v) out += "\n  " + s;
    return out;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(ErrorCode::Config, join_violations(violations)), violations_(std::move(violations)) {}

}  // namespace ehd
