#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ehd {

/// Machine-parsable error codes; printed as "EHD-E<code>:".
enum class ErrorCode : int {
    Usage = 101,
    Config = 102,
    Io = 103,
    Checkpoint = 104,
    Neutrality = 105,
    Domain = 106,
    GridMismatch = 107,
    Hermitian = 108,
    NonFinite = 109,
    BlowUp = 201,
    Invariant = 301,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// "EHD-E<code>: <message>"
    std::string tagged() const;

private:
    ErrorCode code_;
};

/// Non-finite state or dt collapse. The run loop turns this into blow_up_suspected.
class BlowUpSuspected : public Error {
public:
    explicit BlowUpSuspected(const std::string& what) : Error(ErrorCode::BlowUp, what) {}
};

/// Net charge too large for the periodic Poisson solve.
class NeutralityError : public Error {
public:
    NeutralityError(const std::string& what, double net_charge)
        : Error(ErrorCode::Neutrality, what), net_charge_(net_charge) {}
    double net_charge() const noexcept { return net_charge_; }

private:
    double net_charge_;
};

/// Carries every violation found, not just the first.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace ehd
