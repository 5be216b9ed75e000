#pragma once

#include <stdexcept>
#include <string>

namespace mlsta {

/// Argument outside the mathematical domain of a gain or eigenvalue routine.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Rejected configuration value. `key()` names the offending parameter.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// The sampled sliding variable became NaN/inf.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(long long sample, const std::string& what)
        : std::runtime_error("sample " + std::to_string(sample) + ": " + what), sample_(sample) {}

    long long sample() const noexcept { return sample_; }

private:
    long long sample_;
};

}  // namespace mlsta
