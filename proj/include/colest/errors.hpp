#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace colest {

// Every error thrown by the library carries a stable category tag; the CLI
// prints "error: <category>: <message>" and exits nonzero.
class error : public std::runtime_error {
public:
    error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

struct invalid_parameter : error {
    explicit invalid_parameter(const std::string& m) : error("invalid-parameter", m) {}
};

struct domain_error : error {
    explicit domain_error(const std::string& m) : error("domain-error", m) {}
};

struct numerical_failure : error {
    explicit numerical_failure(const std::string& m) : error("numerical-failure", m) {}
};

struct generation_failure : error {
    explicit generation_failure(const std::string& m) : error("generation-failure", m) {}
};

struct configuration_error : error {
    explicit configuration_error(const std::string& m) : error("configuration-error", m) {}
};

struct io_error : error {
    explicit io_error(const std::string& m) : error("io-error", m) {}
};

} // namespace colest
