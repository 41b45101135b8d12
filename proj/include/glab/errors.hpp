#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace glab {

// Invalid user input: bad group spec parameter, malformed Cayley table,
// out-of-range tuple entry, violated operation precondition.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A search or enumeration exhausted its configured budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace glab
