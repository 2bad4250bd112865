#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lcpbridge/error.hpp"
#include "lcpbridge/pivot/model.hpp"

namespace lcpbridge::pivot {

/// Raised for malformed `.bml` text. Line and column are 1-based.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::vector<std::string> expected_;
};

/// Parses the pivot DSL. The result always passes validate_model; grammar
/// errors throw SyntaxError and well-formedness errors throw
/// Error(ValidationFailed).
DomainModel parse_pivot_text(std::string_view source);

/// Prints a valid model as pivot DSL. Element order follows storage order;
/// generalizations are folded into `extends` clauses.
std::string print_pivot_text(const DomainModel& model);

}  // namespace lcpbridge::pivot
