#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ast.hpp"

namespace vlens {

struct Diagnostic {
    int line = 0;
    int col = 0;
    std::string message;
    std::string str() const {
        return std::to_string(line) + ":" + std::to_string(col) + ": " + message;
    }
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::vector<Diagnostic> ds)
        : std::runtime_error(format(ds)), diagnostics(std::move(ds)) {}
    std::vector<Diagnostic> diagnostics;

private:
    static std::string format(const std::vector<Diagnostic>& ds) {
        std::string s;
        for (auto& d : ds) {
            if (!s.empty()) s += "\n";
            s += d.str();
        }
        return s;
    }
};

/// Parse a program unit: source/view declarations followed by rules and
/// constraints. Performs name/arity resolution and full type checking
/// (intermediate predicate signatures are inferred). Throws ParseError with
/// all collected diagnostics in source order.
Program parse_program(const std::string& text);

/// Convenience: parse the contents of a file.
Program parse_program_file(const std::string& path);

}  // namespace vlens
