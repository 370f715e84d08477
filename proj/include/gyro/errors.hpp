#pragma once

#include <stdexcept>
#include <string>

namespace gyro {

/// Error categories; the CLI maps them to exit codes (2, 3, 4).
enum class ErrorKind { Validation, Numerical, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

struct ValidationError : Error {
    ValidationError(std::string code, const std::string& what)
        : Error(ErrorKind::Validation, std::move(code), what) {}
};

struct NumericalError : Error {
    NumericalError(std::string code, const std::string& what)
        : Error(ErrorKind::Numerical, std::move(code), what) {}
};

struct IoError : Error {
    IoError(std::string code, const std::string& what)
        : Error(ErrorKind::Io, std::move(code), what) {}
};

/// Netlist syntax error with 1-based source position.
struct ParseError : ValidationError {
    ParseError(int line_, int column_, const std::string& what, std::string token_ = {})
        : ValidationError("ParseError",
                          "line " + std::to_string(line_) + ", column " + std::to_string(column_) +
                              ": " + what + (token_.empty() ? "" : " (near '" + token_ + "')")),
          line(line_), column(column_), token(std::move(token_)) {}

    int line;
    int column;
    std::string token;
};

}  // namespace gyro
