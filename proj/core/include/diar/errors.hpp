#pragma once
#include <stdexcept>
#include <string>

namespace diar {

/// Malformed on-disk data (RTTM, SAD, embeddings, manifests). Carries
/// line/column context in the message.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column = 0)
        : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    static std::string format(const std::string& what, int line, int column) {
        std::string msg = "line " + std::to_string(line);
        if (column > 0) msg += ", column " + std::to_string(column);
        return msg + ": " + what;
    }

    int line_;
    int column_;
};

/// Semantically invalid input to an operation (zero-norm vector, k > N,
/// empty reference annotation, infeasible generator spec, ...).
class InvalidInputError : public std::runtime_error {
public:
    explicit InvalidInputError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure, e.g. the eigensolver not converging.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace diar
