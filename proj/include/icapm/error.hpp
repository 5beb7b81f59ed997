#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace icapm {

/// Classifies failures for exit-code mapping: input errors are bad data,
/// configs or flags; numeric errors are failures inside a computation.
enum class ErrorKind { input, numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message)
        : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& code() const { return code_; }

    /// Single greppable line: "E_CODE: message".
    std::string line() const { return code_ + ": " + std::string(what()); }

private:
    ErrorKind kind_;
    std::string code_;
};

[[noreturn]] inline void throw_input(const std::string& code, const std::string& msg) {
    throw Error(ErrorKind::input, code, msg);
}

[[noreturn]] inline void throw_numeric(const std::string& code, const std::string& msg) {
    throw Error(ErrorKind::numeric, code, msg);
}

}  // namespace icapm
