#pragma once

#include <stdexcept>
#include <string>

namespace drg {

// Error categories map 1:1 onto CLI exit codes (validation=1, runtime=2, io=3).
enum class ErrorKind { validation = 1, runtime = 2, io = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    static Error validation(const std::string& msg) { return Error(ErrorKind::validation, msg); }
    static Error runtime(const std::string& msg) { return Error(ErrorKind::runtime, msg); }
    static Error io(const std::string& msg) { return Error(ErrorKind::io, msg); }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::runtime: return "runtime";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

} // namespace drg
