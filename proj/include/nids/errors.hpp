#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace nids {

// All toolkit failures carry a stable machine-parseable code next to the
// human message. The CLI prints "<code>: <message>" on one line and exits
// nonzero.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
    throw Error(std::move(code), message);
}

// Bundle import failures, one type per failure class so callers can
// distinguish them without string matching.
class BadMagicError : public Error {
public:
    explicit BadMagicError(const std::string& message) : Error("E_BUNDLE_MAGIC", message) {}
};

class UnsupportedVersionError : public Error {
public:
    explicit UnsupportedVersionError(const std::string& message)
        : Error("E_BUNDLE_VERSION", message) {}
};

class PayloadLengthError : public Error {
public:
    explicit PayloadLengthError(const std::string& message)
        : Error("E_BUNDLE_LENGTH", message) {}
};

class HeaderSchemaError : public Error {
public:
    explicit HeaderSchemaError(const std::string& message)
        : Error("E_BUNDLE_HEADER", message) {}
};

// Raised when a training step produces a non-finite loss.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& message, int epoch, int batch)
        : Error("E_DIVERGED", message), epoch_(epoch), batch_(batch) {}

    int epoch() const { return epoch_; }
    int batch() const { return batch_; }

private:
    int epoch_;
    int batch_;
};

} // namespace nids
