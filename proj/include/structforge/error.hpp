#pragma once

#include <stdexcept>
#include <string>

namespace structforge {

// Every failure the toolchain reports derives from Error; kind() is the
// stable machine-readable tag the CLI prints.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, long line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
    long line() const noexcept { return line_; }
    const char* kind() const noexcept override { return "parse"; }

private:
    long line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "validation"; }
};

class CapacityError : public Error {
public:
    CapacityError(const std::string& message, int required_width, int required_height)
        : Error(message), required_width_(required_width), required_height_(required_height) {}
    int required_width() const noexcept { return required_width_; }
    int required_height() const noexcept { return required_height_; }
    const char* kind() const noexcept override { return "capacity"; }

private:
    int required_width_;
    int required_height_;
};

class FormatError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "format"; }
};

class AdjustmentError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "adjustment"; }
};

class EmptyInputError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "empty"; }
};

}  // namespace structforge
