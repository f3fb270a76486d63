#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bim2map {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Lexical or structural failure in a STEP physical file. line is 1-based.
class StepParseError : public Error {
public:
    StepParseError(const std::string& msg, int line, std::int64_t instance_id = 0)
        : Error(format(msg, line, instance_id)), line_(line), instance_id_(instance_id) {}
    int line() const { return line_; }
    std::int64_t instance_id() const { return instance_id_; }

private:
    static std::string format(const std::string& msg, int line, std::int64_t id) {
        std::string s = "STEP parse error at line " + std::to_string(line);
        if (id > 0) s += " (instance #" + std::to_string(id) + ")";
        return s + ": " + msg;
    }
    int line_;
    std::int64_t instance_id_;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class TurtleParseError : public Error {
public:
    TurtleParseError(const std::string& msg, int line)
        : Error("Turtle parse error at line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// position is the byte offset of the offending token in the expression.
class FilterParseError : public Error {
public:
    FilterParseError(const std::string& msg, std::size_t position)
        : Error("filter error at position " + std::to_string(position) + ": " + msg),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace bim2map
