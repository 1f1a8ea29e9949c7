#pragma once

#include <stdexcept>
#include <string>

namespace dephasim {

// Error hierarchy. Every failure mode of the library throws one of these;
// callers that only care about "library error vs. something else" can catch
// the base class.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DuplicateLabel : Error {
    using Error::Error;
};
struct UnknownLabel : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct TooLarge : Error {
    using Error::Error;
};
struct RangeError : Error {
    using Error::Error;
};
struct DuplicateGate : Error {
    using Error::Error;
};
struct NotAGraphState : Error {
    using Error::Error;
};
struct UnsupportedPattern : Error {
    using Error::Error;
};
struct ClosedFormInapplicable : Error {
    using Error::Error;
};
struct WrongArity : Error {
    using Error::Error;
};
struct FitError : Error {
    using Error::Error;
};

// Parse failures carry the 1-based line and column of the offending token.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : Error("line " + std::to_string(line_) + ", col " + std::to_string(column_) + ": " + msg),
          line(line_),
          column(column_) {}
};

}  // namespace dephasim
