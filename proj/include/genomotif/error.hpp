#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace genomotif {

// Base for every recoverable data error raised by the library. The CLI maps
// these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidSymbol : public Error {
public:
    InvalidSymbol(std::size_t position, char symbol, std::string record = {})
        : Error(make_message(position, symbol, record)),
          position_(position), symbol_(symbol), record_(std::move(record)) {}

    std::size_t position() const noexcept { return position_; }
    char symbol() const noexcept { return symbol_; }
    const std::string& record() const noexcept { return record_; }

private:
    static std::string make_message(std::size_t pos, char c, const std::string& rec) {
        std::string msg = "invalid symbol '";
        msg += c;
        msg += "' at position " + std::to_string(pos);
        if (!rec.empty()) msg += " in record '" + rec + "'";
        return msg;
    }

    std::size_t position_;
    char symbol_;
    std::string record_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error("parse error at line " + std::to_string(line) + ": " + reason), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

#define GENOMOTIF_DEFINE_ERROR(Name) \
    class Name : public Error {      \
    public:                          \
        using Error::Error;          \
    };

GENOMOTIF_DEFINE_ERROR(UnsupportedAlphabet)
GENOMOTIF_DEFINE_ERROR(InvalidParameter)
GENOMOTIF_DEFINE_ERROR(CapacityExceeded)
GENOMOTIF_DEFINE_ERROR(SeedMismatch)
GENOMOTIF_DEFINE_ERROR(IndexOutOfRange)
GENOMOTIF_DEFINE_ERROR(DimensionMismatch)
GENOMOTIF_DEFINE_ERROR(UnorderedDomain)
GENOMOTIF_DEFINE_ERROR(NegativeValue)
GENOMOTIF_DEFINE_ERROR(NotSquare)
GENOMOTIF_DEFINE_ERROR(NotStochastic)
GENOMOTIF_DEFINE_ERROR(NegativeWeight)
GENOMOTIF_DEFINE_ERROR(KMismatch)
GENOMOTIF_DEFINE_ERROR(SketchMismatch)
GENOMOTIF_DEFINE_ERROR(InvalidPrecision)
GENOMOTIF_DEFINE_ERROR(NoTraffic)
GENOMOTIF_DEFINE_ERROR(MissingArtifact)

#undef GENOMOTIF_DEFINE_ERROR

}  // namespace genomotif
