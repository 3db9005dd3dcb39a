#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace memharbor {

// Base for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DuplicateId : public Error {
public:
    explicit DuplicateId(const std::string& id) : Error("duplicate memory id: " + id) {}
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : Error("embedding dimension mismatch: expected " + std::to_string(expected) +
                ", got " + std::to_string(got)) {}
};

class InvalidEmbedding : public Error {
public:
    explicit InvalidEmbedding(const std::string& why) : Error("invalid embedding: " + why) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& why, std::size_t line)
        : Error("parse error at line " + std::to_string(line) + ": " + why), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class UnsupportedVersion : public Error {
public:
    explicit UnsupportedVersion(const std::string& header)
        : Error("unsupported store version: " + header) {}
};

class FutureMemory : public Error {
public:
    FutureMemory() : Error("memory timestamp is in the future relative to query time") {}
};

class NoDimensions : public Error {
public:
    NoDimensions() : Error("enabled dimension set is empty") {}
};

class InvalidThreshold : public Error {
public:
    explicit InvalidThreshold(double value)
        : Error("resolution threshold must be in (0, 1], got " + std::to_string(value)) {}
};

class UnresolvedMention : public Error {
public:
    explicit UnresolvedMention(const std::string& surface)
        : Error("entity mention has no canonical id: " + surface) {}
};

class NotFound : public Error {
public:
    explicit NotFound(const std::string& what) : Error("not found: " + what) {}
};

class InvalidMetric : public Error {
public:
    explicit InvalidMetric(const std::string& why) : Error("invalid metric value: " + why) {}
};

} // namespace memharbor
