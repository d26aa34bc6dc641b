#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prase {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown by the TSV readers. line() is 1-based within the offending source.
class MalformedLine : public Error {
public:
    MalformedLine(std::size_t line, const std::string& source)
        : Error(source + ": malformed line " + std::to_string(line)),
          line_(line), source_(source) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& source() const noexcept { return source_; }

private:
    std::size_t line_;
    std::string source_;
};

class UnknownEntity : public Error {
public:
    explicit UnknownEntity(const std::string& entity) : Error("unknown entity: " + entity), entity_(entity) {}
    const std::string& entity() const noexcept { return entity_; }

private:
    std::string entity_;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class NoSeeds : public Error {
public:
    NoSeeds() : Error("no seed mappings available for embedding training") {}
};

class ZeroVector : public Error {
public:
    ZeroVector() : Error("cosine similarity of a zero vector is undefined") {}
};

class EmptyReference : public Error {
public:
    EmptyReference() : Error("reference alignment is empty") {}
};

class UnknownTask : public Error {
public:
    explicit UnknownTask(const std::string& id) : Error("unknown task: " + id) {}
};

class WrongState : public Error {
public:
    using Error::Error;
};

class UnknownPair : public Error {
public:
    UnknownPair(const std::string& left, const std::string& right)
        : Error("pair is not pending feedback: " + left + " / " + right) {}
};

// Dataset that cannot be resolved or parsed. Parse failures keep the
// offending file and line.
class InvalidDataset : public Error {
public:
    using Error::Error;
    explicit InvalidDataset(const MalformedLine& cause)
        : Error(std::string("invalid dataset: ") + cause.what()), line_(cause.line()), source_(cause.source()) {}

    std::size_t line() const noexcept { return line_; }  // 0 when not a parse failure
    const std::string& source() const noexcept { return source_; }

private:
    std::size_t line_ = 0;
    std::string source_;
};

}  // namespace prase
