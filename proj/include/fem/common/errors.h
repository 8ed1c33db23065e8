#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fem {

// Root of every error the library raises on bad input or missing artifacts.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class CorpusFormatError : public Error {
 public:
  CorpusFormatError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

class EmptyGraphError : public Error {
 public:
  using Error::Error;
};

class MissingEmbeddingError : public Error {
 public:
  using Error::Error;
};

class UnknownFormulaError : public Error {
 public:
  using Error::Error;
};

// Query LaTeX could not be parsed.
class NoParseError : public Error {
 public:
  NoParseError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class EmptyMapError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class EmptyCatalogError : public Error {
 public:
  using Error::Error;
};

class UnknownVertexError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  InsufficientDataError(const std::string& what, std::size_t required)
      : Error(what), required_(required) {}
  std::size_t required() const { return required_; }

 private:
  std::size_t required_;
};

class NoJudgmentsOfTypeError : public Error {
 public:
  using Error::Error;
};

// Missing or corrupt on-disk artifact (map, graph, model, config).
class ArtifactError : public Error {
 public:
  using Error::Error;
};

}  // namespace fem
