#pragma once

#include <stdexcept>
#include <string>

namespace oam {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceLoc {
  int line = 0;    // 1-based; 0 means "no location"
  int column = 0;  // 1-based
};

// Netlist text that does not tokenize / match the grammar.
class ParseError : public Error {
 public:
  ParseError(SourceLoc loc, const std::string& msg)
      : Error(format(loc, msg)), loc_(loc) {}
  SourceLoc where() const { return loc_; }

 private:
  static std::string format(SourceLoc loc, const std::string& msg) {
    return "parse error at " + std::to_string(loc.line) + ":" +
           std::to_string(loc.column) + ": " + msg;
  }
  SourceLoc loc_;
};

// Structurally well-formed input that violates circuit rules
// (duplicate port, unknown port, non-injective sorter, ...).
class SemanticError : public Error {
 public:
  explicit SemanticError(const std::string& msg) : Error(msg) {}
  SemanticError(SourceLoc loc, const std::string& msg)
      : Error("semantic error at " + std::to_string(loc.line) + ":" +
              std::to_string(loc.column) + ": " + msg),
        loc_(loc) {}
  SourceLoc where() const { return loc_; }

 private:
  SourceLoc loc_;
};

// A builder could not realize the requested apparatus.
class BuildError : public Error {
 public:
  using Error::Error;
};

// Bad protocol / run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace oam
