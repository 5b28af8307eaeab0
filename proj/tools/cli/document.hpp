#pragma once

#include <map>
#include <string>
#include <utility>

#include "json.hpp"

namespace lalg::cli {

using json = nlohmann::ordered_json;

/// Problem with the shape of the input document; exit status 2.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

/// A parsed job document with the source position of every value, keyed by JSON pointer.
class Document {
 public:
  /// Throws SchemaError on malformed JSON or a duplicate key.
  static Document parse(const std::string& text);

  const json& root() const { return root_; }
  /// Line and column of the value at `pointer`, or of its closest recorded ancestor.
  std::pair<std::size_t, std::size_t> locate(const std::string& pointer) const;
  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const;

 private:
  json root_;
  std::map<std::string, std::pair<std::size_t, std::size_t>> positions_;
};

/// A value inside a Document together with its pointer, for positioned diagnostics.
class Node {
 public:
  Node(const Document& doc, const json& value, std::string pointer)
      : doc_(&doc), value_(&value), pointer_(std::move(pointer)) {}

  const json& value() const { return *value_; }
  const std::string& pointer() const { return pointer_; }
  const Document& document() const { return *doc_; }

  bool has(const std::string& key) const;
  Node at(const std::string& key) const;
  Node at(std::size_t index) const;
  std::size_t size() const;

  const json::object_t* object() const;
  std::string string() const;
  std::size_t index() const;    // non-negative integer
  std::size_t label() const;    // 1-based label, returned 0-based
  bool boolean() const;
  double number() const;
  /// Exact scalar text: a string, or an integer.
  std::string scalar_text() const;

  std::string string_or(const std::string& key, const std::string& fallback) const;
  std::size_t index_or(const std::string& key, std::size_t fallback) const;

  [[noreturn]] void fail(const std::string& what) const { doc_->fail(pointer_, what); }

 private:
  const Document* doc_;
  const json* value_;
  std::string pointer_;
};

}  // namespace lalg::cli
