#include "document.hpp"

#include <iterator>
#include <optional>
#include <vector>

namespace lalg::cli {

namespace {

// Character iterator that remembers how far the parser has read.
struct CountingIterator {
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* p = nullptr;
  const char** furthest = nullptr;

  reference operator*() const { return *p; }
  CountingIterator& operator++() {
    ++p;
    if (p > *furthest) *furthest = p;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.p == b.p; }
  friend bool operator!=(const CountingIterator& a, const CountingIterator& b) { return a.p != b.p; }
};

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

class Builder : public nlohmann::json_sax<json> {
 public:
  Builder(const char* begin, const char** furthest, std::map<std::string, std::pair<std::size_t, std::size_t>>& pos)
      : begin_(begin), furthest_(furthest), pos_(pos) {}

  json result;
  std::optional<std::string> error;
  std::size_t error_offset = 0;

  bool null() override { return put(json(nullptr)); }
  bool boolean(bool v) override { return put(json(v)); }
  bool number_integer(number_integer_t v) override { return put(json(v)); }
  bool number_unsigned(number_unsigned_t v) override { return put(json(v)); }
  bool number_float(number_float_t v, const string_t&) override { return put(json(v)); }
  bool string(string_t& v) override { return put(json(v)); }
  bool binary(binary_t&) override { return put(json(nullptr)); }

  bool start_object(std::size_t) override { return open(json::object()); }
  bool start_array(std::size_t) override { return open(json::array()); }
  bool end_object() override { return close(); }
  bool end_array() override { return close(); }

  bool key(string_t& k) override {
    Frame& f = stack_.back();
    if (f.node->contains(k)) {
      error = "duplicate key '" + k + "'";
      error_offset = offset();
      return false;
    }
    f.pending_key = k;
    pos_[f.path + "/" + escape_token(k)] = line_col(key_start());
    return true;
  }

  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
    std::string what = ex.what();
    auto colon = what.find("syntax error");
    error = colon == std::string::npos ? what : what.substr(colon);
    error_offset = position > 0 ? position - 1 : 0;
    return false;
  }

  std::pair<std::size_t, std::size_t> line_col(std::size_t off) const {
    std::size_t line = 1, col = 1;
    for (const char* c = begin_; c < begin_ + off; ++c) {
      if (*c == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

 private:
  struct Frame {
    json* node;
    std::string path;
    std::string pending_key;
  };

  std::size_t offset() const { return static_cast<std::size_t>(*furthest_ - begin_); }

  // Offset of the opening quote of the key just read.
  std::size_t key_start() const {
    std::size_t p = offset();
    while (p > 0 && begin_[p - 1] != '"') --p;
    if (p == 0) return 0;
    --p;
    while (p > 0) {
      --p;
      if (begin_[p] != '"') continue;
      std::size_t slashes = 0;
      while (p > slashes && begin_[p - slashes - 1] == '\\') ++slashes;
      if (slashes % 2 == 0) return p;
    }
    return p;
  }

  // Adds `v` to the current container (or as the root) and returns its pointer and address.
  std::pair<json*, std::string> insert(json v) {
    if (stack_.empty()) {
      result = std::move(v);
      pos_[""] = line_col(offset() > 0 ? offset() - 1 : 0);
      return {&result, ""};
    }
    Frame& f = stack_.back();
    if (f.node->is_object()) {
      std::string path = f.path + "/" + escape_token(f.pending_key);
      json& slot = (*f.node)[f.pending_key];
      slot = std::move(v);
      return {&slot, path};
    }
    std::string path = f.path + "/" + std::to_string(f.node->size());
    pos_[path] = line_col(offset() > 0 ? offset() - 1 : 0);
    f.node->push_back(std::move(v));
    return {&f.node->back(), path};
  }

  bool put(json v) {
    insert(std::move(v));
    return true;
  }
  bool open(json v) {
    auto [node, path] = insert(std::move(v));
    stack_.push_back({node, path, ""});
    return true;
  }
  bool close() {
    stack_.pop_back();
    return true;
  }

  const char* begin_;
  const char** furthest_;
  std::map<std::string, std::pair<std::size_t, std::size_t>>& pos_;
  std::vector<Frame> stack_;
};

const char* kind_name(const json& v) {
  switch (v.type()) {
    case json::value_t::null: return "null";
    case json::value_t::object: return "an object";
    case json::value_t::array: return "an array";
    case json::value_t::string: return "a string";
    case json::value_t::boolean: return "a boolean";
    case json::value_t::number_float: return "a decimal number";
    default: return "a number";
  }
}

}  // namespace

Document Document::parse(const std::string& text) {
  Document doc;
  const char* begin = text.data();
  const char* furthest = begin;
  Builder builder(begin, &furthest, doc.positions_);
  CountingIterator first{begin, &furthest}, last{begin + text.size(), &furthest};
  bool ok = json::sax_parse(first, last, &builder);
  if (!ok || builder.error) {
    auto [line, col] = builder.line_col(builder.error_offset);
    throw SchemaError(builder.error.value_or("malformed document"), line, col);
  }
  doc.root_ = std::move(builder.result);
  if (!doc.root_.is_object()) throw SchemaError("document must be a JSON object", 1, 1);
  return doc;
}

std::pair<std::size_t, std::size_t> Document::locate(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    auto it = positions_.find(p);
    if (it != positions_.end()) return it->second;
    if (p.empty()) return {1, 1};
    p = p.substr(0, p.rfind('/'));
  }
}

void Document::fail(const std::string& pointer, const std::string& what) const {
  auto [line, col] = locate(pointer);
  throw SchemaError((pointer.empty() ? std::string("/") : pointer) + ": " + what, line, col);
}

bool Node::has(const std::string& key) const { return value_->is_object() && value_->contains(key); }

Node Node::at(const std::string& key) const {
  if (!value_->is_object()) fail("expected an object");
  auto it = value_->find(key);
  if (it == value_->end()) fail("missing field '" + key + "'");
  return Node(*doc_, *it, pointer_ + "/" + escape_token(key));
}

Node Node::at(std::size_t index) const {
  if (!value_->is_array()) fail("expected an array");
  if (index >= value_->size()) fail("array has no entry " + std::to_string(index));
  return Node(*doc_, (*value_)[index], pointer_ + "/" + std::to_string(index));
}

std::size_t Node::size() const {
  if (!value_->is_array() && !value_->is_object()) fail(std::string("expected an array, found ") + kind_name(*value_));
  return value_->size();
}

const json::object_t* Node::object() const {
  if (!value_->is_object()) fail(std::string("expected an object, found ") + kind_name(*value_));
  return value_->get_ptr<const json::object_t*>();
}

std::string Node::string() const {
  if (!value_->is_string()) fail(std::string("expected a string, found ") + kind_name(*value_));
  return value_->get<std::string>();
}

std::size_t Node::index() const {
  if (value_->is_number_unsigned()) return value_->get<std::size_t>();
  if (value_->is_number_integer() && value_->get<long long>() >= 0) return static_cast<std::size_t>(value_->get<long long>());
  fail(std::string("expected a non-negative integer, found ") + kind_name(*value_));
}

std::size_t Node::label() const {
  std::size_t v = index();
  if (v == 0) fail("labels are 1-based");
  return v - 1;
}

bool Node::boolean() const {
  if (!value_->is_boolean()) fail(std::string("expected a boolean, found ") + kind_name(*value_));
  return value_->get<bool>();
}

double Node::number() const {
  if (!value_->is_number()) fail(std::string("expected a number, found ") + kind_name(*value_));
  return value_->get<double>();
}

std::string Node::scalar_text() const {
  if (value_->is_string()) return value_->get<std::string>();
  if (value_->is_number_integer() || value_->is_number_unsigned()) return value_->dump();
  if (value_->is_number_float()) fail("write non-integer values as exact strings such as \"1/3\"");
  fail(std::string("expected a scalar, found ") + kind_name(*value_));
}

std::string Node::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? at(key).string() : fallback;
}

std::size_t Node::index_or(const std::string& key, std::size_t fallback) const {
  return has(key) ? at(key).index() : fallback;
}

}  // namespace lalg::cli
