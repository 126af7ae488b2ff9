#pragma once

// Verification reports: ordered JSON values with fixed float formatting, and
// the check-list document every command emits.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace conflab::report {

class Value;
using Object = std::vector<std::pair<std::string, Value>>;
using Array = std::vector<Value>;

/// JSON value whose objects keep insertion order. Doubles print with %.17g;
/// non-finite doubles print as strings ("nan", "inf", "-inf").
class Value {
 public:
  Value() = default;
  Value(std::nullptr_t) {}
  Value(bool b) : v_(b) {}
  Value(int i) : v_(static_cast<std::int64_t>(i)) {}
  Value(long i) : v_(static_cast<std::int64_t>(i)) {}
  Value(long long i) : v_(static_cast<std::int64_t>(i)) {}
  Value(unsigned long i) : v_(static_cast<std::int64_t>(i)) {}
  Value(double d) : v_(d) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(Array a) : v_(std::make_shared<Array>(std::move(a))) {}
  Value(Object o) : v_(std::make_shared<Object>(std::move(o))) {}

  static Value array(const std::vector<double>& xs);

  bool is_object() const { return std::holds_alternative<std::shared_ptr<Object>>(v_); }
  const Object& object() const { return *std::get<std::shared_ptr<Object>>(v_); }
  /// Member lookup on objects; throws InvalidArgument when absent.
  const Value& operator[](const std::string& key) const;
  bool as_bool() const { return std::get<bool>(v_); }
  double as_double() const;
  const std::string& as_string() const { return std::get<std::string>(v_); }

  void write(std::ostream& os, int indent = 2) const;
  std::string dump(int indent = 2) const;

 private:
  void write_at(std::ostream& os, int indent, int depth) const;
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, std::shared_ptr<Array>,
               std::shared_ptr<Object>>
      v_ = nullptr;
};

enum class Status { pass, fail, skip };
const char* to_string(Status s);

struct Check {
  std::string name;
  Status status = Status::skip;
  bool exact = false;
  Object details;
};

class ReportDocument {
 public:
  ReportDocument(std::string command, Object inputs) : command_(std::move(command)), inputs_(std::move(inputs)) {}

  Check& add(std::string name, bool passed, bool exact, Object details = {});
  Check& skip(std::string name, std::string reason);
  /// Free-form results that are not checks (tensors, series, ...).
  void set_output(std::string key, Value v);

  const std::vector<Check>& checks() const { return checks_; }
  /// Pass iff every non-skipped check passes.
  bool passed() const;
  Value to_value() const;
  std::string to_json() const;
  std::string to_text() const;

 private:
  std::string command_;
  Object inputs_;
  std::vector<Check> checks_;
  Object outputs_;
};

}  // namespace conflab::report
