#include "conflab/report.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "conflab/error.hpp"
#include "detail/format.hpp"

namespace conflab::report {

namespace {

void write_string(std::ostream& os, const std::string& s) {
  os << '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\n': os << "\\n"; break;
      case '\t': os << "\\t"; break;
      case '\r': os << "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          os << buf;
        } else {
          os << c;
        }
    }
  }
  os << '"';
}

void newline(std::ostream& os, int indent, int depth) {
  if (indent <= 0) return;
  os << '\n' << std::string(static_cast<std::size_t>(indent * depth), ' ');
}

}  // namespace

Value Value::array(const std::vector<double>& xs) {
  Array a;
  a.reserve(xs.size());
  for (double x : xs) a.emplace_back(x);
  return Value(std::move(a));
}

const Value& Value::operator[](const std::string& key) const {
  for (const auto& [k, v] : object())
    if (k == key) return v;
  throw Error(ErrorCode::InvalidArgument, "no member " + key);
}

double Value::as_double() const {
  if (const auto* i = std::get_if<std::int64_t>(&v_)) return static_cast<double>(*i);
  return std::get<double>(v_);
}

void Value::write_at(std::ostream& os, int indent, int depth) const {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::nullptr_t>) {
          os << "null";
        } else if constexpr (std::is_same_v<T, bool>) {
          os << (x ? "true" : "false");
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          os << x;
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isfinite(x))
            os << detail::format_double(x);
          else
            write_string(os, std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf"));
        } else if constexpr (std::is_same_v<T, std::string>) {
          write_string(os, x);
        } else if constexpr (std::is_same_v<T, std::shared_ptr<Array>>) {
          if (x->empty()) {
            os << "[]";
            return;
          }
          // arrays of scalars stay on one line
          bool flat = true;
          for (const auto& e : *x) flat = flat && !std::holds_alternative<std::shared_ptr<Array>>(e.v_) &&
                                          !std::holds_alternative<std::shared_ptr<Object>>(e.v_);
          os << '[';
          for (std::size_t i = 0; i < x->size(); ++i) {
            if (i) os << (flat && indent > 0 ? ", " : ",");
            if (!flat) newline(os, indent, depth + 1);
            (*x)[i].write_at(os, indent, depth + 1);
          }
          if (!flat) newline(os, indent, depth);
          os << ']';
        } else {
          if (x->empty()) {
            os << "{}";
            return;
          }
          os << '{';
          for (std::size_t i = 0; i < x->size(); ++i) {
            if (i) os << ',';
            newline(os, indent, depth + 1);
            write_string(os, (*x)[i].first);
            os << (indent > 0 ? ": " : ":");
            (*x)[i].second.write_at(os, indent, depth + 1);
          }
          newline(os, indent, depth);
          os << '}';
        }
      },
      v_);
}

void Value::write(std::ostream& os, int indent) const { write_at(os, indent, 0); }

std::string Value::dump(int indent) const {
  std::ostringstream os;
  write(os, indent);
  return os.str();
}

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skip: return "skip";
  }
  return "?";
}

Check& ReportDocument::add(std::string name, bool passed, bool exact, Object details) {
  checks_.push_back({std::move(name), passed ? Status::pass : Status::fail, exact, std::move(details)});
  return checks_.back();
}

Check& ReportDocument::skip(std::string name, std::string reason) {
  checks_.push_back({std::move(name), Status::skip, false, {{"reason", std::move(reason)}}});
  return checks_.back();
}

void ReportDocument::set_output(std::string key, Value v) {
  for (auto& [k, old] : outputs_)
    if (k == key) {
      old = std::move(v);
      return;
    }
  outputs_.emplace_back(std::move(key), std::move(v));
}

bool ReportDocument::passed() const {
  for (const auto& c : checks_)
    if (c.status == Status::fail) return false;
  return true;
}

Value ReportDocument::to_value() const {
  Array checks;
  for (const auto& c : checks_)
    checks.emplace_back(Object{{"name", c.name},
                               {"status", to_string(c.status)},
                               {"mode", c.exact ? "exact" : "numeric"},
                               {"details", c.details}});
  return Object{{"command", command_},
                {"inputs", inputs_},
                {"checks", std::move(checks)},
                {"outputs", outputs_},
                {"overall", passed() ? "pass" : "fail"}};
}

std::string ReportDocument::to_json() const { return to_value().dump(2) + "\n"; }

std::string ReportDocument::to_text() const {
  std::ostringstream os;
  os << "command: " << command_ << '\n';
  for (const auto& [k, v] : inputs_) os << "  " << k << " = " << v.dump(0) << '\n';
  for (const auto& c : checks_) {
    os << '[' << to_string(c.status) << "] " << c.name << (c.exact ? " (exact)" : " (numeric)") << '\n';
    for (const auto& [k, v] : c.details) os << "    " << k << ": " << v.dump(0) << '\n';
  }
  for (const auto& [k, v] : outputs_) os << k << ": " << v.dump(0) << '\n';
  os << "overall: " << (passed() ? "pass" : "fail") << '\n';
  return os.str();
}

}  // namespace conflab::report
