#include <cctype>
#include <fstream>
#include <sstream>

#include "conflab/tensor.hpp"

namespace conflab::tensor {

namespace {

class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, int nvars) : text_(text), nvars_(nvars) {}

  Polynomial parse() {
    Polynomial p = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, msg + " at column " + std::to_string(pos_ + 1));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expression() {
    Polynomial acc = term();
    while (true) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (true) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        const Polynomial d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division only by nonzero constants");
        acc = acc * d.constant_value().unit_inverse();
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (accept('^')) {
      skip_space();
      const long k = integer();
      if (k < 0) fail("negative exponent");
      base = base.pow(static_cast<int>(k));
    }
    return base;
  }

  long integer() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stol(std::string(text_.substr(start, pos_ - start)));
  }

  Polynomial primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expression();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (c == 'x') {
      ++pos_;
      const long idx = integer();
      if (idx < 1 || idx > nvars_) fail("variable x" + std::to_string(idx) + " out of range");
      return Polynomial::variable(nvars_, static_cast<int>(idx - 1));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string digits(text_.substr(start, pos_ - start));
      long scale = 0;
      if (pos_ < text_.size() && text_[pos_] == '.') {
        ++pos_;
        const std::size_t frac = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        digits += std::string(text_.substr(frac, pos_ - frac));
        scale = static_cast<long>(pos_ - frac);
      }
      if (digits.empty()) fail("malformed number");
      mpz_class num(digits);
      mpz_class den = 1;
      for (long i = 0; i < scale; ++i) den *= 10;
      Rational r(num, den);
      r.canonicalize();
      return Polynomial::constant(nvars_, ExactScalar(r));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  int nvars_;
  std::size_t pos_ = 0;
};

[[noreturn]] void line_error(int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

void check_signature_at_base_point(const MetricSpec& g) {
  const int n = g.dim();
  std::vector<FramePoint> candidates;
  candidates.emplace_back(n, Rational(0));
  candidates.emplace_back(n, Rational(1));
  FramePoint ramp(n);
  for (int i = 0; i < n; ++i) ramp[i] = i + 1;
  candidates.push_back(ramp);
  for (const auto& x : candidates) {
    try {
      const Signature s = signature_at(g, x);
      if (!(s == g.declared()))
        throw Error(ErrorCode::InvalidSignature,
                    "declared type (" + std::to_string(g.declared().p) + "," + std::to_string(g.declared().q) +
                        ") but signature at base point is (" + std::to_string(s.p) + "," +
                        std::to_string(s.q) + ")");
      return;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateAtPoint) throw;
    }
  }
}

}  // namespace

Polynomial parse_polynomial(std::string_view expr, int nvars) { return PolynomialParser(expr, nvars).parse(); }

MetricSpec parse_metric(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  int n = -1;
  std::optional<Signature> sig;
  std::vector<std::optional<Polynomial>> entries;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string keyword;
    if (!(ls >> keyword)) continue;
    if (keyword == "dim") {
      if (n >= 0) line_error(line, "duplicate 'dim'");
      if (!(ls >> n) || n < 3) line_error(line, "'dim' needs an integer n >= 3");
      entries.assign(n * n, std::nullopt);
    } else if (keyword == "type") {
      if (n < 0) line_error(line, "'type' before 'dim'");
      Signature s;
      if (!(ls >> s.p >> s.q)) line_error(line, "'type' needs two integers");
      sig = s;
    } else if (keyword == "g") {
      if (n < 0 || !sig) line_error(line, "'g' entry before 'dim' and 'type'");
      int i = 0, j = 0;
      if (!(ls >> i >> j)) line_error(line, "'g' needs indices i j");
      if (i < 1 || i > n || j < 1 || j > n) line_error(line, "index out of range");
      std::string expr;
      std::getline(ls, expr);
      Polynomial p(n);
      try {
        p = parse_polynomial(expr, n);
      } catch (const Error& e) {
        line_error(line, e.what());
      }
      for (auto [a, b] : {std::pair{i - 1, j - 1}, std::pair{j - 1, i - 1}}) {
        auto& slot = entries[a * n + b];
        if (slot && !(*slot == p)) line_error(line, "conflicting duplicate entry for g " + std::to_string(i) + " " + std::to_string(j));
        slot = p;
      }
    } else {
      line_error(line, "unknown keyword '" + keyword + "'");
    }
  }
  if (n < 0) throw Error(ErrorCode::ParseError, "missing 'dim' line");
  if (!sig) throw Error(ErrorCode::ParseError, "missing 'type' line");
  std::vector<Polynomial> comps;
  comps.reserve(n * n);
  for (auto& e : entries) comps.push_back(e ? *e : Polynomial(n));
  MetricSpec g(*sig, std::move(comps));
  check_signature_at_base_point(g);
  return g;
}

MetricSpec read_metric_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_metric(ss.str());
}

std::string format_metric(const MetricSpec& g) {
  std::ostringstream os;
  os << "dim " << g.dim() << "\n";
  os << "type " << g.declared().p << " " << g.declared().q << "\n";
  for (int i = 0; i < g.dim(); ++i)
    for (int j = i; j < g.dim(); ++j)
      if (!g(i, j).is_zero()) os << "g " << i + 1 << " " << j + 1 << " " << g(i, j).to_string() << "\n";
  return os.str();
}

}  // namespace conflab::tensor
