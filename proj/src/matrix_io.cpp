#include "minctrl/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace minctrl {
namespace {

using nlohmann::json;

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

Position position_of(const std::string& text, std::size_t offset) {
  Position p;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

bool is_integer_literal(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::optional<mpz_class> parse_integer(std::string s) {
  if (!is_integer_literal(s)) return std::nullopt;
  if (s[0] == '+') s.erase(0, 1);
  return mpz_class(s, 10);
}

// "p/q" or an integer string. Empty optional means malformed; q = 0 throws.
std::optional<Rational> parse_rational_string(const std::string& s, std::string& why) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    auto p = parse_integer(s);
    if (!p) {
      why = "expected an integer or \"p/q\", got \"" + s + "\"";
      return std::nullopt;
    }
    return Rational(*p);
  }
  auto p = parse_integer(s.substr(0, slash));
  auto q = parse_integer(s.substr(slash + 1));
  if (!p || !q || s[slash + 1] == '-' || s[slash + 1] == '+') {
    why = "malformed rational \"" + s + "\"";
    return std::nullopt;
  }
  if (*q == 0) {
    why = "zero denominator in \"" + s + "\"";
    return std::nullopt;
  }
  Rational r(*p, *q);
  r.canonicalize();
  return r;
}

MatrixEntry entry_from_double(double x) {
  MatrixEntry e;
  e.value = x;
  e.exact = rationalize(x);
  return e;
}

MatrixEntry entry_from_rational(const Rational& r, bool from_string) {
  MatrixEntry e;
  e.exact = r;
  e.value = r.get_d();
  e.rational_string = from_string;
  return e;
}

// Offset of the element with the given index inside the array that follows
// the top-level "data" key, or of the key itself if the scan fails.
std::size_t locate_data_element(const std::string& text, std::size_t index) {
  const std::size_t key = text.find("\"data\"");
  if (key == std::string::npos) return 0;
  std::size_t i = text.find('[', key);
  if (i == std::string::npos) return key;
  ++i;
  std::size_t element = 0;
  int depth = 0;
  bool at_start = true;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (depth == 0 && at_start) {
      if (c == ']') return i;
      if (element == index) return i;
      at_start = false;
    }
    if (c == '"') {
      for (++i; i < text.size() && text[i] != '"'; ++i)
        if (text[i] == '\\') ++i;
    } else if (c == '[' || c == '{') {
      ++depth;
    } else if (c == ']' || c == '}') {
      if (depth == 0) return i;
      --depth;
    } else if (c == ',' && depth == 0) {
      ++element;
      at_start = true;
    }
  }
  return key;
}

std::size_t locate_key(const std::string& text, const std::string& key) {
  const std::size_t k = text.find("\"" + key + "\"");
  return k == std::string::npos ? 0 : k;
}

struct Located {
  MatrixFile file;
  std::vector<Position> positions;
};

Located parse_json(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto p = position_of(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    const auto colon = msg.rfind(": ");
    if (colon != std::string::npos) msg = msg.substr(colon + 2);
    throw ParseError(source, p.line, p.column, "invalid JSON: " + msg);
  }
  auto fail_at = [&](std::size_t offset, const std::string& msg) {
    const auto p = position_of(text, offset);
    throw ParseError(source, p.line, p.column, msg);
  };
  if (!doc.is_object()) fail_at(0, "expected a JSON object with rows, cols and data");
  for (const char* key : {"rows", "cols", "data"}) {
    if (!doc.contains(key)) fail_at(0, std::string("missing key \"") + key + "\"");
  }
  auto dimension = [&](const char* key) -> std::size_t {
    const auto& v = doc[key];
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      fail_at(locate_key(text, key), std::string("\"") + key + "\" must be a positive integer");
    }
    return static_cast<std::size_t>(v.get<long long>());
  };
  Located out;
  out.file.format = MatrixFile::Format::kJson;
  out.file.rows = dimension("rows");
  out.file.cols = dimension("cols");
  const auto& data = doc["data"];
  if (!data.is_array()) fail_at(locate_key(text, "data"), "\"data\" must be an array");
  const std::size_t expected = out.file.rows * out.file.cols;
  if (data.size() != expected) {
    fail_at(locate_key(text, "data"), "\"data\" has " + std::to_string(data.size()) + " entries, expected " +
                                          std::to_string(expected) + " (rows x cols)");
  }
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& v = data[k];
    const std::size_t offset = locate_data_element(text, k);
    out.positions.push_back(position_of(text, offset));
    if (v.is_number_integer()) {
      Rational r = v.is_number_unsigned() ? Rational(std::to_string(v.get<unsigned long long>()))
                                          : Rational(std::to_string(v.get<long long>()));
      out.file.entries.push_back(entry_from_rational(r, false));
    } else if (v.is_number_float()) {
      out.file.entries.push_back(entry_from_double(v.get<double>()));
    } else if (v.is_string()) {
      std::string why;
      auto r = parse_rational_string(v.get<std::string>(), why);
      if (!r) fail_at(offset, why);
      out.file.entries.push_back(entry_from_rational(*r, true));
    } else {
      fail_at(offset, "entry " + std::to_string(k) + " must be a number or a \"p/q\" string");
    }
  }
  return out;
}

Located parse_plain(const std::string& text, const std::string& source) {
  Located out;
  out.file.format = MatrixFile::Format::kPlainText;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::pair<std::string, std::size_t>> tokens;
    for (std::size_t i = 0; i < line.size();) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      if (line[i] == '#') break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
      tokens.emplace_back(line.substr(i, j - i), i + 1);
      i = j;
    }
    if (tokens.empty()) continue;
    if (out.file.rows == 0) {
      out.file.cols = tokens.size();
    } else if (tokens.size() != out.file.cols) {
      const std::size_t col = tokens.size() > out.file.cols ? tokens[out.file.cols].second : line.size() + 1;
      throw ParseError(source, line_no, col,
                       "row has " + std::to_string(tokens.size()) + " entries, expected " +
                           std::to_string(out.file.cols));
    }
    ++out.file.rows;
    for (const auto& [tok, col] : tokens) {
      out.positions.push_back({line_no, col});
      if (tok.find('/') != std::string::npos) {
        std::string why;
        auto r = parse_rational_string(tok, why);
        if (!r) throw ParseError(source, line_no, col, why);
        out.file.entries.push_back(entry_from_rational(*r, true));
      } else if (is_integer_literal(tok)) {
        out.file.entries.push_back(entry_from_rational(Rational(*parse_integer(tok)), false));
      } else {
        double x = 0.0;
        const char* first = tok.data() + (tok[0] == '+' ? 1 : 0);
        const auto res = std::from_chars(first, tok.data() + tok.size(), x);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(x)) {
          throw ParseError(source, line_no, col, "invalid number \"" + tok + "\"");
        }
        out.file.entries.push_back(entry_from_double(x));
      }
    }
  }
  if (out.file.rows == 0) throw ParseError(source, line_no == 0 ? 1 : line_no, 1, "empty matrix");
  return out;
}

}  // namespace

bool MatrixFile::exact_representable() const {
  for (const auto& e : entries)
    if (!e.exact) return false;
  return true;
}

bool MatrixFile::has_rational_strings() const {
  for (const auto& e : entries)
    if (e.rational_string) return true;
  return false;
}

RealMatrix MatrixFile::to_real() const {
  std::vector<double> v;
  v.reserve(entries.size());
  for (const auto& e : entries) v.push_back(e.value);
  return RealMatrix(rows, cols, std::move(v));
}

RationalMatrix MatrixFile::to_rational() const {
  std::vector<Rational> v;
  v.reserve(entries.size());
  for (const auto& e : entries) {
    if (!e.exact) throw Error(ErrorCode::kInvalidArgument, "matrix entry " + to_string(e.value) + " is not exactly representable");
    v.push_back(*e.exact);
  }
  return RationalMatrix(rows, cols, std::move(v));
}

std::string MatrixFile::canonical() const {
  std::string s = std::to_string(rows) + "x" + std::to_string(cols) + ":";
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k) s += ',';
    s += entries[k].exact ? to_string(*entries[k].exact) : to_string(entries[k].value);
  }
  return s;
}

MatrixFile parse_matrix(const std::string& text, const std::string& source) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ParseError(source, 1, 1, "empty input");
  Located parsed = text[first] == '{' ? parse_json(text, source) : parse_plain(text, source);
  if (parsed.file.has_rational_strings()) {
    for (std::size_t k = 0; k < parsed.file.entries.size(); ++k) {
      if (!parsed.file.entries[k].exact) {
        const auto& p = parsed.positions[k];
        throw ParseError(source, p.line, p.column,
                         "rational strings cannot be mixed with floats that have no exact rational form");
      }
    }
  }
  return std::move(parsed.file);
}

MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 1, 1, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str(), path);
}

std::string format_matrix_json(const RationalMatrix& m) {
  nlohmann::ordered_json doc;
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  auto data = nlohmann::ordered_json::array();
  for (const auto& v : m.data()) {
    if (v.get_den() == 1 && v.get_num().fits_slong_p()) {
      data.push_back(v.get_num().get_si());
    } else {
      data.push_back(to_string(v));
    }
  }
  doc["data"] = std::move(data);
  return doc.dump() + "\n";
}

std::string format_matrix_json(const RealMatrix& m) {
  nlohmann::ordered_json doc;
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  auto data = nlohmann::ordered_json::array();
  for (double v : m.data()) data.push_back(v == 0.0 ? 0.0 : v);
  doc["data"] = std::move(data);
  return doc.dump() + "\n";
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace minctrl
