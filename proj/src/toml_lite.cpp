#include "toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rotsym/error.hpp"

namespace rotsym {

using nlohmann::json;

namespace {

struct Parser {
  const std::string& origin;
  int line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw config_error(origin + ":" + std::to_string(line_no) + ": " + msg);
  }

  static bool is_bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  }

  // Strips a trailing comment, respecting quoted strings.
  static std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
      if (c == '#' && !in_string) return line.substr(0, i);
    }
    return line;
  }

  static std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  std::string parse_string(const std::string& text, std::size_t& pos) const {
    if (text[pos] != '"') fail("expected a quoted string");
    std::string out;
    for (++pos; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (c == '\\') {
        if (pos + 1 >= text.size()) fail("dangling escape in string");
        const char e = text[++pos];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else if (c == '"') {
        ++pos;
        return out;
      } else {
        out += c;
      }
    }
    fail("unterminated string");
  }

  json parse_value(const std::string& text, std::size_t& pos) const {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) fail("missing value");
    const char c = text[pos];
    if (c == '"') return parse_string(text, pos);
    if (c == '[') {
      ++pos;
      json arr = json::array();
      while (true) {
        while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ',')) ++pos;
        if (pos >= text.size()) fail("unterminated array");
        if (text[pos] == ']') {
          ++pos;
          return arr;
        }
        arr.push_back(parse_value(text, pos));
      }
    }
    if (text.compare(pos, 4, "true") == 0) {
      pos += 4;
      return true;
    }
    if (text.compare(pos, 5, "false") == 0) {
      pos += 5;
      return false;
    }
    // Number: integers stay integral so seeds round-trip exactly.
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '+' || text[pos] == '-' || text[pos] == '.')) {
      ++pos;
    }
    const std::string tok = text.substr(start, pos - start);
    if (tok.empty()) fail("cannot parse value");
    errno = 0;
    char* end = nullptr;
    if (tok.find('.') == std::string::npos && tok.find('e') == std::string::npos &&
        tok.find('E') == std::string::npos) {
      const long long v = std::strtoll(tok.c_str(), &end, 10);
      if (errno == 0 && end == tok.c_str() + tok.size()) return v;
    }
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) fail("cannot parse number '" + tok + "'");
    return v;
  }

  json* navigate(json& root, const std::string& dotted, bool as_array_element) const {
    json* cur = &root;
    std::stringstream ss(dotted);
    std::vector<std::string> parts;
    std::string part;
    while (std::getline(ss, part, '.')) {
      part = trim(part);
      if (part.empty()) fail("empty key segment in [" + dotted + "]");
      parts.push_back(part);
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const bool last = i + 1 == parts.size();
      json& slot = (*cur)[parts[i]];
      if (last && as_array_element) {
        if (slot.is_null()) slot = json::array();
        if (!slot.is_array()) fail("[" + dotted + "] conflicts with an existing key");
        slot.push_back(json::object());
        cur = &slot.back();
      } else if (slot.is_array()) {
        if (slot.empty()) fail("[" + dotted + "] refers into an empty table array");
        cur = &slot.back();
      } else {
        if (slot.is_null()) slot = json::object();
        if (!slot.is_object()) fail("[" + dotted + "] conflicts with an existing key");
        cur = &slot;
      }
    }
    return cur;
  }
};

}  // namespace

json parse_toml(const std::string& text, const std::string& origin) {
  Parser p{origin};
  json root = json::object();
  json* table = &root;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++p.line_no;
    std::string line = Parser::trim(Parser::strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      const bool array_table = line.size() > 1 && line[1] == '[';
      const std::string close = array_table ? "]]" : "]";
      const std::size_t end = line.find(close);
      if (end == std::string::npos || Parser::trim(line.substr(end + close.size())) != "") {
        p.fail("malformed table header");
      }
      const std::string name =
          Parser::trim(line.substr(array_table ? 2 : 1, end - (array_table ? 2 : 1)));
      if (name.empty()) p.fail("empty table name");
      table = p.navigate(root, name, array_table);
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value'");
    std::string key = Parser::trim(line.substr(0, eq));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') {
      key = key.substr(1, key.size() - 2);
    }
    if (key.empty()) p.fail("empty key");
    for (char c : key) {
      if (!Parser::is_bare_char(c)) p.fail("unsupported key '" + key + "'");
    }

    std::string value_text = Parser::trim(line.substr(eq + 1));
    // Arrays may span lines; accumulate until the brackets balance.
    auto depth = [](const std::string& s) {
      int d = 0;
      bool in_string = false;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
        if (in_string) continue;
        if (s[i] == '[') ++d;
        if (s[i] == ']') --d;
      }
      return d;
    };
    while (depth(value_text) > 0 && std::getline(in, raw)) {
      ++p.line_no;
      value_text += " " + Parser::trim(Parser::strip_comment(raw));
    }

    std::size_t pos = 0;
    const json value = p.parse_value(value_text, pos);
    while (pos < value_text.size() && std::isspace(static_cast<unsigned char>(value_text[pos]))) ++pos;
    if (pos != value_text.size()) p.fail("trailing characters after value for '" + key + "'");
    if (table->contains(key)) p.fail("duplicate key '" + key + "'");
    (*table)[key] = value;
  }
  return root;
}

json parse_toml_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_toml(ss.str(), path.string());
}

}  // namespace rotsym
