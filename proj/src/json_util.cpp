#include "json_util.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace bosonet::detail {

using nlohmann::json;

nlohmann::json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << "syntax error at line " << line << ", column " << column << ": " << e.what();
    throw ParseError(os.str(), line, column);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ValidationError(where + "." + key + ": unknown key");
  }
}

double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ValidationError(where + "." + key + ": missing required key");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(where + "." + key + ": expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ValidationError(where + "." + key + ": missing required key");
  const auto& v = obj.at(key);
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 1e9) return static_cast<int>(d);
  }
  throw ValidationError(where + "." + key + ": expected an integer");
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ValidationError(where + "." + key + ": missing required key");
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ValidationError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

cplx get_complex(const json& value, const std::string& where) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
    throw ValidationError(where + ": expected [re, im]");
  return {value[0].get<double>(), value[1].get<double>()};
}

}  // namespace bosonet::detail
