#pragma once

// Shared helpers for the JSON readers. Internal to the library.

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bosonet/types.hpp"

namespace bosonet::detail {

// Parses JSON text, translating byte offsets into line/column on failure.
nlohmann::json parse_json(std::string_view text);

std::string read_file(const std::string& path);

// Rejects any key of `obj` not in `allowed`.
void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                const std::string& where);

double get_number(const nlohmann::json& obj, const char* key, const std::string& where);
int get_int(const nlohmann::json& obj, const char* key, const std::string& where);
std::string get_string(const nlohmann::json& obj, const char* key, const std::string& where);
// [re, im] pair
cplx get_complex(const nlohmann::json& value, const std::string& where);

}  // namespace bosonet::detail
