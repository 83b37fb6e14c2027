/* Copyright 2026 The DsDs Tagger Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DSDS_COMMON_TEXT_H_
#define DSDS_COMMON_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace dsds {

// Splits on every occurrence of sep; keeps empty fields.
std::vector<std::string_view> split(std::string_view text, char sep);

// Splits on runs of ASCII whitespace; drops empty fields.
std::vector<std::string_view> split_whitespace(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Code points of a UTF-8 string. Invalid bytes are passed through as
// single-byte code points so that no input is rejected.
std::u32string utf8_decode(std::string_view text);

// Number of code points.
size_t utf8_length(std::string_view text);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// Strict double parse of a whole field; returns false on garbage.
bool parse_double(std::string_view field, double& out);

bool parse_uint(std::string_view field, unsigned long long& out);

std::string read_file(const std::string& path);

// Writes via a temporary file and rename so readers never see partial data.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace dsds

#endif  // DSDS_COMMON_TEXT_H_
