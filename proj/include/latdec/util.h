// latdec/util.h

// Copyright 2026 The latdec Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LATDEC_UTIL_H_
#define LATDEC_UTIL_H_

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace latdec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed external input (text FSTs, ARPA files, CSV matrices, ...).
class ParseError : public Error {
 public:
  using Error::Error;
};

namespace internal {
inline void StrAppend(std::ostringstream &) {}
template <typename T, typename... Rest>
void StrAppend(std::ostringstream &os, const T &v, const Rest &...rest) {
  os << v;
  StrAppend(os, rest...);
}
}  // namespace internal

// Concatenates the streamable arguments into a string. gcc 11 has no
// <format>, so this stands in for the error-message formatting.
template <typename... Args>
std::string StrCat(const Args &...args) {
  std::ostringstream os;
  os.precision(17);
  internal::StrAppend(os, args...);
  return os.str();
}

std::vector<std::string> SplitWhitespace(std::string_view line);
std::vector<std::string> SplitChar(std::string_view line, char sep);
std::string_view TrimWhitespace(std::string_view s);

// Parses with full input consumption; throws ParseError naming `what`.
double ParseDouble(std::string_view token, std::string_view what);
long ParseInt(std::string_view token, std::string_view what);

}  // namespace latdec

#endif  // LATDEC_UTIL_H_
