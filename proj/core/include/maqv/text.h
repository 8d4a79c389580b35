// Copyright 2026 The MAQV Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MAQV_TEXT_H_
#define MAQV_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace maqv {

std::string_view Trim(std::string_view text);
std::string ToLower(std::string_view text);

// Number of maximal non-whitespace runs.
int CountWords(std::string_view text);
std::vector<std::string> SplitWhitespace(std::string_view text);
std::vector<std::string> Split(std::string_view text, char sep);

// Formats `value` with `digits` significant digits (printf %g).
std::string FormatSignificant(double value, int digits = 6);

}  // namespace maqv

#endif  // MAQV_TEXT_H_
