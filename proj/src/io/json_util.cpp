// Copyright 2026 The rmp Authors
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

#include "io/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rmp::detail {

Json ParseJsonText(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(
        e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    // Drop the library's own "[json.exception.parse_error.101] parse error
    // at line L, column C: " prefix; the position is reported above.
    if (const auto colon = what.find(": "); colon != std::string::npos) {
      what = what.substr(colon + 2);
    }
    throw Error(ErrorCode::kParse, source + ":" + std::to_string(line) + ":" +
                                       std::to_string(column) + ": " + what);
  }
}

Node Node::operator[](const std::string& key) const {
  if (!value_->is_object()) Fail("expected an object");
  const auto it = value_->find(key);
  if (it == value_->end()) Fail("missing key '" + key + "'");
  return Node(*it, source_, pointer_ + "/" + key);
}

Node Node::operator[](std::size_t index) const {
  if (!value_->is_array()) Fail("expected an array");
  if (index >= value_->size()) Fail("index out of range");
  return Node((*value_)[index], source_,
              pointer_ + "/" + std::to_string(index));
}

std::size_t Node::size() const {
  if (!value_->is_array()) Fail("expected an array");
  return value_->size();
}

double Node::Number() const {
  if (!value_->is_number()) Fail("expected a number");
  const double v = value_->get<double>();
  if (!std::isfinite(v)) Fail("expected a finite number");
  return v;
}

int Node::Int() const {
  if (!value_->is_number_integer()) Fail("expected an integer");
  const auto v = value_->get<long long>();
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    Fail("integer out of range");
  }
  return static_cast<int>(v);
}

long Node::Long() const {
  if (!value_->is_number_integer()) Fail("expected an integer");
  return value_->get<long>();
}

std::string Node::String() const {
  if (!value_->is_string()) Fail("expected a string");
  return value_->get<std::string>();
}

void Node::Fail(const std::string& message) const {
  throw Error(ErrorCode::kParse,
              source_ + ": " + (pointer_.empty() ? "/" : pointer_) + ": " +
                  message);
}

}  // namespace rmp::detail
