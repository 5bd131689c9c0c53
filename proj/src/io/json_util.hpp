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

// Checked access into parsed JSON. Every failure names the source and the
// JSON pointer of the offending value.

#ifndef RMP_SRC_IO_JSON_UTIL_HPP_
#define RMP_SRC_IO_JSON_UTIL_HPP_

#include <string>
#include <utility>

#include "json.hpp"
#include "rmp/errors.hpp"

namespace rmp::detail {

using Json = nlohmann::ordered_json;

// Parses `text`, reporting syntax errors as <source>:<line>:<column>.
Json ParseJsonText(const std::string& text, const std::string& source);

class Node {
 public:
  Node(const Json& value, std::string source, std::string pointer = "")
      : value_(&value), source_(std::move(source)),
        pointer_(std::move(pointer)) {}

  const Json& json() const { return *value_; }
  bool Has(const std::string& key) const {
    return value_->is_object() && value_->contains(key);
  }
  Node operator[](const std::string& key) const;
  Node operator[](std::size_t index) const;
  std::size_t size() const;  // array length; fails on non-arrays

  double Number() const;
  int Int() const;
  long Long() const;
  std::string String() const;

  [[noreturn]] void Fail(const std::string& message) const;

 private:
  const Json* value_;
  std::string source_;
  std::string pointer_;
};

}  // namespace rmp::detail

#endif  // RMP_SRC_IO_JSON_UTIL_HPP_
