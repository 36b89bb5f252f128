// Copyright 2026 The flowsieve Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOWSIEVE_JSON_IO_HPP_
#define FLOWSIEVE_JSON_IO_HPP_

#include <json.hpp>

#include "flowsieve/trees.hpp"

namespace flowsieve::trees {

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

}  // namespace flowsieve::trees

#endif  // FLOWSIEVE_JSON_IO_HPP_
