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

#ifndef FLOWSIEVE_SRC_FIT_COMMON_HPP_
#define FLOWSIEVE_SRC_FIT_COMMON_HPP_

#include <span>

#include "flowsieve/trees.hpp"

namespace flowsieve::trees::detail {

// Shape and class checks shared by every learner.
void check_training_input(const FeatureMatrix& x, std::span<const Label> y);

}  // namespace flowsieve::trees::detail

#endif  // FLOWSIEVE_SRC_FIT_COMMON_HPP_
