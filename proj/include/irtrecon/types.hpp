// Copyright 2026 The irtrecon Authors. All Rights Reserved.
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


#ifndef IRTRECON_TYPES_HPP_
#define IRTRECON_TYPES_HPP_

#include <Eigen/Core>

namespace irtrecon {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// Observation mask: true where a cell holds a value.
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace irtrecon

#endif  // IRTRECON_TYPES_HPP_
