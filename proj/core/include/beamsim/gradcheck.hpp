// SPDX-License-Identifier: Apache-2.0
//
// beamsim - mmWave beam-training simulator and learned beam predictors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMSIM_GRADCHECK_HPP
#define BEAMSIM_GRADCHECK_HPP

#include <string>
#include <vector>

namespace beamsim {

struct GradCheckResult {
  std::string name;
  double max_rel_err = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Central-finite-difference verification (64-bit, step 1e-5) of every layer
/// type and of the two full predictor stacks (memoryless CNN and the 10-step
/// recurrent model, with and without the auxiliary head).
std::vector<GradCheckResult> run_gradient_suite();

bool gradient_suite_passed(const std::vector<GradCheckResult>& results);

}  // namespace beamsim

#endif
