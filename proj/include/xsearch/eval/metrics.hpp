// Copyright 2026 The X-Search Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "xsearch/search_result.hpp"

namespace xsearch::eval {

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// Compares the proxy's results with the engine's direct answer by distinct
/// url. precision = |both| / |r_xs| and recall = |both| / |r_or|. An empty
/// r_or gives recall 1. An empty r_xs gives precision 1 when r_or is also
/// empty and 0 otherwise.
PrecisionRecall precision_recall(const ResultSet& r_or, const ResultSet& r_xs);

}  // namespace xsearch::eval
