// Copyright 2026 The fockstir Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <functional>

namespace fockstir {

struct QuadratureOptions {
    double abs_tol = 1e-9;
    std::size_t max_panels = std::size_t{1} << 16;
    /// Equal panels the interval is cut into before adaptive refinement.
    std::size_t initial_panels = 64;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
};

/**
 * Globally adaptive 7/15-point Gauss-Kronrod integration of f over [a, b].
 *
 * Panels with the largest error estimate are bisected until the summed
 * estimate drops below abs_tol. Throws NumericalError when the panel budget
 * is exhausted first; the message carries the achieved error.
 */
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

} // namespace fockstir
