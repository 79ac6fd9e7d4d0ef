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

#include <Eigen/Dense>

#include <complex>

namespace fockstir {

using cplx = std::complex<double>;

/// Amplitudes b_{i,n} of atomic states 1..4 within photon manifold n.
struct AmplitudeBlock {
    Eigen::Vector4cd b = Eigen::Vector4cd::Zero();
    int n = 0;

    static AmplitudeBlock basis(int state, int n = 0) {
        AmplitudeBlock out;
        out.b(state - 1) = 1.0;
        out.n = n;
        return out;
    }

    double norm2() const { return b.squaredNorm(); }
    double population(int state) const { return std::norm(b(state - 1)); }
};

} // namespace fockstir
