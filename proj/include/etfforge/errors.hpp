// SPDX-License-Identifier: Apache-2.0
//
// etfforge: equiangular tight frame construction and certification toolkit
// Copyright (C) 2026 The etfforge authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace etfforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

struct NumericFailure : Error {
    using Error::Error;
};

struct RankDeficiency : Error {
    double sigma_min;
    RankDeficiency(const std::string& what, double smin) : Error(what), sigma_min(smin) {}
};

struct NotEquiangular : Error {
    using Error::Error;
};

struct NotValidSignature : Error {
    double residual;
    NotValidSignature(const std::string& what, double res) : Error(what), residual(res) {}
};

struct DivisionByZeroInterval : Error {
    using Error::Error;
};

struct InconsistentWitness : Error {
    using Error::Error;
};

struct UnsupportedInput : Error {
    using Error::Error;
};

struct CertificationFailed : Error {
    enum class Reason { rank, infeasible };
    Reason reason;
    double gap;  // best rhs_lower - lhs_upper seen (negative when infeasible)
    CertificationFailed(const std::string& what, Reason r, double g)
        : Error(what), reason(r), gap(g) {}
};

}  // namespace etfforge
