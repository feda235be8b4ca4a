// SPDX-License-Identifier: Apache-2.0
//
// rbcom - resonant beam communication channel modelling library
// Copyright (C) 2026 The rbcom authors
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

#ifndef RBCOM_ERROR_HPP
#define RBCOM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbcom {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition, invariant or physical feasibility constraint was violated.
class domain_error : public error {
public:
    using error::error;
};

/// An iterative solver failed to converge. Carries the last bracket.
class numerical_failure : public error {
public:
    numerical_failure(const std::string& what, double bracket_low, double bracket_high)
        : error(what + " (last bracket [" + std::to_string(bracket_low) + ", " +
                std::to_string(bracket_high) + "])"),
          low_(bracket_low), high_(bracket_high) {}

    double bracket_low() const noexcept { return low_; }
    double bracket_high() const noexcept { return high_; }

private:
    double low_;
    double high_;
};

/// The amplitude-compensation weight for a frame would exceed one, so the
/// modulator cannot hold the channel coefficient constant.
class scheme_infeasible : public error {
public:
    scheme_infeasible(const std::string& what, std::size_t frame, std::size_t slot, double weight)
        : error(what), frame_(frame), slot_(slot), weight_(weight) {}

    std::size_t frame() const noexcept { return frame_; }
    std::size_t slot() const noexcept { return slot_; }
    double weight() const noexcept { return weight_; }

private:
    std::size_t frame_;
    std::size_t slot_;
    double weight_;
};

} // namespace rbcom

#endif
