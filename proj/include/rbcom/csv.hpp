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

#ifndef RBCOM_CSV_HPP
#define RBCOM_CSV_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace rbcom::csv {

/// Shortest scientific-notation string that parses back to exactly `v`.
inline std::string number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
    if (res.ec != std::errc())
        return "nan";
    return std::string(buf, res.ptr);
}

} // namespace rbcom::csv

#endif
