// Copyright 2026 The spanclust Authors.
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spanclust/types.hpp"

namespace spanclust {

/// Round-trip decimal representation ("%.17g").
std::string format_double(double x);

std::vector<std::string> split_csv_line(const std::string& line);
double parse_double(const std::string& field, std::size_t line_no);
std::int64_t parse_int(const std::string& field, std::size_t line_no);

/// n rows of n comma-separated 0/1 values.
void write_membership_csv(std::ostream& out, const MembershipMatrix& m);
/// Rejects non-binary entries and matrices that are not equivalence relations.
MembershipMatrix read_membership_csv(std::istream& in);

/// n rows of n fields from {0, 1, *}.
void write_partial_csv(std::ostream& out, const PartialMembership& p);
PartialMembership read_partial_csv(std::istream& in);

/// Dense real matrix, one row per line.
void write_matrix_csv(std::ostream& out, const Matrix& m);
/// Rejects ragged rows.
Matrix read_matrix_csv(std::istream& in);

/// Header `i,j,weight`, one forest edge per line in lexicographic order.
void write_edges_csv(std::ostream& out, const ForestAdjacency& forest, const Matrix& sigma);

}  // namespace spanclust
