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

#include "spanclust/csv.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

namespace spanclust {

namespace {

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

void require_square(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) throw std::invalid_argument("matrix CSV is empty");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.size()) {
      throw std::invalid_argument("matrix CSV row " + std::to_string(r + 1) + " has " +
                                  std::to_string(rows[r].size()) + " fields, expected " +
                                  std::to_string(rows.size()));
    }
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

double parse_double(const std::string& field, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": '" + field +
                                "' is not a number");
  }
  return v;
}

std::int64_t parse_int(const std::string& field, std::size_t line_no) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": '" + field +
                                "' is not an integer");
  }
  return v;
}

void write_membership_csv(std::ostream& out, const MembershipMatrix& m) {
  const Index n = m.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (j > 0) out << ',';
      out << (m.same(i, j) ? '1' : '0');
    }
    out << '\n';
  }
}

MembershipMatrix read_membership_csv(std::istream& in) {
  const auto rows = read_rows(in);
  require_square(rows);
  const Index n = static_cast<Index>(rows.size());
  std::vector<Index> assignment(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    // Block id: first column j with M_ij = 1.
    assignment[i] = -1;
    for (Index j = 0; j < n; ++j) {
      const std::string& f = rows[i][j];
      if (f != "0" && f != "1") throw std::invalid_argument("membership CSV entries must be 0 or 1");
      if (f == "1" && assignment[i] < 0) assignment[i] = j;
    }
    if (assignment[i] < 0) throw std::invalid_argument("membership CSV diagonal must be 1");
  }
  MembershipMatrix m(assignment);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if ((rows[i][j] == "1") != m.same(i, j)) {
        throw std::invalid_argument("membership CSV is not an equivalence relation");
      }
    }
  }
  return m;
}

void write_partial_csv(std::ostream& out, const PartialMembership& p) {
  const Index n = p.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (j > 0) out << ',';
      switch (p(i, j)) {
        case Relation::Same:
          out << '1';
          break;
        case Relation::Different:
          out << '0';
          break;
        case Relation::Unobserved:
          out << '*';
          break;
      }
    }
    out << '\n';
  }
}

PartialMembership read_partial_csv(std::istream& in) {
  const auto rows = read_rows(in);
  require_square(rows);
  const Index n = static_cast<Index>(rows.size());
  auto parse = [](const std::string& f) {
    if (f == "1") return Relation::Same;
    if (f == "0") return Relation::Different;
    if (f == "*") return Relation::Unobserved;
    throw std::invalid_argument("partial membership entries must be 0, 1 or *");
  };
  PartialMembership p(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const Relation r = parse(rows[i][j]);
      if (parse(rows[j][i]) != r) throw std::invalid_argument("partial membership CSV is not symmetric");
      p.set(i, j, r);
    }
  }
  return p;
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(std::istream& in) {
  const auto rows = read_rows(in);
  if (rows.empty()) throw std::invalid_argument("matrix CSV is empty");
  const std::size_t cols = rows.front().size();
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw std::invalid_argument("matrix CSV row " + std::to_string(r + 1) + " is ragged");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = parse_double(rows[r][c], r + 1);
    }
  }
  return m;
}

void write_edges_csv(std::ostream& out, const ForestAdjacency& forest, const Matrix& sigma) {
  out << "i,j,weight\n";
  for (const Edge& e : forest.edges()) {
    out << e.i << ',' << e.j << ',' << format_double(sigma(e.i, e.j)) << '\n';
  }
}

}  // namespace spanclust
