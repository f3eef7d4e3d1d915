// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcube/fock_vector.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace qcube {

void write_vector(std::ostream& out, const RationalVector& v) {
  for (std::uint32_t a = 0; a < v.coeff.size(); ++a)
    if (sgn(v.coeff[a]) != 0)
      out << a << " " << to_string(v.coeff[a]) << "\n";
}

RationalVector read_vector(std::istream& in, int n) {
  RationalVector v = RationalVector::zero(n);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::uint32_t a = 0;
    std::string value;
    if (!(ls >> a >> value) || a >= v.coeff.size())
      throw std::runtime_error("vector import: malformed line " +
                               std::to_string(line_no));
    v.coeff[a] = parse_rational(value);
  }
  return v;
}

}  // namespace qcube
