#pragma once

#include <doctest.h>

#include <complex>

#include "fspec/error.hpp"
#include "fspec/operator.hpp"

namespace fspec::test {

inline double max_abs(const Operator& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

/// Diagonal operator from real entries.
inline Operator diag(std::initializer_list<double> d) {
  Operator out = Operator::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) {
    out(i, i) = v;
    ++i;
  }
  return out;
}

template <class Fn>
ErrorKind thrown_kind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected fspec::Error");
  return ErrorKind::io;
}

}  // namespace fspec::test
