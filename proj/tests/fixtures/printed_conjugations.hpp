#pragma once

// Conjugation matrices as printed for the auxiliary-parity hopping circuits:
// U for the horizontal pair, V for the vertical pair, W for the primed pair.
// Row-major, first qudit most significant.

#include "ququart/gamma.hpp"

#include "../support/oracle.hpp"

#include <cmath>
#include <initializer_list>
#include <vector>

namespace printed {

using ququart::Complex;

inline const Complex z{0.0, 0.0};
inline const Complex o{1.0, 0.0};
inline const Complex h{std::sqrt(0.5), 0.0};
inline const Complex ih{0.0, std::sqrt(0.5)};

inline ququart::MatrixXc fill(std::initializer_list<Complex> entries) {
  ququart::MatrixXc m(16, 16);
  auto it = entries.begin();
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) m(r, c) = *it++;
  return m;
}

inline ququart::MatrixXc printed_u() {
  return fill({
      z, z, -h, z, z, z, z, z, h, z, z, z, z, z, z, z,
      o, z, z, z, z, z, z, z, z, z, z, z, z, z, z, z,
      z, o, z, z, z, z, z, z, z, z, z, z, z, z, z, z,
      z, z, z, h, z, z, z, z, z, -h, z, z, z, z, z, z,
      z, z, z, z, -o, z, z, z, z, z, z, z, z, z, z, z,
      z, z, h, z, z, z, z, z, h, z, z, z, z, z, z, z,
      z, z, z, h, z, z, z, z, z, h, z, z, z, z, z, z,
      z, z, z, z, z, -o, z, z, z, z, z, z, z, z, z, z,
      z, z, z, z, z, z, z, z, z, z, -o, z, z, z, z, z,
      z, z, z, z, z, z, -h, z, z, z, z, z, h, z, z, z,
      z, z, z, z, z, z, z, -h, z, z, z, z, z, h, z, z,
      z, z, z, z, z, z, z, z, z, z, z, o, z, z, z, z,
      z, z, z, z, z, z, -h, z, z, z, z, z, -h, z, z, z,
      z, z, z, z, z, z, z, z, z, z, z, z, z, z, o, z,
      z, z, z, z, z, z, z, z, z, z, z, z, z, z, z, o,
      z, z, z, z, z, z, z, -h, z, z, z, z, z, -h, z, z,
  });
}

inline ququart::MatrixXc printed_v() {
  return fill({
      z, z, ih, z, z, z, z, z, h, z, z, z, z, z, z, z,
      o, z, z, z, z, z, z, z, z, z, z, z, z, z, z, z,
      z, o, z, z, z, z, z, z, z, z, z, z, z, z, z, z,
      z, z, z, ih, z, z, z, z, z, -h, z, z, z, z, z, z,
      z, z, z, z, o, z, z, z, z, z, z, z, z, z, z, z,
      z, z, -ih, z, z, z, z, z, h, z, z, z, z, z, z, z,
      z, z, z, ih, z, z, z, z, z, h, z, z, z, z, z, z,
      z, z, z, z, z, o, z, z, z, z, z, z, z, z, z, z,
      z, z, z, z, z, z, z, z, z, z, -o, z, z, z, z, z,
      z, z, z, z, z, z, ih, z, z, z, z, z, h, z, z, z,
      z, z, z, z, z, z, z, -ih, z, z, z, z, z, h, z, z,
      z, z, z, z, z, z, z, z, z, z, z, o, z, z, z, z,
      z, z, z, z, z, z, -ih, z, z, z, z, z, h, z, z, z,
      z, z, z, z, z, z, z, z, z, z, z, z, z, z, o, z,
      z, z, z, z, z, z, z, z, z, z, z, z, z, z, z, o,
      z, z, z, z, z, z, z, ih, z, z, z, z, z, h, z, z,
  });
}

inline ququart::MatrixXc printed_w() {
  return fill({
      -ih, z, z, z, z, z, z, z, z, z, -h, z, z, z, z, z,
      z, z, -ih, z, z, z, z, z, h, z, z, z, z, z, z, z,
      z, z, z, z, -ih, z, z, z, z, z, z, z, z, z, -h, z,
      z, z, z, z, z, z, -ih, z, z, z, z, z, h, z, z, z,
      h, z, z, z, z, z, z, z, z, z, ih, z, z, z, z, z,
      z, z, h, z, z, z, z, z, -ih, z, z, z, z, z, z, z,
      z, z, z, z, h, z, z, z, z, z, z, z, z, z, ih, z,
      z, z, z, z, z, z, h, z, z, z, z, z, -ih, z, z, z,
      z, z, z, h, z, z, z, z, z, -ih, z, z, z, z, z, z,
      z, h, z, z, z, z, z, z, z, z, z, ih, z, z, z, z,
      z, z, z, z, z, z, z, h, z, z, z, z, z, -ih, z, z,
      z, z, z, z, z, h, z, z, z, z, z, z, z, z, z, ih,
      z, z, z, ih, z, z, z, z, z, -h, z, z, z, z, z, z,
      z, -ih, z, z, z, z, z, z, z, z, z, -h, z, z, z, z,
      z, z, z, z, z, z, z, ih, z, z, z, z, z, -h, z, z,
      z, z, z, z, z, ih, z, z, z, z, z, z, z, z, z, h,
  });
}

/// A printed matrix with the pair (A, D) it is meant to satisfy: U·A·U† = D.
struct Case {
  const char* name;
  ququart::MatrixXc u;
  ququart::MatrixXc a;
  ququart::MatrixXc d;
};

inline std::vector<Case> cases() {
  using oracle::gamma;
  using oracle::kron;
  const ququart::MatrixXc id = ququart::MatrixXc::Identity(4, 4);
  const ququart::MatrixXc t1 = gamma(0) * gamma(1), t2 = gamma(0) * gamma(2);
  const ququart::MatrixXc pair_d = kron(gamma(0), id) + kron(id, gamma(0));
  return {
      {"U", printed_u(), ququart::kI * (kron(t1, gamma(2)) - kron(t2, gamma(1))), pair_d},
      {"V", printed_v(), kron(t1, t2) - kron(t2, t1), pair_d},
      {"W", printed_w(), kron(gamma(1), gamma(2)), kron(gamma(0), id)},
  };
}

}  // namespace printed
