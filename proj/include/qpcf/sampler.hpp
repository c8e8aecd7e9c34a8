#pragma once

#include <cstdint>
#include <vector>

#include "qpcf/extension.hpp"

namespace qpcf {

// Haar-uniform points of B(0,1): every coefficient lies in pZ_p with i.i.d. uniform digits.
// Each coefficient reads its own replayable tape, so any precision reproduces the same prefix.
class HaarSampler {
 public:
  HaarSampler(const Field& field, std::uint64_t seed);

  const Field& field() const noexcept { return field_; }
  std::uint64_t seed() const noexcept { return seed_; }

  // Coefficients known modulo p^precision.
  ExtElement sample(std::int64_t precision) const;

 private:
  Field field_;
  std::uint64_t seed_;
  std::vector<RandomDigitTape> tapes_;
};

}  // namespace qpcf
