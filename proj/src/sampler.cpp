#include "qpcf/sampler.hpp"

#include "qpcf/rng.hpp"

namespace qpcf {

HaarSampler::HaarSampler(const Field& field, std::uint64_t seed) : field_(field), seed_(seed) {
  for (std::int64_t k = 0; k < field->degree(); ++k) {
    tapes_.emplace_back(derive_seed(seed, static_cast<std::uint64_t>(k)), field->alphabet, 1);
  }
}

ExtElement HaarSampler::sample(std::int64_t precision) const {
  std::vector<PAdicNumber> coeffs;
  coeffs.reserve(tapes_.size());
  for (const auto& tape : tapes_) coeffs.push_back(tape.materialize(precision));
  return ExtElement(field_, std::move(coeffs));
}

}  // namespace qpcf
