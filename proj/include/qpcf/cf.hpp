#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpcf/exact.hpp"
#include "qpcf/extension.hpp"

namespace qpcf {

enum class CFStatus {
  Terminated,          // exact mode: alpha_n = floor(alpha_n)
  Truncated,           // max steps reached
  PrecisionExhausted,  // stream mode: not enough digits for the next quotient
  ZeroAtPrecision,     // stream mode: alpha_n - c_n indistinguishable from zero
};

std::string to_string(CFStatus status);

struct CFExpansion {
  explicit CFExpansion(Field f) : field(std::move(f)) {}

  Field field;
  std::vector<ZElement> quotients;  // c_0 .. c_n
  CFStatus status = CFStatus::Truncated;
  // Exact mode: the complete quotient alpha_{n+1} when truncated.
  std::optional<ExactElement> tail;
  // Stream mode: K-precision left in the last complete quotient.
  std::optional<std::int64_t> final_precision;

  // Index n of the last quotient.
  std::int64_t steps() const { return static_cast<std::int64_t>(quotients.size()) - 1; }
};

CFExpansion expand(const ExactElement& alpha, std::int64_t max_steps);
CFExpansion expand(const ExtElement& alpha, std::int64_t max_steps);

struct Convergent {
  ExactElement s;
  ExactElement t;
};

// s_k, t_k for k = 0..n. Throws InvariantViolation if t_k s_{k-1} - s_k t_{k-1} != (-1)^k.
std::vector<Convergent> convergents(const std::vector<ZElement>& quotients);

// [c_0; c_1, ..., c_n, tail] (no tail: [c_0; ..., c_n]).
ExactElement fold(const std::vector<ZElement>& quotients,
                  const std::optional<ExactElement>& tail = std::nullopt);

// 1/(|t_k| |t_{k+1}|) from the quotients alone, |t_k| = |c_1 ... c_k|.
AbsValue convergent_error_bound(const std::vector<ZElement>& quotients, std::int64_t k);

// |alpha - s_k/t_k|, checked against convergent_error_bound (zero at the terminating index,
// |c_{n+1}| = |tail| at the truncation index). Throws InvariantViolation on mismatch.
AbsValue approximation_error(const ExactElement& alpha, const CFExpansion& expansion,
                             const std::vector<Convergent>& convergents, std::int64_t k);
AbsValue approximation_error(const ExactElement& alpha, const CFExpansion& expansion, std::int64_t k);

// Galois height on Q(i) and Q(w); UnsupportedField elsewhere.
Rational galois_height_squared(const ExactElement& x);
double galois_height(const ExactElement& x);

struct FinitenessCertificate {
  FinitenessCertificate(Field f, ExactElement a) : field(std::move(f)), alpha(std::move(a)) {}

  Field field;
  ExactElement alpha;
  Integer denominator;  // p-free part of the coefficient denominators (Y_0 in the recurrence)
  std::vector<ZElement> quotients;
  std::vector<ExactElement> u;  // U_k = s_k - alpha t_k
  std::vector<ExactElement> y;  // Y_k = denominator * U_k
  std::vector<double> heights;  // T_k = H(Y_k) / p^k
  double d1 = 0;
  double d2 = 0;
  double quotient_bound = 0;  // p/sqrt(2) or p sqrt(3)/2
  double max_quotient_height = 0;
  bool terminated = false;
  std::int64_t steps = 0;
  bool heights_ok = true;
  bool integrality_ok = true;
  bool recurrence_ok = true;
  bool contraction_ok = true;

  bool valid() const { return terminated && heights_ok && integrality_ok && recurrence_ok && contraction_ok; }
};

// Requires a Browkin Q(i) field with p = 3 mod 4 or Q(w) with p = 5 mod 12.
// Throws NonTermination after max_steps quotients.
FinitenessCertificate finiteness_test(const ExactElement& alpha, std::int64_t max_steps = 10'000);

void check_finiteness_preconditions(const FieldParams& field);

// Each coordinate a/c with |a|, |c| <= bound, c != 0 and p not dividing c.
ExactElement random_element(const Field& field, std::int64_t bound, std::uint64_t seed);

nlohmann::json to_json(const CFExpansion& expansion);
nlohmann::json to_json(const FinitenessCertificate& certificate);

}  // namespace qpcf
