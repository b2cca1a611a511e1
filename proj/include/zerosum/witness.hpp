#pragma once

// Random Bernoulli-q constructions and machine-checkable certificates that a
// binary sequence of length N has no zero-sum subsequence of length kn,
// i.e. s_{kn}(C_n^r) > N.

#include "zerosum/boundengine.hpp"
#include "zerosum/groupseq.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zerosum {

inline constexpr const char* kCertificateSchema = "zerosum-cert/1";

/// Certificate content that fails schema or dimension checks. Distinct from a
/// well-formed certificate whose claim is false.
class MalformedCertificate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WitnessCertificate {
  ConstructionParams params;
  std::uint64_t N = 0;
  std::string q_used;
  std::uint64_t seed = 0;
  std::uint64_t trial_index = 0;
  Sequence sequence{GroupParams(1, 1)};
  bool vacuous = false;

  /// e.g. "s_6(C_2^4) > 7".
  std::string claim() const;
};

/// Probability threshold t with P(draw < t) = q for a uniform 64-bit draw,
/// i.e. floor(q 2^64) clamped to [0, 2^64 - 1].
std::uint64_t bernoulli_threshold(const Real& q);

/// Raw 64-bit draw number `index` of the stream for (seed, trial). Counter
/// based: any draw can be recomputed without replaying the stream.
std::uint64_t stream_draw(std::uint64_t seed, std::uint64_t trial, std::uint64_t index);

/// N vectors in {0,1}^r, coordinate j of element i is stream_draw(seed, trial,
/// i*r + j) < bernoulli_threshold(q). Throws std::domain_error unless 0 < q < 1.
Sequence sample_sequence(const ConstructionParams& params, const Real& q, std::uint64_t N,
                         std::uint64_t seed, std::uint64_t trial = 0);

struct WitnessSearchResult {
  std::optional<WitnessCertificate> certificate;
  /// Z for every trial up to and including the winner, or for all trials on failure.
  std::vector<Integer> z_counts;
};

/// Samples trials 0, 1, ... and certifies the first with Z = 0. The winner is
/// the lowest successful trial index for every thread count (0 = all cores).
WitnessSearchResult search_witness(const ConstructionParams& params, std::uint64_t N,
                                   const Real& q, std::uint64_t trials, std::uint64_t seed,
                                   unsigned threads = 1);

/// True iff the sequence has no zero-sum subsequence of length kn. Never
/// consults q or the seed. Throws MalformedCertificate on inconsistent
/// dimensions, parameters or vacuity flag.
bool verify_certificate(const WitnessCertificate& cert);

nlohmann::ordered_json certificate_to_json(const WitnessCertificate& cert);
/// Throws MalformedCertificate on any schema violation, including residues
/// outside {0,1}.
WitnessCertificate certificate_from_json(const nlohmann::json& doc);

}  // namespace zerosum
