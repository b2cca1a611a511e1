#include "zerosum/witness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

namespace zerosum {

std::string WitnessCertificate::claim() const {
  return "s_" + std::to_string(params.L()) + "(C_" + std::to_string(params.n) + "^" +
         std::to_string(params.r) + ") > " + std::to_string(N);
}

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GroupParams group_of(const ConstructionParams& params) {
  return GroupParams(static_cast<std::uint32_t>(params.n), static_cast<std::uint32_t>(params.r));
}

}  // namespace

std::uint64_t stream_draw(std::uint64_t seed, std::uint64_t trial, std::uint64_t index) {
  const std::uint64_t key = mix64(seed ^ mix64(trial));
  return mix64(key + (index + 1) * kGolden);
}

std::uint64_t bernoulli_threshold(const Real& q) {
  if (!(q.sign() > 0 && q < Real(1L, q.precision()))) {
    throw std::domain_error("q must lie strictly inside (0,1), got " + q.to_string(20));
  }
  Real scaled(q);
  mpfr_mul_2ui(scaled.get(), scaled.get(), 64, MPFR_RNDN);
  Integer t = scaled.floor();
  const Integer cap = (Integer(1) << 64) - 1;
  if (t > cap) t = cap;
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, t.get_mpz_t());
  return out;
}

Sequence sample_sequence(const ConstructionParams& params, const Real& q, std::uint64_t N,
                         std::uint64_t seed, std::uint64_t trial) {
  params.validate();
  const std::uint64_t threshold = bernoulli_threshold(q);
  const GroupParams group = group_of(params);
  const auto r = static_cast<std::uint64_t>(params.r);
  Sequence seq(group);
  for (std::uint64_t i = 0; i < N; ++i) {
    std::vector<std::uint32_t> bits(r);
    for (std::uint64_t j = 0; j < r; ++j) bits[j] = stream_draw(seed, trial, i * r + j) < threshold;
    seq.push_back(GroupElem(group, std::move(bits)));
  }
  return seq;
}

WitnessSearchResult search_witness(const ConstructionParams& params, std::uint64_t N,
                                   const Real& q, std::uint64_t trials, std::uint64_t seed,
                                   unsigned threads) {
  params.validate();
  if (trials < 1) throw std::invalid_argument("witness search needs at least one trial");
  bernoulli_threshold(q);  // validates q
  const auto L = static_cast<std::size_t>(params.L());

  auto make_certificate = [&](Sequence seq, std::uint64_t trial) {
    WitnessCertificate cert;
    cert.params = params;
    cert.N = N;
    cert.q_used = q.to_string();
    cert.seed = seed;
    cert.trial_index = trial;
    cert.sequence = std::move(seq);
    cert.vacuous = N < static_cast<std::uint64_t>(L);
    return cert;
  };

  WitnessSearchResult result;
  if (N < L) {
    result.certificate = make_certificate(sample_sequence(params, q, N, seed, 0), 0);
    result.z_counts.emplace_back(0);
    return result;
  }

  std::vector<std::optional<Integer>> z(trials);
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> winner{trials};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      while (true) {
        const std::uint64_t t = next.fetch_add(1);
        if (t >= trials || t > winner.load()) break;
        z[t] = count_zero_sum_subsequences(sample_sequence(params, q, N, seed, t), L);
        if (*z[t] == 0) {
          std::uint64_t cur = winner.load();
          while (t < cur && !winner.compare_exchange_weak(cur, t)) {
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      winner.store(0);
    }
  };
  if (threads == 0) threads = std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, trials));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const std::uint64_t w = winner.load();
  const std::uint64_t last = w < trials ? w : trials - 1;
  for (std::uint64_t t = 0; t <= last; ++t) result.z_counts.push_back(*z[t]);
  if (w < trials) {
    // Re-sampling is cheap and keeps the certificate independent of worker state.
    result.certificate = make_certificate(sample_sequence(params, q, N, seed, w), w);
  }
  return result;
}

bool verify_certificate(const WitnessCertificate& cert) {
  try {
    cert.params.validate();
  } catch (const std::invalid_argument& e) {
    throw MalformedCertificate(std::string("bad parameters: ") + e.what());
  }
  const auto& group = cert.sequence.group();
  if (group.n() != static_cast<std::uint64_t>(cert.params.n) ||
      group.r() != static_cast<std::uint64_t>(cert.params.r)) {
    throw MalformedCertificate("sequence group does not match (n, r)");
  }
  if (cert.sequence.size() != cert.N) {
    throw MalformedCertificate("sequence length " + std::to_string(cert.sequence.size()) +
                               " differs from N = " + std::to_string(cert.N));
  }
  const auto L = static_cast<std::uint64_t>(cert.params.L());
  if (cert.vacuous != (cert.N < L)) throw MalformedCertificate("vacuous flag inconsistent with N < kn");
  for (const auto& e : cert.sequence.elements()) {
    for (const auto v : e.residues()) {
      if (v > 1) throw MalformedCertificate("residue outside {0,1}");
    }
  }
  return !has_zero_sum_subsequence(cert.sequence, static_cast<std::size_t>(L));
}

nlohmann::ordered_json certificate_to_json(const WitnessCertificate& cert) {
  nlohmann::ordered_json doc;
  doc["schema"] = kCertificateSchema;
  doc["params"] = {{"n", cert.params.n}, {"k", cert.params.k}, {"r", cert.params.r},
                   {"L", cert.params.L()}};
  doc["N"] = cert.N;
  doc["q_used"] = cert.q_used;
  doc["seed"] = cert.seed;
  doc["trial_index"] = cert.trial_index;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& e : cert.sequence.elements()) {
    rows.push_back(std::vector<std::uint32_t>(e.residues().begin(), e.residues().end()));
  }
  doc["sequence"] = std::move(rows);
  doc["claim"] = cert.claim();
  doc["vacuous"] = cert.vacuous;
  return doc;
}

namespace {

const nlohmann::json& field(const nlohmann::json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw MalformedCertificate(std::string("missing field '") + name + "'");
  }
  return obj.at(name);
}

template <class T>
T unsigned_field(const nlohmann::json& obj, const char* name) {
  const auto& v = field(obj, name);
  if (!v.is_number_unsigned()) {
    throw MalformedCertificate(std::string("field '") + name + "' must be a nonnegative integer");
  }
  return v.get<T>();
}

}  // namespace

WitnessCertificate certificate_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw MalformedCertificate("certificate must be a JSON object");
  const auto& schema = field(doc, "schema");
  if (!schema.is_string() || schema.get<std::string>() != kCertificateSchema) {
    throw MalformedCertificate(std::string("schema must be \"") + kCertificateSchema + "\"");
  }
  WitnessCertificate cert;
  const auto& params = field(doc, "params");
  cert.params.n = unsigned_field<long>(params, "n");
  cert.params.k = unsigned_field<long>(params, "k");
  cert.params.r = unsigned_field<long>(params, "r");
  try {
    cert.params.validate();
  } catch (const std::invalid_argument& e) {
    throw MalformedCertificate(std::string("bad parameters: ") + e.what());
  }
  if (params.contains("L") && unsigned_field<long>(params, "L") != cert.params.L()) {
    throw MalformedCertificate("params.L must equal k*n");
  }
  cert.N = unsigned_field<std::uint64_t>(doc, "N");
  const auto& q = field(doc, "q_used");
  if (!q.is_string()) throw MalformedCertificate("q_used must be a decimal string");
  cert.q_used = q.get<std::string>();
  cert.seed = unsigned_field<std::uint64_t>(doc, "seed");
  cert.trial_index = unsigned_field<std::uint64_t>(doc, "trial_index");
  const auto& vac = field(doc, "vacuous");
  if (!vac.is_boolean()) throw MalformedCertificate("vacuous must be a boolean");
  cert.vacuous = vac.get<bool>();

  GroupParams group(1, 1);
  try {
    group = GroupParams(static_cast<std::uint32_t>(cert.params.n),
                        static_cast<std::uint32_t>(cert.params.r));
  } catch (const BudgetExceeded& e) {
    throw MalformedCertificate(e.what());
  }
  Sequence seq(group);
  const auto& rows = field(doc, "sequence");
  if (!rows.is_array()) throw MalformedCertificate("sequence must be an array");
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(cert.params.r)) {
      throw MalformedCertificate("each sequence entry must be an array of r residues");
    }
    std::vector<std::uint32_t> residues;
    for (const auto& v : row) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0 || v.get<std::int64_t>() > 1) {
        throw MalformedCertificate("residue outside {0,1}: " + v.dump());
      }
      residues.push_back(v.get<std::uint32_t>());
    }
    seq.push_back(GroupElem(group, std::move(residues)));
  }
  cert.sequence = std::move(seq);
  if (cert.sequence.size() != cert.N) throw MalformedCertificate("sequence length differs from N");
  if (cert.vacuous != (cert.N < static_cast<std::uint64_t>(cert.params.L()))) {
    throw MalformedCertificate("vacuous flag inconsistent with N < kn");
  }
  if (doc.contains("claim") && (!doc.at("claim").is_string() || doc.at("claim") != cert.claim())) {
    throw MalformedCertificate("claim does not match parameters");
  }
  return cert;
}

}  // namespace zerosum
