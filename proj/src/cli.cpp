#include "zerosum/cli.hpp"

#include "zerosum/boundengine.hpp"
#include "zerosum/egzexact.hpp"
#include "zerosum/groupseq.hpp"
#include "zerosum/witness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace zerosum::cli {

namespace {

using nlohmann::ordered_json;

unsigned env_unsigned(const char* name, unsigned fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  char* end = nullptr;
  const unsigned long parsed = std::strtoul(v, &end, 10);
  if (end == v || *end != '\0') throw std::invalid_argument(std::string(name) + " is not an integer");
  return static_cast<unsigned>(parsed);
}

struct Common {
  unsigned bits = kDefaultPrecisionBits;
  unsigned threads = 0;
  std::size_t digits = 25;

  PrecisionContext ctx() const {
    PrecisionContext c{bits};
    c.validate();
    return c;
  }
  std::string fmt(const Real& x) const { return x.to_string(digits); }
};

struct ParamFlags {
  long k = 3;
  long n = 1;
  long r = 1;

  ConstructionParams params() const {
    ConstructionParams p{n, k, r};
    p.validate();
    return p;
  }
};

void add_param_flags(CLI::App* cmd, ParamFlags& f) {
  cmd->add_option("--k", f.k, "length multiplier k >= 2")->required();
  cmd->add_option("--n", f.n, "group exponent n >= 1")->required();
  cmd->add_option("--r", f.r, "rank r >= 1")->required();
}

ordered_json echo(const char* command, const Common& c, const ParamFlags& f) {
  return ordered_json{{"command", command},
                      {"k", f.k},
                      {"n", f.n},
                      {"r", f.r},
                      {"bits", c.bits},
                      {"digits", c.digits}};
}

Real parse_q(const std::string& text, const ConstructionParams& params, const PrecisionContext& ctx) {
  if (text == "auto") return balance_q(params, ctx);
  if (text.find('/') != std::string::npos) return Real(Rational::parse(text), ctx.bits);
  return Real(text, ctx.bits);
}

void emit(std::ostream& out, const ordered_json& doc) { out << doc.dump(2) << '\n'; }

// Rows in the sequence text format, one string per element.
ordered_json sequence_json(const Sequence& s) {
  std::ostringstream text;
  write_sequence(text, s);
  auto rows = ordered_json::array();
  std::istringstream lines(text.str());
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  return rows;
}

int cmd_bound(const Common& c, const ParamFlags& f, std::ostream& out) {
  const auto params = f.params();
  const auto ctx = c.ctx();
  const BoundReport rep = bound_report(params, ctx);
  const QInterval interval = balance_q_interval(params, ctx);

  ordered_json doc;
  doc["config"] = echo("bound", c, f);
  doc["L"] = params.L();
  doc["q"] = c.fmt(rep.q);
  doc["q_interval"] = {c.fmt(interval.lower), c.fmt(interval.upper)};
  doc["balance_residual"] = c.fmt(balance_residual(params, rep.q));
  auto profile = ordered_json::array();
  for (const auto& p : rep.profile) profile.push_back(c.fmt(p));
  doc["profile"] = std::move(profile);
  doc["Q"] = c.fmt(rep.coord_zero_prob);
  doc["A_finite"] = c.fmt(rep.a_finite);
  doc["A_finite_vacuous"] = rep.vacuous();
  doc["A_asymptotic"] = rep.a_asymptotic.to_string();
  doc["A_asymptotic_decimal"] = c.fmt(Real(rep.a_asymptotic, ctx.bits));
  doc["prior_base"] = c.fmt(rep.prior_base);
  if (rep.q_exact) {
    ordered_json exact;
    exact["q"] = rep.q_exact->to_string();
    auto ep = ordered_json::array();
    for (const auto& p : *rep.profile_exact) ep.push_back(p.to_string());
    exact["profile"] = std::move(ep);
    exact["Q"] = rep.coord_zero_prob_exact->to_string();
    doc["exact"] = std::move(exact);
  }
  emit(out, doc);
  return kOk;
}

int cmd_maxn(const Common& c, const ParamFlags& f, bool optimize, std::ostream& out) {
  const auto params = f.params();
  const auto ctx = c.ctx();
  Real q = balance_q(params, ctx);
  Integer n_max = max_witness_n(params, q);
  const Integer n_balanced = n_max;
  if (optimize) {
    auto opt = optimize_q(params, ctx);
    q = std::move(opt.q);
    n_max = std::move(opt.n);
  }
  ordered_json doc;
  doc["config"] = echo("maxn", c, f);
  doc["config"]["optimize_q"] = optimize;
  doc["q"] = c.fmt(q);
  doc["Q"] = c.fmt(coord_zero_prob(params, q));
  doc["max_witness_n"] = n_max.get_str();
  doc["balanced_max_witness_n"] = n_balanced.get_str();
  doc["expected_z_at_max"] = c.fmt(expected_z(params, q, n_max));
  doc["expected_z_above_max"] = c.fmt(expected_z(params, q, n_max + 1));
  emit(out, doc);
  return kOk;
}

struct WitnessFlags {
  std::uint64_t N = 0;
  std::string q = "auto";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::string out_path;
};

int cmd_witness(const Common& c, const ParamFlags& f, const WitnessFlags& w, std::ostream& out,
                std::ostream& err) {
  const auto params = f.params();
  const auto ctx = c.ctx();
  const Real q = parse_q(w.q, params, ctx);
  const auto res = search_witness(params, w.N, q, w.trials, w.seed, c.threads);

  ordered_json doc;
  doc["config"] = echo("witness", c, f);
  doc["config"]["N"] = w.N;
  doc["config"]["q"] = w.q;
  doc["config"]["trials"] = w.trials;
  doc["config"]["seed"] = w.seed;
  doc["config"]["out"] = w.out_path;
  doc["q_used"] = q.to_string();
  doc["expected_z"] = c.fmt(expected_z(params, q, Integer(static_cast<unsigned long>(w.N))));
  auto zs = ordered_json::array();
  for (const auto& z : res.z_counts) zs.push_back(z.get_str());
  doc["z_counts"] = std::move(zs);
  if (!res.certificate) {
    doc["status"] = "failed";
    emit(out, doc);
    err << "no trial out of " << w.trials << " produced a free sequence\n";
    return kSearchFailed;
  }
  const auto cert_doc = certificate_to_json(*res.certificate);
  doc["status"] = res.certificate->vacuous ? "certified (vacuous)" : "certified";
  doc["claim"] = res.certificate->claim();
  doc["trial_index"] = res.certificate->trial_index;
  if (w.out_path.empty()) {
    doc["certificate"] = cert_doc;
  } else {
    std::ofstream file(w.out_path, std::ios::binary);
    if (!file) {
      err << "cannot write " << w.out_path << '\n';
      return kError;
    }
    file << cert_doc.dump(2) << '\n';
  }
  emit(out, doc);
  return kOk;
}

int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    err << "cannot read " << path << '\n';
    return kError;
  }
  WitnessCertificate cert;
  bool ok = false;
  try {
    const auto doc = nlohmann::json::parse(file);
    cert = certificate_from_json(doc);
    ok = verify_certificate(cert);
  } catch (const nlohmann::json::parse_error& e) {
    out << "malformed: " << e.what() << '\n';
    return kMalformed;
  } catch (const MalformedCertificate& e) {
    out << "malformed: " << e.what() << '\n';
    return kMalformed;
  }
  if (!ok) {
    out << "refuted: sequence has a zero-sum subsequence of length " << cert.params.L() << '\n';
    return kRefuted;
  }
  out << "verified: " << cert.claim() << (cert.vacuous ? " (vacuous)" : "") << '\n';
  return kOk;
}

int cmd_count(std::uint32_t n, std::uint32_t r, std::size_t L, const std::string& path,
              std::ostream& out, std::ostream& err) {
  std::ifstream file(path);
  if (!file) {
    err << "cannot read " << path << '\n';
    return kError;
  }
  const GroupParams group(n, r);
  const Sequence seq = parse_sequence(file, group);
  ordered_json doc;
  doc["config"] = {{"command", "count"}, {"n", n}, {"r", r}, {"L", L}, {"seq", path}};
  doc["length"] = seq.size();
  doc["count"] = count_zero_sum_subsequences(seq, L).get_str();
  emit(out, doc);
  return kOk;
}

int cmd_exact(const Common& c, std::size_t L, std::uint32_t n, std::uint32_t r, std::size_t m_max,
              std::uint64_t budget, std::ostream& out) {
  const EgzQuery query{L, GroupParams(n, r), m_max};
  const SearchOptions options{budget, c.threads};
  const EgzResult res = compute_s(query, options);
  ordered_json doc;
  doc["config"] = {{"command", "exact"}, {"L", L},          {"n", n},
                   {"r", r},             {"mmax", m_max},   {"node_budget", budget}};
  if (res.s) {
    doc["s"] = *res.s;
    doc["lower_certificate"] = {{"m", res.witness.m()},
                                {"claim", "s > " + std::to_string(res.witness.m())},
                                {"sequence", sequence_json(res.witness.sequence())}};
    doc["upper_certificate"] = {{"m", *res.s},
                                {"claim", "every sequence of length " + std::to_string(*res.s) +
                                              " has a zero-sum subsequence of length " +
                                              std::to_string(L)},
                                {"exhaustive_nodes", res.exhaustion_nodes}};
  } else {
    doc["s"] = "unknown";
    doc["lower_certificate"] = {{"m", res.witness.m()},
                                {"claim", "s > " + std::to_string(res.witness.m())},
                                {"sequence", sequence_json(res.witness.sequence())}};
  }
  emit(out, doc);
  return kOk;
}

int cmd_sweep(const Common& c, long k, long n_from, long n_to, const std::string& path,
              std::ostream& out, std::ostream& err) {
  if (n_from < 1 || n_to < n_from) throw std::invalid_argument("need 1 <= n-from <= n-to");
  const auto ctx = c.ctx();
  const Rational base = asymptotic_base(k);
  const Real base_real(base, ctx.bits);
  const Real prior = prior_base(k, ctx);
  std::ostringstream csv;
  csv << kSweepHeader << '\n';
  for (long n = n_from; n <= n_to; ++n) {
    const ConstructionParams params{n, k, 1};
    const Real q = balance_q(params, ctx);
    const Real a = finite_base_a(params, ctx);
    csv << n << ',' << c.fmt(q) << ',' << c.fmt(coord_zero_prob(params, q)) << ',' << c.fmt(a)
        << ',' << c.fmt(base_real - a) << ',' << c.fmt(prior) << '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    err << "cannot write " << path << '\n';
    return kError;
  }
  file << csv.str();
  ordered_json doc;
  doc["config"] = {{"command", "sweep"}, {"k", k},           {"n_from", n_from},
                   {"n_to", n_to},       {"csv", path},      {"bits", c.bits},
                   {"digits", c.digits}};
  doc["rows"] = n_to - n_from + 1;
  doc["columns"] = kSweepHeader;
  doc["A_asymptotic"] = base.to_string();
  emit(out, doc);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Common common;
  try {
    common.bits = env_unsigned("ZEROSUM_BITS", kDefaultPrecisionBits);
    common.threads = env_unsigned("ZEROSUM_THREADS", 0);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }

  CLI::App app{"Zero-sum constants: first-moment bounds, witnesses and exact values", "zerosum"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--bits", common.bits, "MPFR precision in bits (env ZEROSUM_BITS)");
  app.add_option("--threads", common.threads, "worker threads, 0 = all cores (env ZEROSUM_THREADS)");
  app.add_option("--digits", common.digits, "significant digits for decimal output");

  ParamFlags bound_flags;
  auto* bound = app.add_subcommand("bound", "balanced q, coordinate profile, Q and bases");
  add_param_flags(bound, bound_flags);

  ParamFlags maxn_flags;
  bool optimize = false;
  auto* maxn = app.add_subcommand("maxn", "largest N with E[Z] < 1");
  add_param_flags(maxn, maxn_flags);
  maxn->add_flag("--optimize-q", optimize, "search q instead of using the balanced value");

  ParamFlags witness_flags;
  WitnessFlags wflags;
  auto* witness = app.add_subcommand("witness", "search for a certified free sequence");
  add_param_flags(witness, witness_flags);
  witness->add_option("--N", wflags.N, "sequence length")->required();
  witness->add_option("--q", wflags.q, "'auto' (balanced) or a decimal/rational value");
  witness->add_option("--trials", wflags.trials, "number of seeded trials");
  witness->add_option("--seed", wflags.seed, "64-bit seed");
  witness->add_option("--out", wflags.out_path, "certificate output file");

  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "check a certificate (exit 0/2/3)");
  verify->add_option("file", verify_path, "certificate file")->required();

  std::uint32_t count_n = 0;
  std::uint32_t count_r = 0;
  std::size_t count_L = 0;
  std::string count_path;
  auto* count = app.add_subcommand("count", "exact number of zero-sum L-subsequences");
  count->add_option("--n", count_n, "modulus")->required();
  count->add_option("--r", count_r, "rank")->required();
  count->add_option("--L", count_L, "subsequence length")->required();
  count->add_option("--seq", count_path, "sequence file")->required();

  std::size_t exact_L = 0;
  std::uint32_t exact_n = 0;
  std::uint32_t exact_r = 0;
  std::size_t exact_mmax = 0;
  std::uint64_t exact_budget = SearchOptions{}.node_budget;
  auto* exact = app.add_subcommand("exact", "exhaustive s_L(C_n^r)");
  exact->add_option("--L", exact_L, "zero-sum length")->required();
  exact->add_option("--n", exact_n, "modulus")->required();
  exact->add_option("--r", exact_r, "rank")->required();
  exact->add_option("--mmax", exact_mmax, "largest sequence length to search")->required();
  exact->add_option("--node-budget", exact_budget, "search nodes per length");

  long sweep_k = 3;
  long n_from = 1;
  long n_to = 1;
  std::string csv_path;
  auto* sweep = app.add_subcommand("sweep", "per-n table of q, Q and A(k,n)");
  sweep->add_option("--k", sweep_k, "length multiplier")->required();
  sweep->add_option("--n-from", n_from, "first n")->required();
  sweep->add_option("--n-to", n_to, "last n")->required();
  sweep->add_option("--csv", csv_path, "output CSV file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*bound) return cmd_bound(common, bound_flags, out);
    if (*maxn) return cmd_maxn(common, maxn_flags, optimize, out);
    if (*witness) return cmd_witness(common, witness_flags, wflags, out, err);
    if (*verify) return cmd_verify(verify_path, out, err);
    if (*count) return cmd_count(count_n, count_r, count_L, count_path, out, err);
    if (*exact) return cmd_exact(common, exact_L, exact_n, exact_r, exact_mmax, exact_budget, out);
    if (*sweep) return cmd_sweep(common, sweep_k, n_from, n_to, csv_path, out, err);
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace zerosum::cli
