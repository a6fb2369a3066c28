/*
 * Copyright 2026 The bbcreds Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bbcreds/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "bbcreds/crypto.hpp"
#include "bbcreds/eval.hpp"
#include "bbcreds/parties.hpp"
#include "bbcreds/store.hpp"

namespace bbcreds::cli {

namespace {

namespace fs = std::filesystem;

// Raised inside a command to leave with a specific exit code.
struct CommandExit {
  int code;
  std::string message;
};

struct GlobalOptions {
  std::string issuer = "issuer";
  std::optional<std::uint64_t> clock;
  std::string variant = "xor";
  double sigma = kSigmaDefault;
  std::size_t code_t = 30;
  std::size_t dim = kDefaultDim;
  int age_threshold = 18;

  std::uint64_t now() const {
    return clock ? *clock : static_cast<std::uint64_t>(std::time(nullptr));
  }

  ProtocolConfig protocol() const {
    ProtocolConfig cfg;
    cfg.dim = dim;
    cfg.code_t = code_t;
    cfg.variant =
        variant == "encrypted" ? SketchVariant::Encrypted : SketchVariant::Xor;
    cfg.capture_sigma = sigma;
    return cfg;
  }
};

std::string public_path(const std::string& prefix) { return prefix + ".pub"; }
std::string private_path(const std::string& prefix) { return prefix + ".key"; }

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CommandExit{kUsage, "cannot read " + path};
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  return lines;
}

IssuerKeyPair load_issuer_keys(const std::string& prefix) {
  auto lines = read_lines(private_path(prefix));
  auto seed = lines.empty() ? std::nullopt
                            : array_from_hex<crypto::kSignSeedBytes>(lines[0]);
  if (!seed) throw CommandExit{kUsage, "malformed issuer key file"};
  return IssuerKeyPair::from_seed(*seed);
}

PublicKey load_issuer_public(const std::string& prefix) {
  auto lines = read_lines(public_path(prefix));
  auto pk = lines.empty() ? std::nullopt
                          : array_from_hex<crypto::kSignPublicBytes>(lines[0]);
  if (!pk) throw CommandExit{kUsage, "malformed issuer public key file"};
  return *pk;
}

std::uint64_t seed_or_draw(const std::optional<std::uint64_t>& seed,
                           std::ostream& out) {
  if (seed) return *seed;
  std::uint64_t drawn = crypto::random_seed();
  out << "seed=" << drawn << '\n';
  return drawn;
}

DeviceRecord load_record_or_exit(const std::string& path) {
  if (!fs::exists(path)) throw CommandExit{kUsage, "record not found: " + path};
  auto rec = load_record_file(path);
  if (!rec) throw CommandExit{kUsage, "FormatError " + describe(rec.error())};
  return std::move(rec).value();
}

LivenessPolicy liveness_from(const std::string& mode) {
  return mode == "fail" ? LivenessPolicy::always_fail()
                        : LivenessPolicy::always_pass();
}

// ---------------------------------------------------------------------------

struct KeygenArgs {
  std::string out;
  std::optional<std::uint64_t> seed;
  bool force = false;
};

int cmd_asp_keygen(const GlobalOptions& g, const KeygenArgs& a,
                   std::ostream& out) {
  const std::string prefix = a.out.empty() ? g.issuer : a.out;
  const auto pub = public_path(prefix), key = private_path(prefix);
  if (!a.force && (fs::exists(pub) || fs::exists(key)))
    throw CommandExit{kUsage, "issuer key files exist (use --force): " + prefix};

  auto keys = IssuerKeyPair::generate(seed_or_draw(a.seed, out));
  {
    std::ofstream f(key, std::ios::trunc);
    f << to_hex(keys.seed()) << '\n' << to_hex(keys.public_key()) << '\n';
    if (!f) throw CommandExit{kUsage, "cannot write " + key};
  }
  fs::permissions(key, fs::perms::owner_read | fs::perms::owner_write,
                  fs::perm_options::replace);
  {
    std::ofstream f(pub, std::ios::trunc);
    f << to_hex(keys.public_key()) << '\n';
    if (!f) throw CommandExit{kUsage, "cannot write " + pub};
  }
  out << "issuer public key: " << to_hex(keys.public_key()) << '\n';
  return kOk;
}

struct EnrollArgs {
  std::uint64_t identity_seed = 0;
  std::string dob;
  std::string record;
  std::optional<std::uint64_t> seed;
  std::string liveness = "pass";
  std::uint64_t validity_days = 365;
};

int cmd_enroll(const GlobalOptions& g, const EnrollArgs& a, std::ostream& out) {
  auto dob = CivilDate::parse(a.dob);
  if (!dob) throw CommandExit{kUsage, "--dob must be YYYY-MM-DD"};
  if (a.validity_days == 0) throw CommandExit{kUsage, "--validity-days must be > 0"};

  AttributeServiceProvider asp(load_issuer_keys(g.issuer),
                               AgePolicy{g.age_threshold, a.validity_days * 86400});
  InProcessAspChannel channel(asp, g.now());
  ProtocolConfig cfg = g.protocol();
  cfg.liveness = liveness_from(a.liveness);
  const std::uint64_t seed = seed_or_draw(a.seed, out);

  auto rec = device_enroll(new_identity(a.identity_seed, cfg.dim), channel, cfg,
                           Evidence::date_of_birth(*dob), seed);
  if (!rec) {
    const auto& f = rec.error();
    switch (f.kind) {
      case EnrollFailure::Kind::LivenessFailed:
        throw CommandExit{kLivenessFailed, "liveness check failed"};
      case EnrollFailure::Kind::IssuanceDenied:
        throw CommandExit{kIssuanceDenied,
                          "issuance denied: " + std::string(to_string(f.denial))};
      case EnrollFailure::Kind::UntrustedCredential:
        throw CommandExit{kIssuanceDenied, "issuance denied: untrusted credential"};
    }
  }
  try {
    save_record_file(*rec, a.record);
  } catch (const IoError& e) {
    throw CommandExit{kUsage, e.what()};
  }
  out << "enrolled: record=" << a.record
      << " sketch=" << to_string(rec->sketch.variant)
      << " code=(" << rec->helper.code.n << "," << rec->helper.code.k << ","
      << rec->helper.code.t << ")\n";
  return kOk;
}

struct AuthArgs {
  std::string record;
  std::uint64_t identity_seed = 0;
  bool impostor = false;
  std::optional<int> required_age;
  std::optional<std::uint64_t> seed;
  std::string liveness = "pass";
};

int cmd_auth(const GlobalOptions& g, const AuthArgs& a, std::ostream& out) {
  DeviceRecord rec = load_record_or_exit(a.record);
  const PublicKey issuer = load_issuer_public(g.issuer);
  const std::uint64_t seed = seed_or_draw(a.seed, out);
  const std::size_t dim = rec.helper.quant.dim;

  Embedding sample =
      a.impostor
          ? sample_impostor(crypto::derive_seed(seed, "cli/impostor"), dim)
          : sample_genuine(new_identity(a.identity_seed, dim), {g.sigma},
                           crypto::derive_seed(seed, "cli/genuine"));
  auto cred = device_authenticate(sample, rec, liveness_from(a.liveness));
  if (!cred) {
    if (cred.error() == DeviceAuthFailure::LivenessFailed)
      throw CommandExit{kLivenessFailed, "liveness check failed"};
    throw CommandExit{kAuthFailed, "authentication failed: " +
                                       std::string(to_string(cred.error()))};
  }

  const AgeCred& c = *cred;
  out << "agecred version=" << int(c.version)
      << " issuer_id=" << to_hex(c.issuer_id)
      << " subject_id=" << to_hex(c.subject_id)
      << " age_over=" << int(c.age_over) << " issued_at=" << c.issued_at
      << " expires_at=" << c.expires_at << '\n';

  const int required = a.required_age.value_or(g.age_threshold);
  auto decision = rp_check_access(c, issuer, g.now(), required);
  if (!decision.granted) {
    out << "DENY " << to_string(decision.reason) << '\n';
    throw CommandExit{kRpDenied, std::string(to_string(decision.reason))};
  }
  out << "GRANT age_over=" << int(c.age_over) << '\n';
  return kOk;
}

struct EvalArgs {
  std::vector<double> sigmas;
  std::size_t trials = 1000;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_eval(const GlobalOptions& g, const EvalArgs& a, std::ostream& out) {
  if (a.sigmas.empty()) throw CommandExit{kUsage, "--sigmas is empty"};
  for (double s : a.sigmas)
    if (!std::isfinite(s) || s < 0.0)
      throw CommandExit{kUsage, "invalid sigma " + std::to_string(s)};
  if (a.trials < 1000) throw CommandExit{kUsage, "--trials must be >= 1000"};

  const std::uint64_t seed = seed_or_draw(a.seed, out);
  std::ofstream f(a.out, std::ios::trunc);
  if (!f) throw CommandExit{kUsage, "cannot write " + a.out};
  try {
    auto reports = sweep(g.protocol(), a.sigmas, a.trials, seed, f);
    out << "wrote " << reports.size() << " rows to " << a.out << '\n';
  } catch (const IoError& e) {
    throw CommandExit{kUsage, e.what()};
  }
  return kOk;
}

int cmd_inspect(const std::string& path, std::ostream& out) {
  DeviceRecord rec = load_record_or_exit(path);
  out << "format_version=" << int(kRecordFormatVersion) << '\n'
      << "helper_version=" << int(rec.helper.version) << '\n'
      << "n=" << rec.helper.code.n << " k=" << rec.helper.code.k
      << " t=" << rec.helper.code.t << " dim=" << rec.helper.quant.dim << '\n'
      << "sketch_variant=" << to_string(rec.sketch.variant)
      << " sketch_bytes=" << rec.sketch.payload.size() << '\n'
      << "key_digest=" << to_hex(rec.digest.digest) << '\n'
      << "bound_aad_version=" << int(rec.bound.aad_version)
      << " ciphertext_bytes=" << rec.bound.ciphertext.size() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Biometric bound age credentials: issue, bind, unbind, verify"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value configuration file");
  app.footer(
      "Exit codes: 0 ok, 2 usage/IO/format, 3 issuance denied, 4 liveness,\n"
      "5 authentication failed, 6 relying party denied.\n"
      "Ages are whole years in UTC; a birthday counts from the start of that\n"
      "day, and 29 February birthdays are reached on 1 March in other years.");

  GlobalOptions g;
  app.add_option("--issuer", g.issuer, "Issuer key file prefix (.pub/.key)");
  app.add_option("--clock", g.clock, "Override current time (unix seconds)");
  app.add_option("--variant", g.variant, "Sketch variant")
      ->check(CLI::IsMember({"xor", "encrypted"}));
  app.add_option("--sigma", g.sigma, "Capture noise sigma")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--code-t", g.code_t, "BCH(511) correction capability")
      ->check(CLI::Range(1, 60));
  app.add_option("--dim", g.dim, "Embedding dimension")->check(CLI::Range(511, 65535));
  app.add_option("--age-threshold", g.age_threshold, "Age-over threshold")
      ->check(CLI::Range(1, 149));

  KeygenArgs keygen;
  auto* kg = app.add_subcommand("asp-keygen", "Create the issuer signing keypair");
  kg->add_option("--out", keygen.out, "Key file prefix (defaults to --issuer)");
  kg->add_option("--seed", keygen.seed, "Deterministic key seed");
  kg->add_flag("--force", keygen.force, "Overwrite existing key files");

  EnrollArgs enroll;
  auto* en = app.add_subcommand("enroll", "Enroll a synthetic identity");
  en->add_option("--identity-seed", enroll.identity_seed)->required();
  en->add_option("--dob", enroll.dob, "Date of birth, YYYY-MM-DD")->required();
  en->add_option("--record", enroll.record, "Output .bbc record")->required();
  en->add_option("--seed", enroll.seed, "Enrollment randomness seed");
  en->add_option("--liveness", enroll.liveness)
      ->check(CLI::IsMember({"pass", "fail"}));
  en->add_option("--validity-days", enroll.validity_days);

  AuthArgs auth;
  auto* au = app.add_subcommand("auth", "Unbind the credential and ask the RP");
  au->add_option("--record", auth.record)->required();
  au->add_option("--identity-seed", auth.identity_seed);
  au->add_flag("--impostor", auth.impostor, "Present an unrelated identity");
  au->add_option("--required-age", auth.required_age);
  au->add_option("--seed", auth.seed, "Sampling seed");
  au->add_option("--liveness", auth.liveness)
      ->check(CLI::IsMember({"pass", "fail"}));

  EvalArgs eval;
  auto* ev = app.add_subcommand("eval", "FRR/FAR sweep to CSV");
  ev->add_option("--sigmas", eval.sigmas, "Comma-separated sigma list")
      ->required()
      ->delimiter(',');
  ev->add_option("--trials", eval.trials);
  ev->add_option("--seed", eval.seed);
  ev->add_option("--out", eval.out, "CSV output path")->required();

  std::string inspect_path;
  auto* in = app.add_subcommand("inspect", "Show record metadata");
  in->add_option("--record", inspect_path)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*kg) return cmd_asp_keygen(g, keygen, out);
    if (*en) return cmd_enroll(g, enroll, out);
    if (*au) return cmd_auth(g, auth, out);
    if (*ev) return cmd_eval(g, eval, out);
    if (*in) return cmd_inspect(inspect_path, out);
  } catch (const CommandExit& e) {
    if (!e.message.empty()) err << e.message << '\n';
    return e.code;
  } catch (const IoError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace bbcreds::cli
