#include "caseledger/cli.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <fstream>
#include <regex>
#include <sstream>

#include "caseledger/bench.hpp"
#include "caseledger/extraction.hpp"
#include "caseledger/json_codec.hpp"
#include "caseledger/ledger.hpp"
#include "caseledger/rbac.hpp"
#include "caseledger/record_store.hpp"
#include "caseledger/sealer.hpp"
#include "caseledger/serialize.hpp"

namespace caseledger::cli {

namespace fs = std::filesystem;
using nlohmann::json;

ojson CliConfig::to_json() const {
  ojson j;
  j["tx_per_block"] = tx_per_block;
  j["policy_path"] = policy_path;
  j["admin_keys"] = admin_keys;
  j["seed"] = seed ? ojson(*seed) : ojson(nullptr);
  return j;
}

CliConfig CliConfig::from_json(const json& j, fs::path data_dir) {
  try {
    CliConfig c;
    c.data_dir = std::move(data_dir);
    c.tx_per_block = j.at("tx_per_block").get<std::size_t>();
    c.policy_path = j.at("policy_path").get<std::string>();
    c.admin_keys = j.at("admin_keys").get<std::vector<std::string>>();
    if (j.contains("seed") && !j["seed"].is_null()) c.seed = j["seed"].get<std::uint64_t>();
    if (c.tx_per_block == 0) throw Error(Errc::InvalidEncoding, "tx_per_block must be positive");
    return c;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidEncoding, std::string("config.json: ") + e.what());
  }
}

namespace {

struct Options {
  std::string data_dir = "caseledger-data";
  bool as_json = false;

  std::size_t tx_per_block = 10;
  std::string policy_file;
  std::optional<std::uint64_t> seed;

  std::string name;
  std::string role;

  std::string kind;
  std::string case_id;
  std::string as_user = "admin";
  std::string stage;
  std::string file_id;
  std::string content;
  std::string parents;
  std::string resource = "ReadEvidence";
  std::string declared_stage;
  std::optional<std::int64_t> time_ms;

  std::string method = "offchain";

  std::string bench_kind;
  std::string out_path;
  std::uint64_t bench_seed = 1;
  std::optional<std::size_t> reps;
  std::vector<std::size_t> blocks;
  std::vector<std::size_t> cases;

  std::string policy_action;
};

class DirLock {
 public:
  explicit DirLock(const fs::path& dir) {
    auto path = dir / ".lock";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(Errc::Io, "cannot open " + path.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      throw Error(Errc::Io, dir.string() + " is in use by another process");
    }
  }
  ~DirLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  int fd_ = -1;
};

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidEncoding, path.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + tmp.string());
    out << text;
    if (!out) throw Error(Errc::Io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

const std::regex& user_name_pattern() {
  static const std::regex re("[A-Za-z0-9_.-]+");
  return re;
}

fs::path key_path(const fs::path& dir, const std::string& name) {
  if (!std::regex_match(name, user_name_pattern()) || name.front() == '.')
    throw Error(Errc::MissingField, "invalid user name '" + name + "'");
  return dir / "keys" / (name + ".json");
}

void save_key(const fs::path& dir, const std::string& name, Role role, const KeyPair& keys) {
  ojson j;
  j["name"] = name;
  j["role"] = to_string(role);
  j["fingerprint"] = keys.public_key.fingerprint().hex();
  j["public_key"] = keys.public_key.hex();
  j["secret_key"] = to_hex(keys.secret_key);
  write_text_file(key_path(dir, name), j.dump(2) + "\n");
  fs::permissions(key_path(dir, name), fs::perms::owner_read | fs::perms::owner_write);
}

KeyPair load_key(const fs::path& dir, const std::string& name) {
  auto path = key_path(dir, name);
  if (!fs::exists(path)) throw Error(Errc::Io, "no key for user '" + name + "'");
  json j = read_json_file(path);
  try {
    KeyPair keys;
    keys.public_key = PublicKey(from_hex(j.at("public_key").get<std::string>()));
    keys.secret_key = from_hex(j.at("secret_key").get<std::string>());
    return keys;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidEncoding, path.string() + ": " + e.what());
  }
}

struct Session {
  CliConfig config;
  PolicyMatrix policy;
  std::unique_ptr<RecordStore> store;
  std::unique_ptr<Ledger> ledger;
};

ContractState genesis_state(const CliConfig& config, const PolicyMatrix& policy) {
  ContractState state;
  state.access.policy = policy;
  for (const auto& hex : config.admin_keys) state.access.admins.insert(Digest::from_hex(hex));
  return state;
}

/// Rebuilds the off-chain store from sealed blocks.
CliConfig load_config(const fs::path& dir) {
  auto path = dir / "config.json";
  if (!fs::exists(path)) throw Error(Errc::Io, dir.string() + " is not initialized; run 'caseledger init'");
  return CliConfig::from_json(read_json_file(path), dir);
}

Session open_session(const fs::path& dir) {
  Session s;
  s.config = load_config(dir);
  s.policy = PolicyMatrix::load((dir / s.config.policy_path).string());
  auto blocks = read_block_files(dir / "blocks");
  if (fs::exists(dir / "store" / "index.json")) {
    s.store = RecordStore::load(dir / "store");
    s.ledger = Ledger::replay(genesis_state(s.config, s.policy), {s.config.tx_per_block, true}, blocks);
    s.ledger->set_record_sink(s.store.get());
  } else {
    s.store = std::make_unique<RecordStore>();
    s.ledger = Ledger::replay(genesis_state(s.config, s.policy), {s.config.tx_per_block, true}, blocks,
                              system_clock_ms, s.store.get());
    s.store->save(dir / "store");
  }
  return s;
}

fs::path mempool_path(const fs::path& dir) { return dir / "mempool.jsonl"; }

std::vector<Transaction> read_mempool(const fs::path& dir) {
  std::vector<Transaction> txs;
  std::ifstream in(mempool_path(dir));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      txs.push_back(transaction_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(Errc::InvalidEncoding, std::string("mempool.jsonl: ") + e.what());
    }
  }
  return txs;
}

void append_mempool(const fs::path& dir, const Transaction& tx) {
  std::ofstream out(mempool_path(dir), std::ios::app);
  if (!out) throw Error(Errc::Io, "cannot append to mempool.jsonl");
  out << transaction_to_json(tx).dump() << '\n';
}

Transaction enqueue(const fs::path& dir, Transaction tx) {
  tx = finalize(std::move(tx));
  try {
    canonical_serialize(tx);
  } catch (const Error& e) {
    throw Error(Errc::MalformedTransaction, e.what());
  }
  append_mempool(dir, tx);
  return tx;
}

Role require_role(const std::string& s) {
  auto r = parse_role(s);
  if (!r) throw CLI::ValidationError("--role", "unknown role '" + s + "'");
  return *r;
}

Stage require_stage(const std::string& flag, const std::string& s) {
  auto st = parse_stage(s);
  if (!st) throw CLI::ValidationError(flag, "unknown stage '" + s + "'");
  return *st;
}

std::vector<Digest> parse_parents(const std::string& list) {
  std::vector<Digest> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(Digest::from_hex(item));
  return out;
}

ojson outcome_to_json(const SealOutcome& o) {
  ojson j;
  j["block"] = o.block->header.index;
  j["transactions"] = o.block->transactions.size();
  j["rejected"] = o.rejected;
  ojson dropped = ojson::array();
  for (const auto& d : o.dropped) dropped.push_back({{"tx", d.tx_id.hex()}, {"reason", d.reason}});
  j["dropped"] = std::move(dropped);
  return j;
}

ojson report_to_json(const VerificationReport& r) {
  ojson j;
  j["case"] = r.case_id.str();
  j["verdict"] = to_string(r.verdict);
  j["recomputed_root"] = r.recomputed_root.hex();
  j["chain_root"] = r.stored_root.hex();
  j["first_divergent_block"] = r.first_divergent_block ? ojson(*r.first_divergent_block) : ojson(nullptr);
  j["corrupt_line"] = r.corrupt_line ? ojson(*r.corrupt_line) : ojson(nullptr);
  return j;
}

// Commands ------------------------------------------------------------------

int cmd_init(const Options& o, std::ostream& out) {
  fs::path dir(o.data_dir);
  if (fs::exists(dir / "config.json")) throw Error(Errc::Io, dir.string() + " is already initialized");
  if (o.tx_per_block == 0) throw CLI::ValidationError("--tx-per-block", "must be positive");
  fs::create_directories(dir);
  DirLock lock(dir);
  for (const char* sub : {"blocks", "store", "keys"}) fs::create_directories(dir / sub);

  std::string policy_text = default_policy_json();
  if (!o.policy_file.empty()) {
    PolicyMatrix p = PolicyMatrix::load(o.policy_file);
    policy_text = p.to_json().dump(2) + "\n";
  }
  write_text_file(dir / "policy.json", policy_text);

  KeyPair admin = o.seed ? derive_workload_key(*o.seed, 0) : KeyPair::generate();
  save_key(dir, "admin", Role::LawEnforcement, admin);

  CliConfig config;
  config.data_dir = dir;
  config.tx_per_block = o.tx_per_block;
  config.admin_keys = {admin.public_key.fingerprint().hex()};
  config.seed = o.seed;
  write_text_file(dir / "config.json", config.to_json().dump(2) + "\n");

  PolicyMatrix policy = PolicyMatrix::load((dir / "policy.json").string());
  RecordStore store;
  Ledger ledger(genesis_state(config, policy), {config.tx_per_block, true});
  ledger.set_record_sink(&store);
  Transaction setup;
  setup.sender = admin.public_key;
  setup.timestamp_ms = o.time_ms.value_or(system_clock_ms());
  setup.payload = SetupPayload{admin.public_key, Role::LawEnforcement};
  ledger.submit_transaction(finalize(std::move(setup)));
  auto outcome = ledger.seal_genesis();
  write_block_file(dir / "blocks", *outcome.block);
  store.save(dir / "store");
  write_text_file(dir / "state.json", ledger.state_snapshot().to_json().dump(2) + "\n");

  out << "initialized " << dir.string() << "\n";
  out << "admin " << admin.public_key.fingerprint().hex() << " LawEnforcement\n";
  return 0;
}

int cmd_register(const Options& o, std::ostream& out) {
  fs::path dir(o.data_dir);
  Role role = require_role(o.role);
  load_config(dir);
  DirLock lock(dir);
  if (fs::exists(key_path(dir, o.name))) throw Error(Errc::AlreadyRegistered, "user '" + o.name + "' already has a key");
  KeyPair admin = load_key(dir, o.as_user);
  KeyPair keys = KeyPair::generate();

  Transaction tx;
  tx.sender = admin.public_key;
  tx.timestamp_ms = o.time_ms.value_or(system_clock_ms());
  tx.payload = SetupPayload{keys.public_key, role};
  tx = enqueue(dir, std::move(tx));
  save_key(dir, o.name, role, keys);
  out << "registered " << o.name << " " << to_string(role) << " " << keys.public_key.fingerprint().hex() << "\n";
  out << "queued " << tx.id.hex() << "\n";
  return 0;
}

int cmd_submit(const Options& o, std::ostream& out) {
  fs::path dir(o.data_dir);
  load_config(dir);
  DirLock lock(dir);
  KeyPair sender = load_key(dir, o.as_user);

  Transaction tx;
  tx.case_id = CaseId(o.case_id);
  tx.sender = sender.public_key;
  tx.timestamp_ms = o.time_ms.value_or(system_clock_ms());
  if (!o.declared_stage.empty()) tx.declared_stage = o.declared_stage;

  if (o.kind == "initial-upload") {
    Stage stage = o.stage.empty() ? Stage::AffidavitWarrant : require_stage("--stage", o.stage);
    std::string file = o.file_id.empty() ? "initial" : o.file_id;
    tx.payload = InitialUploadPayload{file, digest(o.content.empty() ? file : o.content), stage};
  } else if (o.kind == "file-upload") {
    if (o.file_id.empty()) throw CLI::ValidationError("--file", "required for file-upload");
    tx.payload = FileUploadPayload{o.file_id, digest(o.content.empty() ? o.file_id : o.content)};
  } else if (o.kind == "analysis") {
    auto parents = parse_parents(o.parents);
    if (parents.empty()) throw CLI::ValidationError("--parents", "required for analysis");
    tx.payload = AnalysisPayload{std::move(parents)};
  } else if (o.kind == "access-request") {
    if (!tx.declared_stage) {
      Session s = open_session(dir);
      tx.declared_stage = std::string(to_string(s.ledger->case_state(*tx.case_id).current_stage));
    }
    tx.payload = AccessRequestPayload{o.resource};
  } else if (o.kind == "stage") {
    if (o.stage.empty()) throw CLI::ValidationError("--stage", "required for stage");
    tx.payload = StagePayload{require_stage("--stage", o.stage)};
  } else {
    tx.payload = ProvenancePayload{};
  }

  tx = enqueue(dir, std::move(tx));
  out << tx.id.hex() << "\n";
  return 0;
}

int cmd_seal(const Options& o, std::ostream& out) {
  fs::path dir(o.data_dir);
  load_config(dir);
  DirLock lock(dir);
  Session s = open_session(dir);
  BoxSealer sealer;
  s.ledger->set_sealer(&sealer);

  auto pending = read_mempool(dir);
  if (pending.empty()) throw Error(Errc::EmptyMempool, "nothing to seal");
  for (auto& tx : pending) s.ledger->submit_transaction(std::move(tx));
  auto outcomes = s.ledger->seal_all();

  std::ofstream receipts(dir / "receipts.jsonl", std::ios::app);
  ojson summary = ojson::array();
  for (const auto& outcome : outcomes) {
    write_block_file(dir / "blocks", *outcome.block);
    for (const auto& r : outcome.receipts)
      receipts << ojson{{"block", outcome.block->header.index},
                        {"recipient", r.recipient.hex()},
                        {"ciphertext", to_hex(r.ciphertext)}}
                      .dump()
               << '\n';
    summary.push_back(outcome_to_json(outcome));
  }
  s.store->save(dir / "store");
  write_text_file(dir / "state.json", s.ledger->state_snapshot().to_json().dump(2) + "\n");
  fs::remove(mempool_path(dir));

  if (o.as_json) {
    out << summary.dump(2) << "\n";
  } else {
    for (const auto& j : summary) {
      out << "sealed block " << j["block"].get<std::uint64_t>() << ": " << j["transactions"].get<std::size_t>()
          << " transactions, " << j["rejected"].get<std::size_t>() << " rejected";
      if (!j["dropped"].empty()) out << ", " << j["dropped"].size() << " dropped";
      out << "\n";
      for (const auto& d : j["dropped"])
        out << "  dropped " << d["tx"].get<std::string>() << ": " << d["reason"].get<std::string>() << "\n";
    }
  }
  return 0;
}

int cmd_extract(const Options& o, std::ostream& out) {
  fs::path dir(o.data_dir);
  auto method = parse_extraction_method(o.method);
  if (!method) throw CLI::ValidationError("--method", "expected brute, smart or offchain");
  load_config(dir);
  DirLock lock(dir);
  Session s = open_session(dir);
  CaseId case_id(o.case_id);
  auto result = extract(*method, *s.store, *s.ledger, case_id);
  if (result.records.empty() && !s.ledger->case_root_history(case_id).size())
    throw Error(Errc::UnknownCase, case_id.str());

  std::string verdict = result.verification ? std::string(to_string(result.verification->verdict)) : "n/a";
  if (o.as_json) {
    ojson j;
    j["case"] = case_id.str();
    j["method"] = to_string(*method);
    j["blocks_scanned"] = result.blocks_scanned;
    j["elapsed_ns"] = result.elapsed.count();
    j["verdict"] = verdict;
    ojson records = ojson::array();
    for (const auto& r : result.records) records.push_back(record_to_json(r));
    j["records"] = std::move(records);
    if (result.verification) j["verification"] = report_to_json(*result.verification);
    out << j.dump(2) << "\n";
  } else {
    out << "case " << case_id.str() << " method " << to_string(*method) << ": " << result.records.size()
        << " records, " << result.blocks_scanned << " blocks scanned, " << result.elapsed.count() << " ns";
    if (result.verification) out << ", " << verdict;
    out << "\n";
    for (const auto& r : result.records) out << record_to_line(r) << "\n";
  }
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  fs::path dir(o.data_dir);
  load_config(dir);
  DirLock lock(dir);
  Session s = open_session(dir);
  CaseId case_id(o.case_id);
  auto [root, block] = s.ledger->latest_case_root(case_id);
  auto history = s.ledger->case_root_history(case_id);
  auto report = s.store->verify_case_records(case_id, root, history);
  if (o.as_json) {
    out << report_to_json(report).dump(2) << "\n";
  } else {
    out << case_id.str() << ": " << to_string(report.verdict);
    if (report.first_divergent_block) out << " (first divergent block " << *report.first_divergent_block << ")";
    if (report.corrupt_line) out << " (corrupt line " << *report.corrupt_line << ")";
    out << "\n";
  }
  return report.verdict == Verdict::Verified ? 0 : 1;
}

int cmd_root(const Options& o, std::ostream& out) {
  fs::path dir(o.data_dir);
  load_config(dir);
  DirLock lock(dir);
  Session s = open_session(dir);
  CaseId case_id(o.case_id);
  auto [root, block] = s.ledger->latest_case_root(case_id);
  if (o.as_json)
    out << ojson{{"case", case_id.str()}, {"root", root.hex()}, {"block", block}}.dump() << "\n";
  else
    out << root.hex() << " block " << block << "\n";
  return 0;
}

int cmd_bench(const Options& o, std::ostream& out) {
  std::vector<BenchRow> rows;
  if (o.bench_kind == "retrieval") {
    RetrievalOptions ro;
    ro.seed = o.bench_seed;
    ro.tx_per_block = o.tx_per_block;
    if (o.reps) ro.reps = *o.reps;
    if (!o.blocks.empty()) ro.blocks_grid = o.blocks;
    if (!o.cases.empty()) ro.cases_grid = o.cases;
    rows = run_retrieval_benchmark(ro).rows;
  } else {
    WorkloadSpec spec;
    spec.seed = o.bench_seed;
    spec.tx_per_block = o.tx_per_block;
    spec.num_blocks = o.blocks.empty() ? 1000 : o.blocks.front();
    spec.num_cases = o.cases.empty() ? 100 : o.cases.front();
    if (o.bench_kind == "overhead") {
      auto report = run_overhead_benchmark(spec, o.reps.value_or(5));
      rows = report.rows;
      out << "identical bodies: " << (report.identical_bodies ? "yes" : "no") << "\n";
    } else {
      rows = run_txtime_benchmark(spec, o.reps.value_or(30)).rows;
    }
  }
  write_csv(fs::path(o.out_path), rows);
  for (const auto& row : rows) out << csv_line(row) << "\n";
  out << "wrote " << rows.size() << " rows to " << o.out_path << "\n";
  return 0;
}

int cmd_policy(const Options& o, std::ostream& out) {
  PolicyMatrix policy;
  if (!o.policy_file.empty()) {
    policy = PolicyMatrix::load(o.policy_file);
  } else if (fs::exists(fs::path(o.data_dir) / "config.json")) {
    auto config = load_config(o.data_dir);
    policy = PolicyMatrix::load((fs::path(o.data_dir) / config.policy_path).string());
  } else {
    policy = PolicyMatrix::defaults();
  }

  if (o.policy_action == "show") {
    out << policy.to_json().dump(2) << "\n";
    return 0;
  }
  auto at = [&](Role role) { return policy.rights(Stage::AffidavitWarrant, role).contains(Right::ReadEvidence); };
  bool affidavit = at(Role::LawEnforcement) && at(Role::DigitalForensicsExaminer) && !at(Role::Investigator) &&
                   !at(Role::LegalCounsel);
  std::size_t empty_cells = 0;
  for (auto stage : kAllStages)
    for (auto role : kAllRoles)
      if (policy.rights(stage, role).empty()) ++empty_cells;
  out << "policy ok: " << kAllStages.size() * kAllRoles.size() << " cells, " << empty_cells << " empty, "
      << (policy.forward_only() ? "forward-only" : "any-stage") << " transitions\n";
  out << "affidavit rule: " << (affidavit ? "satisfied" : "NOT satisfied") << "\n";
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Case-indexed provenance ledger for digital forensics", "caseledger"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--data-dir,-d", o.data_dir, "Data directory")->capture_default_str();

  auto* init = app.add_subcommand("init", "Create the data directory and the genesis block");
  init->add_option("--tx-per-block", o.tx_per_block, "Transactions per block")->capture_default_str();
  init->add_option("--policy", o.policy_file, "Policy file to install instead of the default")
      ->check(CLI::ExistingFile);
  init->add_option("--seed", o.seed, "Derive the admin key deterministically from this seed");
  init->add_option("--time", o.time_ms, "Genesis timestamp in ms (default: now)");

  auto* reg = app.add_subcommand("register", "Create a user key and queue its Setup transaction");
  reg->add_option("--name", o.name, "User name; the key is stored as keys/<name>.json")->required();
  reg->add_option("--role", o.role, "DigitalForensicsExaminer, Investigator, LegalCounsel or LawEnforcement")
      ->required();
  reg->add_option("--as", o.as_user, "Admin user sending the Setup transaction")->capture_default_str();
  reg->add_option("--time", o.time_ms, "Transaction timestamp in ms (default: now)");

  auto* submit = app.add_subcommand("submit", "Queue a case transaction");
  submit
      ->add_option("--kind", o.kind, "Transaction kind")
      ->required()
      ->check(CLI::IsMember({"initial-upload", "file-upload", "analysis", "access-request", "stage", "provenance"}));
  submit->add_option("--case", o.case_id, "Case id")->required();
  submit->add_option("--as", o.as_user, "Sending user")->capture_default_str();
  submit->add_option("--stage", o.stage, "Initial stage (initial-upload) or target stage (stage)");
  submit->add_option("--file", o.file_id, "File id (initial-upload, file-upload)");
  submit->add_option("--content", o.content, "File content; its SHA-256 is recorded (default: the file id)");
  submit->add_option("--parents", o.parents, "Comma-separated parent token ids (analysis)");
  submit->add_option("--resource", o.resource, "Requested resource (access-request)")->capture_default_str();
  submit->add_option("--declared-stage", o.declared_stage,
                     "Stage the sender claims the case is in (default: the case's current stage)");
  submit->add_option("--time", o.time_ms, "Transaction timestamp in ms (default: now)");

  auto* seal = app.add_subcommand("seal", "Seal all queued transactions into blocks");
  seal->add_flag("--json", o.as_json, "Machine-readable output");

  auto* ext = app.add_subcommand("extract", "Extract a case's provenance records");
  ext->add_option("--case", o.case_id, "Case id")->required();
  ext->add_option("--method", o.method, "brute, smart or offchain")
      ->capture_default_str()
      ->check(CLI::IsMember({"brute", "smart", "offchain"}));
  ext->add_flag("--json", o.as_json, "Machine-readable output");

  auto* verify = app.add_subcommand("verify", "Check a case's off-chain records against the chain");
  verify->add_option("--case", o.case_id, "Case id")->required();
  verify->add_flag("--json", o.as_json, "Machine-readable output");

  auto* root = app.add_subcommand("root", "Print a case's latest chained root");
  root->add_option("--case", o.case_id, "Case id")->required();
  root->add_flag("--json", o.as_json, "Machine-readable output");

  auto* bench = app.add_subcommand("bench", "Run a benchmark and write CSV");
  bench->add_option("kind", o.bench_kind, "retrieval, overhead or txtime")
      ->required()
      ->check(CLI::IsMember({"retrieval", "overhead", "txtime"}));
  bench->add_option("--out", o.out_path, "CSV output path")->required();
  bench->add_option("--seed", o.bench_seed, "Workload seed")->capture_default_str();
  bench->add_option("--reps", o.reps, "Samples per cell (default: 30, overhead 5)");
  bench->add_option("--blocks", o.blocks, "Chain lengths (retrieval grid; first value otherwise)")->delimiter(',');
  bench->add_option("--cases", o.cases, "Case counts (retrieval grid; first value otherwise)")->delimiter(',');
  bench->add_option("--tx-per-block", o.tx_per_block, "Transactions per block")->capture_default_str();

  auto* policy = app.add_subcommand("policy", "Show or check an access policy");
  policy->add_option("action", o.policy_action, "show or check")
      ->required()
      ->check(CLI::IsMember({"show", "check"}));
  policy->add_option("--file", o.policy_file, "Policy file (default: the data directory's, else built-in)")
      ->check(CLI::ExistingFile);

  std::vector<const char*> argv{"caseledger"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*init) return cmd_init(o, out);
    if (*reg) return cmd_register(o, out);
    if (*submit) return cmd_submit(o, out);
    if (*seal) return cmd_seal(o, out);
    if (*ext) return cmd_extract(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*root) return cmd_root(o, out);
    if (*bench) return cmd_bench(o, out);
    if (*policy) return cmd_policy(o, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace caseledger::cli
