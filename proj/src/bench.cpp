#include "caseledger/bench.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "caseledger/json_codec.hpp"

namespace caseledger {

namespace {

using SteadyClock = std::chrono::steady_clock;

double ns_since(SteadyClock::time_point start) {
  return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(SteadyClock::now() - start).count());
}

Clock counter_clock(std::int64_t start) {
  auto next = std::make_shared<std::int64_t>(start);
  return [next] { return (*next)++; };
}

std::string format_ns(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << v;
  return os.str();
}

}  // namespace

Fixture build_fixture(const WorkloadSpec& spec, const FixtureOptions& options) {
  Fixture f;
  f.workload = generate_workload(spec);
  f.store = std::make_unique<RecordStore>();
  SealingConfig config{spec.tx_per_block, options.with_case_roots};
  Clock clock = options.clock ? options.clock : counter_clock(spec.base_time_ms);
  f.ledger = std::make_unique<Ledger>(f.workload.genesis_state(), config, std::move(clock));
  f.ledger->set_record_sink(f.store.get());
  f.ledger->set_sealer(options.sealer);

  for (const auto& tx : f.workload.setup) f.ledger->submit_transaction(tx);
  f.ledger->seal_genesis();
  for (const auto& tx : f.workload.transactions) f.ledger->submit_transaction(tx);
  f.ledger->seal_all();
  return f;
}

std::string csv_header() {
  return "experiment,blocks,cases,method_or_kind,samples,mean_ns,median_ns,q1_ns,q3_ns,max_ns";
}

std::string csv_line(const BenchRow& row) {
  std::ostringstream os;
  os << row.experiment << ',' << row.blocks << ',' << row.cases << ',' << row.method_or_kind << ','
     << row.stats.samples << ',' << format_ns(row.stats.mean) << ',' << format_ns(row.stats.median) << ','
     << format_ns(row.stats.q1) << ',' << format_ns(row.stats.q3) << ',' << format_ns(row.stats.max);
  return os.str();
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << csv_header() << '\n';
  for (const auto& row : rows) out << csv_line(row) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  write_csv(out, rows);
}

RetrievalReport run_retrieval_benchmark(const RetrievalOptions& options) {
  if (options.blocks_grid.empty() || options.cases_grid.empty())
    throw Error(Errc::InfeasibleSpec, "benchmark grids must be non-empty");

  constexpr std::array kMethods{ExtractionMethod::BruteForce, ExtractionMethod::SmartBruteForce,
                                ExtractionMethod::OffchainVerified};
  RetrievalReport report;
  for (auto cases : options.cases_grid) {
    for (auto blocks : options.blocks_grid) {
      WorkloadSpec spec;
      spec.num_cases = cases;
      spec.num_blocks = blocks;
      spec.tx_per_block = options.tx_per_block;
      spec.seed = options.seed;
      Fixture f = build_fixture(spec);

      std::mt19937_64 rng(options.seed ^ (blocks * 0x9e3779b97f4a7c15ULL) ^ cases);
      std::vector<CaseId> sampled;
      for (std::size_t r = 0; r < options.reps; ++r)
        sampled.push_back(f.workload.cases[uniform_below(rng, f.workload.cases.size())]);

      // Warm-up pass.
      if (!sampled.empty())
        for (auto m : kMethods) extract(m, *f.store, *f.ledger, sampled.front());

      std::array<std::vector<double>, kMethods.size()> timings;
      for (std::size_t r = 0; r < sampled.size(); ++r) {
        for (std::size_t k = 0; k < kMethods.size(); ++k) {
          auto m = kMethods[(k + r) % kMethods.size()];
          ExtractionResult res = extract(m, *f.store, *f.ledger, sampled[r]);
          double ns = static_cast<double>(res.elapsed.count());
          timings[static_cast<std::size_t>(m)].push_back(ns);
          RetrievalSample s{blocks, cases, sampled[r], m, res.blocks_scanned, f.ledger->height(), ns,
                            res.records.size(), std::nullopt};
          if (res.verification) s.verdict = res.verification->verdict;
          report.samples.push_back(std::move(s));
        }
      }
      for (auto m : kMethods)
        report.rows.push_back({"retrieval", blocks, cases, std::string(to_string(m)),
                               summarize(timings[static_cast<std::size_t>(m)])});
    }
  }
  return report;
}

OverheadReport run_overhead_benchmark(const WorkloadSpec& spec, std::size_t reps) {
  const Workload workload = generate_workload(spec);
  const BoxSealer sealer;
  OverheadReport report;
  std::vector<std::shared_ptr<const Block>> reference[2];

  auto run = [&](bool with_roots, std::vector<double>& out, std::vector<std::shared_ptr<const Block>>* keep) {
    RecordStore store;
    Ledger ledger(workload.genesis_state(), {spec.tx_per_block, with_roots}, counter_clock(spec.base_time_ms));
    ledger.set_sealer(&sealer);
    ledger.set_record_sink(&store);
    for (const auto& tx : workload.setup) ledger.submit_transaction(tx);
    ledger.seal_genesis();
    for (const auto& tx : workload.transactions) ledger.submit_transaction(tx);
    while (ledger.mempool_size() > 0) {
      auto start = SteadyClock::now();
      ledger.seal_block();
      out.push_back(ns_since(start));
    }
    if (keep) *keep = ledger.blocks();
  };

  for (std::size_t r = 0; r < reps; ++r) {
    bool with_first = r % 2 == 0;
    for (int pass = 0; pass < 2; ++pass) {
      bool with_roots = (pass == 0) == with_first;
      auto& sink = with_roots ? report.with_roots_ns : report.without_roots_ns;
      run(with_roots, sink, r == 0 ? &reference[with_roots ? 1 : 0] : nullptr);
    }
  }

  const auto& a = reference[0];
  const auto& b = reference[1];
  report.identical_bodies = a.size() == b.size();
  for (std::size_t i = 0; report.identical_bodies && i < a.size(); ++i) {
    BlockHeader ha = a[i]->header;
    BlockHeader hb = b[i]->header;
    ha.case_roots.reset();
    hb.case_roots.reset();
    // prev_hash commits to the previous header, roots included.
    ha.prev_hash = hb.prev_hash = Digest::zero();
    report.identical_bodies = ha == hb && a[i]->transactions == b[i]->transactions && a[i]->records == b[i]->records;
  }

  report.rows.push_back({"overhead", spec.num_blocks, spec.num_cases, "with_case_roots", summarize(report.with_roots_ns)});
  report.rows.push_back(
      {"overhead", spec.num_blocks, spec.num_cases, "without_case_roots", summarize(report.without_roots_ns)});
  return report;
}

TxTimeReport run_txtime_benchmark(const WorkloadSpec& spec, std::size_t reps) {
  Fixture f = build_fixture(spec);
  ContractState state = f.ledger->state_snapshot();
  const BoxSealer sealer;
  std::map<CaseId, Digest> roots;
  const ApplyContext ctx{&sealer, &roots};
  const std::uint64_t block_index = f.ledger->height();

  auto user_with = [&](Role role) -> const WorkloadUser& {
    for (const auto& u : f.workload.users)
      if (u.role == role) return u;
    return f.workload.users.front();
  };
  const WorkloadUser& examiner = user_with(Role::DigitalForensicsExaminer);
  const WorkloadUser& officer = user_with(Role::LawEnforcement);
  const WorkloadUser& investigator = user_with(Role::Investigator);

  std::map<TransactionKind, std::vector<double>> timings;
  std::vector<double> write_ns;
  std::vector<double> read_ns;
  std::vector<std::string> log;
  std::unordered_map<Digest, std::size_t> log_index;
  std::int64_t now = spec.base_time_ms + static_cast<std::int64_t>(spec.total_transactions()) + 1000;
  std::mt19937_64 rng(spec.seed + 17);

  auto timed_apply = [&](Transaction tx) {
    tx = finalize(std::move(tx));
    auto start = SteadyClock::now();
    Effects e = apply_transaction(state, tx, block_index, ctx);
    double ns = ns_since(start);
    if (e.status != ApplyStatus::Applied)
      throw Error(Errc::InfeasibleSpec, std::string(to_string(tx.kind())) + " was refused: " + e.rejection);
    timings[tx.kind()].push_back(ns);
    return e;
  };

  for (std::size_t r = 0; r < reps; ++r) {
    CaseId case_id("txtime-" + std::to_string(r));

    Transaction setup;
    setup.sender = f.workload.admin.public_key;
    setup.timestamp_ms = ++now;
    setup.payload = SetupPayload{derive_workload_key(spec.seed ^ 0xabcdefULL, r).public_key, Role::Investigator};
    timed_apply(std::move(setup));

    Transaction init;
    init.case_id = case_id;
    init.sender = officer.keys.public_key;
    init.timestamp_ms = ++now;
    init.payload = InitialUploadPayload{"evidence-" + std::to_string(r), digest(std::to_string(rng())),
                                        Stage::Investigation};
    Effects created = timed_apply(std::move(init));

    Transaction upload;
    upload.case_id = case_id;
    upload.sender = examiner.keys.public_key;
    upload.timestamp_ms = ++now;
    upload.payload = FileUploadPayload{"file-" + std::to_string(r), digest(std::to_string(rng()))};
    Effects uploaded = timed_apply(std::move(upload));

    Transaction analysis;
    analysis.case_id = case_id;
    analysis.sender = examiner.keys.public_key;
    analysis.timestamp_ms = ++now;
    analysis.payload = AnalysisPayload{{*uploaded.token}};
    timed_apply(std::move(analysis));

    Transaction request;
    request.case_id = case_id;
    request.sender = investigator.keys.public_key;
    request.timestamp_ms = ++now;
    request.declared_stage = std::string(to_string(Stage::Investigation));
    request.payload = AccessRequestPayload{std::string(to_string(Right::ReadEvidence))};
    timed_apply(std::move(request));

    Transaction provenance;
    provenance.case_id = case_id;
    provenance.sender = officer.keys.public_key;
    provenance.timestamp_ms = ++now;
    provenance.payload = ProvenancePayload{};
    timed_apply(std::move(provenance));

    Transaction stage;
    stage.case_id = case_id;
    stage.sender = officer.keys.public_key;
    stage.timestamp_ms = ++now;
    stage.payload = StagePayload{Stage::Analysis};
    timed_apply(std::move(stage));

    // Logging-only baselines: append one opaque record, read one back.
    const std::string line = record_to_line(created.records.front());
    auto start = SteadyClock::now();
    log.push_back(line);
    log_index.emplace(created.records.front().tx_id, log.size() - 1);
    write_ns.push_back(ns_since(start));

    start = SteadyClock::now();
    std::string fetched = log[log_index.at(created.records.front().tx_id)];
    read_ns.push_back(ns_since(start));
    if (fetched.empty()) throw Error(Errc::Io, "baseline read returned nothing");
  }

  TxTimeReport report;
  for (const auto& [kind, samples] : timings)
    report.rows.push_back({"txtime", spec.num_blocks, spec.num_cases, std::string(to_string(kind)), summarize(samples)});
  report.rows.push_back({"txtime", spec.num_blocks, spec.num_cases, "Write", summarize(write_ns)});
  report.rows.push_back({"txtime", spec.num_blocks, spec.num_cases, "Read", summarize(read_ns)});
  return report;
}

}  // namespace caseledger
