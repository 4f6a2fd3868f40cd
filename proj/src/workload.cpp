#include "caseledger/workload.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>

#include "caseledger/error.hpp"
#include "caseledger/tokens.hpp"

namespace caseledger {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

KeyPair derive_workload_key(std::uint64_t seed, std::uint64_t index) {
  Hasher h;
  h.update_prefixed(std::string_view("caseledger-workload-key"));
  h.update_u64(seed);
  h.update_u64(index);
  Digest d = h.finish();
  return KeyPair::from_seed(d.view());
}

ContractState Workload::genesis_state() const {
  ContractState state;
  state.access.policy = policy;
  state.access.admins.insert(admin.public_key.fingerprint());
  return state;
}

namespace {

struct CaseTrack {
  CaseId id;
  Stage stage;
  std::vector<Digest> tokens;
};

class Generator {
 public:
  explicit Generator(const WorkloadSpec& spec) : spec_(spec), rng_(spec.seed) {}

  Workload run() {
    const std::size_t total = spec_.total_transactions();
    if (spec_.num_cases == 0) throw Error(Errc::InfeasibleSpec, "num_cases must be >= 1");
    if (spec_.tx_per_block == 0) throw Error(Errc::InfeasibleSpec, "tx_per_block must be >= 1");
    if (total < spec_.num_cases)
      throw Error(Errc::InfeasibleSpec, "need at least one transaction per case for its InitialUpload");

    make_users();
    out_.policy = spec_.policy;
    out_.transactions.reserve(total);

    for (std::size_t i = 0; i < total; ++i) {
      const std::size_t remaining_cases = spec_.num_cases - cases_.size();
      const std::size_t remaining_slots = total - i;
      bool create = cases_.empty() || remaining_cases == remaining_slots ||
                    (remaining_cases > 0 &&
                     uniform_unit(rng_) < static_cast<double>(remaining_cases) / static_cast<double>(remaining_slots));
      now_ = spec_.base_time_ms + static_cast<std::int64_t>(i);
      if (create) {
        out_.transactions.push_back(initial_upload());
      } else {
        out_.transactions.push_back(case_transaction(cases_[uniform_below(rng_, cases_.size())]));
      }
    }
    for (const auto& c : cases_) out_.cases.push_back(c.id);
    return std::move(out_);
  }

 private:
  void make_users() {
    std::uint64_t key_index = 0;
    out_.admin = derive_workload_key(spec_.seed, key_index++);
    for (auto role : kAllRoles) {
      for (std::size_t k = 0; k < spec_.users_per_role; ++k) {
        WorkloadUser u{std::string(to_string(role)) + "-" + std::to_string(k), role,
                       derive_workload_key(spec_.seed, key_index++)};
        Transaction tx;
        tx.sender = out_.admin.public_key;
        tx.timestamp_ms = spec_.base_time_ms - 1;
        tx.payload = SetupPayload{u.keys.public_key, role};
        out_.setup.push_back(finalize(std::move(tx)));
        out_.users.push_back(std::move(u));
      }
    }
  }

  Digest random_content() {
    std::array<std::uint64_t, 2> raw{rng_(), rng_()};
    return digest(ByteView(reinterpret_cast<const std::uint8_t*>(raw.data()), sizeof(raw)));
  }

  const WorkloadUser* pick_user_with(Stage stage, Right right) {
    std::vector<const WorkloadUser*> eligible;
    for (const auto& u : out_.users)
      if (spec_.policy.rights(stage, u.role).contains(right)) eligible.push_back(&u);
    if (eligible.empty()) return nullptr;
    return eligible[uniform_below(rng_, eligible.size())];
  }

  Transaction base(const CaseTrack& c, const WorkloadUser& sender) const {
    Transaction tx;
    tx.case_id = c.id;
    tx.sender = sender.keys.public_key;
    tx.timestamp_ms = now_;
    return tx;
  }

  Transaction initial_upload() {
    char name[32];
    std::snprintf(name, sizeof(name), "case-%05zu", cases_.size());
    CaseTrack track{CaseId(name), kAllStages[uniform_below(rng_, kAllStages.size())], {}};
    const auto& sender = out_.users[uniform_below(rng_, out_.users.size())];
    Transaction tx = base(track, sender);
    tx.payload = InitialUploadPayload{"evidence-" + std::to_string(file_counter_++), random_content(), track.stage};
    cases_.push_back(std::move(track));
    return finalize(std::move(tx));
  }

  TransactionKind draw_kind() {
    const auto& m = spec_.tx_mix;
    const std::array<std::pair<double, TransactionKind>, 5> weights{{{m.file_upload, TransactionKind::FileUpload},
                                                                     {m.analysis, TransactionKind::Analysis},
                                                                     {m.access_request, TransactionKind::AccReq},
                                                                     {m.stage, TransactionKind::Stage},
                                                                     {m.provenance, TransactionKind::Provenance}}};
    double sum = 0;
    for (const auto& [w, _] : weights) sum += std::max(w, 0.0);
    if (sum <= 0) return TransactionKind::AccReq;
    double x = uniform_unit(rng_) * sum;
    for (const auto& [w, k] : weights) {
      x -= std::max(w, 0.0);
      if (x < 0) return k;
    }
    return weights.back().second;
  }

  std::optional<Transaction> try_build(TransactionKind kind, CaseTrack& c) {
    switch (kind) {
      case TransactionKind::FileUpload: {
        const auto* sender = pick_user_with(c.stage, Right::UploadFile);
        if (!sender) return std::nullopt;
        Transaction tx = base(c, *sender);
        FileUploadPayload p{"file-" + std::to_string(file_counter_++), random_content()};
        c.tokens.push_back(original_token_id(c.id, p.file_id, p.content, now_));
        tx.payload = std::move(p);
        return tx;
      }
      case TransactionKind::Analysis: {
        if (c.tokens.empty()) return std::nullopt;
        const auto* sender = pick_user_with(c.stage, Right::UploadAnalysis);
        if (!sender) return std::nullopt;
        const std::size_t n = 1 + uniform_below(rng_, std::min<std::size_t>(3, c.tokens.size()));
        std::vector<Digest> pool = c.tokens;
        AnalysisPayload p;
        for (std::size_t k = 0; k < n; ++k) {
          auto idx = uniform_below(rng_, pool.size());
          p.parents.push_back(pool[idx]);
          pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
        }
        c.tokens.push_back(derived_token_id(p.parents, now_));
        Transaction tx = base(c, *sender);
        tx.payload = std::move(p);
        return tx;
      }
      case TransactionKind::AccReq: {
        const auto& sender = out_.users[uniform_below(rng_, out_.users.size())];
        Transaction tx = base(c, sender);
        Stage declared = c.stage;
        if (uniform_unit(rng_) < 0.05) declared = kAllStages[uniform_below(rng_, kAllStages.size())];
        tx.declared_stage = std::string(to_string(declared));
        tx.payload = AccessRequestPayload{std::string(to_string(kAllRights[uniform_below(rng_, kAllRights.size())]))};
        return tx;
      }
      case TransactionKind::Stage: {
        const auto* sender = pick_user_with(c.stage, Right::ChangeStage);
        if (!sender) return std::nullopt;
        Stage target;
        if (spec_.policy.forward_only()) {
          auto next = static_cast<std::size_t>(c.stage) + 1;
          if (next >= kAllStages.size()) return std::nullopt;
          target = kAllStages[next];
        } else {
          auto pick = uniform_below(rng_, kAllStages.size() - 1);
          if (pick >= static_cast<std::size_t>(c.stage)) ++pick;
          target = kAllStages[pick];
        }
        Transaction tx = base(c, *sender);
        tx.payload = StagePayload{target};
        c.stage = target;
        return tx;
      }
      case TransactionKind::Provenance: {
        const auto* sender = pick_user_with(c.stage, Right::ExtractProvenance);
        if (!sender) return std::nullopt;
        Transaction tx = base(c, *sender);
        tx.payload = ProvenancePayload{};
        return tx;
      }
      default:
        return std::nullopt;
    }
  }

  Transaction case_transaction(CaseTrack& c) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      if (auto tx = try_build(draw_kind(), c)) return finalize(std::move(*tx));
    }
    return finalize(*try_build(TransactionKind::AccReq, c));
  }

  const WorkloadSpec& spec_;
  std::mt19937_64 rng_;
  Workload out_;
  std::vector<CaseTrack> cases_;
  std::int64_t now_ = 0;
  std::uint64_t file_counter_ = 0;
};

}  // namespace

Workload generate_workload(const WorkloadSpec& spec) { return Generator(spec).run(); }

}  // namespace caseledger
