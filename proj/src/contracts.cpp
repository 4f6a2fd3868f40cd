#include "caseledger/contracts.hpp"

#include "caseledger/error.hpp"
#include "caseledger/serialize.hpp"

namespace caseledger {

namespace {

using Payload = std::map<std::string, std::string>;

std::string join_hex(const std::vector<Digest>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out.push_back(',');
    out += d.hex();
  }
  return out;
}

class Dispatcher {
 public:
  Dispatcher(ContractState& state, const Transaction& tx, std::uint64_t block, const ApplyContext& ctx)
      : state_(state), tx_(tx), block_(block), ctx_(ctx) {}

  Effects run() {
    std::visit([this](const auto& p) { handle(p); }, tx_.payload);
    return std::move(effects_);
  }

 private:
  void emit(RecordKind kind, std::optional<CaseId> case_id, Payload payload) {
    effects_.records.push_back({kind, std::move(case_id), block_, tx_.id, std::move(payload)});
  }

  void receipt(const Digest& subject, std::string detail) {
    if (ctx_.sealer == nullptr) return;
    ReceiptContents contents{tx_.timestamp_ms, subject, *tx_.case_id, std::move(detail)};
    auto plain = contents.encode();
    effects_.receipts.push_back(ctx_.sealer->seal(tx_.sender, ByteView(plain)));
  }

  void reject(std::optional<CaseId> case_id, std::string_view outcome, Payload details) {
    effects_.status = ApplyStatus::Rejected;
    effects_.rejection = std::string(outcome);
    details["outcome"] = std::string(outcome);
    details["sender"] = tx_.sender.fingerprint().hex();
    details["kind"] = std::string(to_string(tx_.kind()));
    emit(RecordKind::AccessValidity, std::move(case_id), std::move(details));
  }

  CaseContract& existing_case() {
    auto it = state_.cases.find(*tx_.case_id);
    if (it == state_.cases.end()) throw Error(Errc::UnknownCase, tx_.case_id->str());
    return it->second;
  }

  /// Runs the staged access check for `required`. Returns the decision when
  /// access is granted; otherwise records the refusal and returns nullopt.
  std::optional<AccessDecision> authorize(const CaseContract& contract, Right required) {
    const auto& access = state_.access;
    AccessDecision d = retrieve_access_info(tx_, access.registry, access.policy, contract.current_stage);
    Payload details{{"required", std::string(to_string(required))},
                    {"declared_stage", tx_.declared_stage.value_or(std::string(to_string(contract.current_stage)))},
                    {"actual_stage", std::string(to_string(contract.current_stage))},
                    {"rights", d.rights.to_string()}};
    if (d.outcome != AccessOutcome::Granted) {
      reject(contract.case_number, to_string(d.outcome), std::move(details));
      return std::nullopt;
    }
    if (!d.rights.contains(required)) {
      reject(contract.case_number, "RightNotGranted", std::move(details));
      return std::nullopt;
    }
    return d;
  }

  void handle(const SetupPayload& p) {
    auto& access = state_.access;
    if (!access.admins.contains(tx_.sender.fingerprint())) {
      reject(std::nullopt, to_string(AccessOutcome::AccessDenied),
             {{"required", "Setup"}, {"subject", p.subject.fingerprint().hex()}});
      return;
    }
    auto reg = access.registry.register_user(p.subject, p.role);
    emit(RecordKind::ClientInfo, std::nullopt,
         {{"fingerprint", reg.fingerprint.hex()},
          {"role", std::string(to_string(reg.role))},
          {"registered_by", tx_.sender.fingerprint().hex()}});
  }

  void handle(const InitialUploadPayload& p) {
    const CaseId& case_id = *tx_.case_id;
    if (state_.cases.contains(case_id)) throw Error(Errc::CaseExists, case_id.str());

    auto role = state_.access.registry.role_of(tx_.sender.fingerprint());
    if (!role) {
      // The case does not exist, so the refusal is not filed under it.
      reject(std::nullopt, to_string(AccessOutcome::AccessDenied),
             {{"required", "InitialUpload"}, {"requested_case", case_id.str()}});
      return;
    }

    CaseContract contract;
    contract.case_number = case_id;
    contract.timestamp_ms = tx_.timestamp_ms;
    contract.initial_block_number = block_;
    contract.current_stage = p.stage;
    contract.roles_involved.insert(*role);
    state_.cases.emplace(case_id, std::move(contract));
    state_.tokens.open_case(case_id);

    // Tokenized contract to access-control contract hand-off.
    state_.access.case_list.insert(case_id);
    state_.access.stage_mirror[case_id] = p.stage;

    emit(RecordKind::CaseNumber, case_id, {{"case_number", case_id.str()}});
    emit(RecordKind::Timestamp, case_id, {{"time", std::to_string(tx_.timestamp_ms)}});
    emit(RecordKind::InitialBlockNumber, case_id, {{"block", std::to_string(block_)}});
    emit(RecordKind::CurrentStage, case_id,
         {{"stage", std::string(to_string(p.stage))},
          {"access_contract", "case-registered"},
          {"file_id", p.file_id},
          {"hashed_data", p.content.hex()}});
    receipt(p.content, "InitialUpload");
  }

  void handle(const FileUploadPayload& p) {
    CaseContract& contract = existing_case();
    auto decision = authorize(contract, Right::UploadFile);
    if (!decision) return;

    const auto& graph = state_.tokens.graph(contract.case_number);
    Digest id = original_token_id(contract.case_number, p.file_id, p.content, tx_.timestamp_ms);
    if (graph.contains(id)) throw Error(Errc::DuplicateToken, id.hex());

    state_.tokens.mint_original(contract.case_number, p.file_id, p.content, tx_.timestamp_ms);
    contract.token_list.push_back(id);
    contract.roles_involved.insert(*decision->role);
    effects_.token = id;

    emit(RecordKind::TokenList, contract.case_number,
         {{"token", id.hex()}, {"position", std::to_string(contract.token_list.size() - 1)}});
    emit(RecordKind::TypeOfDataUpload, contract.case_number,
         {{"type", "raw"}, {"file_id", p.file_id}, {"hashed_data", p.content.hex()}, {"token", id.hex()}});
    receipt(id, "FileUpload");
  }

  void handle(const AnalysisPayload& p) {
    CaseContract& contract = existing_case();
    auto decision = authorize(contract, Right::UploadAnalysis);
    if (!decision) return;

    const auto& graph = state_.tokens.graph(contract.case_number);
    for (const auto& parent : p.parents)
      if (!graph.contains(parent)) throw Error(Errc::UnknownParent, parent.hex());
    Digest id = derived_token_id(p.parents, tx_.timestamp_ms);
    if (graph.contains(id)) throw Error(Errc::DuplicateToken, id.hex());

    state_.tokens.derive_token(contract.case_number, p.parents, tx_.timestamp_ms);
    contract.token_list.push_back(id);
    contract.roles_involved.insert(*decision->role);
    effects_.token = id;

    emit(RecordKind::TokenDependency, contract.case_number,
         {{"token", id.hex()}, {"parents", join_hex(p.parents)}});
    emit(RecordKind::TypeOfDataUpload, contract.case_number, {{"type", "analyzed"}, {"token", id.hex()}});
    receipt(id, "Analysis");
  }

  void handle(const AccessRequestPayload& p) {
    CaseContract& contract = existing_case();
    const auto& access = state_.access;
    AccessDecision d = retrieve_access_info(tx_, access.registry, access.policy, contract.current_stage);

    emit(RecordKind::AccessRequest, contract.case_number,
         {{"resource", p.resource},
          {"sender", tx_.sender.fingerprint().hex()},
          {"declared_stage", *tx_.declared_stage}});

    auto requested = parse_right(p.resource);
    bool covers = requested && d.rights.contains(*requested);
    Payload validity{{"outcome", std::string(to_string(d.outcome))},
                     {"rights", d.rights.to_string()},
                     {"resource_granted", covers ? "true" : "false"},
                     {"actual_stage", std::string(to_string(contract.current_stage))}};
    emit(RecordKind::AccessValidity, contract.case_number, std::move(validity));

    if (d.outcome != AccessOutcome::Granted) {
      effects_.status = ApplyStatus::Rejected;
      effects_.rejection = std::string(to_string(d.outcome));
      return;
    }
    contract.roles_involved.insert(*d.role);
    receipt(tx_.id, "access-levels:" + d.rights.to_string());
  }

  void handle(const StagePayload& p) {
    CaseContract& contract = existing_case();
    auto decision = authorize(contract, Right::ChangeStage);
    if (!decision) return;

    Stage from = contract.current_stage;
    if (!state_.access.policy.transition_allowed(from, p.target)) {
      reject(contract.case_number, "TransitionNotAllowed",
             {{"from", std::string(to_string(from))}, {"to", std::string(to_string(p.target))}});
      return;
    }
    contract.current_stage = p.target;
    state_.access.stage_mirror[contract.case_number] = p.target;
    contract.roles_involved.insert(*decision->role);

    emit(RecordKind::StageChange, contract.case_number,
         {{"from", std::string(to_string(from))}, {"to", std::string(to_string(p.target))}});
  }

  void handle(const ProvenancePayload&) {
    CaseContract& contract = existing_case();
    auto decision = authorize(contract, Right::ExtractProvenance);
    if (!decision) return;
    contract.roles_involved.insert(*decision->role);

    Digest root;
    if (ctx_.case_roots != nullptr) {
      auto it = ctx_.case_roots->find(contract.case_number);
      if (it != ctx_.case_roots->end()) root = it->second;
    }
    emit(RecordKind::AccessValidity, contract.case_number,
         {{"outcome", std::string(to_string(AccessOutcome::Granted))},
          {"required", std::string(to_string(Right::ExtractProvenance))},
          {"rights", decision->rights.to_string()}});
    receipt(root, "provenance-root-before-block:" + std::to_string(block_));
  }

  ContractState& state_;
  const Transaction& tx_;
  std::uint64_t block_;
  const ApplyContext& ctx_;
  Effects effects_;
};

}  // namespace

Effects apply_transaction(ContractState& state, const Transaction& tx, std::uint64_t block_index,
                          const ApplyContext& ctx) {
  canonical_serialize(tx);  // throws MissingField on incomplete transactions
  return Dispatcher(state, tx, block_index, ctx).run();
}

CaseContract case_state(const ContractState& state, const CaseId& case_id) {
  auto it = state.cases.find(case_id);
  if (it == state.cases.end()) throw Error(Errc::UnknownCase, case_id.str());
  return it->second;
}

nlohmann::ordered_json ContractState::to_json() const {
  using ojson = nlohmann::ordered_json;
  ojson cases_json = ojson::object();
  for (const auto& [id, c] : cases) {
    ojson tokens_json = ojson::array();
    for (const auto& t : c.token_list) tokens_json.push_back(t.hex());
    ojson roles_json = ojson::array();
    for (auto r : c.roles_involved) roles_json.push_back(std::string(to_string(r)));
    cases_json[id.str()] = {{"case_number", id.str()},
                            {"timestamp", c.timestamp_ms},
                            {"initial_block_number", c.initial_block_number},
                            {"current_stage", std::string(to_string(c.current_stage))},
                            {"token_list", std::move(tokens_json)},
                            {"roles_involved", std::move(roles_json)}};
  }
  ojson graphs = ojson::object();
  for (const auto& [id, g] : tokens.graphs()) graphs[id.str()] = g.to_json();

  ojson case_list = ojson::array();
  for (const auto& c : access.case_list) case_list.push_back(c.str());
  ojson mirror = ojson::object();
  for (const auto& [c, s] : access.stage_mirror) mirror[c.str()] = std::string(to_string(s));
  ojson admins = ojson::array();
  for (const auto& a : access.admins) admins.push_back(a.hex());

  return {{"cases", std::move(cases_json)},
          {"token_graphs", std::move(graphs)},
          {"access_control",
           {{"case_list", std::move(case_list)},
            {"stage_mirror", std::move(mirror)},
            {"registry", access.registry.to_json()},
            {"admins", std::move(admins)},
            {"policy", access.policy.to_json()}}}};
}

}  // namespace caseledger
