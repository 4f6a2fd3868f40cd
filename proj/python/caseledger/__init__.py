"""Python bindings for the caseledger provenance ledger."""

from ._caseledger import (
    CaseLedgerError,
    Fixture,
    build_fixture,
    check_access,
    default_policy_json,
    derived_token_id,
    digest,
    original_token_id,
    retrieval_benchmark,
    run_cli,
)

__all__ = [
    "CaseLedgerError",
    "Fixture",
    "build_fixture",
    "check_access",
    "default_policy_json",
    "derived_token_id",
    "digest",
    "original_token_id",
    "retrieval_benchmark",
    "run_cli",
]
