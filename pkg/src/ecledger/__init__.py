"""ecledger: a desk-scale proof ledger for the modularity-input computations
attached to the isogeny class of conductor-15 elliptic curves.

Every finite computation the argument relies on — invariants, torsion,
reduction data, Frobenius traces, mod-m image group theory, the L-value
ratio, and the 5-adic L-invariant — is recomputed from first principles and
assembled into a deterministic pass/fail/cited report.
"""

__version__ = "1.0.0"

from .curve import E1, E2, WeierstrassCurve, curve_from_string
from .ledger import (
    CheckRecord,
    LedgerOptions,
    VerificationReport,
    emit_report,
    report_from_json,
    run_ledger,
)

__all__ = [
    "E1",
    "E2",
    "WeierstrassCurve",
    "curve_from_string",
    "CheckRecord",
    "LedgerOptions",
    "VerificationReport",
    "emit_report",
    "report_from_json",
    "run_ledger",
    "__version__",
]
