# This file makes the checks directory a Python package
from .base_check import BaseCheck, CheckResponse, FunctionCheck, SuiteReport
from .ce_axioms import (
    AXIOM_CHECKS,
    IdempotenceCheck,
    InvarianceCheck,
    ModuleCheck,
    PositivityCheck,
    UnitalityCheck,
    ce_axiom_suite,
)

__all__ = [
    'BaseCheck', 'CheckResponse', 'FunctionCheck', 'SuiteReport',
    'AXIOM_CHECKS', 'IdempotenceCheck', 'InvarianceCheck', 'ModuleCheck',
    'PositivityCheck', 'UnitalityCheck', 'ce_axiom_suite',
]
