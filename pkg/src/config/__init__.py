"""
Process-level configuration: environment settings and the accounting runtime.
"""
from .accounting_config import AccountingRuntime
from .settings import Settings, get_settings

__all__ = [
    "AccountingRuntime",
    "Settings",
    "get_settings",
]
