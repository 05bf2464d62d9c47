"""
Shared plumbing: the exception hierarchy and logging setup used by every
package under src/.
"""

from .errors import GapToolkitError, NumericalError, UsageError
from .log import setup_logging

__all__ = ['GapToolkitError', 'NumericalError', 'UsageError', 'setup_logging']
