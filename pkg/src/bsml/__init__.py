"""Bulk synchronous parallel programming with parallel vectors.

>>> from bsml import new_machine, Backend, mkpar
>>> from bsml.skeletons import from_chunks
>>> from bsml.mps import mps_par
>>> with new_machine(4, Backend.CONCURRENT) as m:
...     mps_par(from_chunks(m, [[1, 2], [-1, 2], [-1, 3], [-4]]))
6
"""

from .core import (
    Backend,
    Machine,
    ParVector,
    ProcFunction,
    SuperstepRecord,
    apply,
    bsp_p,
    mkpar,
    new_machine,
    proj,
    put,
)
from .errors import (
    Bcast,
    BsmlError,
    CommunicationError,
    ConfigError,
    ContractError,
    DomainError,
    MachineMismatchError,
    NestingError,
    PreconditionError,
    UsageError,
)

__version__ = "0.1.0"
