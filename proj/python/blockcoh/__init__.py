"""Block-coherence and POVM-based coherence toolkit."""

from ._blockcoh import *  # noqa: F401,F403
from ._blockcoh import __doc__  # noqa: F401
