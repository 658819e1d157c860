"""ZND detonation stability tools (compiled core in _zndstab)."""

from ._zndstab import *  # noqa: F401,F403
from ._zndstab import __version__  # noqa: F401
