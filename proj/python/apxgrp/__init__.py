"""Approximate subgroups of SL_n(F_p): product sets, tori and Cayley graphs."""

from ._apxgrp import *  # noqa: F401,F403
from ._apxgrp import __version__  # noqa: F401
