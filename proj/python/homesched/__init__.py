"""Day-ahead household energy scheduling with a certified battery plan.

The heavy lifting lives in the compiled extension; this package just
re-exports it.
"""

from homesched._core import *  # noqa: F401,F403

__version__ = "0.1.0"
