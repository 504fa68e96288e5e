"""Resolutions, derived functors and triangulated checkers."""
from .functors import *  # noqa: F401,F403
from .resolutions import *  # noqa: F401,F403
from .triangulated import *  # noqa: F401,F403
from .verdict import *  # noqa: F401,F403
