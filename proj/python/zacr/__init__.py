from ._zacr import *  # noqa: F401,F403
from ._zacr import __doc__  # noqa: F401
