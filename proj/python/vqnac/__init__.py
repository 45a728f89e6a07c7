import sys

import numpy as np

from ._vqnac import *  # noqa: F401,F403
from ._vqnac import __version__, cli, oracle, shotcost


def point(*values):
    return np.asarray(values, dtype=float)


def main():
    sys.exit(cli(sys.argv[1:]))
