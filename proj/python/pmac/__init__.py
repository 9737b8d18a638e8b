"""Equilibria of decentralized power-allocation and channel-selection games
on parallel multiple-access channels.

Thin re-export of the compiled core module.
"""

from ._pmac import *  # noqa: F401,F403
