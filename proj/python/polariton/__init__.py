"""Mean-field phase diagrams of polariton lattices."""

from ._polariton import *  # noqa: F401,F403
from ._polariton import __version__

BHM_TIP_RATIO = 4.0 * (3.0 + 2.0 * 2.0**0.5)


def units_of_g(big_n, detuning=0.0, z=4, omega_ex=1000.0):
    """SystemParams with g = 1 and w_ph = w_ex + detuning."""
    return SystemParams.from_detuning(omega_ex, detuning, 1.0, big_n, z)  # noqa: F405
