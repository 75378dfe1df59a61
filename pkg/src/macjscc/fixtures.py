"""Named example systems.

``cover-example``
    Binary sources with ``P(0,0) = P(1,1) = 1/3`` and ``P(0,1) = P(1,0) = 1/6``,
    noiseless adder channel ``Y = X1 + X2``, encoder side information
    ``Z1 = BSC(0.3)(U2)``, ``Z2 = BSC(0.3)(U1)`` and decoder side information
    built from ``Z1``, ``Z2`` and ``V = U1 AND U2 AND N`` with ``N`` a fair bit.
``gmac-discrete``
    Binary sources with ``P(0,0) = P(0,1) = P(1,1) = 1/3`` over a Gaussian MAC
    with ``P1 = 3``, ``P2 = 4``, noise variance 1.
"""

from itertools import product

import numpy as np

from .admissibility import DistortionSpec, SideInfoSystem
from .errors import InputError
from .probcore import Kernel, Pmf

COVER_PMF = np.array([[1 / 3, 1 / 6], [1 / 6, 1 / 3]])
GMAC_DISCRETE_PMF = np.array([[1 / 3, 1 / 3], [0.0, 1 / 3]])
GMAC_DISCRETE_CHANNEL = {"P1": 3.0, "P2": 4.0, "sigma_n2": 1.0}

# components of the decoder observation for each ladder step
DECODER_SIDE = {
    "none": (),
    "z1": ("z1",),
    "z2": ("z2",),
    "z1z2": ("z1", "z2"),
    "v": ("v",),
    "full": ("z1", "z2", "v"),
}


def source_pmf(name="cover-example"):
    if name == "cover-example":
        table = COVER_PMF
    elif name == "gmac-discrete":
        table = GMAC_DISCRETE_PMF
    else:
        raise InputError(f"unknown fixture {name!r}")
    return Pmf([("U1", 2), ("U2", 2)], table)


def cover_source(decoder_side="full", crossover=0.3):
    """Source table over ``(U1, U2, Z1, Z2, Z)`` for one ladder step."""
    try:
        parts = DECODER_SIDE[decoder_side]
    except KeyError:
        raise InputError(f"decoder_side must be one of {sorted(DECODER_SIDE)}") from None
    zsize = 2 ** len(parts)
    p = np.zeros((2, 2, 2, 2, zsize))
    for u1, u2, z1, z2, n in product((0, 1), repeat=5):
        v = u1 & u2 & n
        pz1 = 1 - crossover if z1 == u2 else crossover
        pz2 = 1 - crossover if z2 == u1 else crossover
        bits = {"z1": z1, "z2": z2, "v": v}
        z = 0
        for part in parts:
            z = 2 * z + bits[part]
        p[u1, u2, z1, z2, z] += COVER_PMF[u1, u2] * pz1 * pz2 * 0.5
    return Pmf([("U1", 2), ("U2", 2), ("Z1", 2), ("Z2", 2), ("Z", zsize)], p)


def adder_channel():
    return Kernel.deterministic([("X1", 2), ("X2", 2)], ("Y", 3), lambda a, b: a + b)


def channel_maps(kind):
    """``"independent"``: uniform inputs ignoring ``W``; ``"identity"``: ``X = W``."""
    if kind == "independent":
        return tuple(Kernel([(f"W{i}", 2)], (f"X{i}", 2), [[0.5, 0.5], [0.5, 0.5]]) for i in (1, 2))
    if kind == "identity":
        return tuple(Kernel.deterministic([(f"W{i}", 2)], (f"X{i}", 2), lambda w: w) for i in (1, 2))
    raise InputError(f"unknown channel map kind {kind!r}")


def cover_example(decoder_side="full", inputs="independent", crossover=0.3) -> SideInfoSystem:
    """Lossless transmission of the adder-channel example (``W_i = U_i``)."""
    quant = tuple(Kernel.deterministic([(f"U{i}", 2)], (f"W{i}", 2), lambda u: u) for i in (1, 2))
    return SideInfoSystem(
        source=cover_source(decoder_side, crossover),
        quantizers=quant,
        channel_maps=channel_maps(inputs),
        channel=adder_channel(),
        distortion=DistortionSpec.hamming(0.0, 0.0),
    )


FIXTURES = ("cover-example", "gmac-discrete")
