"""The nonlocal gauge transform and its algebraic identities.

The transform multiplies a field by the exponential of the two-sided
primitive of the (generally complex) density u u*:

    G(u) = u * exp(-delta * P(u u*)),     P = (1/2)(int_{-inf}^x - int_x^{inf}).

Because (u u*)* = u u*, the modulus identity G(u) G(u)* = u u* holds exactly,
which also makes the map invertible with the sign of delta flipped.
"""

from __future__ import annotations

import numpy as np

from .grid import (
    SpectralField,
    antiderivative_symmetric,
    dealiased_product,
    forward_transform,
    inverse_transform,
    l2_norm,
    nonlocal_conjugate,
)


def _primitive_samples(fld):
    density = dealiased_product([fld, nonlocal_conjugate(fld)])
    return inverse_transform(antiderivative_symmetric(density))


def gauge_forward(fld, delta):
    """v = u exp(-delta * P(u u*)), computed pointwise in physical space."""
    if delta == 0:
        return SpectralField(fld.grid, fld.coeffs)
    prim = _primitive_samples(fld)
    v = inverse_transform(fld) * np.exp(-delta * prim)
    return forward_transform(v, fld.grid)


def gauge_inverse(fld, delta):
    """u = v exp(+delta * P(v v*)); exact inverse since v v* = u u*."""
    return gauge_forward(fld, -delta)


def gauge_taylor(fld, delta, order):
    """Truncated series u * sum_{k<=order} ((-delta)^k / k!) P(u u*)^k.

    Powers are built by repeated dealiased products; serves as an independent
    oracle for the exponential form.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    acc = np.array(fld.coeffs, dtype=np.complex128)
    if order == 0:
        return SpectralField(fld.grid, acc)
    prim = forward_transform(_primitive_samples(fld), fld.grid)
    power = None  # P^k as a spectral field
    coeff = 1.0
    for k in range(1, order + 1):
        coeff *= -delta / k
        power = prim if power is None else dealiased_product([power, prim])
        term = dealiased_product([fld, power])
        acc = acc + coeff * term.coeffs
    return SpectralField(fld.grid, acc)


def gauge_modulus_identity(fld, delta):
    """Relative residual || G(u) G(u)* - u u* ||_2 / || u u* ||_2."""
    v = gauge_forward(fld, delta)
    uu = dealiased_product([fld, nonlocal_conjugate(fld)])
    vv = dealiased_product([v, nonlocal_conjugate(v)])
    denom = l2_norm(uu)
    if denom == 0:
        return 0.0
    diff = SpectralField(fld.grid, vv.coeffs - uu.coeffs)
    return l2_norm(diff) / denom
