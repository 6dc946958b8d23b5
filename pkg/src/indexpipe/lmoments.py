"""Sample L-moments from unbiased probability-weighted moments.

For the ascending order statistics x_(1) <= ... <= x_(n), the unbiased PWM
estimates are

    b_r = n^-1 * sum_{j=r+1..n} [ (j-1)(j-2)...(j-r) / ((n-1)(n-2)...(n-r)) ] x_(j)

and the first four L-moments follow as

    l1 = b0
    l2 = 2*b1 - b0
    l3 = 6*b2 - 6*b1 + b0
    l4 = 20*b3 - 30*b2 + 12*b1 - b0

with the ratios t3 = l3/l2 (L-skewness) and t4 = l4/l2 (L-kurtosis).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientSampleError


@dataclass(frozen=True)
class LMoments:
    l1: float
    l2: float
    t3: float
    t4: float
    n: int
    constant: bool = False


def sample_l_moments(xs, nmom: int = 4) -> LMoments:
    """Estimate the first ``nmom`` (1..4) sample L-moments.

    Requires n >= nmom for l1/l2 and n >= 4 for the t3/t4 ratios. Constant
    samples report l2 = 0 and zero ratios with the ``constant`` flag set.
    Unrequested moments are NaN. Permutation-invariant by construction.
    """
    if nmom not in (1, 2, 3, 4):
        raise DomainError(f"nmom must be in 1..4, got {nmom}")
    x = np.asarray(xs, dtype=float)
    if x.ndim != 1:
        x = x.ravel()
    if np.isnan(x).any():
        raise DomainError("sample contains NaN; drop missing values first")
    n = x.size
    needed = nmom if nmom <= 2 else 4
    if n < needed:
        raise InsufficientSampleError(f"need at least {needed} values, got {n}", n=n)

    x = np.sort(x)
    b0 = float(x.mean())
    l1 = b0
    l2 = t3 = t4 = math.nan
    constant = bool(n > 1 and x[0] == x[-1])

    if nmom >= 2:
        j = np.arange(1, n + 1, dtype=float)
        w1 = (j - 1) / (n - 1)
        b1 = float(w1 @ x) / n
        l2 = 2 * b1 - b0
        if constant or l2 < 0:
            # exact zero dispersion (tiny negatives are rounding artifacts)
            l2, constant = 0.0, True
    if nmom >= 3:
        w2 = w1 * (j - 2) / (n - 2)
        b2 = float(w2 @ x) / n
        l3 = 6 * b2 - 6 * b1 + b0
        t3 = 0.0 if constant else l3 / l2
    if nmom >= 4:
        w3 = w2 * (j - 3) / (n - 3)
        b3 = float(w3 @ x) / n
        l4 = 20 * b3 - 30 * b2 + 12 * b1 - b0
        t4 = 0.0 if constant else l4 / l2

    return LMoments(l1=l1, l2=l2, t3=t3, t4=t4, n=n, constant=constant)
