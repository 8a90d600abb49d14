"""Shared independent oracles for the test suite.

These deliberately share no code with the package: plain double loops
over the series definitions at high working precision, and exact
rational arithmetic for terminating sums.
"""

from fractions import Fraction

import mpmath as mp
import pytest


def naive_f4(alpha, beta, g1, g2, x, y, n_max=300, dps=30):
    """Brute-force double sum of the fourth-kind Appell series."""
    with mp.workdps(dps):
        total = mp.mpf(0)
        for n in range(n_max):
            diag = mp.mpf(0)
            for j in range(n + 1):
                k = n - j
                term = (mp.rf(alpha, n) * mp.rf(beta, n)) / (mp.rf(g1, j) * mp.rf(g2, k))
                term *= mp.mpf(x) ** j * mp.mpf(y) ** k / (mp.factorial(j) * mp.factorial(k))
                diag += term
            total += diag
        return float(total)


def naive_f4_diag_partials(alpha, beta, g1, g2, x, y, n_max=80, dps=30):
    """Anti-diagonal partial sums of the F4 series (for monotonicity checks)."""
    with mp.workdps(dps):
        partials = []
        total = mp.mpf(0)
        for n in range(n_max):
            diag = mp.mpf(0)
            for j in range(n + 1):
                k = n - j
                term = (mp.rf(alpha, n) * mp.rf(beta, n)) / (mp.rf(g1, j) * mp.rf(g2, k))
                term *= mp.mpf(x) ** j * mp.mpf(y) ** k / (mp.factorial(j) * mp.factorial(k))
                diag += term
            total += diag
            partials.append(float(total))
        return partials


def naive_f2(alpha, b1, b2, g1, g2, x, y, n_max=300, dps=30):
    """Brute-force double sum of the second-kind Appell series."""
    with mp.workdps(dps):
        total = mp.mpf(0)
        for j in range(n_max):
            for k in range(n_max - j):
                term = (
                    mp.rf(alpha, j + k)
                    * mp.rf(b1, j)
                    * mp.rf(b2, k)
                    / (mp.rf(g1, j) * mp.rf(g2, k))
                )
                term *= mp.mpf(x) ** j * mp.mpf(y) ** k / (mp.factorial(j) * mp.factorial(k))
                total += term
        return float(total)


def exact_3f2_terminating(a1, a2, k, b1, b2):
    """Terminating 3F2 at unit argument in exact rational arithmetic.

    Parameters must be given as Fractions (or ints).
    """
    a1, a2, b1, b2 = map(Fraction, (a1, a2, b1, b2))
    term = Fraction(1)
    total = Fraction(1)
    for m in range(k):
        term *= (a1 + m) * (a2 + m) * (m - k)
        term /= (b1 + m) * (b2 + m) * (m + 1)
        total += term
        if term == 0:
            break
    return total


def gauss_2f1_direct(a, b, c, z, tol=1e-18, n_max=100_000):
    """Gauss series by direct summation, independent of the package."""
    term = 1.0
    total = 1.0
    for n in range(n_max):
        term *= (a + n) * (b + n) * z / ((c + n) * (n + 1.0))
        total += term
        if abs(term) < tol * max(1.0, abs(total)):
            break
    return total


@pytest.fixture(scope="session")
def rng():
    import numpy as np

    return np.random.default_rng(20260811)
