"""Shared dense-matrix oracles and small builders for the test suite."""

import math

import numpy as np

from leeyang.spins import HalfInt


def splus_matrix(d0):
    """Dense (S+) matrix in the ascending z-basis m = -s0..s0."""
    s = d0 / 2
    mat = np.zeros((d0 + 1, d0 + 1))
    for k in range(d0):
        m = (-d0 + 2 * k) / 2
        mat[k + 1, k] = math.sqrt(s * (s + 1) - m * (m + 1))
    return mat


def sx_matrix(d0):
    sp = splus_matrix(d0)
    return 0.5 * (sp + sp.T)


def ring_couplings(n, J=1.0):
    mat = np.zeros((n, n))
    for i in range(n):
        mat[i, (i + 1) % n] += J
        mat[(i + 1) % n, i] += J
    return mat


def uniform_couplings(n, J):
    return J * (np.ones((n, n)) - np.eye(n))


def spins(two_s, n):
    return [HalfInt(two_s)] * n


def assert_roots_match(got, expected, atol=1e-9):
    """Compare two root multisets via optimal pairing.

    Lexicographic complex sorting is unstable when conjugate partners differ
    in their real parts by an ulp, so pair roots by minimum total distance
    instead.
    """
    from scipy.optimize import linear_sum_assignment

    got = np.asarray(got, complex)
    expected = np.asarray(expected, complex)
    assert got.shape == expected.shape
    dist = np.abs(got[:, None] - expected[None, :])
    rows, cols = linear_sum_assignment(dist)
    worst = dist[rows, cols].max()
    assert worst < atol, f"root sets differ by {worst:.3e}"


def multiplicities(spin_list):
    """Exact integer sector multiplicities via convolution of uniform vectors."""
    acc = np.array([1], dtype=object)
    for s in spin_list:
        acc = np.convolve(acc, np.ones(s.doubled + 1, dtype=object))
    return acc.astype(float)
