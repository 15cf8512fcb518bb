"""Brute-force oracles for the determinant formulas and the block combinatorics.

The r-th round trip is a cycle of 2r integration variables.  Node i belongs
to sphere 1 for even i and to sphere 2 for odd i; edge i joins nodes i and
i+1 (mod 2r) and carries rho1 for even i, rho2 for odd i.  Picking the
monopole subtraction on a set S of edges cuts the cycle into |S| open
chains, i.e. tridiagonal blocks.  Summing (-1)^|S|/det over all non-empty
cut sets reproduces the monopole contribution of r round trips without any
hand-made bookkeeping of multiplicities.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CasimirError
from .geometry import GeometryDerived
from .monopole import monopole_series
from .specfun import chebyshev_U

MAX_CYCLIC_R = 8
MAX_ENUMERATION_R = 6


@dataclass(frozen=True)
class PartitionTerm:
    """One cyclic block decomposition of the 2r-cycle.

    ``blocks`` lists (size, start_color) in cyclic order starting from the
    block that contains node 0's successor of the first cut.
    """

    blocks: tuple[tuple[int, int], ...]
    multiplicity: int = 1

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def sign(self) -> int:
        return -1 if self.k % 2 else 1

    def is_color_consistent(self) -> bool:
        for (n, c), (_, c_next) in zip(self.blocks, self.blocks[1:] + self.blocks[:1]):
            expected = c if n % 2 == 0 else 3 - c
            if c_next != expected:
                return False
        return True


def _edge_rho(i: int, geom: GeometryDerived) -> float:
    return geom.rho1 if i % 2 == 0 else geom.rho2


# --- single blocks -----------------------------------------------------------


def assemble_block(n: int, start_color: int, signs: Sequence[int], geom: GeometryDerived) -> np.ndarray:
    """n x n tridiagonal block with unit diagonal and off-diagonals +-rho alternating."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if start_color not in (1, 2):
        raise ValueError("start_color must be 1 or 2")
    if len(signs) != n - 1:
        raise ValueError(f"need {n - 1} signs, got {len(signs)}")
    rho = (geom.rho1, geom.rho2) if start_color == 1 else (geom.rho2, geom.rho1)
    m = np.eye(n)
    for i, s in enumerate(signs):
        m[i, i + 1] = m[i + 1, i] = s * rho[i % 2]
    return m


def continuant(m: np.ndarray) -> float:
    """Determinant of a tridiagonal matrix by the three-term continuant recurrence."""
    n = m.shape[0]
    d_prev, d = 1.0, m[0, 0]
    for k in range(1, n):
        d_prev, d = d, m[k, k] * d - m[k, k - 1] * m[k - 1, k] * d_prev
    return d


def block_determinant_direct(n: int, start_color: int, signs: Sequence[int], geom: GeometryDerived) -> float:
    """det of the explicitly assembled block, via the continuant recurrence."""
    return continuant(assemble_block(n, start_color, signs, geom))


def block_determinant_closed(n: int, start_color: int, geom: GeometryDerived) -> float:
    """Chebyshev closed form of the block determinant.

    odd n = 2k+1:  (rho1 rho2)^k U_k(y)
    even n = 2k:   (rho1 rho2)^k [U_k(y) + (rho_other/rho_start) U_{k-1}(y)]
    """
    k, odd = divmod(n, 2)
    p = geom.rho12**k
    if odd:
        return p * chebyshev_U(k, geom)
    ratio = geom.alpha if start_color == 1 else geom.beta
    return p * (chebyshev_U(k, geom) + ratio * chebyshev_U(k - 1, geom))


# --- cyclic round-trip matrix ------------------------------------------------


def assemble_cyclic(r: int, edge_signs: Sequence[int], geom: GeometryDerived) -> np.ndarray:
    """2r x 2r cyclic tridiagonal matrix of the Dirichlet round trip.

    For r = 1 both edges join the same pair of nodes and their entries add.
    """
    dim = 2 * r
    if len(edge_signs) != dim:
        raise ValueError(f"need {dim} edge signs, got {len(edge_signs)}")
    m = np.eye(dim)
    for i, s in enumerate(edge_signs):
        j = (i + 1) % dim
        m[i, j] += s * _edge_rho(i, geom)
        m[j, i] += s * _edge_rho(i, geom)
    return m


def cyclic_matrix_determinant(
    r: int, sign_class: str, geom: GeometryDerived, edge_signs: Sequence[int] | None = None
) -> float:
    """Dense LU determinant of M_r^(+/-).

    ``sign_class`` '+' means an even number of minus signs on the 2r edges,
    '-' an odd number.  A representative pattern is chosen when
    ``edge_signs`` is not given.
    """
    if not 1 <= r <= MAX_CYCLIC_R:
        raise CasimirError(f"dimension cap exceeded: r={r} > {MAX_CYCLIC_R}")
    if edge_signs is None:
        edge_signs = [1] * (2 * r)
        if sign_class == "-":
            edge_signs[0] = -1
        elif sign_class != "+":
            raise ValueError(f"sign_class must be '+' or '-', got {sign_class!r}")
    elif sign_class_of(edge_signs) != sign_class:
        raise ValueError("edge_signs do not belong to the requested sign class")
    return float(np.linalg.det(assemble_cyclic(r, edge_signs, geom)))


def sign_class_of(edge_signs: Sequence[int]) -> str:
    return "+" if sum(1 for s in edge_signs if s < 0) % 2 == 0 else "-"


def dirichlet_trace_enumeration(r: int, geom: GeometryDerived) -> float:
    """tr M_D^r as (rho1 rho2)^r times the mean of 1/det over all 2^(2r) sign patterns."""
    if not 1 <= r <= MAX_CYCLIC_R:
        raise CasimirError(f"dimension cap exceeded: r={r} > {MAX_CYCLIC_R}")
    dets = [
        np.linalg.det(assemble_cyclic(r, signs, geom))
        for signs in itertools.product((1, -1), repeat=2 * r)
    ]
    return geom.rho12**r * math.fsum(1.0 / d for d in dets) / len(dets)


# --- cut-set enumeration ------------------------------------------------------


def cut_set_blocks(r: int, mask: int) -> tuple[tuple[int, int], ...]:
    """Blocks (size, start_color) produced by cutting the edges in ``mask``."""
    dim = 2 * r
    cuts = [i for i in range(dim) if mask >> i & 1]
    if not cuts:
        raise ValueError("empty cut set")
    blocks = []
    for a, b in zip(cuts, cuts[1:] + [cuts[0] + dim]):
        start = (a + 1) % dim
        blocks.append((b - a, 1 if start % 2 == 0 else 2))
    return tuple(blocks)


def _cut_matrices(r: int, geom: GeometryDerived) -> tuple[np.ndarray, np.ndarray]:
    dim = 2 * r
    masks = np.arange(1, 1 << dim)
    mats = np.broadcast_to(np.eye(dim), (masks.size, dim, dim)).copy()
    for i in range(dim):
        keep = ((masks >> i) & 1) == 0
        j = (i + 1) % dim
        rho = _edge_rho(i, geom)
        mats[keep, i, j] += rho
        mats[keep, j, i] += rho
    return masks, mats


def enumeration_table(r: int, geom: GeometryDerived) -> dict[int, float]:
    """Per-k aggregates (rho1 rho2)^r (-1)^k sum_{|S|=k} 1/det M_S."""
    if not 1 <= r <= MAX_ENUMERATION_R:
        raise CasimirError(f"enumeration cap exceeded: r={r} > {MAX_ENUMERATION_R}")
    masks, mats = _cut_matrices(r, geom)
    inv = 1.0 / np.linalg.det(mats)
    sizes = np.array([bin(int(m)).count("1") for m in masks])
    pref = geom.rho12**r
    return {
        k: pref * (-1) ** k * math.fsum(inv[sizes == k])
        for k in range(1, 2 * r + 1)
    }


def delta_r_enumeration(r: int, geom: GeometryDerived) -> float:
    """Monopole contribution Delta_r by summing over all 2^(2r) - 1 cut sets."""
    return math.fsum(enumeration_table(r, geom).values())


def enumerate_partitions(r: int) -> list[PartitionTerm]:
    """Distinct cyclic block sequences with the number of cut sets realising each."""
    if not 1 <= r <= MAX_ENUMERATION_R:
        raise CasimirError(f"enumeration cap exceeded: r={r} > {MAX_ENUMERATION_R}")
    counts: Counter = Counter()
    for mask in range(1, 1 << (2 * r)):
        blocks = cut_set_blocks(r, mask)
        rotations = [blocks[i:] + blocks[:i] for i in range(len(blocks))]
        counts[min(rotations)] += 1
    return [PartitionTerm(blocks, mult) for blocks, mult in sorted(counts.items())]


# --- h-function recursion -----------------------------------------------------


def block_coefficients(nmax: int, geom: GeometryDerived) -> tuple[np.ndarray, np.ndarray]:
    """a_n = 1/det m_n^(1), b_n = 1/det m_n^(2) for n = 1..nmax (index 0 unused)."""
    a = np.zeros(nmax + 1)
    b = np.zeros(nmax + 1)
    for n in range(1, nmax + 1):
        a[n] = 1.0 / block_determinant_closed(n, 1, geom)
        b[n] = 1.0 / block_determinant_closed(n, 2, geom)
    return a, b


def h_polynomials(nmax: int, geom: GeometryDerived) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """h_n^(1)(t), h_n^(2)(t) as coefficient arrays in t, n = 1..nmax.

    h_n^(c) = t a^(c)_n - sum_{j=1}^{n-1} t a^(c)_j h_{n-j}^(c'), where the
    remainder starts on the same sphere c' = c after an even block and on the
    other sphere after an odd one.
    """
    coeff = block_coefficients(nmax, geom)
    h: tuple[list, list] = ([np.zeros(1)], [np.zeros(1)])
    for n in range(1, nmax + 1):
        for c in (0, 1):
            poly = np.zeros(n + 1)
            poly[1] = coeff[c][n]
            for j in range(1, n):
                rest = h[c if j % 2 == 0 else 1 - c][n - j]
                poly[2 : 2 + rest.size - 1] -= coeff[c][j] * rest[1:]
            h[c].append(poly)
    return h[0], h[1]


def delta_r_recursion(r: int, geom: GeometryDerived) -> float:
    """Delta_r = -(rho1 rho2)^r r int_0^1 (h_2r^(1) + h_2r^(2))/t dt, integrated exactly."""
    if r < 1:
        raise ValueError("r must be >= 1")
    h1, h2 = h_polynomials(2 * r, geom)
    poly = h1[2 * r] + h2[2 * r]
    integral = math.fsum(poly[k] / k for k in range(1, poly.size))
    return -(geom.rho12**r) * r * integral


def recursion_table(r: int, geom: GeometryDerived) -> dict[int, float]:
    """Per-k contributions -(rho1 rho2)^r r [t^k](h^(1)+h^(2))/k."""
    h1, h2 = h_polynomials(2 * r, geom)
    poly = h1[2 * r] + h2[2 * r]
    return {k: -(geom.rho12**r) * r * poly[k] / k for k in range(1, poly.size)}


def aggregate_csv(r_max: int, geom: GeometryDerived) -> str:
    """Diagnostic table of per-(r, k) aggregates from both routes as CSV text."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "k", "enumeration", "recursion"])
    for r in range(1, r_max + 1):
        enum = enumeration_table(r, geom)
        rec = recursion_table(r, geom)
        for k in range(1, 2 * r + 1):
            writer.writerow([r, k, f"{enum[k]:.17g}", f"{rec[k]:.17g}"])
    return buf.getvalue()


# --- generating functions -----------------------------------------------------


def h_even_first(t, Ae, Be, Ao, Bo):
    """H_e^(1)(x; t) at x = sqrt(rho1 rho2) for given series values."""
    den = (1 + t * Ae) * (1 + t * Be) - t * t * Ao * Bo
    return t * (Ae + t * Ae * Be - t * Ao * Bo) / den


def h_even_sum(t, Ae, Be, Ao, Bo):
    """H_e^(1) + H_e^(2) at x = sqrt(rho1 rho2)."""
    den = (1 + t * Ae) * (1 + t * Be) - t * t * Ao * Bo
    return t * (Ae + Be + 2 * t * Ae * Be - 2 * t * Ao * Bo) / den


def _log_denominator(t, Ae, Be, Ao, Bo):
    return np.log((1 + t * Ae) * (1 + t * Be) - t * t * Ao * Bo)


def generating_function_residual(
    geom: GeometryDerived, ts: Sequence[float] = (0.25, 0.5, 1.0), tol: float = 1e-15
) -> float:
    """Max relative deviation between H_e^(1)+H_e^(2) and t d/dt log(denominator).

    The derivative is taken by the complex-step method, independent of the
    algebraic form of the numerator.
    """
    ms = monopole_series(geom, tol)
    Ae, Be, Ao = ms.Ae.value, ms.Be.value, ms.Ao.value
    h = 1e-30
    worst = 0.0
    for t in ts:
        deriv = np.imag(_log_denominator(complex(t, h), Ae, Be, Ao, Ao)) / h
        lhs = h_even_sum(t, Ae, Be, Ao, Ao)
        worst = max(worst, abs(lhs - t * deriv) / max(abs(lhs), 1e-300))
    return worst


def generating_function_check(geom: GeometryDerived, tol: float = 1e-12) -> bool:
    return generating_function_residual(geom) <= tol


def rational_block_det(n: int, start_color: int, rho1: Fraction, rho2: Fraction) -> Fraction:
    """Exact continuant determinant for rational rho1, rho2."""
    rho = (rho1, rho2) if start_color == 1 else (rho2, rho1)
    d_prev, d = Fraction(1), Fraction(1)
    for k in range(1, n):
        d_prev, d = d, d - rho[(k - 1) % 2] ** 2 * d_prev
    return d
