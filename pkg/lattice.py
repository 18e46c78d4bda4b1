"""
Integer points of a box cut by one thin linear form

The region |x_i| <= b_i, |x_0 + x·α| <= 1/K is scaled into a ball, embedded
as a lattice whose basis is LLL-reduced, and every lattice point of the ball
is listed by Fincke-Pohst enumeration. Callers re-check the candidates with
certified arithmetic.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from core import IntVector, RealVector
from utils import SearchBudgetExceeded, ValidationError

logger = logging.getLogger(__name__)

BOX_SCALE = 1 << 16
DEFAULT_NODE_BUDGET = 2_000_000
LLL_DELTA = QQ(3, 4)


@dataclass(frozen=True)
class BoxPoints:
    """Candidates (x_0, x) inside the integer box, unnormalized"""

    points: Tuple[Tuple[int, IntVector], ...]
    nodes: int


def form_enclosure(alpha: RealVector, x0: int, x: IntVector) -> Tuple[Fraction, Fraction]:
    """Enclosure of x_0 + x·α from the coordinate enclosures"""
    lower = Fraction(x0)
    upper = Fraction(x0)
    for c, v in zip(alpha.coords, x):
        if v >= 0:
            lower += v * c.lower
            upper += v * c.upper
        else:
            lower += v * c.upper
            upper += v * c.lower
    return lower, upper


def _gram_schmidt(rows: List[List[int]]) -> Tuple[List[Fraction], List[List[Fraction]]]:
    d = len(rows)
    stars: List[List[Fraction]] = []
    norms: List[Fraction] = []
    mu = [[Fraction(0)] * d for _ in range(d)]
    for i, row in enumerate(rows):
        v = [Fraction(c) for c in row]
        for j in range(i):
            mu[i][j] = sum(Fraction(a) * b for a, b in zip(row, stars[j])) / norms[j]
            v = [a - mu[i][j] * b for a, b in zip(v, stars[j])]
        stars.append(v)
        norms.append(sum(a * a for a in v))
    return norms, mu


def fincke_pohst(rows: List[List[int]], radius_sq: Fraction, budget: int):
    """
    Coefficient vectors y != 0 with ||Σ y_i rows_i||² <= radius_sq

    Returns:
        Tuple of the list of coefficient vectors and the number of visited nodes

    Raises:
        SearchBudgetExceeded: If more than budget nodes are visited
    """
    d = len(rows)
    norms, mu = _gram_schmidt(rows)
    found: List[Tuple[int, ...]] = []
    y = [0] * d
    nodes = 0

    def descend(i: int, partial: Fraction) -> None:
        nonlocal nodes
        center = sum((mu[j][i] * y[j] for j in range(i + 1, d)), Fraction(0))
        half = math.sqrt(float((radius_sq - partial) / norms[i]))
        lo = math.floor(float(-center) - half) - 1
        hi = math.ceil(float(-center) + half) + 1
        for value in range(lo, hi + 1):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"Enumeration exceeded {budget} nodes")
            shifted = value + center
            total = partial + norms[i] * shifted * shifted
            if total > radius_sq:
                continue
            y[i] = value
            if i == 0:
                if any(y):
                    found.append(tuple(y))
            else:
                descend(i - 1, total)
        y[i] = 0

    descend(d - 1, Fraction(0))
    return found, nodes


def box_points(
    alpha: RealVector,
    bounds: Sequence[int],
    inv_eps: int,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> BoxPoints:
    """
    Every nonzero (x_0, x) with |x_i| <= bounds[i] and |x_0 + x·α| <= 1/inv_eps

    The list may also hold box points slightly outside the form constraint;
    none inside it is missed.

    Raises:
        ValidationError: If the bounds do not match alpha or are not positive
        SearchBudgetExceeded: If the enumeration visits more than node_budget nodes
    """
    n = alpha.n
    if len(bounds) != n:
        raise ValidationError(f"Need {n} coordinate bounds, got {len(bounds)}")
    if any(b < 1 for b in bounds) or inv_eps < 1:
        raise ValidationError("Box bounds and inv_eps must be positive")
    R = math.lcm(*bounds) * BOX_SCALE
    T = R * inv_eps
    weights = [R // b for b in bounds]
    bits = max(alpha.precision_bits, T.bit_length() + 16)
    alpha = alpha.at(bits)

    form_cols = [round(T * c.midpoint) for c in alpha.coords]
    slack = Fraction(1)
    for b, col, c in zip(bounds, form_cols, alpha.coords):
        slack += b * (abs(col - T * c.midpoint) + T * c.width)
    radius_sq = n * Fraction(R) ** 2 + (2 * R + slack) ** 2

    rows = []
    for i in range(n):
        row = [0] * (n + 1)
        row[i] = weights[i]
        row[n] = form_cols[i]
        rows.append(row)
    rows.append([0] * n + [T])

    reduced = DomainMatrix([[ZZ(v) for v in row] for row in rows], (n + 1, n + 1), ZZ).lll(
        delta=LLL_DELTA
    )
    basis = [[int(v) for v in row] for row in reduced.to_list()]
    logger.debug("Reduced box lattice for bounds=%s, inv_eps=%d", list(bounds), inv_eps)

    coefficients, nodes = fincke_pohst(basis, radius_sq, node_budget)
    points = []
    for y in coefficients:
        point = [sum(y[k] * basis[k][col] for k in range(n + 1)) for col in range(n + 1)]
        x = tuple(point[i] // weights[i] for i in range(n))
        rest = point[n] - sum(v * t for v, t in zip(x, form_cols))
        if any(abs(v) > b for v, b in zip(x, bounds)):
            continue
        points.append((rest // T, x))
    return BoxPoints(tuple(points), nodes)
