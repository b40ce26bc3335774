"""Pearson correlation across metric columns with exact two-sided p-values.

The p-value uses the exact Student-t distribution with n-2 degrees of
freedom, evaluated through the regularized incomplete beta function
(continued fraction, Lentz's algorithm). With only a handful of systems per
comparison (n around 10), the normal approximation is visibly wrong, so the
exact CDF is not optional here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from cgecscore.errors import DataError


class ConstantInputError(ValueError):
    """Correlation against a constant vector is undefined."""


def _center(values: Sequence[float]) -> tuple[list[float], float]:
    mean = math.fsum(values) / len(values)
    return [v - mean for v in values], mean


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient, clamped to [-1, 1]."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    dx, _ = _center(x)
    dy, _ = _center(y)
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0.0:
        raise ConstantInputError("first input is constant; correlation undefined")
    if syy == 0.0:
        raise ConstantInputError("second input is constant; correlation undefined")
    # exactly proportional data must give exactly +/-1, not 1 minus an ulp
    if dx == dy:
        return 1.0
    if all(a == -b for a, b in zip(dx, dy)):
        return -1.0
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    r = sxy / (math.sqrt(sxx) * math.sqrt(syy))
    return max(-1.0, min(1.0, r))


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz)."""
    max_iterations = 300
    eps = 3e-16
    fpmin = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iterations + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}"
    )


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) to near machine precision for a, b > 0 and x in [0, 1]."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("shape parameters must be positive")
    if x < 0.0 or x > 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # continued fraction converges fast on one side of the mean; mirror otherwise
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def two_sided_p_from_t(t: float, df: int) -> float:
    """Two-sided tail probability of Student's t with df degrees of freedom."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    x = df / (df + t * t)
    p = regularized_incomplete_beta(df / 2.0, 0.5, x)
    return max(0.0, min(1.0, p))


def two_sided_p(r: float, n: int) -> float:
    """Two-sided p-value for a sample correlation r over n paired samples.

    Tests the no-correlation null via t = r * sqrt((n-2) / (1-r^2)) with
    n-2 degrees of freedom. |r| = 1 returns exactly 0.
    """
    if n < 3:
        raise ValueError(f"need at least 3 samples for a p-value, got {n}")
    if abs(r) > 1.0 + 1e-12:
        raise ValueError(f"|r| must be <= 1, got {r}")
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return 0.0
    df = n - 2
    t = r * math.sqrt(df / (1.0 - r * r))
    return two_sided_p_from_t(t, df)


@dataclass(frozen=True)
class MetricTable:
    """Named metric columns over a shared list of systems (rows)."""

    system_names: tuple[str, ...]
    columns: Mapping[str, tuple[float, ...]]

    def __post_init__(self):
        n = len(self.system_names)
        for name, values in self.columns.items():
            if len(values) != n:
                raise ValueError(
                    f"column {name!r} has {len(values)} values for {n} systems"
                )

    @property
    def num_systems(self) -> int:
        return len(self.system_names)

    @classmethod
    def from_tsv(cls, text: str, origin: str = "<table>") -> "MetricTable":
        """Parse a TSV metric table: header row, first column system names."""
        lines = [line for line in text.splitlines() if line.strip()]
        if len(lines) < 2:
            raise DataError(f"{origin}: need a header row and at least one data row")
        header = lines[0].split("\t")
        if len(header) < 2:
            raise DataError(f"{origin}:1: header must name at least one metric column")
        column_names = [h.strip() for h in header[1:]]
        if len(set(column_names)) != len(column_names):
            raise DataError(f"{origin}:1: duplicate column names in header")
        systems = []
        values: dict[str, list[float]] = {name: [] for name in column_names}
        for lineno, line in enumerate(lines[1:], 2):
            fields = line.split("\t")
            if len(fields) != len(header):
                raise DataError(
                    f"{origin}:{lineno}: expected {len(header)} fields, got {len(fields)}"
                )
            systems.append(fields[0].strip())
            for name, raw in zip(column_names, fields[1:]):
                try:
                    values[name].append(float(raw))
                except ValueError as exc:
                    raise DataError(
                        f"{origin}:{lineno}: column {name!r}: not a number: {raw!r}"
                    ) from exc
        return cls(
            system_names=tuple(systems),
            columns={name: tuple(vals) for name, vals in values.items()},
        )


@dataclass(frozen=True)
class PairCorrelation:
    a: str
    b: str
    r: float
    p: float


@dataclass(frozen=True)
class CorrelationMatrix:
    columns: tuple[str, ...]
    num_systems: int
    pairs: tuple[PairCorrelation, ...]

    def get(self, a: str, b: str) -> PairCorrelation:
        for pair in self.pairs:
            if {pair.a, pair.b} == {a, b}:
                return pair
        raise KeyError(f"no pair ({a}, {b})")


def correlation_matrix(
    table: MetricTable, columns: Sequence[str] | None = None
) -> CorrelationMatrix:
    """r and p for every unordered column pair, in declaration order."""
    if columns is None:
        selected = list(table.columns.keys())
    else:
        unknown = [c for c in columns if c not in table.columns]
        if unknown:
            raise ValueError(
                f"unknown column(s) {unknown!r}; table has {list(table.columns)!r}"
            )
        if len(set(columns)) != len(columns):
            raise ValueError(f"duplicate column selection: {list(columns)!r}")
        selected = list(columns)
    if len(selected) < 2:
        raise ValueError("need at least 2 columns to correlate")
    n = table.num_systems
    if n < 3:
        raise ValueError(f"need at least 3 systems, got {n}")
    for name in selected:
        values = table.columns[name]
        if all(v == values[0] for v in values):
            raise ConstantInputError(f"column {name!r} is constant; correlation undefined")
    pairs = []
    for i, a in enumerate(selected):
        for b in selected[i + 1 :]:
            r = pearson_r(table.columns[a], table.columns[b])
            pairs.append(PairCorrelation(a=a, b=b, r=r, p=two_sided_p(r, n)))
    return CorrelationMatrix(
        columns=tuple(selected), num_systems=n, pairs=tuple(pairs)
    )
