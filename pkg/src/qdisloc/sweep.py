"""Parameter sweeps over the closed-form spectrum, with CSV and SVG output."""
from __future__ import annotations

import csv
import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .analytic import energy
from .errors import AllPointsInvalid, BoundConditionViolated, EmptyTable, NoConfinement, QdislocError
from .oracle import RadialGrid, solve_oracle
from .params import QuantumNumbers, ScalarPotential, SystemParams

CSV_HEADER = ("param", "value", "n", "l", "energy_analytic", "energy_oracle", "rel_err", "status")

SYSTEM_FIELDS = {"Q": "Q", "Cm": "Cm", "beta": "beta", "lambda": "lam", "k": "k"}
POTENTIAL_FIELDS = {"C1": "C1", "C2": "C2", "C3": "C3"}
SWEEPABLE = tuple(SYSTEM_FIELDS) + tuple(POTENTIAL_FIELDS)

STATUS_OK = "ok"
STATUS_BOUND = "bound_condition_violated"
STATUS_CONFINEMENT = "no_confinement"
STATUS_ORACLE = "oracle_failed"

# Coarser than the library default; still far below 1e-6 after extrapolation.
VERIFY_GRID = RadialGrid(points=1000, refinement_levels=3)


@dataclass(frozen=True)
class SweepSpec:
    swept: str
    start: float
    stop: float
    steps: int
    levels: tuple
    params: SystemParams
    potential: Optional[ScalarPotential]
    l: int

    def __post_init__(self):
        if self.swept not in SWEEPABLE:
            raise ValueError(f"cannot sweep {self.swept!r}; choose from {', '.join(SWEEPABLE)}")
        if self.swept in POTENTIAL_FIELDS and self.potential is None:
            raise ValueError(f"sweeping {self.swept} needs the scalar potential (case 2)")
        if not self.start < self.stop:
            raise ValueError(f"sweep range must satisfy from < to, got {self.start} .. {self.stop}")
        if self.steps < 2:
            raise ValueError("steps must be >= 2")
        levels = tuple(int(n) for n in self.levels)
        if not levels or min(levels) < 0:
            raise ValueError("levels must be a non-empty list of n >= 0")
        object.__setattr__(self, "levels", levels)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def point(self, value: float) -> tuple[SystemParams, Optional[ScalarPotential]]:
        if self.swept in SYSTEM_FIELDS:
            return dataclasses.replace(self.params, **{SYSTEM_FIELDS[self.swept]: value}), self.potential
        return self.params, dataclasses.replace(self.potential, **{POTENTIAL_FIELDS[self.swept]: value})


@dataclass(frozen=True)
class SweepRow:
    param: str
    value: float
    n: int
    l: int
    energy_analytic: Optional[float]
    energy_oracle: Optional[float]
    rel_err: Optional[float]
    status: str


def _evaluate_point(spec: SweepSpec, value: float, verify: bool, grid: RadialGrid) -> list[SweepRow]:
    p, v = spec.point(value)
    rows = []
    analytic = {}
    status = STATUS_OK
    for n in spec.levels:
        try:
            analytic[n] = energy(p, v, QuantumNumbers(n, spec.l))
        except BoundConditionViolated:
            status = STATUS_BOUND
        except NoConfinement:
            status = STATUS_CONFINEMENT
    oracle = {}
    if verify and status == STATUS_OK:
        try:
            res = solve_oracle(
                p, v, QuantumNumbers(0, spec.l), max(spec.levels) + 1, grid=grid, vectors=False
            )
            oracle = {n: float(res.energies[n]) for n in spec.levels}
        except QdislocError:
            status = STATUS_ORACLE
    for n in spec.levels:
        e = analytic.get(n)
        eo = oracle.get(n)
        rel = abs(eo - e) / abs(e) if (e is not None and eo is not None) else None
        rows.append(SweepRow(spec.swept, float(value), n, spec.l, e, eo, rel, status))
    return rows


def run_sweep(
    spec: SweepSpec,
    verify: bool = False,
    grid: Optional[RadialGrid] = None,
    workers: int = 1,
) -> list[SweepRow]:
    """Evaluate every (value, n) pair of the sweep in sweep order.

    Points failing a physics precondition become status rows rather than
    aborting; with ``verify`` the finite-difference oracle fills the
    oracle and error columns.

    Raises
    ------
    AllPointsInvalid
        If no point of the sweep has a discrete spectrum.
    """
    grid = grid or VERIFY_GRID
    values = spec.values()
    args = [(spec, float(x), verify, grid) for x in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_evaluate_point, *zip(*args)))
    else:
        chunks = [_evaluate_point(*a) for a in args]
    rows = [row for chunk in chunks for row in chunk]
    if all(r.energy_analytic is None for r in rows):
        raise AllPointsInvalid(
            f"no point of the {spec.swept} sweep satisfies the bound and confinement conditions"
        )
    return rows


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def emit_csv(rows: Sequence[SweepRow], path) -> Path:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for r in rows:
                writer.writerow([_fmt(getattr(r, name)) for name in CSV_HEADER])
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc
    return path


def read_csv(path) -> list[SweepRow]:
    def opt(text, cast):
        return None if text == "" else cast(text)

    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            SweepRow(
                rec["param"],
                float(rec["value"]),
                int(rec["n"]),
                int(rec["l"]),
                opt(rec["energy_analytic"], float),
                opt(rec["energy_oracle"], float),
                opt(rec["rel_err"], float),
                rec["status"],
            )
            for rec in reader
        ]


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
_W, _H = 640, 420
_LEFT, _RIGHT, _TOP, _BOTTOM = 80, 110, 30, 60


def level_segments(rows: Sequence[SweepRow]) -> dict[int, list[list[tuple[float, float]]]]:
    """Contiguous runs of valid (value, energy) points per level; gaps split runs."""
    out: dict[int, list[list[tuple[float, float]]]] = {}
    current: dict[int, Optional[list]] = {}
    for r in rows:
        segs = out.setdefault(r.n, [])
        if r.energy_analytic is None:
            current[r.n] = None
            continue
        if current.get(r.n) is None:
            current[r.n] = []
            segs.append(current[r.n])
        current[r.n].append((r.value, r.energy_analytic))
    return out


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def emit_plot(rows: Sequence[SweepRow], path) -> Path:
    """Write an SVG with one polyline per contiguous run of each level.

    Each polyline carries ``data-n`` and ``data-values`` (the exact
    value,energy pairs) next to its pixel ``points``.
    """
    valid = [r for r in rows if r.energy_analytic is not None]
    if not valid:
        raise EmptyTable("nothing to plot: the table has no valid energies")
    xs = [r.value for r in rows]
    ys = [r.energy_analytic for r in valid]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    pad = 0.05 * (y1 - y0) if y1 > y0 else 0.5
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM

    def px(x):
        return _LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        return _TOP + (y1 - y) / (y1 - y0) * ph

    param = escape(rows[0].param)
    l = rows[0].l
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_LEFT}" y="{_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{px(t):.3f}" y1="{_TOP + ph}" x2="{px(t):.3f}" y2="{_TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px(t):.3f}" y="{_TOP + ph + 18}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{_LEFT - 5}" y1="{py(t):.3f}" x2="{_LEFT}" y2="{py(t):.3f}" stroke="black"/>')
        out.append(f'<text x="{_LEFT - 8}" y="{py(t) + 4:.3f}" text-anchor="end">{t:.5g}</text>')
    out.append(f'<text class="xlabel" x="{_LEFT + pw / 2}" y="{_H - 15}" text-anchor="middle">{param}</text>')
    out.append(
        f'<text class="ylabel" x="20" y="{_TOP + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 20 {_TOP + ph / 2})">energy E(n, l={l})</text>'
    )
    for i, (n, segments) in enumerate(sorted(level_segments(rows).items())):
        color = _COLORS[i % len(_COLORS)]
        for seg in segments:
            pts = " ".join(f"{px(x):.3f},{py(y):.3f}" for x, y in seg)
            data = " ".join(f"{x!r},{y!r}" for x, y in seg)
            out.append(
                f'<polyline class="level" data-n="{n}" data-values="{data}" points="{pts}" '
                f'fill="none" stroke="{color}" stroke-width="1.8"/>'
            )
        ly = _TOP + 15 + 18 * i
        out.append(f'<line x1="{_W - _RIGHT + 12}" y1="{ly}" x2="{_W - _RIGHT + 36}" y2="{ly}" stroke="{color}" stroke-width="1.8"/>')
        out.append(f'<text class="legend" x="{_W - _RIGHT + 42}" y="{ly + 4}">n={n}</text>')
    out.append("</svg>")
    path = Path(path)
    try:
        path.write_text("\n".join(out) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write plot to {path}: {exc}") from exc
    return path


def summarize(rows: Sequence[SweepRow]) -> dict:
    errs = [r.rel_err for r in rows if r.rel_err is not None]
    return {
        "rows": len(rows),
        "gaps": sum(1 for r in rows if r.status != STATUS_OK),
        "max_rel_err": max(errs) if errs else None,
    }
