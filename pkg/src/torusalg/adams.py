"""E2-page engine, charts and the connectivity calculus.

``Ext^{s,t}(M, N)`` is the cohomology of ``Hom(M, J^*)`` for an injective
resolution ``J^*`` of ``N``.  Every term is a finite sum of
``Hom(M, I(H)[n])``, whose degree ``t`` part is ``(P_{c+n-t})^*`` with
``P`` the component of ``M`` at ``H``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .cells import NamedObject, render_object
from .lattice import contains, is_cotoral, meet
from .linalg import matmul, rank, zeros
from .resolve import resolution_of

INF = math.inf


class FalsificationError(AssertionError):
    """A proven vanishing or bound failed on computed data."""


class DifferentialError(RuntimeError):
    pass


@dataclass
class E2Chart:
    rank: int
    window: tuple
    srange: tuple
    entries: dict = field(default_factory=dict)
    source: str = ""
    target: str = ""
    exact: bool = True
    truncated_rows: list = field(default_factory=list)

    def get(self, s, t):
        return self.entries.get((s, t), 0)

    def column_total(self, n, smax=None):
        return sum(v for (s, t), v in self.entries.items() if t - s == n and (smax is None or s <= smax))

    @property
    def flags(self):
        return {"exact": self.exact, "truncated": not self.exact}

    def to_json(self):
        return {
            "schema": 1,
            "rank": self.rank,
            "window": list(self.window),
            "srange": list(self.srange),
            "source": self.source,
            "target": self.target,
            "flags": self.flags,
            "truncated_rows": list(self.truncated_rows),
            "entries": [{"s": s, "t": t, "dim": v} for (s, t), v in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, data):
        if data.get("schema") != 1:
            raise ValueError(f"unsupported chart schema {data.get('schema')!r}")
        try:
            return cls(data["rank"], tuple(data["window"]), tuple(data["srange"]),
                       {(e["s"], e["t"]): e["dim"] for e in data["entries"]},
                       data.get("source", ""), data.get("target", ""), data["flags"]["exact"],
                       list(data.get("truncated_rows", [])))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed chart: {exc}") from None

    def __eq__(self, other):
        return isinstance(other, E2Chart) and self.to_json() == other.to_json()


def _name(x):
    return render_object(x) if isinstance(x, NamedObject) else getattr(x, "name", repr(x))


def _realize(x):
    return x.realize() if isinstance(x, NamedObject) else x


def _t(m):
    return [list(r) for r in zip(*m)]


def _add_block(out, blk, r0, c0, scale=1):
    for r, row in enumerate(blk):
        for c, x in enumerate(row):
            if x:
                out[r0 + r][c0 + c] += scale * x


class HomComplex:
    """``Hom(M, J^*)`` in a fixed internal degree ``t``."""

    def __init__(self, source, inst):
        self.m, self.inst = source, inst
        self._comp = {}

    def component(self, key):
        if key not in self._comp:
            self._comp[key] = self.m.component(key)
        return self._comp[key]

    def dims(self, s, t):
        out = []
        for x in self.inst.stages[s]:
            p = self.component(x.key)
            out.append(p.dim(x.top - t) if p is not None else 0)
        return out

    def differential(self, s, t):
        src, tgt = self.inst.stages[s], self.inst.stages[s + 1]
        ds, dt = self.dims(s, t), self.dims(s + 1, t)
        out = zeros(sum(dt), sum(ds))
        co = [sum(ds[:i]) for i in range(len(ds))]
        ro = [sum(dt[:j]) for j in range(len(dt))]
        for (s0, i, j), (kind, data) in self.inst.comps.items():
            if s0 != s or not ds[i] or not dt[j]:
                continue
            x, y = src[i], tgt[j]
            if kind == "poly":
                p = self.component(x.key)
                blk = _t(p.act_elem(data, y.top - t))
                _add_block(out, blk, ro[j], co[i])
            elif not self.m.residue_null:
                rho = self.m.residue(y.key, x.key, y.top - t)
                _add_block(out, _t(rho), ro[j], co[i], data)
        return out, sum(ds), sum(dt)

    def cohomology(self, t, check=True):
        n = len(self.inst.stages)
        sizes = [sum(self.dims(s, t)) for s in range(n)]
        mats = [self.differential(s, t) for s in range(n - 1)]
        if check:
            for s in range(n - 2):
                a, b = mats[s], mats[s + 1]
                if a[1] and b[2] and a[2]:
                    prod = matmul(b[0], a[0])
                    if any(any(r) for r in prod):
                        raise DifferentialError(f"d^2 != 0 at stage {s}, degree {t}")
        ranks = [rank(m, nc) if nr and nc else 0 for m, nc, nr in mats] + [0]
        return [sizes[s] - ranks[s] - (ranks[s - 1] if s else 0) for s in range(n)]


def ext(src, tgt, window=(-10, 10), universe=None, check=True) -> E2Chart:
    """``Ext^{s,t}(src, tgt)`` for ``t`` in ``window`` (inclusive)."""
    m = _realize(src)
    res = resolution_of(tgt, window)
    inst = res.instantiate(m, universe)
    hc = HomComplex(m, inst)
    n = len(inst.stages)
    entries = {}
    for t in range(window[0], window[1] + 1):
        for s, v in enumerate(hc.cohomology(t, check)):
            if v:
                entries[(s, t)] = v
    trunc = inst.truncated_rows(m.residue_null, max(n - 1, 0))
    return E2Chart(m.rank, tuple(window), (0, max(n - 1, 0)), entries, _name(src), _name(tgt),
                   not trunc, trunc)


# -- 0-line ---------------------------------------------------------------------------

def hom0(k, l):
    return 1 if is_cotoral(k, l) else 0


def hom0_table(pairs, cross_check=False, window=(-4, 4)):
    """``{(K, L): dim}``; with ``cross_check`` the value is paired with the chart's ``(0,0)`` entry."""
    from .cells import basic_cell
    out = {}
    for k, l in pairs:
        v = hom0(k, l)
        if cross_check:
            chart = ext(basic_cell(k), basic_cell(l), window)
            out[(k, l)] = (v, chart.get(0, 0))
        else:
            out[(k, l)] = v
    return out


# -- vanishing line ------------------------------------------------------------------

def vanishing_violations(chart):
    return sorted((s, t) for (s, t), v in chart.entries.items() if v and t - s < s)


def vanishing_check(chart, strict=True):
    bad = vanishing_violations(chart)
    if bad and strict:
        raise FalsificationError(f"nonzero entries below the line t - s < s: {bad}")
    return not bad


def row_bound_check(chart):
    return all(s <= 2 * chart.rank for (s, _t) in chart.entries)


# -- connectivity ------------------------------------------------------------------------

@dataclass
class ConnectivityRecord:
    descriptor: str
    values: dict = field(default_factory=dict)
    slope_one: bool = True
    bounds: dict = field(default_factory=dict)

    def plus_one(self, h):
        v = self.values[h]
        return v if v == INF else v + 1


class UnsupportedDescriptor(ValueError):
    pass


def algconn_value(descriptor, h):
    """``algconn_H`` of a named object as an integer or ``inf``.

    ``E<K>``: ``dim H/K - 1`` when ``K <= H``, else infinite.  For ``EG/K_+``
    and ``G/K_+`` the value is ``dim H - dim(H meet K) - 1`` in all cases; this
    reduces to ``dim H/K - 1`` when ``K <= H``.  Basic cells use the natural cell
    value, which is a lower bound when ``K`` or ``H`` is disconnected.
    """
    tag = descriptor.tag
    k = descriptor.subgroup
    if tag == "e_bracket":
        return h.dim - k.dim - 1 if contains(h, k) else INF
    if tag in ("e_universal", "natural_cell", "basic_cell"):
        return h.dim - meet(h, k).dim - 1
    raise UnsupportedDescriptor(f"no connectivity formula for {tag}")


def algconn(descriptor, h):
    rec = ConnectivityRecord(_name(descriptor))
    rec.values[h] = algconn_value(descriptor, h)
    rec.bounds[h] = descriptor.tag == "basic_cell" and not (h.is_connected and descriptor.subgroup.is_connected)
    return rec


class LadderError(ValueError):
    def __init__(self, stage, expected, got):
        super().__init__(f"stage {stage} breaks the c + 2i ladder: expected {expected}, got {got}")
        self.stage, self.expected, self.got = stage, expected, got


def propagate_connectivity(shape, h):
    """Connectivity of ``X`` from ``X -> Y_0 -> Y_1 -> ...`` with ``Y_i`` given as ``[(descriptor, shift)]``.

    Stage ``i`` must have connectivity ``c + 2i`` where ``c`` is that of the first
    finite stage ``i_0``; the answer is ``c + i_0``.  Stages before ``i_0`` are
    invisible at ``H`` and each one lowers ``t - s`` by one through dimension shifting.
    """
    vals = []
    for stage in shape:
        vs = [algconn_value(d, h) + n for d, n in stage]
        vals.append(min(vs) if vs else INF)
    finite = [i for i, v in enumerate(vals) if v != INF]
    rec = ConnectivityRecord("resolution")
    if not finite:
        rec.values[h] = INF
        return rec
    i0 = finite[0]
    c = vals[i0] - 2 * i0
    for i in range(i0, len(vals)):
        if vals[i] != INF and vals[i] != c + 2 * i:
            raise LadderError(i, c + 2 * i, vals[i])
    rec.values[h] = vals[i0] - i0
    return rec


def connectivity_from_chart(chart):
    """``algconn`` read off an Ext chart against a basic cell (infinite if empty)."""
    if not chart.entries:
        return INF
    return min(t - s for (s, t) in chart.entries) - 1


def shape_of(resolution, universe=None):
    """The ``(descriptor, shift)`` stages of an engine resolution, for :func:`propagate_connectivity`."""
    from .cells import e_bracket
    inst = resolution.instantiate(None, universe)
    out = []
    for st in inst.stages:
        out.append([(e_bracket(x.key), x.shift) for x in st])
    return out


def koszul_shape(k):
    """``Sigma^{2i} EG/K_+`` with multiplicity ``binom(d, i)``."""
    from math import comb
    from .cells import e_universal
    d = k.codim
    return [[(e_universal(k), 2 * i)] * comb(d, i) for i in range(d + 1)]


# -- emission ------------------------------------------------------------------------------

def render_ascii(chart):
    tlo, thi = chart.window
    slo, shi = chart.srange
    nlo, nhi = tlo - shi, thi - slo
    head = f"Ext^(s,t)  {chart.source} -> {chart.target}  (columns n = t - s)"
    if chart.truncated_rows:
        head += f"  [rows {chart.truncated_rows[0]}+ truncated]"
    lines = [head]
    for s in range(shi, slo - 1, -1):
        cells = []
        for n in range(nlo, nhi + 1):
            v = chart.get(s, n + s)
            cells.append(f"{v:>3}" if v else "  .")
        lines.append(f"{s:>3} |" + "".join(cells))
    lines.append("    +" + "---" * (nhi - nlo + 1))
    lines.append("     " + "".join(f"{n:>3}" for n in range(nlo, nhi + 1)))
    return "\n".join(lines) + "\n"


def render_svg(chart):
    tlo, thi = chart.window
    slo, shi = chart.srange
    nlo, nhi = tlo - shi, thi - slo
    cw, ch = 24, 24
    w, hgt = (nhi - nlo + 3) * cw, (shi - slo + 3) * ch
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{hgt}">']
    for n in range(nlo, nhi + 1):
        x = (n - nlo + 1) * cw
        parts.append(f'<text x="{x}" y="{hgt - 4}" font-size="10">{n}</text>')
    for s in range(slo, shi + 1):
        y = hgt - (s - slo + 2) * ch
        parts.append(f'<text x="2" y="{y}" font-size="10">{s}</text>')
    for (s, t), v in sorted(chart.entries.items()):
        x = (t - s - nlo + 1) * cw + cw // 2
        y = hgt - (s - slo + 2) * ch - 4
        parts.append(f'<circle cx="{x}" cy="{y}" r="4"/>')
        if v > 1:
            parts.append(f'<text x="{x + 5}" y="{y - 5}" font-size="9">{v}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_chart(chart, fmt="json", path=None):
    if fmt == "json":
        text = json.dumps(chart.to_json(), indent=2, sort_keys=True) + "\n"
    elif fmt == "ascii":
        text = render_ascii(chart)
    elif fmt == "svg":
        text = render_svg(chart)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def load_chart(text_or_path):
    text = text_or_path
    if not text.lstrip().startswith("{"):
        with open(text_or_path) as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed chart: {exc}") from None
    return E2Chart.from_json(data)
