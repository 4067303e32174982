"""Injective resolutions by standard injectives ``I(K~)[n]``.

A resolution is stored symbolically: stage ``s`` is a list of summands
``I(H)[n]`` (possibly infinite families, cut down to a finite universe) and the
differential has two kinds of component between summands:

* ``("poly", f)``: both summands at the same key; multiplication by the ring
  element ``f`` on the injective hull.
* ``("res", sign)``: from ``I(H)[n]`` to ``I(H')[n+1]`` with ``H'`` of
  codimension one in ``H``; the principal-part map, which on Hom out of an
  object is ``sign`` times the residue of its basing data.

:meth:`Resolution.instantiate` produces the concrete finite stages that a
given source object can see.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from . import graded as gr
from .cells import NamedObject, render_object
from .lattice import (Subgroup, contains, fixed_dimension, identity_component, join, lattice_coordinates,
                      subgroups_between)
from .linalg import rank, zeros
from .ofmod import TorsionFamily
from .sheaf import (BasicCell, ExplicitObject, FKObject, InjectiveAggregate, StandardInjective, SumObject,
                    TwistObject, UnsupportedQuery, subgroups_of_dim)

log = logging.getLogger(__name__)


class ResolutionError(RuntimeError):
    """A resolution failed to terminate within the proven bound."""


@dataclass(frozen=True)
class Summand:
    key: Subgroup
    shift: int
    label: tuple = ()

    @property
    def top(self):
        return self.key.codim + self.shift

    def injective(self):
        return StandardInjective(self.key, self.shift)


@dataclass
class Instance:
    """Finite stages and differential components seen by one source."""

    stages: list
    comps: dict
    inexact_from: int | None = None  # first codimension-family index cut by the universe

    def truncated_rows(self, residue_null, smax):
        if self.inexact_from is None:
            return []
        start = self.inexact_from if residue_null else max(self.inexact_from - 1, 0)
        return list(range(start, smax + 1))


def _merge(instances):
    n = max((len(i.stages) for i in instances), default=0)
    stages = [[] for _ in range(n)]
    comps = {}
    inexact = None
    for inst in instances:
        offs = [len(stages[s]) for s in range(len(inst.stages))]
        for s, st in enumerate(inst.stages):
            stages[s].extend(st)
        for (s, i, j), c in inst.comps.items():
            comps[(s, i + offs[s], j + offs[s + 1])] = c
        if inst.inexact_from is not None:
            inexact = inst.inexact_from if inexact is None else min(inexact, inst.inexact_from)
    return Instance(stages, comps, inexact)


class Resolution:
    """Base class; ``kind`` names the construction."""

    kind = "abstract"

    def __init__(self, target, rank_):
        self.target = target
        self.rank = rank_

    def instantiate(self, source=None, universe=None) -> Instance:
        raise NotImplementedError

    @property
    def length(self):
        """Index of the last stage that can be nonzero."""
        raise NotImplementedError

    def stages(self, universe=None):
        """Stages as injective aggregates (finite summands plus symbolic families)."""
        inst = self.instantiate(None, universe)
        return [InjectiveAggregate([s.injective() for s in st]) for st in inst.stages]

    def to_json(self, universe=None):
        inst = self.instantiate(None, universe)
        return {
            "schema": 1,
            "kind": self.kind,
            "target": _target_name(self.target),
            "length": self.length,
            "stages": [[{"subgroup": s.key.to_json(), "shift": s.shift} for s in st] for st in inst.stages],
            "ranks": [len(st) for st in inst.stages],
            "components": len(inst.comps),
            "exact": inst.inexact_from is None,
        }


def _target_name(t):
    if isinstance(t, NamedObject):
        return render_object(t)
    return getattr(t, "name", repr(t))


# -- cells and universal spaces ----------------------------------------------------------

def _keys(ambient, dim, source, universe, pred=None):
    if source is None:
        hs, exact = subgroups_of_dim(ambient, dim, universe)
    else:
        hs, exact = source.keys_in(ambient, dim, universe)
    if pred is not None:
        hs = [h for h in hs if pred(h)]
    return sorted(hs), exact


class CellResolution(Resolution):
    """Resolution of the basic cell at ``L``: Koszul directions times codimension directions.

    Stage ``s`` collects ``I(H)[2i + j]`` for ``i + j = s``, a subset ``S`` of the
    ``d = codim L`` Koszul directions of size ``i``, and ``H <= L`` of dimension
    ``dim L - j`` with ``H L_1 = L``.
    """

    kind = "cell"

    def __init__(self, l_group):
        super().__init__(NamedObject("basic_cell", l_group.rank, subgroup=l_group), l_group.rank)
        self.l_group = l_group
        self.l1 = identity_component(l_group)

    @property
    def length(self):
        return self.l_group.codim + self.l_group.dim

    def instantiate(self, source=None, universe=None):
        L, d = self.l_group, self.l_group.codim
        fams, inexact = [], None
        for j in range(L.dim + 1):
            hs, exact = _keys(L, L.dim - j, source, universe, lambda h: join(h, self.l1) == L)
            if not exact and inexact is None:
                inexact = j
            fams.append(hs)
        subsets = [list(combinations(range(d), i)) for i in range(d + 1)]
        stages = [[] for _ in range(d + L.dim + 1)]
        index = {}
        for j, hs in enumerate(fams):
            for i in range(d + 1):
                for S in subsets[i]:
                    for h in hs:
                        index[(S, h)] = (i + j, len(stages[i + j]))
                        stages[i + j].append(Summand(h, 2 * i + j, (S, j)))
        forms = {}
        comps = {}
        for (S, h), (s, a_idx) in index.items():
            if h not in forms:
                forms[h] = lattice_coordinates(h, [list(v) for v in L.ann]) if L.ann else []
            for a in range(d):
                if a in S:
                    continue
                T = tuple(sorted(S + (a,)))
                sign = (-1) ** sum(1 for b in S if b < a)
                f = gr.linear_form([sign * x for x in forms[h][a]])
                comps[(s, a_idx, index[(T, h)][1])] = ("poly", f)
        for (S, h), (s, a_idx) in index.items():
            for (S2, h2), (s2, b_idx) in index.items():
                if S2 == S and s2 == s + 1 and h2.dim == h.dim - 1 and contains(h, h2) \
                        and join(h2, identity_component(h)) == h:
                    comps[(s, a_idx, b_idx)] = ("res", (-1) ** len(S))
        return Instance([st for st in stages], comps, inexact)


class CodimResolution(Resolution):
    """Resolution of ``E[<= K]_+``: stage ``j`` is ``I(H)[j]`` over ``H <= K`` of codimension ``j`` in ``K``."""

    kind = "codim"

    def __init__(self, k_group, universe=None):
        super().__init__(NamedObject("e_universal", k_group.rank, subgroup=k_group), k_group.rank)
        self.k_group = k_group
        self.universe = universe

    @property
    def length(self):
        return self.k_group.dim

    def instantiate(self, source=None, universe=None):
        universe = universe if universe is not None else self.universe
        K = self.k_group
        stages, inexact = [], None
        for j in range(K.dim + 1):
            hs, exact = _keys(K, K.dim - j, source, universe)
            if not exact and inexact is None:
                inexact = j
            stages.append([Summand(h, j, (j,)) for h in hs])
        comps = {}
        for s in range(len(stages) - 1):
            for a, x in enumerate(stages[s]):
                for b, y in enumerate(stages[s + 1]):
                    if contains(x.key, y.key) and join(y.key, identity_component(x.key)) == x.key:
                        comps[(s, a, b)] = ("res", 1)
        return Instance(stages, comps, inexact)

    def certify(self, source, universe=None):
        """Raise :class:`~torusalg.sheaf.UniverseInsufficient` if ``source`` sees keys outside the universe."""
        from .sheaf import UniverseInsufficient
        universe = universe if universe is not None else self.universe
        uset = set(universe or [])
        K = self.k_group
        for j in range(K.dim + 1):
            hs, exact = source.keys_in(K, K.dim - j)
            missing = [h for h in hs if h not in uset and not exact]
            if missing:
                raise UniverseInsufficient(f"universe insufficient: missing {missing[0]}")
            if not exact:
                fk = source.finite_keys()
                if fk is None:
                    raise UniverseInsufficient(
                        f"universe insufficient: {source.name} has no finite support certificate at stage {j}")


class InjectiveTarget(Resolution):
    kind = "injective"

    def __init__(self, summand, target=None):
        super().__init__(target or summand.injective().realize(), summand.key.rank)
        self.summand = summand

    @property
    def length(self):
        return 0

    def instantiate(self, source=None, universe=None):
        return Instance([[self.summand]], {})


class TorsionResolution(Resolution):
    """``f_K`` of the Matlis dual of a minimal free resolution of each ``V(K~)^``."""

    kind = "torsion"

    def __init__(self, obj):
        super().__init__(obj, obj.rank)
        self.obj = obj
        self.per_key = {}
        for key in obj.family.keys():
            v = obj.family.component(key)
            w = gr.graded_dual(v)
            self.per_key[key] = (v, gr.free_resolution(w))

    @property
    def length(self):
        return max((len(fr.terms) - 1 for _, fr in self.per_key.values()), default=0)

    def key_instance(self, key):
        v, fr = self.per_key[key]
        c = key.codim
        stages = [[Summand(key, -g - c, (s, n)) for n, g in enumerate(t.gens)] for s, t in enumerate(fr.terms)]
        comps = {}
        for s, diff in enumerate(fr.differentials):
            for j, vec in enumerate(diff):
                for kk, a in enumerate(vec):
                    if a:
                        comps[(s, kk, j)] = ("poly", a)
        return Instance(stages, comps)

    def instantiate(self, source=None, universe=None):
        return _merge([self.key_instance(k) for k in self.per_key])

    def check_exact(self, window):
        """Degreewise exactness of ``0 -> V -> J^0 -> J^1 -> ...`` at every key on the window."""
        out = True
        for key, (v, _) in self.per_key.items():
            inst = self.key_instance(key)
            cx = SingleKeyComplex(key.codim, inst)
            for t in range(window[0], window[1] + 1):
                h = cx.cohomology(t)
                want = [v.dim(t)] + [0] * (len(h) - 1)
                out = out and h == want
        return out


class SumResolution(Resolution):
    kind = "sum"

    def __init__(self, parts, target):
        super().__init__(target, parts[0].rank)
        self.parts = parts

    @property
    def length(self):
        return max(p.length for p in self.parts)

    def instantiate(self, source=None, universe=None):
        return _merge([p.instantiate(source, universe) for p in self.parts])


class TwistedResolution(Resolution):
    """``S^V`` applied stagewise: ``I(H)[n]`` becomes ``I(H)[n + dim V^H]``."""

    kind = "twist"

    def __init__(self, rep, inner, target):
        super().__init__(target, inner.rank)
        self.rep, self.inner = rep, inner

    @property
    def length(self):
        return self.inner.length

    def instantiate(self, source=None, universe=None):
        if source is not None and not source.residue_null and len(self.rep):
            raise UnsupportedQuery("twisted targets need a source with polynomial basing data")
        inst = self.inner.instantiate(source, universe)
        stages = [[Summand(s.key, s.shift + fixed_dimension(self.rep, s.key), s.label) for s in st]
                  for st in inst.stages]
        return Instance(stages, dict(inst.comps), inst.inexact_from)


# -- single-key complexes ----------------------------------------------------------------

class SingleKeyComplex:
    """A complex of sums of ``Sigma^m H_*(BG/K~)`` at one key; degreewise cohomology."""

    def __init__(self, k, inst):
        self.k, self.inst = k, inst
        self.hull = gr.DualModule(gr.free_module(k))

    def _dims(self, st, t):
        return [self.hull.dim(t - s.top) for s in st]

    def matrix(self, s, t):
        src, tgt = self.inst.stages[s], self.inst.stages[s + 1]
        ds, dt = self._dims(src, t), self._dims(tgt, t)
        out = zeros(sum(dt), sum(ds))
        ro = [sum(dt[:j]) for j in range(len(dt))]
        co = [sum(ds[:i]) for i in range(len(ds))]
        for (s0, i, j), (kind, f) in self.inst.comps.items():
            if s0 != s or kind != "poly":
                continue
            # multiplication by f: H_{t - top_i} -> H_{t - top_i + deg f} = H_{t - top_j}
            blk = self.hull.act_elem(f, t - src[i].top)
            for r, row in enumerate(blk):
                for c, x in enumerate(row):
                    out[ro[j] + r][co[i] + c] += x
        return out, sum(ds), sum(dt)

    def cohomology(self, t):
        n = len(self.inst.stages)
        sizes = [sum(self._dims(st, t)) for st in self.inst.stages]
        ranks = []
        for s in range(n - 1):
            m, nc, nr = self.matrix(s, t)
            ranks.append(rank(m, nc) if nr and nc else 0)
        ranks.append(0)
        return [sizes[s] - ranks[s] - (ranks[s - 1] if s else 0) for s in range(n)]


# -- Koszul resolution of natural cells ----------------------------------------------------

@dataclass
class KoszulResolution:
    """``G/H_+ -> EG/H_+ -> binom(d,1) Sigma^2 EG/H_+ -> ...`` with ``d = dim G/H``."""

    subgroup: Subgroup
    multiplicities: list = field(default_factory=list)
    shifts: list = field(default_factory=list)

    @property
    def length(self):
        return len(self.multiplicities) - 1

    def key_complex(self, key):
        """The top-level component complex at ``key``: ``Sigma^c H_*`` in Koszul pattern."""
        h = self.subgroup
        d = h.codim
        forms = lattice_coordinates(key, [list(v) for v in h.ann]) if h.ann else []
        stages, comps, index = [], {}, {}
        for i in range(d + 1):
            st = []
            for S in combinations(range(d), i):
                index[S] = (i, len(st))
                st.append(Summand(key, 2 * i, S))
            stages.append(st)
        for S, (i, a_idx) in index.items():
            for a in range(d):
                if a in S:
                    continue
                T = tuple(sorted(S + (a,)))
                sign = (-1) ** sum(1 for b in S if b < a)
                comps[(i, a_idx, index[T][1])] = ("poly", gr.linear_form([sign * x for x in forms[a]]))
        return SingleKeyComplex(key.codim, Instance(stages, comps))

    def verify(self, window):
        """Degreewise exactness on ``window`` at every top-level key of the natural cell.

        The expected cohomology is the natural cell's component there: ``Q`` in
        degree ``codim H`` in cohomological degree 0, nothing else.
        """
        ok = True
        for key in subgroups_between(self.subgroup):
            cx = self.key_complex(key)
            for t in range(window[0], window[1] + 1):
                h = cx.cohomology(t)
                want = [1 if t == self.subgroup.codim else 0] + [0] * (len(h) - 1)
                ok = ok and h == want
        return ok


def koszul_resolution(h):
    d = h.codim
    return KoszulResolution(h, [comb(d, i) for i in range(d + 1)], [2 * i for i in range(d + 1)])


def codim_resolution(k_group, universe=None, source=None):
    res = CodimResolution(k_group, universe)
    if source is not None:
        res.certify(source, universe)
    return res


# -- dispatch ----------------------------------------------------------------------------

def resolution_of(target, window=None):
    """A resolution of a named object or a realized object."""
    if isinstance(target, Resolution):
        return target
    if isinstance(target, NamedObject):
        t = target.tag
        if t == "sphere":
            from .lattice import full_torus
            return CellResolution(full_torus(target.rank))
        if t == "basic_cell":
            return CellResolution(target.subgroup)
        if t == "natural_cell":
            parts = [CellResolution(s.subgroup) for s in target.summands()]
            return parts[0] if len(parts) == 1 else SumResolution(parts, target)
        if t == "e_bracket":
            return InjectiveTarget(Summand(target.subgroup, 0), target)
        if t == "e_universal":
            return CodimResolution(target.subgroup)
        if t == "thom_twist":
            return TwistedResolution(target.rep, resolution_of(target.inner), target)
    return injective_resolution(target, window)


def _as_fk(obj):
    if isinstance(obj, ExplicitObject):
        keys = obj.finite_keys()
        from .lattice import trivial_subgroup
        fam = TorsionFamily(trivial_subgroup(obj.rank), {k: obj.component(k) for k in keys})
        return FKObject(fam, name=obj.name)
    return obj


def injective_resolution(obj, window=None, bound=None):
    """Injective resolution of a realized object; raises :class:`ResolutionError` past ``2r`` stages."""
    obj = _as_fk(obj)
    if isinstance(obj, FKObject) and getattr(obj, "injective", None) is not None:
        key, n = obj.injective
        res = InjectiveTarget(Summand(key, n), obj)
    elif isinstance(obj, FKObject):
        res = TorsionResolution(obj)
    elif isinstance(obj, BasicCell):
        res = CellResolution(obj.k_group)
    elif isinstance(obj, SumObject):
        res = SumResolution([injective_resolution(p, window, bound) for p in obj.parts], obj)
    elif isinstance(obj, TwistObject):
        res = TwistedResolution(obj.rep, injective_resolution(obj.inner, window, bound), obj)
    else:
        raise UnsupportedQuery(f"no resolution strategy for {obj!r}")
    limit = 2 * obj.rank if bound is None else bound
    if res.length > limit:
        raise ResolutionError(f"resolution of {obj.name} needs {res.length} stages after the augmentation, "
                              f"bound is {limit}")
    log.debug("resolved %s: length %d", getattr(obj, "name", obj), res.length)
    return res
