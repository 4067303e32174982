"""Algebraic images of the named spectra: spheres, cells, universal spaces, Thom twists.

A :class:`NamedObject` carries a tag and the data needed to realize it as a
:class:`~torusalg.sheaf.SheafObject`.  Realization is lazy and cached.  The
resolve module reads the tag to choose a resolution.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .lattice import Representation, Subgroup, identity_component, subgroups_between, trivial_subgroup
from .sheaf import (BasicCell, SheafObject, StandardInjective, SumObject, TwistObject, UnsupportedQuery,
                    structure_sheaf as _structure_sheaf)

TAGS = ("sphere", "basic_cell", "natural_cell", "e_bracket", "e_universal", "thom_twist")


@dataclass(frozen=True)
class NamedObject:
    tag: str
    rank: int
    subgroup: Subgroup | None = None
    rep: Representation | None = None
    inner: "NamedObject | None" = None
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, repr=False, hash=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown tag {self.tag!r}")

    def realize(self) -> SheafObject:
        with self._lock:
            if "obj" not in self._cache:
                self._cache["obj"] = _realize(self)
            return self._cache["obj"]

    def summands(self):
        """Basic-cell summands (natural cells only split; everything else is itself)."""
        if self.tag == "natural_cell":
            return [basic_cell(h) for h in subgroups_between(self.subgroup)]
        return [self]

    @property
    def name(self):
        return render_object(self)

    def __repr__(self):
        return f"NamedObject({render_object(self)})"


def _realize(obj):
    if obj.tag == "sphere":
        return _structure_sheaf(obj.rank)
    if obj.tag == "basic_cell":
        return BasicCell(obj.subgroup, name=render_object(obj))
    if obj.tag == "natural_cell":
        parts = [s.realize() for s in obj.summands()]
        return parts[0] if len(parts) == 1 else SumObject(parts, name=render_object(obj))
    if obj.tag == "e_bracket":
        return StandardInjective(obj.subgroup, 0).realize()
    if obj.tag == "e_universal":
        return EUniversalObject(obj.subgroup)
    if obj.tag == "thom_twist":
        inner = obj.inner.realize()
        if not obj.rep.chars:
            return inner
        return TwistObject(obj.rep, inner, name=render_object(obj))
    raise ValueError(obj.tag)


class EUniversalObject(SheafObject):
    """The image of ``E[<= K]_+``: its top level is the sum of ``I(H)`` over ``H <= K`` with ``H_1 = K_1``.

    Only the top level is realized; lower levels raise :class:`UnsupportedQuery`.
    The case ``K = G`` is the structure sheaf and is delegated to it.
    """

    def __init__(self, k_group):
        super().__init__(k_group.rank, f"EU[{k_group}]")
        self.k_group = k_group
        self.top = identity_component(k_group)
        self._o = _structure_sheaf(k_group.rank) if k_group.codim == 0 else None

    def _component(self, key):
        if self._o is not None:
            return self._o.component(key)
        from .lattice import contains
        if not contains(self.k_group, key):
            return None
        if identity_component(key) == self.top:
            return StandardInjective(key, 0).module()
        raise UnsupportedQuery(f"{self.name} is realized at its top level only")

    def key_ambients(self):
        return [self.k_group]

    def finite_keys(self):
        if self._o is not None:
            return self._o.finite_keys()
        if self.k_group.dim == 0:
            return subgroups_between(self.k_group)
        return None


def structure_sheaf(rank=1):
    return _structure_sheaf(rank)


def sphere(rank):
    return NamedObject("sphere", rank)


def basic_cell(h):
    return NamedObject("basic_cell", h.rank, subgroup=h)


def natural_cell(k):
    """The basic-cell summands of ``G/K~_+``, one per subgroup between ``K~_1`` and ``K~``."""
    return [basic_cell(h) for h in subgroups_between(k)]


def natural_cell_object(k):
    return NamedObject("natural_cell", k.rank, subgroup=k)


def e_bracket(k):
    return NamedObject("e_bracket", k.rank, subgroup=k)


def e_universal(k):
    return NamedObject("e_universal", k.rank, subgroup=k)


def thom_twist(rep, inner):
    if isinstance(rep, (list, tuple)):
        rep = Representation(rep)
    return NamedObject("thom_twist", inner.rank, rep=rep, inner=inner)


def as_named(x):
    return x if isinstance(x, NamedObject) else None


def realize(x):
    return x.realize() if isinstance(x, NamedObject) else x


# -- grammar rendering -------------------------------------------------------------------

def render_subgroup(h):
    if not h.ann:
        return "ann=0"
    if h == trivial_subgroup(h.rank):
        return "ann=full"
    return "ann=" + "; ".join(" ".join(str(x) for x in row) for row in h.ann)


def render_rep(rep):
    return ";".join(" ".join(str(x) for x in c.alpha) for c in rep.chars)


def render_object(obj):
    if obj.tag == "sphere":
        return "sphere"
    if obj.tag == "basic_cell":
        return "sigma:" + render_subgroup(obj.subgroup)
    if obj.tag == "natural_cell":
        return "cell:" + render_subgroup(obj.subgroup)
    if obj.tag == "e_bracket":
        return "ebracket:" + render_subgroup(obj.subgroup)
    if obj.tag == "e_universal":
        return "euniversal:" + render_subgroup(obj.subgroup)
    return "twist:" + render_rep(obj.rep) + ":" + render_object(obj.inner)
