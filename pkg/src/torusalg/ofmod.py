"""Euler classes, inflation between the rings H*(BG/K~), and torsion families.

The product ring over all subgroups with a given identity component is never
built.  A family is a finite map from keys to graded modules; the structure
family is the one symbolic exception and answers per-key queries.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import graded as gr
from .lattice import (Subgroup, canonical_subgroup, identity_component, is_trivial_on,
                      join, lattice_coordinates)


def char_coordinates(alpha, key):
    """Integer coordinates of a character trivial on ``key`` in the basis of ``ann(key)``."""
    a = alpha.alpha if hasattr(alpha, "alpha") else tuple(alpha)
    return lattice_coordinates(key, [list(a)])[0]


def euler_component(rep, key):
    """The ring element ``e(V)(key)`` of ``H*(BG/key)``."""
    k = key.codim
    out = gr.ring_one(k)
    for alpha in rep:
        if is_trivial_on(alpha, key):
            out = gr.ring_mul(out, gr.linear_form(char_coordinates(alpha, key)))
    return out


def euler_degree(rep, key):
    e = euler_component(rep, key)
    return gr.ring_degree(e) if e else None


def inflation_transform(big, small):
    """Rows: generators of ``H*(BG/big)`` written as linear forms of ``H*(BG/small)``.

    Needs ``small <= big`` so that ``ann(big) <= ann(small)``.
    """
    return lattice_coordinates(small, [list(v) for v in big.ann])


def inflate_element(elem, transform, k_small):
    """Image of a ring element under the inflation given by ``transform``."""
    out = {}
    forms = [gr.linear_form(row) if any(row) else {} for row in transform]
    for mono, c in elem.items():
        term = {tuple([0] * k_small): c}
        for j, e in enumerate(mono):
            for _ in range(e):
                term = gr.ring_mul(term, forms[j])
        for m, v in term.items():
            out[m] = out.get(m, 0) + v
    return {m: v for m, v in out.items() if v}


class FamilyError(ValueError):
    pass


@dataclass
class TorsionFamily:
    """Finitely many modules indexed by subgroups with identity component ``base``."""

    base: Subgroup
    components: dict = field(default_factory=dict)
    structure_ring: bool = False

    def __post_init__(self):
        comps = {}
        for key, mod in self.components.items():
            if identity_component(key) != self.base:
                raise FamilyError(f"key {key} does not have identity component {self.base}")
            if mod.k != key.codim:
                raise FamilyError(f"component at {key} has {mod.k} variables, expected {key.codim}")
            comps[key] = mod
        self.components = dict(sorted(comps.items()))

    def keys(self):
        return list(self.components)

    def component(self, key):
        return self.components.get(key)

    def is_torsion(self):
        out = True
        for mod in self.components.values():
            lo, hi = mod.bounds()
            out = out and lo is not None and hi is not None
        return out

    def to_json(self):
        return {"base": self.base.to_json(),
                "components": [{"subgroup": k.to_json(), "module": gr.module_to_json(m)}
                               for k, m in self.components.items()]}

    @classmethod
    def from_json(cls, data):
        return cls(Subgroup.from_json(data["base"]),
                   {Subgroup.from_json(c["subgroup"]): gr.module_from_json(c["module"])
                    for c in data["components"]})


class StructureFamily:
    """``O_{F/K}``: the free rank one module at every key (symbolic, infinitely many keys)."""

    structure_ring = True

    def __init__(self, base):
        self.base = base

    def keys(self):
        return None

    def component(self, key):
        if identity_component(key) != self.base:
            return None
        return gr.free_module(key.codim)

    def __repr__(self):
        return f"StructureFamily({self.base})"


def inflation_map(base, source, targets):
    """Component data of the inflation ``O_{F/K} -> O_F`` restricted to ``targets``.

    For a finite ``F`` the component comes from the key ``F K`` through the ring
    map ``H*(BG/FK) -> H*(BG/F)``.  Returns ``{F: (key, transform, module)}``;
    targets whose key is absent map to zero and are omitted.
    """
    out = {}
    for f in targets:
        if f.dim:
            raise FamilyError(f"inflation targets must be finite, got {f}")
        key = join(f, base)
        mod = source.component(key)
        if mod is None:
            continue
        out[f] = (key, inflation_transform(key, f), mod)
    return out


@dataclass
class EulerMultiplication:
    image: TorsionFamily
    kernels: dict
    maps: dict


def euler_multiplication(family, rep):
    """Multiply every component by ``e(V)`` at its key; report images and kernels.

    Both images and kernels are submodules of the original components, in the
    original grading.
    """
    images, kernels, maps = {}, {}, {}
    for key in family.keys():
        mod = family.component(key)
        e = euler_component(rep, key)
        deg = gr.ring_degree(e)
        if not deg:
            images[key] = mod
            kernels[key] = gr.ZeroModule(mod.k)
            maps[key] = gr.identity_map(mod)
            continue
        fwd = gr.GradedMap(mod, gr.shift(mod, -deg), lambda d, m=mod, e=e: m.act_elem(e, d))
        src = gr.shift(mod, deg)
        back = gr.GradedMap(src, mod, lambda d, m=mod, e=e, deg=deg: m.act_elem(e, d - deg))
        kernels[key] = gr.kernel(fwd)
        images[key] = gr.image(back)
        maps[key] = fwd
    return EulerMultiplication(TorsionFamily(family.base, images), kernels, maps)


@dataclass
class FamilyElement:
    """An element with a homogeneous component (degree, coordinate vector) at finitely many keys."""

    family: object
    parts: dict

    def spread(self):
        return {k for k, (d, v) in self.parts.items() if any(v)}


def spread(element):
    return element.spread()


def single_key_family(base_or_key, module):
    key = base_or_key
    return TorsionFamily(identity_component(key), {key: module})


def trivial_character_subgroup(rank, vec):
    return canonical_subgroup(rank, [vec])
