"""Objects of the abelian category, presented through their inflation systems.

An object is known by its components: for a subgroup ``H`` with identity
component ``H_1`` the module ``(phi^{H_1} M)_H`` over ``H*(BG/H)``.  Values on
the open sets ``U(K)`` are never formed; every Hom into an injective goes
through the ``f_K`` / ``phi^K`` adjunction and is degreewise finite.

Basing data links a component at ``B`` (level ``B_1``) with the component at
``A = B A_1`` (level ``A_1``, of one larger dimension).  Two kinds occur:

* ``polynomial``: the lower component is the upper one with polynomial
  variables adjoined.  Its residue vanishes.
* ``laurent``: the lower component is the upper one with a Laurent variable
  adjoined.  The residue extracts the ``x^-1`` coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import graded as gr
from .lattice import (Subgroup, canonical_subgroup, complement_characters, contains, enumerate_subgroups,
                      finite_subgroups_of, fixed_dimension, full_torus, identity_component, join,
                      lattice_coordinates, meet, subgroups_between)
from .linalg import apply, express, rank, zeros
from .ofmod import TorsionFamily


class UnsupportedQuery(ValueError):
    """The query would need a degreewise infinite module or an uncertified infinite sum."""


class UniverseInsufficient(ValueError):
    pass


# -- ring coordinates between keys --------------------------------------------------

@dataclass(frozen=True)
class Extension:
    """How ``H*(BG/small)`` is ``H*(BG/big)`` with extra variables ``x_1..x_q``."""

    small: Subgroup
    big: Subgroup
    iota: tuple        # rows: generators of the big ring as linear forms of the small ring
    xs: tuple          # rows: the extra variables as linear forms of the small ring
    to_split: tuple    # rows: small generators in (big generators, x) coordinates

    @property
    def q(self):
        return len(self.xs)


_EXT_CACHE = {}


def extension(small, big):
    key = (small, big)
    if key in _EXT_CACHE:
        return _EXT_CACHE[key]
    iota = lattice_coordinates(small, [list(v) for v in big.ann]) if big.ann else []
    comps = complement_characters(small, big)
    xs = lattice_coordinates(small, comps) if comps else []
    k = small.codim
    basis = [list(r) for r in iota] + [list(r) for r in xs]
    if len(basis) != k:
        raise ValueError("extension basis has the wrong size")
    inv = express(basis, [[1 if i == j else 0 for i in range(k)] for j in range(k)], k) if k else []
    out = Extension(small, big, tuple(map(tuple, iota)), tuple(map(tuple, xs)),
                    tuple(tuple(int(x) for x in row) for row in inv))
    _EXT_CACHE[key] = out
    return out


def polynomial_extension(mod, ext):
    """``mod [x]`` as a module over the small ring."""
    return gr.ChangeOfRing(gr.PolyExtension(mod, ext.q), [list(r) for r in ext.to_split])


def laurent_extension(mod, ext):
    if ext.q != 1:
        raise UnsupportedQuery("localization in two or more directions is degreewise infinite")
    return gr.ChangeOfRing(gr.LaurentModule(mod), [list(r) for r in ext.to_split])


def _mono_elem(ext, mono_big, mu):
    """The ring element ``iota(mono_big) * x^mu`` of the small ring."""
    k = ext.small.codim
    out = gr.ring_one(k)
    for j, e in enumerate(mono_big):
        for _ in range(e):
            out = gr.ring_mul(out, gr.linear_form(ext.iota[j]))
    for j, e in enumerate(mu):
        for _ in range(e):
            out = gr.ring_mul(out, gr.linear_form(ext.xs[j]))
    return out


# -- basing data ---------------------------------------------------------------------

@dataclass
class Basing:
    """Structure map data for the pair (small key, big key)."""

    small: Subgroup
    big: Subgroup
    kind: str                       # "polynomial" or "laurent"
    gen_images: list | None = None  # polynomial: images of the big generators in the small component
    scale: object = 1               # laurent: the map is ``scale * identity``

    def matrix(self, obj, d):
        """Matrix of the comparison map in degree ``d``.

        polynomial: ``P_big[x] -> P_small``;  laurent: ``P_small -> P_big[x, 1/x]``.
        """
        ext = extension(self.small, self.big)
        ps, pb = obj.component(self.small), obj.component(self.big)
        if self.kind == "laurent":
            n = ps.dim(d)
            return [[self.scale if i == j else 0 for j in range(n)] for i in range(n)]
        src = gr.PolyExtension(pb, ext.q)
        cols = []
        for mu, off, n, e in src.layout(d):
            for t in range(n):
                coords = [1 if x == t else 0 for x in range(n)]
                free = pb.lift(e, coords)
                v = [0] * ps.dim(d)
                for (i, mono), c in zip(pb.free_basis(e), free):
                    if not c:
                        continue
                    elem = _mono_elem(ext, mono, mu)
                    img = apply(ps.act_elem(elem, pb.gens[i]), self.gen_images[i])
                    v = [a + c * b for a, b in zip(v, img)]
                cols.append(v)
        return [list(r) for r in zip(*cols)] if cols else zeros(ps.dim(d), 0)


# -- objects ---------------------------------------------------------------------------

class SheafObject:
    """Base class; subclasses supply components, key ambients and basing data."""

    residue_null = True

    def __init__(self, rank, name="object"):
        self.rank = rank
        self.name = name
        self._comp_cache = {}

    def __repr__(self):
        return self.name

    def component(self, key):
        if key not in self._comp_cache:
            self._comp_cache[key] = self._component(key)
        return self._comp_cache[key]

    def _component(self, key):
        raise NotImplementedError

    def key_ambients(self):
        """Subgroups ``X`` such that every key lies in some ``X``."""
        return [full_torus(self.rank)]

    def finite_keys(self):
        """All keys if there are finitely many, else ``None``."""
        return None

    def basing(self, small, big):
        return None

    def residue(self, small, big, d):
        """Matrix ``P_small,d -> P_big,d-2`` (the ``x^-1`` coefficient of the basing map)."""
        ps, pb = self.component(small), self.component(big)
        return zeros(pb.dim(d - 2) if pb else 0, ps.dim(d) if ps else 0)

    def levels(self):
        keys = self.finite_keys()
        if keys is None:
            return None
        return sorted({identity_component(k) for k in keys})

    def phi(self, level):
        keys = self.finite_keys()
        if keys is None:
            return SymbolicFamily(level, self)
        return TorsionFamily(level, {k: self.component(k) for k in keys
                                     if identity_component(k) == level and self.component(k) is not None})

    def keys_in(self, ambient, dim, universe=None):
        """Keys of dimension ``dim`` inside ``ambient``: ``(keys, exact)``."""
        cands, exact = [], True
        for x in self.key_ambients():
            z = meet(x, ambient)
            hs, ex = subgroups_of_dim(z, dim, universe)
            exact = exact and ex
            cands.extend(hs)
        out = []
        for h in sorted(set(cands)):
            p = self.component(h)
            if p is not None:
                out.append(h)
        return out, exact


class SymbolicFamily:
    def __init__(self, base, obj):
        self.base, self.obj = base, obj

    def keys(self):
        return None

    def component(self, key):
        if identity_component(key) != self.base:
            return None
        return self.obj.component(key)

    def __repr__(self):
        return f"SymbolicFamily({self.base}, {self.obj})"


def subgroups_of_dim(z, dim, universe=None):
    """Subgroups of ``z`` of dimension ``dim``: ``(list, exact)``.

    Exact when the list is finite (``z`` finite, or ``dim = dim z``); otherwise
    the members of ``universe`` are returned and the result is flagged.
    """
    if dim > z.dim or dim < 0:
        return [], True
    if dim == z.dim:
        return subgroups_between(z), True
    if z.dim == 0:
        return finite_subgroups_of(z), True
    if universe is None:
        universe = default_universe(z.rank)
    return [h for h in universe if h.dim == dim and contains(z, h)], False


_UNIVERSES = {}


def default_universe(rank, bound=2):
    key = (rank, bound)
    if key not in _UNIVERSES:
        _UNIVERSES[key] = enumerate_subgroups(rank, bound)
    return _UNIVERSES[key]


def _cell_component(k_group, h):
    """``(phi^{H_1} pi(sigma_K))_H``: ``Sigma^{codim K} H*(BG/H) / (c(ann K))``, or ``None``."""
    if not contains(k_group, h):
        return None
    if join(h, identity_component(k_group)) != k_group:
        return None
    rels = []
    if k_group.ann:
        for row in lattice_coordinates(h, [list(v) for v in k_group.ann]):
            rels.append([gr.linear_form(row)])
    return gr.FPModule(h.codim, [k_group.codim], rels)


class BasicCell(SheafObject):
    """The image of the basic cell at ``k_group``."""

    def __init__(self, k_group, name=None):
        super().__init__(k_group.rank, name or f"sigma[{k_group}]")
        self.k_group = k_group

    def _component(self, key):
        return _cell_component(self.k_group, key)

    def key_ambients(self):
        return [self.k_group]

    def finite_keys(self):
        if self.k_group.dim == 0:
            return [self.k_group]
        if self.rank == 1:
            # levels 1 and G; keys at level 1 are all finite subgroups: infinite
            return None
        return None

    def basing(self, small, big):
        ps, pb = self.component(small), self.component(big)
        if ps is None or pb is None:
            return None
        return Basing(small, big, "polynomial", [ps.generator_vector(0)])


def structure_sheaf(rank):
    return BasicCell(full_torus(rank), name="O")


class FKObject(SheafObject):
    """``f_K(V)``: the object constant below ``K`` on the family ``V``."""

    def __init__(self, family, name=None, allow_nontorsion=False):
        base = family.base
        super().__init__(base.rank, name or f"f[{base}]")
        self.family = family
        self.base = base
        self.allow_nontorsion = allow_nontorsion
        if not allow_nontorsion and not family.is_torsion():
            raise ValueError("f_K needs a torsion family (or a whitelisted injective/structure input)")

    @property
    def residue_null(self):
        return self.base.dim == 0

    def _component(self, key):
        l = identity_component(key)
        if l == self.base:
            return self.family.component(key)
        if not contains(self.base, l):
            return None
        top = join(key, self.base)
        top_mod = self.family.component(top)
        if top_mod is None:
            return None
        gap = self.base.dim - l.dim
        if gap == 1:
            lo, hi = top_mod.bounds()
            if lo is None or hi is None:
                raise UnsupportedQuery(f"component of {self.name} at {key} is degreewise infinite")
            return laurent_extension(top_mod, extension(key, top))
        raise UnsupportedQuery(f"component of {self.name} at {key} needs a {gap}-fold localization")

    def key_ambients(self):
        return list(self.family.keys())

    def phi(self, level):
        if level == self.base:
            return self.family
        if not contains(self.base, level):
            return TorsionFamily(level, {})
        return super().phi(level)

    def finite_keys(self):
        if self.base.dim == 0:
            return list(self.family.keys())
        return None

    def basing(self, small, big):
        if identity_component(big) != self.base or self.family.component(big) is None:
            return None
        ps = self.component(small)
        if ps is None:
            return None
        return Basing(small, big, "laurent")

    def residue(self, small, big, d):
        ps, pb = self.component(small), self.component(big)
        if ps is None or pb is None or identity_component(big) != self.base:
            return super().residue(small, big, d)
        if join(small, self.base) != big or self.base.dim - small.dim != 1:
            return super().residue(small, big, d)
        return ps.base.residue(d)


def f_K(family, allow_nontorsion=False):
    return FKObject(family, allow_nontorsion=allow_nontorsion)


class SumObject(SheafObject):
    def __init__(self, parts, name=None):
        parts = list(parts)
        if not parts:
            raise ValueError("empty sum")
        super().__init__(parts[0].rank, name or " + ".join(p.name for p in parts))
        self.parts = parts

    @property
    def residue_null(self):
        return all(p.residue_null for p in self.parts)

    def _component(self, key):
        mods = [p.component(key) for p in self.parts]
        present = [m for m in mods if m is not None]
        if not present:
            return None
        return gr.DirectSum([m if m is not None else gr.ZeroModule(key.codim) for m in mods], key.codim)

    def key_ambients(self):
        out = []
        for p in self.parts:
            out.extend(p.key_ambients())
        return sorted(set(out))

    def finite_keys(self):
        out = set()
        for p in self.parts:
            ks = p.finite_keys()
            if ks is None:
                return None
            out.update(ks)
        return sorted(out)

    def residue(self, small, big, d):
        mats, rows, cols = [], [], []
        for p in self.parts:
            ps, pb = p.component(small), p.component(big)
            nr = pb.dim(d - 2) if pb else 0
            nc = ps.dim(d) if ps else 0
            mats.append(p.residue(small, big, d) if ps is not None and pb is not None else zeros(nr, nc))
            rows.append(nr)
            cols.append(nc)
        return gr.block_diagonal(mats, rows, cols)


class TwistObject(SheafObject):
    """``S^V`` smashed with an object: the component at ``H`` is shifted by ``dim_R V^H``."""

    def __init__(self, rep, inner, name=None):
        super().__init__(inner.rank, name or f"S^{list(c.alpha for c in rep)} {inner.name}")
        self.rep, self.inner = rep, inner

    @property
    def residue_null(self):
        return self.inner.residue_null

    def _component(self, key):
        m = self.inner.component(key)
        if m is None:
            return None
        return gr.shift(m, fixed_dimension(self.rep, key))

    def key_ambients(self):
        return self.inner.key_ambients()

    def finite_keys(self):
        return self.inner.finite_keys()

    def residue(self, small, big, d):
        if self.inner.residue_null:
            return super().residue(small, big, d)
        raise UnsupportedQuery("residues of twisted objects with Laurent components are not implemented")

    def basing(self, small, big):
        return None


class ExplicitObject(SheafObject):
    """Finitely many components given directly; keys must be finite subgroups."""

    def __init__(self, rank, components, name="explicit"):
        super().__init__(rank, name)
        for key in components:
            if key.dim:
                raise ValueError("explicit objects carry finite keys only")
        self.components = dict(components)

    def _component(self, key):
        return self.components.get(key)

    def key_ambients(self):
        return sorted(self.components)

    def finite_keys(self):
        return sorted(self.components)


class CorruptedBasing(SheafObject):
    """Negative control: ``inner`` with the basing map of one pair replaced by zero."""

    def __init__(self, inner, small, big):
        super().__init__(inner.rank, f"corrupt({inner.name})")
        self.inner, self.small, self.big = inner, small, big

    def _component(self, key):
        return self.inner.component(key)

    def key_ambients(self):
        return self.inner.key_ambients()

    def finite_keys(self):
        return self.inner.finite_keys()

    @property
    def residue_null(self):
        return self.inner.residue_null

    def basing(self, small, big):
        b = self.inner.basing(small, big)
        if b is None or (small, big) != (self.small, self.big):
            return b
        if b.kind == "laurent":
            return Basing(small, big, "laurent", scale=0)
        return Basing(small, big, "polynomial", [[0] * len(v) for v in b.gen_images])


def phi(obj, level):
    return obj.phi(level)


def phi_of_fK_below(k_group, family, level):
    """Components of ``phi^L f_K(V)`` as a symbolic family over ``G/L``."""
    return FKObject(family).phi(level)


# -- fixed points -------------------------------------------------------------------------

class QuotientObject(SheafObject):
    """``Phi^L M`` as an object over ``G/L`` (characters of ``G/L`` = ``ann(L)``)."""

    def __init__(self, inner, level):
        if identity_component(level) != level:
            raise ValueError("fixed points need a connected subgroup")
        super().__init__(level.codim, f"Phi^{level} {inner.name}")
        self.inner, self.level = inner, level

    def lift(self, key):
        """The subgroup of ``G`` containing ``level`` whose image is ``key``."""
        basis = self.level.ann
        gens = [[sum(a * basis[i][j] for i, a in enumerate(row)) for j in range(self.inner.rank)]
                for row in key.ann]
        return canonical_subgroup(self.inner.rank, gens)

    def down(self, sub):
        coords = lattice_coordinates(self.level, [list(v) for v in sub.ann]) if sub.ann else []
        return canonical_subgroup(self.rank, coords)

    def _component(self, key):
        up = self.lift(key)
        m = self.inner.component(up)
        if m is None:
            return None
        # basis of ann(key) versus the image of the canonical basis of ann(up)
        img = [lattice_coordinates(self.level, [list(v)])[0] for v in up.ann]
        t = [[int(x) for x in row] for row in express(img, [list(r) for r in key.ann], self.rank)] if img else []
        return gr.ChangeOfRing(m, t) if t else m

    def key_ambients(self):
        out = []
        for x in self.inner.key_ambients():
            if contains(x, self.level):
                out.append(self.down(x))
        return out

    def finite_keys(self):
        ks = self.inner.finite_keys()
        if ks is None:
            # f_K(V) seen from its own level has exactly the keys of V
            if getattr(self.inner, "base", None) != self.level:
                return None
            ks = self.inner.key_ambients()
        return sorted({self.down(k) for k in ks if contains(k, self.level)})


def fixed_points(obj, level):
    if level.dim == 0:
        return obj
    return QuotientObject(obj, level)


# -- injectives ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class StandardInjective:
    """``I(K~)[n] = f_{K_1}(Sigma^{c+n} H_*(BG/K~))`` with ``c = codim K~``."""

    subgroup: Subgroup
    shift: int = 0

    @property
    def top(self):
        return self.subgroup.codim + self.shift

    def module(self):
        return gr.shift(gr.DualModule(gr.free_module(self.subgroup.codim)), self.top)

    def realize(self):
        fam = TorsionFamily(identity_component(self.subgroup), {self.subgroup: self.module()})
        obj = FKObject(fam, name=f"I({self.subgroup})[{self.shift}]", allow_nontorsion=True)
        obj.injective = (self.subgroup, self.shift)
        return obj


def hom_into_injective(obj, inj):
    """``Hom(M, I(K~)[n])`` as a graded module: degree ``t`` is ``(P_{c+n-t})^*``."""
    p = obj.component(inj.subgroup)
    if p is None:
        return gr.ZeroModule(inj.subgroup.codim)
    return gr.shift(gr.graded_dual(p), inj.top)


@dataclass
class SymbolicInjectiveFamily:
    """All ``I(H)[shift]`` with ``H <= ambient`` of dimension ``dim`` satisfying ``predicate``."""

    ambient: Subgroup
    dim: int
    shift: int
    predicate: object = None
    label: str = ""


@dataclass
class InjectiveAggregate:
    summands: list = field(default_factory=list)
    families: list = field(default_factory=list)


def hom_into_aggregate(obj, agg, universe=None, require_certificate=True):
    """Nonzero ``(summand, Hom module)`` pairs; symbolic families need a finite certificate."""
    out = []
    for s in agg.summands:
        h = hom_into_injective(obj, s)
        if not isinstance(h, gr.ZeroModule):
            out.append((s, h))
    for fam in agg.families:
        keys, exact = obj.keys_in(fam.ambient, fam.dim, universe)
        if not exact and require_certificate:
            raise UniverseInsufficient(
                f"no finite certificate for {fam.label or 'family'}: {obj.name} has infinitely many keys "
                f"of dimension {fam.dim} in {fam.ambient}")
        for k in keys:
            if fam.predicate is not None and not fam.predicate(k):
                continue
            s = StandardInjective(k, fam.shift)
            out.append((s, hom_into_injective(obj, s)))
    return out


# -- quasi-coherence check ---------------------------------------------------------------

@dataclass
class QCEReport:
    passed: bool
    entries: list

    def failures(self):
        return [e for e in self.entries if e["status"] == "fail"]


def _pairs(obj, universe):
    """Dimension-one pairs ``(small, big)`` with ``big = small * big_1`` among sampled keys."""
    keys = obj.finite_keys()
    if keys is None:
        keys = set()
        for x in obj.key_ambients():
            for d in range(x.dim + 1):
                for k in subgroups_of_dim(x, d, universe)[0]:
                    try:
                        if obj.component(k) is not None:
                            keys.add(k)
                    except UnsupportedQuery:
                        continue
        keys = sorted(keys)
    out = []
    for small in keys:
        for big in keys:
            if big.dim == small.dim + 1 and contains(big, small) and join(small, identity_component(big)) == big:
                out.append((small, big))
    return keys, out


def check_qce(obj, window=(-8, 8), universe=None):
    """Windowed check of basing maps, localization isomorphisms and restriction triangles."""
    lo, hi = window
    entries = []
    try:
        keys, pairs = _pairs(obj, universe)
    except UnsupportedQuery as exc:
        return QCEReport(False, [{"check": "enumerate", "status": "fail", "witness": str(exc)}])
    for small, big in pairs:
        tag = {"small": small.to_json(), "big": big.to_json()}
        b = obj.basing(small, big)
        if b is None:
            entries.append({"check": "basing-exists", **tag, "status": "fail", "witness": "missing"})
            continue
        ps, pb = obj.component(small), obj.component(big)
        ok, witness = True, None
        for d in range(lo, hi + 1):
            mat = b.matrix(obj, d)
            n_small = ps.dim(d)
            if b.kind == "polynomial":
                n_src = gr.PolyExtension(pb, 1).dim(d)
                r = rank(mat, n_src) if mat and n_src and n_small else 0
                if not (n_src == n_small == r):
                    ok, witness = False, f"degree {d}: rank {r}, dims {n_src} -> {n_small}"
                    break
            else:
                r = rank(mat, n_small) if n_small else 0
                if r != n_small:
                    ok, witness = False, f"degree {d}: rank {r} < {n_small}"
                    break
                # localization: the Laurent variable acts invertibly on the lower component
                ext = extension(small, big)
                x = gr.linear_form(ext.xs[0])
                m = ps.act_elem(x, d)
                if n_small and (ps.dim(d - 2) != n_small or rank(m, n_small) != n_small):
                    ok, witness = False, f"degree {d}: Euler class not invertible"
                    break
        entries.append({"check": "localization-iso", **tag, "status": "pass" if ok else "fail",
                        "witness": witness})
    # restriction triangles small < mid < big along polynomial basings
    for small in keys:
        for big in keys:
            if big.dim != small.dim + 2 or not contains(big, small) or join(small, identity_component(big)) != big:
                continue
            direct = obj.basing(small, big) if isinstance(obj, (BasicCell,)) else None
            if direct is None:
                continue
            for mid in keys:
                if (small, mid) in pairs and (mid, big) in pairs:
                    entries.append(_triangle(obj, small, mid, big, direct))
    passed = all(e["status"] == "pass" for e in entries)
    return QCEReport(passed, entries)


def _triangle(obj, small, mid, big, direct):
    b1, b2 = obj.basing(small, mid), obj.basing(mid, big)
    pm, pb, ps = obj.component(mid), obj.component(big), obj.component(small)
    ext = extension(small, mid)
    ok = True
    for i, y in enumerate(b2.gen_images):
        free = pm.lift(pb.gens[i], y)
        v = [0] * ps.dim(pb.gens[i])
        for (j, mono), c in zip(pm.free_basis(pb.gens[i]), free):
            if c:
                elem = _mono_elem(ext, mono, tuple([0] * ext.q))
                img = apply(ps.act_elem(elem, pm.gens[j]), b1.gen_images[j])
                v = [a + c * w for a, w in zip(v, img)]
        if [x for x in v] != [x for x in direct.gen_images[i]]:
            ok = False
    return {"check": "triangle", "small": small.to_json(), "mid": mid.to_json(), "big": big.to_json(),
            "status": "pass" if ok else "fail", "witness": None if ok else "composite differs"}


# -- dimension filtration ------------------------------------------------------------------

class ComponentwiseObject(SheafObject):
    """Components computed by a function, with the key data of a reference object."""

    def __init__(self, ref, fn, name, keep=None):
        super().__init__(ref.rank, name)
        self.ref, self.fn, self.keep = ref, fn, keep

    def _component(self, key):
        if self.keep is not None and not self.keep(key):
            return None
        if self.ref.component(key) is None:
            return None
        m = self.fn(key)
        return m

    def key_ambients(self):
        return self.ref.key_ambients()

    def finite_keys(self):
        return self.ref.finite_keys()


@dataclass
class Decomposition:
    top_dim: int
    top_levels: list
    maps: object       # key -> GradedMap, from M's component to the f_L(phi^L M) component
    kernel: SheafObject
    cokernel: SheafObject
    target: SheafObject


def _support_levels(obj, universe=None):
    keys = obj.finite_keys()
    if keys is not None:
        return sorted({identity_component(k) for k in keys})
    levels = set()
    for x in obj.key_ambients():
        x1 = identity_component(x)
        levels.add(x1)
        for d in range(x1.dim):
            hs, _ = subgroups_of_dim(x1, d, universe)
            levels.update(h for h in hs if identity_component(h) == h)
    return sorted(levels)


def decompose_by_dimension(obj, universe=None):
    """The map ``g: M -> (+)_{dim L = s} f_L(phi^L M)`` over the top support dimension ``s``."""
    levels = _support_levels(obj, universe)
    if not levels:
        z = ComponentwiseObject(obj, lambda k: None, "0")
        return Decomposition(-1, [], {}, z, z, z)
    s = max(l.dim for l in levels)
    top = [l for l in levels if l.dim == s]
    maps = {}

    def top_key_of(key):
        for l in top:
            if contains(l, identity_component(key)) or identity_component(key) == l:
                big = join(key, l)
                if obj.component(big) is not None:
                    return l, big
        return None, None

    def target_component(key):
        l, big = top_key_of(key)
        if l is None:
            return None
        pb = obj.component(big)
        if big == key:
            return pb
        gap = l.dim - identity_component(key).dim
        if gap != 1:
            raise UnsupportedQuery("decomposition below codimension one needs a multi-variable localization")
        return laurent_extension(pb, extension(key, big))

    def g_map(key):
        if key in maps:
            return maps[key]
        p = obj.component(key)
        t = target_component(key)
        if t is None:
            f = gr.zero_map(p, gr.ZeroModule(p.k))
        else:
            l, big = top_key_of(key)
            if big == key:
                f = gr.identity_map(p)
            else:
                f = _basing_to_laurent(obj, key, big, p, t)
        maps[key] = f
        return f

    ker = ComponentwiseObject(obj, lambda k: gr.kernel(g_map(k)), f"ker g({obj.name})")
    coker = ComponentwiseObject(obj, lambda k: gr.cokernel(g_map(k)), f"coker g({obj.name})")
    tgt = ComponentwiseObject(obj, target_component, f"f(phi^top {obj.name})")
    return Decomposition(s, top, g_map, ker, coker, tgt)


def _basing_to_laurent(obj, small, big, p, target):
    b = obj.basing(small, big)
    if b is None:
        raise UnsupportedQuery(f"no basing data for {small} < {big}")
    if b.kind == "laurent":
        return gr.GradedMap(p, target, lambda d: b.matrix(obj, d))
    pb = obj.component(big)
    poly = gr.PolyExtension(pb, 1)
    lau = gr.LaurentModule(pb)

    def fn(d):
        alpha = b.matrix(obj, d)            # poly ext -> p, an isomorphism
        n = p.dim(d)
        inv = express([list(c) for c in zip(*alpha)], [[1 if i == j else 0 for i in range(n)] for j in range(n)], n)
        # poly basis (mu, v) -> laurent basis (a = |mu|, v)
        emb = zeros(lau.dim(d), poly.dim(d))
        lay = {a: off for a, off, _ in lau.layout(d)}
        for mu, off, m, e in poly.layout(d):
            a = sum(mu)
            for i in range(m):
                emb[lay[a] + i][off + i] = 1
        cols = [apply(emb, v) for v in inv]
        return [list(r) for r in zip(*cols)] if cols else zeros(lau.dim(d), n)
    return gr.GradedMap(p, target, fn)
