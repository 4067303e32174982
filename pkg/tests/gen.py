"""Random inputs shared by the test modules."""
from itertools import product
from math import prod

from torusalg import graded as gr
from torusalg.lattice import enumerate_subgroups, identity_component
from torusalg.ofmod import TorsionFamily
from torusalg.sheaf import FKObject


def mono(k, j, e):
    m = [0] * k
    m[j] = e
    return tuple(m)


def random_torsion(rng, k, max_dim=12, tries=50):
    """A finitely presented torsion module over ``Q[c_1..c_k]`` of total dimension ``<= max_dim``."""
    for _ in range(tries):
        ngen = rng.choice([1, 1, 2])
        gens = [rng.choice([0, 0, -2, 2, 4]) for _ in range(ngen)]
        rels = []
        for i in range(ngen):
            for j in range(k):
                rel = [{} for _ in range(ngen)]
                rel[i] = {mono(k, j, rng.randint(1, 3)): 1}
                rels.append(rel)
        if k and ngen == 2 and rng.random() < 0.5:
            # a mixing relation c^a e_0 + lambda c^b e_1
            j = rng.randrange(k)
            a = rng.randint(1, 3)
            b = a + (gens[1] - gens[0]) // 2
            if b >= 0:
                rels.append([{mono(k, j, a): 1}, {mono(k, j, b): rng.choice([1, -1, 2])}])
        if k >= 2 and rng.random() < 0.4:
            lam = rng.choice([1, -1, 3])
            rels.append([{mono(k, 0, 1): 1, mono(k, 1, 1): lam}] + [{} for _ in range(ngen - 1)])
        m = gr.FPModule(k, gens, rels)
        lo, hi = m.bounds()
        total = sum(m.dim(d) for d in range(lo, hi + 1)) if lo is not None else 0
        if 0 < total <= max_dim:
            return m
    return gr.FPModule(k, (0,), [[{mono(k, j, 1): 1}] for j in range(k)])


def keys_for(rank):
    """Subgroups usable as keys, grouped by identity component."""
    out = {}
    for h in enumerate_subgroups(rank, 2):
        out.setdefault(identity_component(h), []).append(h)
    return out


def random_fk(rng, rank, max_dim=12):
    groups = keys_for(rank)
    dim = rng.randrange(rank + 1)
    base = rng.choice(sorted(b for b in groups if b.dim == dim))
    keys = rng.sample(groups[base], min(len(groups[base]), rng.choice([1, 1, 2])))
    budget = max_dim
    comps = {}
    for key in keys:
        m = random_torsion(rng, key.codim, max(1, budget // len(keys)))
        comps[key] = m
    return FKObject(TorsionFamily(base, comps))


def total_dim(m):
    lo, hi = m.bounds()
    if lo is None:
        return 0
    return sum(m.dim(d) for d in range(lo, hi + 1))



def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def count_sublattices(divs):
    """Lattices between ``diag(divs) Z^m`` and ``Z^m``, enumerated as row Hermite forms."""
    m = len(divs)
    n = prod(divs)
    count = 0
    for diag in product(_divisors(n), repeat=m):
        if n % prod(diag):
            continue
        slots = [(i, j) for i in range(m) for j in range(i + 1, m)]
        for offs in product(*[range(diag[j]) for _i, j in slots]):
            b = [[0] * m for _ in range(m)]
            for i in range(m):
                b[i][i] = diag[i]
            for (i, j), v in zip(slots, offs):
                b[i][j] = v
            if all(_in_upper(b, [divs[i] if c == i else 0 for c in range(m)]) for i in range(m)):
                count += 1
    return count


def _in_upper(b, v):
    v = list(v)
    for i in range(len(b)):
        if v[i] % b[i][i]:
            return False
        q = v[i] // b[i][i]
        v = [x - q * y for x, y in zip(v, b[i])]
    return not any(v)
