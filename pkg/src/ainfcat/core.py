"""Finite A-infinity categories over Z or Z/2, and the structure verifier.

Conventions
-----------
Operation tables are stored in *boundary order*: the key of a term of
mu^d is the tuple (x_1, ..., x_d) where x_1 composes first, i.e.
x_k in hom(L_{k-1}, L_k) and consecutive entries match head to tail.
Written algebraically the same operation reads mu^d(x_d, ..., x_1); the
public apply_mu takes arguments in that algebraic order and reverses.

The structure relation verified by verify_ainf is, in boundary order:
for every composable (x_1, ..., x_d),

    sum over blocks x_{k+1..k+m}:
        (-1)^(sum of reduced degrees of x_1..x_k)
          * mu(x_1, .., x_k, mu(x_{k+1}, .., x_{k+m}), x_{k+m+1}, .., x_d)
    = 0,

where the reduced degree of x is deg(x) + 1.  Failures are collected as
data (input tuple plus nonzero residual), not raised.

Over Z/2 all coefficients are reduced mod 2, which makes every sign
trivial; the same code path is used with a normalization hook.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

RING_Z = "Z"
RING_F2 = "F2"


class NonComposable(Exception):
    pass


@dataclass(frozen=True, order=True)
class Gen:
    """A named basis generator of the hom space hom(source, target)."""

    source: str
    target: str
    name: str
    degree: int

    def __repr__(self):
        return f"{self.name}[{self.source}->{self.target};{self.degree}]"


def rdeg(g) -> int:
    """Reduced degree: deg + 1.  Only its parity enters sign formulas."""
    return g.degree + 1


def reduced_degree(g: Gen) -> int:
    return rdeg(g)


def koszul_sign(degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Sign accumulated when graded elements are reordered by `perm`.

    `perm[i]` is the new position of the element originally at position i;
    each inverted pair (i, j) contributes (-1)^(deg_i * deg_j).
    """
    if len(degrees) != len(perm):
        raise ValueError("degrees and permutation have different lengths")
    if sorted(perm) != list(range(len(perm))):
        raise ValueError("not a permutation")
    parity = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                parity += degrees[i] * degrees[j]
    return -1 if parity % 2 else 1


# ---------------------------------------------------------------------------
# chains: finitely supported integer combinations of generators, as dicts


def chain_add(target: dict, other: Mapping, scale: int = 1) -> dict:
    """In-place target += scale * other, dropping zeros."""
    for g, c in other.items():
        new = target.get(g, 0) + scale * c
        if new:
            target[g] = new
        else:
            target.pop(g, None)
    return target


def chain_scale(ch: Mapping, scale: int) -> dict:
    if scale == 0:
        return {}
    return {g: scale * c for g, c in ch.items()}


def chain_normalize(ch: dict, ring: str) -> dict:
    if ring == RING_F2:
        out = {}
        for g, c in ch.items():
            if c % 2:
                out[g] = 1
        return out
    return {g: c for g, c in ch.items() if c}


def is_composable(seq: Sequence) -> bool:
    return all(a.target == b.source for a, b in zip(seq, seq[1:]))


# ---------------------------------------------------------------------------


TermTable = dict  # dict[tuple[Gen, ...], dict[Gen, int]]


@dataclass
class AinfCategory:
    """Objects, finite hom spaces and sparse operation tables mu^d.

    `hom[(X, Y)]` lists the generators of hom(X, Y); `mu[d]` maps a
    boundary-ordered composable d-tuple of generators to an output chain.
    `units` optionally records a degree-0 cycle in hom(K, K) per object;
    unitality is never assumed, only verified on demand.
    """

    objects: list[str]
    hom: dict[tuple[str, str], list[Gen]]
    mu: dict[int, TermTable] = field(default_factory=dict)
    ring: str = RING_Z
    units: dict[str, dict] = field(default_factory=dict)

    def __post_init__(self):
        self.validate_tables()

    @property
    def d_max(self) -> int:
        live = [d for d, table in self.mu.items() if table]
        return max(live) if live else 0

    def generators(self) -> Iterator[Gen]:
        for pair in sorted(self.hom):
            yield from self.hom[pair]

    def hom_basis(self, source: str, target: str) -> list[Gen]:
        return self.hom.get((source, target), [])

    def validate_tables(self) -> None:
        declared = set()
        for (src, tgt), gens in self.hom.items():
            names = set()
            for g in gens:
                if g.source != src or g.target != tgt:
                    raise ValueError(f"generator {g} filed under hom({src},{tgt})")
                if g.name in names:
                    raise ValueError(f"duplicate generator name {g.name} in hom({src},{tgt})")
                names.add(g.name)
                declared.add(g)
        for d, table in self.mu.items():
            for key, out in table.items():
                if len(key) != d:
                    raise ValueError(f"mu^{d} key of length {len(key)}")
                if not is_composable(key):
                    raise NonComposable(f"mu^{d} key not composable: {key}")
                for g in key:
                    if g not in declared:
                        raise ValueError(f"unknown generator {g} in mu^{d} key")
                want = 2 - d + sum(g.degree for g in key)
                for og, c in out.items():
                    if og not in declared:
                        raise ValueError(f"unknown output generator {og}")
                    if og.source != key[0].source or og.target != key[-1].target:
                        raise NonComposable(f"mu^{d} output {og} has wrong endpoints for {key}")
                    if og.degree != want:
                        raise ValueError(
                            f"mu^{d} output degree {og.degree}, expected {want} for {key}"
                        )
                    if c == 0:
                        raise ValueError("zero coefficient stored in term table")

    # -- application ---------------------------------------------------

    def mu_key(self, key: tuple) -> dict:
        """mu^d on one boundary-ordered generator tuple."""
        table = self.mu.get(len(key))
        if not table:
            return {}
        out = table.get(key, {})
        return chain_normalize(dict(out), self.ring)

    def mu_boundary(self, chains: Sequence[Mapping]) -> dict:
        """Multilinear extension of mu^d; inputs in boundary order."""
        d = len(chains)
        if d == 0 or not self.mu.get(d):
            return {}
        out: dict = {}
        for combo in itertools.product(*(ch.items() for ch in chains)):
            key = tuple(g for g, _ in combo)
            coeff = 1
            for _, c in combo:
                coeff *= c
            if not is_composable(key):
                raise NonComposable(f"non-composable tuple {key}")
            chain_add(out, self.mu_key(key), coeff)
        return chain_normalize(out, self.ring)

    def differential(self, ch: Mapping) -> dict:
        return self.mu_boundary([ch])


def apply_mu(cat: AinfCategory, d: int, inputs: Sequence[Mapping]) -> dict:
    """mu^d applied to chains given in algebraic order (x_d, ..., x_1)."""
    if len(inputs) != d:
        raise ValueError(f"expected {d} inputs, got {len(inputs)}")
    return cat.mu_boundary(list(reversed(inputs)))


# ---------------------------------------------------------------------------
# enumeration of composable tuples


def composable_tuples(cat: AinfCategory, d: int) -> Iterator[tuple]:
    """All boundary-ordered composable generator d-tuples, sorted start."""
    gens = list(cat.generators())
    by_source: dict[str, list[Gen]] = {}
    for g in gens:
        by_source.setdefault(g.source, []).append(g)

    def extend(prefix: tuple) -> Iterator[tuple]:
        if len(prefix) == d:
            yield prefix
            return
        for g in by_source.get(prefix[-1].target, []):
            yield from extend(prefix + (g,))

    for g in gens:
        yield from extend((g,))


def cyclic_tuples(cat: AinfCategory, d: int) -> Iterator[tuple]:
    """Composable d-tuples that close up: last target == first source."""
    for tup in composable_tuples(cat, d):
        if tup[-1].target == tup[0].source:
            yield tup


# ---------------------------------------------------------------------------
# the structure relation


@dataclass
class Violation:
    inputs: tuple
    residual: dict

    def __str__(self):
        return f"inputs={self.inputs} residual={self.residual}"


@dataclass
class VerificationReport:
    checked: int
    violations: list[Violation]

    @property
    def passed(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.passed:
            return f"pass ({self.checked} tuples checked)"
        lines = [f"FAIL ({len(self.violations)} of {self.checked} tuples)"]
        lines += [f"  {v}" for v in self.violations[:10]]
        if len(self.violations) > 10:
            lines.append(f"  ... and {len(self.violations) - 10} more")
        return "\n".join(lines)


def ainf_residual(cat: AinfCategory, xs: tuple) -> dict:
    """Signed double sum of the structure relation on one input tuple."""
    d = len(xs)
    out: dict = {}
    below = 0  # running parity of reduced degrees of x_1..x_k
    for k in range(d):
        for m in range(1, d - k + 1):
            inner = cat.mu_key(xs[k : k + m])
            if not inner:
                continue
            sign = -1 if below % 2 else 1
            for g, c in inner.items():
                outer_key = xs[:k] + (g,) + xs[k + m :]
                chain_add(out, cat.mu_key(outer_key), sign * c)
        below += rdeg(xs[k])
    return chain_normalize(out, cat.ring)


def verify_ainf(cat: AinfCategory, up_to: int) -> VerificationReport:
    """Check the structure relation on every composable tuple of length <= up_to."""
    violations = []
    checked = 0
    for d in range(1, up_to + 1):
        for xs in composable_tuples(cat, d):
            checked += 1
            res = ainf_residual(cat, xs)
            if res:
                violations.append(Violation(xs, res))
    return VerificationReport(checked=checked, violations=violations)


# ---------------------------------------------------------------------------
# mutation utility (used by the detection suites and the CLI witnesses)


def with_ring(cat: AinfCategory, ring: str) -> AinfCategory:
    """The same category with coefficients in the requested ring.

    Integral data reduces mod 2; the reverse direction has no canonical
    lift and is rejected.
    """
    if ring == cat.ring:
        return cat
    if ring == RING_Z:
        raise ValueError("cannot lift mod-2 data to integral coefficients")
    mu = {}
    for d, table in cat.mu.items():
        new_table = {}
        for key, out in table.items():
            chain = {g: 1 for g, c in out.items() if c % 2}
            if chain:
                new_table[key] = chain
        if new_table:
            mu[d] = new_table
    units = {obj: {g: 1 for g, c in ch.items() if c % 2} for obj, ch in cat.units.items()}
    return AinfCategory(objects=list(cat.objects), hom=dict(cat.hom), mu=mu, ring=RING_F2, units=units)


def subcategory(cat: AinfCategory, objects: Sequence[str]) -> AinfCategory:
    """The full subcategory on the given objects (operation tables restricted)."""
    keep = set(objects)
    unknown = keep - set(cat.objects)
    if unknown:
        raise KeyError(f"unknown objects {sorted(unknown)}")
    hom = {pair: gens for pair, gens in cat.hom.items() if pair[0] in keep and pair[1] in keep}
    mu = {}
    for d, table in cat.mu.items():
        sub = {
            key: dict(out)
            for key, out in table.items()
            if all(g.source in keep and g.target in keep for g in key)
        }
        if sub:
            mu[d] = sub
    units = {obj: dict(ch) for obj, ch in cat.units.items() if obj in keep}
    return AinfCategory(objects=[o for o in cat.objects if o in keep], hom=hom, mu=mu, ring=cat.ring, units=units)


def with_negated_term(cat: AinfCategory, d: int, key: tuple, out_gen: Gen) -> AinfCategory:
    """Copy of the category with one structure constant negated."""
    table = cat.mu.get(d, {})
    if key not in table or out_gen not in table[key]:
        raise KeyError(f"no term mu^{d}{key} -> {out_gen}")
    mu = {a: {k: dict(v) for k, v in t.items()} for a, t in cat.mu.items()}
    mu[d][key][out_gen] = -mu[d][key][out_gen]
    return AinfCategory(objects=list(cat.objects), hom=dict(cat.hom), mu=mu, ring=cat.ring, units=dict(cat.units))


def iter_terms(cat: AinfCategory) -> Iterator[tuple[int, tuple, Gen, int]]:
    """All stored structure constants as (arity, key, output, coefficient)."""
    for d in sorted(cat.mu):
        for key in sorted(cat.mu[d]):
            for og in sorted(cat.mu[d][key]):
                yield d, key, og, cat.mu[d][key][og]
