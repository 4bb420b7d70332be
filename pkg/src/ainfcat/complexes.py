"""Labelled chain complexes and graded maps between them.

A BasedComplex carries an ordered basis of hashable labels per degree and
materializes dict-valued differentials into integer matrices, so homology
questions reduce to intlinalg.  Chain maps are stored the same way; the
commutation convention for a map f of degree `shift` is

    d_target o f == (-1)^shift * f o d_source

checked entrywise by verify_chain_map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .core import RING_F2, VerificationReport, Violation, chain_add, chain_normalize
from .intlinalg import ChainComplexZ, FinAbGroup, HomologyData, IntMatrix, f2_rank


class BasedComplex:
    """Cochain complex with explicit labelled bases.

    `basis[k]` is an ordered list of labels; `d` sends a label to a chain
    (dict label -> coefficient) in the next degree.  The matrix form is
    cached; validate() checks d o d = 0 exactly (mod 2 over F2).
    """

    def __init__(self, basis: dict[int, list], d: Callable[[object], Mapping], ring: str = "Z"):
        self.ring = ring
        self.basis = {k: list(v) for k, v in sorted(basis.items()) if v}
        self.index = {k: {label: i for i, label in enumerate(v)} for k, v in self.basis.items()}
        self._d = d
        self._matrices: dict[int, IntMatrix] = {}
        self._diff_cache: dict = {}

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def dim(self, k: int) -> int:
        return len(self.basis.get(k, []))

    def diff_chain(self, label) -> dict:
        cached = self._diff_cache.get(label)
        if cached is None:
            cached = self._diff_cache[label] = chain_normalize(dict(self._d(label)), self.ring)
        return cached

    def matrix(self, k: int) -> IntMatrix:
        if k not in self._matrices:
            src = self.basis.get(k, [])
            tgt = self.index.get(k + 1, {})
            rows = len(tgt)
            cols = [[0] * len(src) for _ in range(rows)]
            for j, label in enumerate(src):
                for out, c in self.diff_chain(label).items():
                    i = tgt.get(out)
                    if i is None:
                        if c:
                            raise KeyError(f"differential of {label!r} leaves the declared basis at {out!r}")
                        continue
                    cols[i][j] = c
            self._matrices[k] = IntMatrix(cols, cols=len(src)) if rows else IntMatrix.zeros(0, len(src))
        return self._matrices[k]

    def vector(self, chain: Mapping, k: int) -> list[int]:
        v = [0] * self.dim(k)
        idx = self.index.get(k, {})
        for label, c in chain_normalize(dict(chain), self.ring).items():
            if c:
                v[idx[label]] = c
        return v

    def validate(self) -> None:
        """Check d o d = 0 exactly, one basis label at a time."""
        for k in self.degrees():
            for label in self.basis[k]:
                acc: dict = {}
                image = self.diff_chain(label)
                for out, c in image.items():
                    if out not in self.index.get(k + 1, {}):
                        raise KeyError(
                            f"differential of {label!r} leaves the declared basis at {out!r}"
                        )
                    chain_add(acc, self.diff_chain(out), c)
                if chain_normalize(acc, self.ring):
                    raise ValueError(f"d o d != 0 at degree {k} on {label!r}")

    def to_chain_complex(self) -> ChainComplexZ:
        comps = {k: list(v) for k, v in self.basis.items()}
        diffs = {k: self.matrix(k) for k in self.degrees()}
        return ChainComplexZ(components=comps, diff=diffs)

    def homology(self, k: int) -> FinAbGroup:
        if self.ring == RING_F2:
            n = self.dim(k)
            dim = (n - f2_rank(self.matrix(k))) - f2_rank(self.matrix(k - 1))
            return FinAbGroup(0, (2,) * dim)
        return HomologyData(self.matrix(k), self.matrix(k - 1)).group

    def homology_data(self, k: int) -> HomologyData:
        if self.ring == RING_F2:
            raise ValueError("integral homology coordinates are not defined over F2")
        return HomologyData(self.matrix(k), self.matrix(k - 1))


@dataclass
class GradedMap:
    """A degree-`shift` linear map between two BasedComplexes, label to chain."""

    source: BasedComplex
    target: BasedComplex
    shift: int
    apply: Callable[[object], Mapping]
    name: str = "map"

    def chain(self, label) -> dict:
        return chain_normalize(dict(self.apply(label)), self.target.ring)

    def apply_to(self, chain: Mapping) -> dict:
        out: dict = {}
        for label, c in chain.items():
            chain_add(out, self.chain(label), c)
        return chain_normalize(out, self.target.ring)


def compose(g: GradedMap, f: GradedMap, name: str | None = None) -> GradedMap:
    if f.target is not g.source and f.target.basis != g.source.basis:
        raise ValueError("maps do not compose")
    return GradedMap(
        source=f.source,
        target=g.target,
        shift=f.shift + g.shift,
        apply=lambda label: g.apply_to(f.chain(label)),
        name=name or f"{g.name} o {f.name}",
    )


def identity_map(C: BasedComplex) -> GradedMap:
    return GradedMap(source=C, target=C, shift=0, apply=lambda label: {label: 1}, name="id")


def zero_map(source: BasedComplex, target: BasedComplex, shift: int) -> GradedMap:
    return GradedMap(source=source, target=target, shift=shift, apply=lambda label: {}, name="0")


def verify_chain_map(f: GradedMap) -> VerificationReport:
    """Check d o f - (-1)^shift f o d = 0 on every basis label."""
    sign = -1 if f.shift % 2 else 1
    violations = []
    checked = 0
    for k in f.source.degrees():
        for label in f.source.basis[k]:
            checked += 1
            res: dict = {}
            for out, c in f.chain(label).items():
                chain_add(res, f.target.diff_chain(out), c)
            for out, c in f.source.diff_chain(label).items():
                chain_add(res, f.chain(out), -sign * c)
            res = chain_normalize(res, f.target.ring)
            if res:
                violations.append(Violation((label,), res))
    return VerificationReport(checked=checked, violations=violations)


def induced_on_homology(f: GradedMap, k: int):
    """Matrix of the map induced by a chain map on homology at degree k.

    Returns (source HomologyData, target HomologyData, columns), where
    column j holds the target-coordinates of the image of the j-th source
    class generator.
    """
    hs = f.source.homology_data(k)
    ht = f.target.homology_data(k + f.shift)
    cols = []
    for gen_vec in hs.class_generators():
        chain = {label: c for label, c in zip(f.source.basis.get(k, []), gen_vec) if c}
        img = f.apply_to(chain)
        vec = f.target.vector(img, k + f.shift)
        cols.append(ht.coords(vec))
    return hs, ht, cols
