"""Combinatorics of the abstract moduli spaces behind the equations.

Strata are labels only: the codimension-1 boundary families of the disc
moduli spaces (one output; two outputs; one interior output; restricted
annuli; the gluing-interpolation family), together with dimension
formulas and the explicit bijections between strata and the stable terms
of the corresponding chain-level equations.  Unstable degenerations
(strip breakings, whose algebraic shadow are the differential terms) are
not boundary strata of the abstract spaces; the bijection reports list
them separately where an equation has such terms.

Space kinds and dimensions:

    discs(d)           d >= 2 inputs, one output          dim d - 2
    bidiscs(r, s)      two outputs, r + s inputs          dim r + s
    punctured(d)       interior output, d inputs          dim d - 1
    annuli(d)          restricted annuli                  dim d
    interp(d)          the [0,1]-interpolation family     dim d

plus the rigid two-marked disc "codisc" (dimension 0) appearing as a
stratum factor of the annuli.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

R_DISC = "R_d"
R_BIMOD = "R_{r|1|s}"
R_PUNCT = "R_d^1"
C_ANNULUS = "C_d^-"
P_INTERP = "P_d"
R_CODISC = "R^1"  # the disc with one interior input and one boundary output


@dataclass(frozen=True, order=True)
class SpaceId:
    kind: str
    d: int = 0
    r: int = 0
    s: int = 0

    def __post_init__(self):
        if self.kind == R_DISC:
            if self.d < 2:
                raise ValueError(f"disc space needs d >= 2, got {self.d}")
        elif self.kind == R_BIMOD:
            if self.r < 0 or self.s < 0:
                raise ValueError("negative parameters")
        elif self.kind in (R_PUNCT, C_ANNULUS, P_INTERP):
            if self.d < 1:
                raise ValueError(f"{self.kind} needs d >= 1, got {self.d}")
        elif self.kind == R_CODISC:
            pass
        else:
            raise ValueError(f"unknown space kind {self.kind}")

    def __repr__(self):
        if self.kind == R_BIMOD:
            return f"R({self.r}|1|{self.s})"
        if self.kind == R_CODISC:
            return "R^1"
        short = {R_DISC: "R", R_PUNCT: "R1", C_ANNULUS: "C-", P_INTERP: "P"}[self.kind]
        return f"{short}({self.d})"


def disc(d: int) -> SpaceId:
    return SpaceId(R_DISC, d=d)


def bidisc(r: int, s: int) -> SpaceId:
    return SpaceId(R_BIMOD, r=r, s=s)


def punctured_disc(d: int) -> SpaceId:
    return SpaceId(R_PUNCT, d=d)


def annulus(d: int) -> SpaceId:
    return SpaceId(C_ANNULUS, d=d)


def interpolation(d: int) -> SpaceId:
    return SpaceId(P_INTERP, d=d)


CODISC = SpaceId(R_CODISC)


def dimension(space: SpaceId) -> int:
    """Moduli dimension: positions of the unfixed marked points (plus the
    modular or interval parameter for the annuli and the interpolation)."""
    if space.kind == R_DISC:
        return space.d - 2
    if space.kind == R_BIMOD:
        return space.r + space.s
    if space.kind == R_PUNCT:
        return space.d - 1
    if space.kind in (C_ANNULUS, P_INTERP):
        return space.d
    if space.kind == R_CODISC:
        return 0
    raise ValueError(space.kind)


@dataclass(frozen=True, order=True)
class StratumLabel:
    """A codimension-1 boundary stratum: a family tag, the two factor
    spaces (outer listed first; endpoint strata have no factorization),
    and the attachment data."""

    family: str
    outer: Optional[SpaceId]
    inner: Optional[SpaceId]
    data: tuple = ()

    def dims(self) -> list[int]:
        out = []
        for f in (self.outer, self.inner):
            if f is not None:
                out.append(dimension(f))
        return out


def enumerate_codim1(space: SpaceId) -> list[StratumLabel]:
    """Complete duplicate-free list of codimension-1 boundary strata."""
    strata: list[StratumLabel] = []
    if space.kind == R_DISC:
        d = space.d
        for d2 in range(2, d):
            d1 = d + 1 - d2
            for k in range(0, d1):
                strata.append(StratumLabel("disc", disc(d1), disc(d2), (d1, d2, k)))
    elif space.kind == R_BIMOD:
        r, s = space.r, space.s
        for m in range(0, r):
            strata.append(StratumLabel("output1", disc(r - m + 1), bidisc(m, s), (m,)))
        for l in range(0, s):
            strata.append(StratumLabel("output2", disc(s - l + 1), bidisc(r, l), (l,)))
        for m in range(0, r + 1):
            for l in range(0, s + 1):
                if (m, l) == (0, 0):
                    continue
                strata.append(StratumLabel("middle", bidisc(r - m, s - l), disc(l + m + 1), (m, l)))
        for l in range(0, s + 1):
            for k in range(0, l + 1):
                if l - k >= 2:
                    strata.append(StratumLabel("right", bidisc(r, s - l + k + 1), disc(l - k), (k, l)))
        for m in range(0, r + 1):
            for k in range(0, m + 1):
                if m - k >= 2:
                    strata.append(StratumLabel("left", bidisc(r - m + k + 1, s), disc(m - k), (k, m)))
    elif space.kind == R_PUNCT:
        d = space.d
        for d2 in range(2, d + 1):
            d1 = d + 1 - d2
            for k in range(0, d1 - 1):
                strata.append(StratumLabel("inner", punctured_disc(d1), disc(d2), (d1, d2, k)))
            for k in range(0, d2):
                strata.append(StratumLabel("seam", punctured_disc(d1), disc(d2), (d1, d2, k)))
    elif space.kind == C_ANNULUS:
        d = space.d
        strata.append(StratumLabel("interior", CODISC, punctured_disc(d), ()))
        for r in range(0, d):
            for s in range(0, d - r):
                strata.append(StratumLabel("pair", disc(d - r - s + 1), bidisc(r, s), (r, s)))
        for d1 in range(1, d):
            for k in range(1, d1 + 1):
                strata.append(StratumLabel("bubble", annulus(d1), disc(d - d1 + 1), (d1, k)))
    elif space.kind == P_INTERP:
        d = space.d
        strata.append(StratumLabel("endpoint", None, None, (0,)))
        strata.append(StratumLabel("endpoint", None, None, (1,)))
        for d1 in range(1, d):
            for k in range(1, d1 + 1):
                strata.append(StratumLabel("bubble", interpolation(d1), disc(d - d1 + 1), (d1, k)))
    else:
        raise ValueError(f"no stratification for {space.kind}")
    return strata


def disc_facet_count_closed_form(d: int) -> int:
    """Number of facets of the d-input disc space, summed in closed form."""
    return sum(d - d2 + 1 for d2 in range(2, d))


# ---------------------------------------------------------------------------
# term enumerations for the supported equations


def ainf_terms(d: int, stable_only: bool = True) -> list[tuple]:
    """(d1, d2, k)-indices of the structure-relation terms at arity d."""
    out = []
    for d2 in range(1, d + 1):
        d1 = d + 1 - d2
        for k in range(0, d1):
            if stable_only and (d1 < 2 or d2 < 2):
                continue
            out.append((d1, d2, k))
    return out


def bimodule_hom_terms(r: int, s: int, stable_only: bool = True) -> list[tuple]:
    """Index data of the four-sum morphism-equation terms at window (r, s).

    Terms are tagged by their sum: ("target", m, l) for target-operation-
    outside terms (stable ones have the outer operation one-sided, since
    the mixed operations of a tensor-type target vanish), ("source", m, l)
    for source-operation-inside, ("right", k, l) and ("left", k, m) for
    the one-sided collapses.
    """
    out = []
    for m in range(0, r + 1):
        for l in range(0, s + 1):
            if stable_only:
                one_sided_stable = (l == s and m < r) or (m == r and l < s)
                if one_sided_stable:
                    out.append(("target", m, l))
            else:
                out.append(("target", m, l))
    for m in range(0, r + 1):
        for l in range(0, s + 1):
            if stable_only and (m, l) == (0, 0):
                continue
            out.append(("source", m, l))
    for l in range(0, s + 1):
        for k in range(0, l + 1):
            if l == k:
                continue
            if stable_only and l - k < 2:
                continue
            out.append(("right", k, l))
    for m in range(0, r + 1):
        for k in range(0, m + 1):
            if m == k:
                continue
            if stable_only and m - k < 2:
                continue
            out.append(("left", k, m))
    return out


def hochschild_terms(d: int, stable_only: bool = True) -> list[tuple]:
    """Index data of the cyclic-differential terms on words of length d.

    ("inplace", i, m): the block a_i..a_{i+m-1} away from the top slot;
    ("top", k, m): the block of length m containing the top letter with k
    letters wrapped past the seam (k = 0 is the non-wrapping top block).
    """
    out = []
    for m in range(1, d + 1):
        if stable_only and m < 2:
            continue
        for i in range(1, d - m + 1):
            out.append(("inplace", i, m))
        # blocks containing the top letter, by the wrapped length k
        # (k = 0 ends at the top without crossing the seam; for the full
        # word, m = d, the k > 0 entries are its cyclic rotations)
        for k in range(0, m):
            out.append(("top", k, m))
    return out


def homotopy_terms(d: int) -> list[tuple]:
    """Term groups of the four-term homotopy equation on length-d words.

    ("co_oc",): the closed-sector composite; ("pair", r, s): the window
    terms of the composition of the induced coproduct map with the
    collapse; ("bar", d1, k): the cyclic-differential terms feeding the
    homotopy, grouped so that all top-touching blocks of one length form
    the single group k = d1.  The differential-side term has no stable
    stratum and is listed by the bijection separately.
    """
    out = [("co_oc",)]
    for r in range(0, d):
        for s in range(0, d - r):
            out.append(("pair", r, s))
    for d1 in range(1, d):
        for k in range(1, d1 + 1):
            out.append(("bar", d1, k))
    return out


@dataclass
class BijectionReport:
    space: SpaceId
    equation: str
    pairs: list
    strip_terms: list = field(default_factory=list)
    mismatch: str = ""

    @property
    def passed(self) -> bool:
        return not self.mismatch

    def __str__(self):
        head = f"{self.space} <-> {self.equation}: "
        if not self.passed:
            return head + f"MISMATCH: {self.mismatch}"
        extra = f" (+{len(self.strip_terms)} strip-type terms)" if self.strip_terms else ""
        return head + f"{len(self.pairs)} strata matched{extra}"


def strata_term_bijection(space: SpaceId, equation: str) -> BijectionReport:
    """Explicit bijection between codimension-1 strata and stable equation
    terms; strip breakings (differential-type terms) are reported
    separately since they correspond to semistable degenerations."""
    if space.kind == R_DISC and equation == "ainf":
        strata = enumerate_codim1(space)
        terms = ainf_terms(space.d)
        smap = {lab.data: lab for lab in strata}
        if sorted(smap) != sorted(terms):
            return BijectionReport(space, equation, [], mismatch=f"{sorted(smap)} vs {sorted(terms)}")
        strips = [t for t in ainf_terms(space.d, stable_only=False) if t not in terms]
        return BijectionReport(space, equation, [(smap[t], t) for t in sorted(terms)], strip_terms=strips)

    if space.kind == R_BIMOD and equation == "bimodule_hom":
        strata = enumerate_codim1(space)
        terms = bimodule_hom_terms(space.r, space.s)
        family_of_tag = {"target": ("output1", "output2"), "source": ("middle",), "right": ("right",), "left": ("left",)}
        pairs = []
        used = set()
        for term in terms:
            tag = term[0]
            if tag == "target":
                m, l = term[1], term[2]
                fam, data = ("output1", (m,)) if l == space.s else ("output2", (l,))
            elif tag == "source":
                fam, data = "middle", (term[1], term[2])
            elif tag == "right":
                fam, data = "right", (term[1], term[2])
            else:
                fam, data = "left", (term[1], term[2])
            match = [lab for lab in strata if lab.family == fam and lab.data == data]
            if len(match) != 1:
                return BijectionReport(space, equation, [], mismatch=f"term {term} matched {len(match)} strata")
            pairs.append((match[0], term))
            used.add(match[0])
        if len(used) != len(strata):
            missing = [lab for lab in strata if lab not in used]
            return BijectionReport(space, equation, [], mismatch=f"unmatched strata {missing}")
        strips = [t for t in bimodule_hom_terms(space.r, space.s, stable_only=False) if t not in terms]
        return BijectionReport(space, equation, pairs, strip_terms=strips)

    if space.kind == R_PUNCT and equation == "hochschild":
        d = space.d
        strata = enumerate_codim1(space)
        terms = hochschild_terms(d)
        pairs = []
        used = set()
        for term in terms:
            if term[0] == "inplace":
                i, m = term[1], term[2]
                fam, data = "inner", (d - m + 1, m, i - 1)
            else:
                k, m = term[1], term[2]
                fam, data = "seam", (d - m + 1, m, k)
            match = [lab for lab in strata if lab.family == fam and lab.data == data]
            if len(match) != 1:
                return BijectionReport(space, equation, [], mismatch=f"term {term} matched {len(match)} strata")
            pairs.append((match[0], term))
            used.add(match[0])
        if len(used) != len(strata):
            return BijectionReport(space, equation, [], mismatch="unmatched strata remain")
        strips = [t for t in hochschild_terms(d, stable_only=False) if t not in terms]
        return BijectionReport(space, equation, pairs, strip_terms=strips)

    if space.kind == C_ANNULUS and equation == "homotopy":
        d = space.d
        strata = enumerate_codim1(space)
        terms = homotopy_terms(d)
        pairs = []
        used = set()
        for term in terms:
            if term[0] == "co_oc":
                match = [lab for lab in strata if lab.family == "interior"]
            elif term[0] == "pair":
                match = [lab for lab in strata if lab.family == "pair" and lab.data == (term[1], term[2])]
            else:
                match = [lab for lab in strata if lab.family == "bubble" and lab.data == (term[1], term[2])]
            if len(match) != 1:
                return BijectionReport(space, equation, [], mismatch=f"term {term} matched {len(match)} strata")
            pairs.append((match[0], term))
            used.add(match[0])
        if len(used) != len(strata):
            return BijectionReport(space, equation, [], mismatch="unmatched strata remain")
        # the mu^1 o H term is strip-type; note it for the reader
        return BijectionReport(space, equation, pairs, strip_terms=[("differential",)])

    raise ValueError(f"unsupported pairing ({space.kind}, {equation})")


# ---------------------------------------------------------------------------
# sign formula evaluators (the recorded orientation comparisons)


def _parity_sign(parity: int) -> int:
    return -1 if parity % 2 else 1


def sign_formula(tag: str, **kw) -> int:
    """Evaluate one of the recorded orientation-comparison parities.

    Tags and their keyword arguments:

    * dagger(degrees): sum of k * deg(x_k) over the inputs of a product
    * ddagger(left, module, right): the two-output operation twist
    * diamond(degrees, r, s, n): the splitting sign of the induced map
      on cyclic chains in the cross-term convention (the chain-level
      engine uses the oracle-corrected variant documented in the
      cyclic-complex module)
    * circ(p, q, letters): the reorder sign of the two output factors
    * oc(degrees): deg(x_d) + dagger
    * f(degrees, r, s, n, p, q): deg(x_d) + dagger_1 + ddagger_2 + circ
      + diamond for the glued-composition count
    * cardy_global(n): (-1)^(n(n+1)/2)
    * delta_chain_1(module): deg of the input, the first chain-map check
    * delta_chain_2(module, n): deg + n + 1, the second one
    * oc_check(x1): 1 + deg(x_1), the single-input seam check
    """
    if tag == "dagger":
        degs = list(kw["degrees"])
        return _parity_sign(sum((k + 1) * x for k, x in enumerate(degs)))
    if tag == "ddagger":
        left = list(kw["left"])
        right = list(kw["right"])
        module = kw["module"]
        s = len(right)
        parity = sum((s - j) * x for j, x in enumerate(right))
        parity += s * module
        parity += sum((j + 1 + s) * x for j, x in enumerate(left))
        return _parity_sign(parity)
    if tag == "diamond":
        degs = list(kw["degrees"])
        r, s, n = kw["r"], kw["s"], kw["n"]
        d = len(degs)
        red = [x + 1 for x in degs]
        m1r = sum(red[:r])
        parity = m1r * (1 + sum(red[r:d])) + n * sum(red[r : d - s - 1])
        return _parity_sign(parity)
    if tag == "circ":
        letters = list(kw.get("letters", []))
        parity = kw["q"] * (kw["p"] + sum(x + 1 for x in letters))
        return _parity_sign(parity)
    if tag == "oc":
        degs = list(kw["degrees"])
        return _parity_sign(degs[-1]) * sign_formula("dagger", degrees=degs)
    if tag == "f":
        part = sign_formula("dagger", degrees=kw["degrees_product"])
        part *= sign_formula(
            "ddagger", left=kw["left"], module=kw["module"], right=kw["right"]
        )
        part *= sign_formula("circ", p=kw["p"], q=kw["q"], letters=kw.get("letters", []))
        part *= sign_formula("diamond", degrees=kw["degrees"], r=kw["r"], s=kw["s"], n=kw["n"])
        return _parity_sign(kw["degrees"][-1]) * part
    if tag == "cardy_global":
        n = kw["n"]
        return _parity_sign(n * (n + 1) // 2)
    if tag == "delta_chain_1":
        return _parity_sign(kw["module"])
    if tag == "delta_chain_2":
        return _parity_sign(kw["module"] + kw["n"] + 1)
    if tag == "oc_check":
        return _parity_sign(1 + kw["x1"])
    raise ValueError(f"unknown sign formula tag {tag}")
