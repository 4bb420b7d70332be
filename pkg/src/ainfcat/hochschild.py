"""The length-filtered cyclic bar complex and maps out of it.

Cyclic words
------------
A cyclic word is a boundary-ordered tuple (a_1, ..., a_d) of composable
generators closing up (target of a_d = source of a_1).  The last slot is
distinguished: it carries plain degree while the others carry the bar
shift, so the integer grading is deg(a_d) + sum_{i<d} (deg(a_i) - 1).
Words are not identified under rotation.

The differential applies an operation to every cyclically consecutive
block exactly once:

* blocks not crossing the seam between a_1 and a_d are replaced in
  place (the output lands in the distinguished slot when the block ends
  there), with sign (-1)^(1 + sum of reduced degrees of the letters
  below); in particular b on a single letter is minus the differential;
* blocks containing the seam (nonempty high part a_hi..a_d and nonempty
  low part a_1..a_lo, allowing the full rotated word) produce the output
  in the distinguished slot of the shortened word, with sign
  (-1)^(1 + rsum(1,lo) * rsum(lo+1,d) + rsum(lo+1,hi-1))
  where rsum(i,j) sums reduced degrees of a_i..a_j: the Koszul cost
  of rotating the low part past everything else, plus the usual
  below-the-output-slot sum over the surviving letters.

Up to the global sign this is the unique rule (over a twelve-parameter
family of parity formulas) satisfying b^2 = 0 on words of length <= 4
over all shipped fixtures including the ones with nonzero differential,
together with agreement with the classical cyclic differential on
strictly associative fixtures; the test suite re-asserts b^2 = 0 at
length <= 5.  The global sign is pinned by requiring the induced map of
a bimodule morphism on cyclic chains to commute with the differentials
through (-1)^n, which fails for the opposite choice.

The induced map of a bimodule morphism on cyclic chains consumes, for
each splitting (r, s), the cyclic block of s letters below the seam, the
top letter, and r letters above it, reorders the two output factors
around the surviving letters, and carries the sign parity

    rsum(1,r) * rsum(r+1,d) + n * rsum(r+1,d-s-1)
      + rsum(r+1,d-1) + deg(p_out) * (deg(q_out) + rsum(r+1,d-s-1))

(p_out the hom(K, -) factor, q_out the hom(-, K) one).  This is the
unique parity rule in a twelve-feature family making the induced map
commute with the differentials through (-1)^n across twenty-one
independently solved morphisms over six fixture/degree combinations;
the global constant, invisible to the commutation rule, is fixed so
single-letter words map with sign +1.
"""

from __future__ import annotations

from dataclasses import dataclass


from .bimodules import BimoduleHom, DiagonalBimodule, TensorBimodule, TensorWord
from .complexes import BasedComplex, GradedMap, verify_chain_map
from .core import AinfCategory, chain_add, chain_normalize, cyclic_tuples, rdeg
from .intlinalg import FinAbGroup

CyclicWord = tuple  # tuple[Gen, ...] in boundary order, distinguished slot last


class ChainMapViolation(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def word_degree(word: CyclicWord) -> int:
    if not word:
        raise ValueError("empty cyclic word")
    return word[-1].degree + sum(g.degree - 1 for g in word[:-1])


def is_cyclic(word: CyclicWord) -> bool:
    from .core import is_composable

    return bool(word) and is_composable(word) and word[-1].target == word[0].source


def bar_differential(cat: AinfCategory, word: CyclicWord) -> dict:
    """Hochschild differential of one cyclic word; never increases length."""
    d = len(word)
    out: dict = {}
    red = [rdeg(g) for g in word]

    def rsum(i, j):  # sum of reduced degrees of a_i..a_j, 1-indexed inclusive
        return sum(red[i - 1 : j])

    # non-wrapping blocks a_i..a_{i+m-1}
    below = 0
    for i in range(1, d + 1):
        sign = 1 if below % 2 else -1  # (-1)^(below + 1)
        for j in range(i, d + 1):
            inner = cat.mu_key(word[i - 1 : j])
            if inner:
                for g, c in inner.items():
                    new = word[: i - 1] + (g,) + word[j:]
                    chain_add(out, {new: sign * c})
        below += red[i - 1]

    # wrapping blocks (a_hi..a_d, a_1..a_lo); output goes to the last slot
    for lo in range(1, d):
        for hi in range(lo + 1, d + 1):
            block = word[hi - 1 :] + word[:lo]
            inner = cat.mu_key(block)
            if not inner:
                continue
            parity = rsum(1, lo) * rsum(lo + 1, d) + rsum(lo + 1, hi - 1) + 1
            sign = -1 if parity % 2 else 1
            for g, c in inner.items():
                new = word[lo : hi - 1] + (g,)
                chain_add(out, {new: sign * c})

    return chain_normalize(out, cat.ring)


def truncated_cc(cat: AinfCategory, max_length: int) -> BasedComplex:
    """The cyclic bar complex truncated to words of length <= max_length."""
    basis: dict[int, list] = {}
    for d in range(1, max_length + 1):
        for word in cyclic_tuples(cat, d):
            basis.setdefault(word_degree(word), []).append(word)
    for k in basis:
        basis[k].sort()
    cx = BasedComplex(basis, lambda w: bar_differential(cat, w), ring=cat.ring)
    cx.validate()
    return cx


@dataclass
class HochschildResult:
    groups: dict[int, FinAbGroup]
    stable: dict[int, bool]
    max_length: int


def _iso_under_inclusion(small: BasedComplex, big: BasedComplex, k: int) -> bool:
    """Does the inclusion of the shorter truncation induce an iso at degree k?"""
    if small.ring == "F2":
        return small.homology(k) == big.homology(k)
    hs = small.homology_data(k)
    hb = big.homology_data(k)
    if hs.group != hb.group:
        return False
    # surjectivity of the induced map between abstractly isomorphic finitely
    # generated groups implies bijectivity
    small_basis = small.basis.get(k, [])
    image_coords = []
    for gen_vec in hs.class_generators():
        chain = {label: c for label, c in zip(small_basis, gen_vec) if c}
        image_coords.append(hb.coords(big.vector(chain, k)))
    return _spans(image_coords, hb)


def _spans(coord_list, hd) -> bool:
    from .intlinalg import IntMatrix, smith_normal_form

    moduli = [m for m in hd._moduli if m != 1]
    if not moduli:
        return True
    cols = [list(c) for c in coord_list]
    for i, m in enumerate(moduli):
        if m:
            e = [0] * len(moduli)
            e[i] = m
            cols.append(e)
    if not cols:
        return False
    mat = IntMatrix(tuple(tuple(col[i] for col in cols) for i in range(len(moduli))), cols=len(cols))
    return all(x == 1 for x in smith_normal_form(mat).diagonal()[: len(moduli)])


def hochschild_homology(cat: AinfCategory, max_length: int, degrees=None) -> HochschildResult:
    """Homology of the truncated cyclic bar complex with stabilization flags.

    The flag at degree k records whether the inclusion of the (N-1)-
    truncation induces an isomorphism there; it is a heuristic for
    stabilization, never a convergence claim.
    """
    big = truncated_cc(cat, max_length)
    small = truncated_cc(cat, max_length - 1) if max_length >= 1 else big
    if degrees is None:
        degs = sorted(set(big.degrees()) | set(small.degrees()))
    else:
        degs = list(degrees)
    groups = {}
    stable = {}
    for k in degs:
        groups[k] = big.homology(k)
        stable[k] = _iso_under_inclusion(small, big, k)
    return HochschildResult(groups=groups, stable=stable, max_length=max_length)


# ---------------------------------------------------------------------------
# the induced map of the coproduct-type morphism on cyclic chains


def cc_of_delta_word(phi: BimoduleHom, word: CyclicWord) -> dict:
    """Image of one cyclic word under the morphism-induced map on chains.

    phi must go from the diagonal bimodule to a tensor bimodule
    Y^l (x) Y^r; the output lives in the bar model of Y^r (x)_B Y^l, as
    TensorWord chains.
    """
    d = len(word)
    n = phi.n
    red = [rdeg(g) for g in word]

    def rsum(i, j):
        return sum(red[i - 1 : j])

    out: dict = {}
    for s in range(0, d):
        for r in range(0, d - s):
            # block: s letters below the seam, the top letter, r letters above
            key = word[d - 1 - s : d] + word[:r]
            mid = word[r : d - 1 - s]
            comp = phi.apply(key, s)
            if not comp:
                continue
            # rotation cost of the left window past everything above it,
            # the degree-n morphism passing the surviving letters, and the
            # below-the-slot sum over all letters between the windows
            diamond = (
                rsum(1, r) * rsum(r + 1, d)
                + n * rsum(r + 1, d - s - 1)
                + rsum(r + 1, d - 1)
            )
            for pg, c in comp.items():
                # pg.p is the hom(K, L_r) factor, pg.q the hom(L_{d-s-1}, K)
                # one; the reorder sign moves pg.p past the letters and pg.q
                circ = pg.p.degree * (pg.q.degree + rsum(r + 1, d - s - 1))
                parity = diamond + circ
                sign = -1 if parity % 2 else 1
                chain_add(out, {TensorWord(pg.p, mid, pg.q): sign * c})
    return chain_normalize(out, phi.source.cat.ring)


def cc_of_delta(phi: BimoduleHom, cc: BasedComplex, tensor_cx: BasedComplex) -> GradedMap:
    """The chain map induced on cyclic chains, verified before returning.

    Raises ChainMapViolation with a witness word if the degree-n
    commutation rule fails on any word of the truncation.
    """
    if not isinstance(phi.target, TensorBimodule):
        raise TypeError("the induced map needs a tensor-bimodule target")
    if not isinstance(phi.source, DiagonalBimodule):
        raise TypeError("the induced map needs the diagonal bimodule as source")
    f = GradedMap(
        source=cc,
        target=tensor_cx,
        shift=phi.n,
        apply=lambda w: cc_of_delta_word(phi, w),
        name="CC(morphism)",
    )
    report = verify_chain_map(f)
    if not report.passed:
        bad = report.violations[0]
        raise ChainMapViolation(f"induced map fails to be a chain map on {bad.inputs[0]!r}", witness=bad.inputs[0])
    return f
