"""Modules and bimodules over an A-infinity category.

Element and ordering conventions
--------------------------------
All inputs are kept in boundary order (first-composed first).  A bimodule
operation takes the tuple

    (b_s, ..., b_1, m, a_1, ..., a_r)        module element m at index s,

so the whole tuple is head-to-tail composable, with output endpoints
(first source, last target).  A left-module element of M(L) has target L
(like hom(K, L)); a right-module element of M(L) has source L.  The sign
bookkeeping assigns elements an *order degree*: reduced degree deg+1 for
category generators, plain degree for module elements.

Quadratic equations
-------------------
verify_bimodule checks, for every composable mixed tuple, a single
uniform rule (equivalent to the usual three-family presentation by the
block's position): each consecutive block contributes the term

    (-1)^(sum of order degrees strictly below the block)
        * op(..., inner(block), ...)

where inner is the bimodule operation if the block contains the module
slot and the category operation otherwise.  verify_bimodule_hom does the
same for a degree-n morphism, with the inner-is-morphism terms weighted
by (-1)^(n * below) and all other terms by (-1)^(below + n + 1).

The tensor-over-the-category complex of a right module R and left module
L has words (q, a_1, ..., a_d, p) in boundary order (the reverse of the
usual written order p (x) a_d (x) ... (x) q), integer grading
deg(q) + sum(deg(a_i) - 1) + deg(p), and the three-family differential
whose sign on a block is (-1)^(order degrees strictly below), with q and
p carrying plain degree.  Its exact d^2 = 0 is the package's strongest
sign-consistency check and is asserted for every shipped fixture.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .complexes import BasedComplex, GradedMap
from .core import (
    AinfCategory,
    Gen,
    NonComposable,
    VerificationReport,
    Violation,
    chain_add,
    chain_normalize,
    is_composable,
    rdeg,
)

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True, order=True)
class PairGen:
    """Basis element p (x) q of the tensor bimodule Y^l (x) Y^r.

    p lies in hom(K, L) and q in hom(L_bar, K); as a bimodule element the
    pair runs from L_bar to L and has the sum degree.
    """

    p: Gen
    q: Gen

    @property
    def source(self) -> str:
        return self.q.source

    @property
    def target(self) -> str:
        return self.p.target

    @property
    def degree(self) -> int:
        return self.p.degree + self.q.degree

    def __repr__(self):
        return f"({self.p.name}(x){self.q.name})[{self.source}->{self.target};{self.degree}]"


def order_degree(x, is_module: bool) -> int:
    return x.degree if is_module else rdeg(x)


# ---------------------------------------------------------------------------
# one-sided modules


class SideModule:
    """A left or right module presented by action tables.

    Action keys are boundary tuples with the module element first (left
    modules) or last (right modules); arity counts category inputs only,
    so arity 0 is the module differential.
    """

    def __init__(self, cat: AinfCategory, side: str, spaces: dict[str, list], actions: dict[int, dict]):
        if side not in (LEFT, RIGHT):
            raise ValueError(side)
        self.cat = cat
        self.side = side
        self.spaces = {obj: list(v) for obj, v in spaces.items()}
        self.actions = actions
        self._check()

    def _check(self):
        for obj, elems in self.spaces.items():
            for m in elems:
                ok = m.target == obj if self.side == LEFT else m.source == obj
                if not ok:
                    raise ValueError(f"module element {m} not attached to object {obj}")
        for arity, table in self.actions.items():
            for key, out in table.items():
                if len(key) != arity + 1:
                    raise ValueError("action key length mismatch")
                if not is_composable(key):
                    raise NonComposable(f"action key {key}")
                want = 1 - arity + sum(x.degree for x in key)
                for og, c in out.items():
                    if og.degree != want:
                        raise ValueError(f"action output degree {og.degree}, expected {want}")

    def module_index(self, arity: int) -> int:
        return 0 if self.side == LEFT else arity

    def act(self, key: tuple) -> dict:
        """Action on one boundary tuple (module element included)."""
        table = self.actions.get(len(key) - 1, {})
        return chain_normalize(dict(table.get(key, {})), self.cat.ring)

    def basis(self, obj: str) -> list:
        return self.spaces.get(obj, [])


class YonedaModule(SideModule):
    """hom(K, -) as a left module or hom(-, K) as a right module.

    Elements are the hom generators themselves.  The actions are the
    structure maps of the category *with the signs of the diagonal
    bimodule restricted to one side*: the left action is minus the
    structure map, the right action carries (-1)^(1 + sum of reduced
    degrees of the category inputs).  The unsigned maps do not satisfy
    the module equations (d^2 on the bar complex fails); the signed ones
    do, and in particular the module differential is -mu^1.
    """

    def __init__(self, cat: AinfCategory, K: str, side: str, objects=None):
        if K not in cat.objects:
            raise KeyError(f"unknown object {K}")
        self.K = K
        spaces = {}
        for L in objects if objects is not None else cat.objects:
            pair = (K, L) if side == LEFT else (L, K)
            spaces[L] = list(cat.hom.get(pair, []))
        super().__init__(cat, side, spaces, actions={})

    def act(self, key: tuple) -> dict:
        if self.side == LEFT:
            parity = 1
        else:
            parity = 1 + sum(rdeg(x) for x in key[:-1])
        sign = -1 if parity % 2 else 1
        return chain_normalize(
            {g: sign * c for g, c in self.cat.mu_key(key).items()}, self.cat.ring
        )


def yoneda_module(cat: AinfCategory, K: str, side: str, objects=None) -> SideModule:
    """hom(K, -) or hom(-, K), optionally restricted to a subset of objects."""
    return YonedaModule(cat, K, side, objects=objects)


# ---------------------------------------------------------------------------
# bimodules


class Bimodule:
    """Base bimodule interface: spaces plus one operation per (r, s)."""

    def __init__(self, cat: AinfCategory):
        self.cat = cat

    def basis(self, source_obj: str, target_obj: str) -> list:
        raise NotImplementedError

    def op(self, key: tuple, s: int) -> dict:
        """Operation on a boundary tuple whose module slot sits at index s."""
        raise NotImplementedError

    def elements(self) -> Iterator:
        for pair in sorted(self.space_pairs()):
            yield from self.basis(*pair)

    def space_pairs(self) -> list[tuple[str, str]]:
        objs = self.cat.objects
        return [(a, b) for a in objs for b in objs]


class DiagonalBimodule(Bimodule):
    """The category acting on its own hom spaces by signed higher products.

    op^{r|1|s} = (-1)^(1 + sum of reduced degrees of the s right inputs)
    times the (r+s+1)-ary structure map on the same boundary tuple.
    """

    def basis(self, source_obj, target_obj):
        return self.cat.hom.get((source_obj, target_obj), [])

    def op(self, key: tuple, s: int) -> dict:
        parity = 1 + sum(rdeg(x) for x in key[:s])
        sign = -1 if parity % 2 else 1
        return chain_normalize({g: sign * c for g, c in self.cat.mu_key(key).items()}, self.cat.ring)


def diagonal_bimodule(cat: AinfCategory) -> Bimodule:
    return DiagonalBimodule(cat)


class TensorBimodule(Bimodule):
    """Y^l_K (x) Y^r_K with operations vanishing unless r = 0 or s = 0."""

    def __init__(self, left: SideModule, right: SideModule):
        if left.side != LEFT or right.side != RIGHT:
            raise ValueError("expected a (left, right) pair of modules")
        if left.cat is not right.cat:
            raise ValueError("modules over different categories")
        super().__init__(left.cat)
        self.left = left
        self.right = right

    def basis(self, source_obj, target_obj):
        return [
            PairGen(p, q)
            for p in self.left.basis(target_obj)
            for q in self.right.basis(source_obj)
        ]

    def op(self, key: tuple, s: int) -> dict:
        m = key[s]
        if not isinstance(m, PairGen):
            raise TypeError(f"module slot holds {m!r}")
        r = len(key) - 1 - s
        out: dict = {}
        if r == 0:
            # the right module acts on the q factor; p rides along untouched
            for g, c in self.right.act(key[:s] + (m.q,)).items():
                chain_add(out, {PairGen(m.p, g): c})
        if s == 0:
            # the left module acts on p; the odd operator passes q first
            sign = -1 if m.q.degree % 2 else 1
            for g, c in self.left.act((m.p,) + key[1:]).items():
                chain_add(out, {PairGen(g, m.q): sign * c})
        return chain_normalize(out, self.cat.ring)


def tensor_bimodule(left: SideModule, right: SideModule) -> Bimodule:
    return TensorBimodule(left, right)


class TableBimodule(Bimodule):
    """Bimodule presented by explicit operation tables (user-loaded data).

    `ops[(r, s)]` maps boundary tuples (module slot at index s) to output
    chains of module elements.
    """

    def __init__(self, cat: AinfCategory, spaces: dict[tuple[str, str], list], ops: dict[tuple[int, int], dict]):
        super().__init__(cat)
        self.spaces = {k: list(v) for k, v in spaces.items()}
        self.ops = ops
        for (r, s), table in ops.items():
            for key, out in table.items():
                if len(key) != r + s + 1:
                    raise ValueError("op key length mismatch")
                if not is_composable(key):
                    raise NonComposable(f"op key {key}")
                want = 1 - (r + s) + sum(x.degree for x in key)
                for og, c in out.items():
                    if og.degree != want:
                        raise ValueError(f"op output degree {og.degree}, expected {want}")

    def basis(self, source_obj, target_obj):
        return self.spaces.get((source_obj, target_obj), [])

    def op(self, key: tuple, s: int) -> dict:
        r = len(key) - 1 - s
        table = self.ops.get((r, s), {})
        return chain_normalize(dict(table.get(key, {})), self.cat.ring)


def with_negated_bimodule_term(P: TableBimodule, r: int, s: int, key: tuple, out):
    ops = {rs: {k: dict(v) for k, v in t.items()} for rs, t in P.ops.items()}
    ops[(r, s)][key][out] = -ops[(r, s)][key][out]
    return TableBimodule(P.cat, P.spaces, ops)


# ---------------------------------------------------------------------------
# tuple enumeration


def mixed_tuples(cat: AinfCategory, P: Bimodule, r: int, s: int) -> Iterator[tuple]:
    """Composable boundary tuples with s right inputs, module, r left inputs."""
    gens = list(cat.generators())
    by_source: dict[str, list[Gen]] = {}
    for g in gens:
        by_source.setdefault(g.source, []).append(g)

    def chains(length: int, start: str | None) -> Iterator[tuple]:
        if length == 0:
            yield ()
            return
        pool = gens if start is None else by_source.get(start, [])
        for g in pool:
            for rest in chains(length - 1, g.target):
                yield (g,) + rest

    for right_part in chains(s, None):
        start = right_part[-1].target if right_part else None
        for pair in sorted(P.space_pairs()):
            if start is not None and pair[0] != start:
                continue
            for m in P.basis(*pair):
                for left_part in chains(r, m.target):
                    yield right_part + (m,) + left_part


# ---------------------------------------------------------------------------
# the bimodule quadratic equation


def bimodule_residual(P: Bimodule, key: tuple, s: int) -> dict:
    cat = P.cat
    n_total = len(key)
    out: dict = {}
    below = 0
    for i in range(n_total):
        for j in range(i + 1, n_total + 1):
            block = key[i:j]
            sign = -1 if below % 2 else 1
            if i <= s < j:
                inner = P.op(block, s - i)
                new_s = i
            else:
                inner = cat.mu_key(block)
                new_s = s - len(block) + 1 if j <= s else s
            if not inner:
                continue
            for g, c in inner.items():
                outer_key = key[:i] + (g,) + key[j:]
                chain_add(out, P.op(outer_key, new_s), sign * c)
        below += order_degree(key[i], is_module=(i == s))
    return chain_normalize(out, cat.ring)


def verify_bimodule(P: Bimodule, max_inputs: int = 4) -> VerificationReport:
    """Check the quadratic equation on all tuples with r + s <= max_inputs."""
    violations = []
    checked = 0
    for total in range(0, max_inputs + 1):
        for s in range(0, total + 1):
            r = total - s
            for key in mixed_tuples(P.cat, P, r, s):
                checked += 1
                res = bimodule_residual(P, key, s)
                if res:
                    violations.append(Violation(key, res))
    return VerificationReport(checked=checked, violations=violations)


# ---------------------------------------------------------------------------
# bimodule homomorphisms


@dataclass
class BimoduleHom:
    """A degree-n morphism of bimodules, given by component tables.

    `components[(r, s)]` maps boundary tuples (module slot at index s) to
    chains of target-bimodule elements; the output of a component on a
    tuple of total plain degree D has degree D + n - (r + s).
    """

    source: Bimodule
    target: Bimodule
    n: int
    components: dict[tuple[int, int], dict] = field(default_factory=dict)

    def __post_init__(self):
        if self.source.cat is not self.target.cat:
            raise ValueError("source and target live over different categories")
        for (r, s), table in self.components.items():
            for key, out in table.items():
                if len(key) != r + s + 1:
                    raise ValueError("component key length mismatch")
                want = self.n - (r + s) + sum(x.degree for x in key)
                for og, c in out.items():
                    if og.degree != want:
                        raise ValueError(
                            f"component output degree {og.degree}, expected {want} on {key}"
                        )

    def apply(self, key: tuple, s: int) -> dict:
        r = len(key) - 1 - s
        table = self.components.get((r, s), {})
        return chain_normalize(dict(table.get(key, {})), self.source.cat.ring)


def identity_hom(P: Bimodule) -> BimoduleHom:
    table = {(g,): {g: 1} for g in P.elements()}
    return BimoduleHom(source=P, target=P, n=0, components={(0, 0): table})


def hom_residual(phi: BimoduleHom, key: tuple, s: int) -> dict:
    """The four-sum morphism equation on one input tuple."""
    cat = phi.source.cat
    n = phi.n
    n_total = len(key)
    out: dict = {}
    below = 0
    for i in range(n_total):
        for j in range(i + 1, n_total + 1):
            block = key[i:j]
            if i <= s < j:
                new_s = i
                # morphism inside, target operation outside
                parity = n * below
                sign = -1 if parity % 2 else 1
                for g, c in phi.apply(block, s - i).items():
                    outer_key = key[:i] + (g,) + key[j:]
                    chain_add(out, phi.target.op(outer_key, new_s), sign * c)
                # source operation inside, morphism outside
                parity = below + n + 1
                sign = -1 if parity % 2 else 1
                for g, c in phi.source.op(block, s - i).items():
                    outer_key = key[:i] + (g,) + key[j:]
                    chain_add(out, phi.apply(outer_key, new_s), sign * c)
            else:
                new_s = s - len(block) + 1 if j <= s else s
                parity = below + n + 1
                sign = -1 if parity % 2 else 1
                for g, c in cat.mu_key(block).items():
                    outer_key = key[:i] + (g,) + key[j:]
                    chain_add(out, phi.apply(outer_key, new_s), sign * c)
        below += order_degree(key[i], is_module=(i == s))
    return chain_normalize(out, cat.ring)


def verify_bimodule_hom(phi: BimoduleHom, max_inputs: int = 4) -> VerificationReport:
    violations = []
    checked = 0
    for total in range(0, max_inputs + 1):
        for s in range(0, total + 1):
            r = total - s
            for key in mixed_tuples(phi.source.cat, phi.source, r, s):
                checked += 1
                res = hom_residual(phi, key, s)
                if res:
                    violations.append(Violation(key, res))
    return VerificationReport(checked=checked, violations=violations)


# ---------------------------------------------------------------------------
# tensor product over the category


@dataclass(frozen=True, order=True)
class TensorWord:
    """Basis word of R (x)_B L, stored in boundary order (q, a_1..a_d, p)."""

    q: Gen
    mid: tuple[Gen, ...]
    p: Gen

    @property
    def length(self) -> int:
        return len(self.mid)

    @property
    def degree(self) -> int:
        return self.q.degree + sum(a.degree - 1 for a in self.mid) + self.p.degree

    def __repr__(self):
        letters = ",".join(g.name for g in self.mid)
        return f"<{self.q.name}|{letters}|{self.p.name}>"


def tensor_words(R: SideModule, L: SideModule, max_length: int) -> list[TensorWord]:
    """All words (q, letters, p); letters stay between the modules' objects."""
    cat = R.cat
    allowed = set(R.spaces) & set(L.spaces)
    by_source: dict[str, list[Gen]] = {}
    for g in cat.generators():
        if g.source in allowed and g.target in allowed:
            by_source.setdefault(g.source, []).append(g)
    words = []
    for obj in sorted(L.spaces):
        for q in L.basis(obj):
            stack = [(q, ())]
            while stack:
                q0, mid = stack.pop()
                tail = mid[-1].target if mid else q0.target
                for p in R.basis(tail):
                    words.append(TensorWord(q0, mid, p))
                if len(mid) < max_length:
                    for g in by_source.get(tail, []):
                        stack.append((q0, mid + (g,)))
    return sorted(words)


def tensor_differential(R: SideModule, L: SideModule, word: TensorWord) -> dict:
    """Differential of the tensor-over-the-category complex on one word."""
    cat = R.cat
    q, mid, p = word.q, word.mid, word.p
    d = len(mid)
    out: dict = {}
    # prefix blocks: left action swallowing (q, a_1..a_l); no sign
    for l in range(0, d + 1):
        for g, c in L.act((q,) + mid[:l]).items():
            chain_add(out, {TensorWord(g, mid[l:], p): c})
    # suffix and interior blocks carry (-1)^(deg q + reduced degrees below)
    below = q.degree
    for i in range(0, d + 1):
        sign = -1 if below % 2 else 1
        # suffix: right action swallowing (a_{i+1}..a_d, p)
        for g, c in R.act(mid[i:] + (p,)).items():
            chain_add(out, {TensorWord(q, mid[:i], g): sign * c})
        # interior blocks starting at i+1
        for j in range(i + 1, d + 1):
            for g, c in cat.mu_key(mid[i:j]).items():
                chain_add(out, {TensorWord(q, mid[:i] + (g,) + mid[j:], p): sign * c})
        if i < d:
            below += rdeg(mid[i])
    return chain_normalize(out, cat.ring)


def tensor_over_category(R: SideModule, L: SideModule, max_length: int) -> BasedComplex:
    """The length-filtered bar-type complex computing R (x)_B L.

    Raises on d^2 != 0, which would signal inconsistent module data.
    """
    if R.side != RIGHT or L.side != LEFT:
        raise ValueError("expected (right, left) module pair")
    if R.cat is not L.cat:
        raise ValueError("modules over different categories")
    basis: dict[int, list] = {}
    for w in tensor_words(R, L, max_length):
        basis.setdefault(w.degree, []).append(w)
    cx = BasedComplex(basis, lambda w: tensor_differential(R, L, w), ring=R.cat.ring)
    cx.validate()
    return cx


def mu_composition_word(cat: AinfCategory, word: TensorWord) -> dict:
    """Chain-level composition into hom(K, K): full collapse of one word."""
    parity = word.q.degree + sum(rdeg(a) for a in word.mid)
    sign = -1 if parity % 2 else 1
    key = (word.q,) + word.mid + (word.p,)
    return chain_normalize({g: sign * c for g, c in cat.mu_key(key).items()}, cat.ring)


def hom_complex(cat: AinfCategory, source_obj: str, target_obj: str) -> BasedComplex:
    """hom(source, target) as a complex with the module-convention
    differential -mu^1 (the diagonal bimodule acting on itself).

    With this convention the full-collapse composition map out of the
    tensor complex is an honest degree-0 chain map; with +mu^1 it would
    anticommute.  Homology is unaffected by the global sign.
    """
    basis: dict[int, list] = {}
    for g in cat.hom.get((source_obj, target_obj), []):
        basis.setdefault(g.degree, []).append(g)
    for k in basis:
        basis[k].sort()
    return BasedComplex(
        basis,
        lambda g: {h: -c for h, c in cat.mu_key((g,)).items()},
        ring=cat.ring,
    )


def mu_composition_map(cat: AinfCategory, K: str, tensor_cx: BasedComplex) -> GradedMap:
    hom_cx = hom_complex(cat, K, K)
    return GradedMap(
        source=tensor_cx,
        target=hom_cx,
        shift=0,
        apply=lambda w: mu_composition_word(cat, w),
        name="mu",
    )
