"""Chain-level verification of the open/closed consistency square.

Given chain data for the open-to-closed and closed-to-open maps (the
engine never constructs these from geometry), verify the four-term
homotopy identity

    (-1)^n mu^1(H(w)) + H(b(w)) + mu(CC(phi)(w)) - CO(OC(w)) = 0

on every cyclic word of the truncation, optionally solving the integer
linear system for the homotopy H, and compare the two induced
compositions on truncated homology up to the global sign
(-1)^(n(n+1)/2).  mu^1 in the identity is the bare structure map; the
complexes' own differentials keep the module conventions documented
elsewhere.

All checks are exact; there are no tolerances anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .bimodules import BimoduleHom, hom_complex, mu_composition_map
from .complexes import BasedComplex, GradedMap, VerificationReport, Violation, compose, verify_chain_map
from .core import AinfCategory, chain_add, chain_normalize
from .hochschild import bar_differential, cc_of_delta
from .intlinalg import IntMatrix, RationalOnly, Unsolvable, solve_integer


class NoSolution:
    def __repr__(self):
        return "NoSolution"


class NoIntegralSolution:
    def __repr__(self):
        return "NoIntegralSolution"


NO_SOLUTION = NoSolution()
NO_INTEGRAL_SOLUTION = NoIntegralSolution()


@dataclass
class OpenClosedData:
    """User-supplied closed-sector complex and the two connecting maps.

    `oc` maps the cyclic complex to the closed complex with degree shift
    n; `co` maps the closed complex to the endomorphism complex of K with
    shift 0.  Both are verified to be chain maps on construction.
    """

    cat: AinfCategory
    K: str
    n: int
    closed: BasedComplex
    oc: GradedMap
    co: GradedMap

    def __post_init__(self):
        if self.oc.shift != self.n:
            raise ValueError(f"open-to-closed map must shift degree by n = {self.n}")
        if self.co.shift != 0:
            raise ValueError("closed-to-open map must preserve degree")
        for name, f in (("open-to-closed", self.oc), ("closed-to-open", self.co)):
            report = verify_chain_map(f)
            if not report.passed:
                raise ValueError(f"{name} map is not a chain map: {report.violations[0]}")


@dataclass
class HomotopyWitness:
    """Components of the degree n-1 correction map on cyclic words."""

    table: dict = field(default_factory=dict)  # word -> chain in hom(K, K)

    def chain(self, word) -> Mapping:
        return self.table.get(word, {})


def _homotopy_residual(data: OpenClosedData, mu_cc: GradedMap, H: HomotopyWitness, word) -> dict:
    cat = data.cat
    n = data.n
    out: dict = {}
    sign = -1 if n % 2 else 1
    chain_add(out, cat.mu_boundary([H.chain(word)]), sign)
    for w1, c in bar_differential(cat, word).items():
        chain_add(out, H.chain(w1), c)
    chain_add(out, mu_cc.chain(word), 1)
    chain_add(out, data.co.apply_to(data.oc.chain(word)), -1)
    return chain_normalize(out, cat.ring)


def verify_homotopy_equation(
    data: OpenClosedData, phi: BimoduleHom, H: HomotopyWitness, cc: BasedComplex, tensor_cx: BasedComplex
) -> VerificationReport:
    """The four-term identity on every word of the truncation."""
    mu_cc = _mu_cc(data, phi, cc, tensor_cx)
    violations = []
    checked = 0
    for k in cc.degrees():
        for word in cc.basis[k]:
            checked += 1
            res = _homotopy_residual(data, mu_cc, H, word)
            if res:
                violations.append(Violation((word,), res))
    return VerificationReport(checked=checked, violations=violations)


def _mu_cc(data: OpenClosedData, phi: BimoduleHom, cc: BasedComplex, tensor_cx: BasedComplex) -> GradedMap:
    f = cc_of_delta(phi, cc, tensor_cx)
    mu = mu_composition_map(data.cat, data.K, tensor_cx)
    return compose(mu, f, name="mu o CC")


def solve_homotopy(data: OpenClosedData, phi: BimoduleHom, cc: BasedComplex, tensor_cx: BasedComplex):
    """Solve the homotopy identity for H over the integers.

    Returns a HomotopyWitness, or NO_INTEGRAL_SOLUTION when the system is
    solvable over the rationals only, or NO_SOLUTION otherwise.
    """
    cat = data.cat
    n = data.n
    mu_cc = _mu_cc(data, phi, cc, tensor_cx)
    hom_cx = hom_complex(cat, data.K, data.K)

    variables: list = []  # (word, target generator)
    var_index: dict = {}
    for k in cc.degrees():
        for w in cc.basis[k]:
            for y in hom_cx.basis.get(k + n - 1, []):
                var_index[(w, y)] = len(variables)
                variables.append((w, y))

    rows = []
    rhs = []
    sign_n = -1 if n % 2 else 1
    for k in cc.degrees():
        for w in cc.basis[k]:
            target = hom_cx.basis.get(k + n, [])
            if not target:
                # the equation in this degree still constrains nothing only
                # if the right-hand side vanishes; check it
                r = {}
                chain_add(r, mu_cc.chain(w), 1)
                chain_add(r, data.co.apply_to(data.oc.chain(w)), -1)
                if chain_normalize(r, cat.ring):
                    return NO_SOLUTION
                continue
            bw = bar_differential(cat, w)
            for y in target:
                row = [0] * len(variables)
                # (-1)^n mu^1 (H(w)) contribution
                for yp in hom_cx.basis.get(k + n - 1, []):
                    coeff = cat.mu_key((yp,)).get(y, 0)
                    if coeff:
                        row[var_index[(w, yp)]] += sign_n * coeff
                # H(b(w)) contribution
                for w1, c in bw.items():
                    j = var_index.get((w1, y))
                    if j is not None:
                        row[j] += c
                rows.append(row)
                r = mu_cc.chain(w).get(y, 0) - data.co.apply_to(data.oc.chain(w)).get(y, 0)
                rhs.append(-r)

    A = IntMatrix(rows, cols=len(variables)) if rows else IntMatrix.zeros(0, len(variables))
    sol = solve_integer(A, rhs)
    if isinstance(sol, Unsolvable):
        return NO_SOLUTION
    if isinstance(sol, RationalOnly):
        return NO_INTEGRAL_SOLUTION
    table: dict = {}
    for (w, y), c in zip(variables, sol):
        if c:
            table.setdefault(w, {})[y] = c
    return HomotopyWitness(table=table)


def verify_cardy_on_homology(
    data: OpenClosedData,
    phi: BimoduleHom,
    cc: BasedComplex,
    tensor_cx: BasedComplex,
    degrees=None,
) -> VerificationReport:
    """Compare the two induced compositions on truncated homology.

    Checks [mu o CC(phi)] = (-1)^(n(n+1)/2) [CO o OC] classwise in the
    requested degrees of the word complex.
    """
    cat = data.cat
    n = data.n
    mu_cc = _mu_cc(data, phi, cc, tensor_cx)
    co_oc = compose(data.co, data.oc, name="CO o OC")
    hom_cx = mu_cc.target
    global_parity = (n * (n + 1) // 2) % 2
    gsign = -1 if global_parity else 1

    degs = list(degrees) if degrees is not None else cc.degrees()
    violations = []
    checked = 0
    for k in degs:
        if not cc.basis.get(k):
            continue
        hs = cc.homology_data(k)
        ht = hom_cx.homology_data(k + n)
        for gen_vec in hs.class_generators():
            checked += 1
            chain = {w: c for w, c in zip(cc.basis[k], gen_vec) if c}
            img1 = mu_cc.apply_to(chain)
            img2 = co_oc.apply_to(chain)
            coords1 = ht.coords(hom_cx.vector(img1, k + n))
            coords2 = ht.coords(hom_cx.vector({g: gsign * c for g, c in img2.items()}, k + n))
            if coords1 != coords2:
                violations.append(Violation((k, chain), {"lhs": coords1, "rhs": coords2}))
    return VerificationReport(checked=checked, violations=violations)


# ---------------------------------------------------------------------------
# standard configurations


def telescoping_data(cat: AinfCategory, phi: BimoduleHom, cc: BasedComplex, tensor_cx: BasedComplex, co_sign: int = 1) -> OpenClosedData:
    """The self-referential configuration: the closed complex is the
    endomorphism complex, the closed-to-open map is (+-)identity, and the
    open-to-closed map is the composed collapse itself."""
    K = phi.target.left.K
    hom_cx = hom_complex(cat, K, K)
    f = cc_of_delta(phi, cc, tensor_cx)
    mu = mu_composition_map(cat, K, tensor_cx)
    oc = compose(mu, f, name="mu o CC")
    co = GradedMap(source=hom_cx, target=hom_cx, shift=0, apply=lambda g: {g: co_sign}, name="(+-)id")
    return OpenClosedData(cat=cat, K=K, n=phi.n, closed=hom_cx, oc=oc, co=co)
