"""Alternating forms on oriented Euclidean R^7 with a fixed orthonormal coframe.

Forms are stored densely over sorted multi-indices of ``{0, ..., 6}``.  The
orientation is ``Vol = e^{0123456}`` and every Hodge star sign follows from it.
The G2 model 3-form is

    phi = e^{456} + e^{014} + e^{025} + e^{036} - e^{126} - e^{234} - e^{315}

i.e. ``alpha + mu ^ beta - alpha_2`` in the notation of the sphere bundle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

DIM = 7
TOL = 1e-12

__all__ = [
    "AltForm",
    "G2Split2",
    "G2Split3",
    "DIM",
    "basis",
    "monomial",
    "perm_sign",
    "wedge",
    "hodge_star",
    "interior",
    "circ_contract",
    "derivation",
    "to_tensor",
    "from_tensor",
    "pullback",
    "d_from_partials",
    "volume",
    "theta_endo",
    "alpha",
    "mu",
    "beta",
    "alpha1",
    "alpha2",
    "base_volume",
    "g2_model_forms",
    "g2_project2",
    "g2_project3",
    "inner",
]


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if ``seq`` has repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def basis(degree: int) -> tuple[tuple[int, ...], ...]:
    """Sorted multi-indices of length ``degree`` in lexicographic order."""
    return tuple(itertools.combinations(range(DIM), degree))


@lru_cache(maxsize=None)
def _rank(degree: int) -> dict[tuple[int, ...], int]:
    return {idx: k for k, idx in enumerate(basis(degree))}


@lru_cache(maxsize=None)
def _wedge_table(p: int, q: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    # (row in a, row in b, row in result, sign) for every nonzero product
    ia, ib, ir, sg = [], [], [], []
    rank = _rank(p + q)
    for a, I in enumerate(basis(p)):
        for b, J in enumerate(basis(q)):
            s = perm_sign(I + J)
            if s:
                ia.append(a)
                ib.append(b)
                ir.append(rank[tuple(sorted(I + J))])
                sg.append(s)
    return (np.array(ia, dtype=int), np.array(ib, dtype=int),
            np.array(ir, dtype=int), np.array(sg, dtype=float))


@lru_cache(maxsize=None)
def _star_table(p: int) -> tuple[np.ndarray, np.ndarray]:
    rank = _rank(DIM - p)
    target, sign = [], []
    for I in basis(p):
        comp = tuple(i for i in range(DIM) if i not in I)
        target.append(rank[comp])
        sign.append(perm_sign(I + comp))
    return np.array(target, dtype=int), np.array(sign, dtype=float)


@dataclass(frozen=True, eq=False)
class AltForm:
    """Degree-``degree`` form with components over :func:`basis` (degree)."""

    degree: int
    components: np.ndarray

    def __post_init__(self):
        if not 0 <= self.degree <= DIM:
            raise ValueError(f"degree must lie in 0..{DIM}, got {self.degree}")
        comps = np.array(self.components, dtype=float).reshape(-1)
        if comps.size != math.comb(DIM, self.degree):
            raise ValueError(
                f"degree {self.degree} form needs {math.comb(DIM, self.degree)} "
                f"components, got {comps.size}")
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, degree: int) -> "AltForm":
        return cls(degree, np.zeros(math.comb(DIM, degree)))

    @classmethod
    def from_dict(cls, degree: int, terms: dict) -> "AltForm":
        """Build from ``{(i, j, k): coeff}``; unsorted keys are reordered with sign."""
        out = np.zeros(math.comb(DIM, degree))
        rank = _rank(degree)
        for idx, c in terms.items():
            idx = tuple(idx)
            s = perm_sign(idx)
            if s == 0:
                continue
            out[rank[tuple(sorted(idx))]] += s * c
        return cls(degree, out)

    def __getitem__(self, idx) -> float:
        idx = tuple(idx)
        s = perm_sign(idx)
        if s == 0:
            return 0.0
        return s * self.components[_rank(self.degree)[tuple(sorted(idx))]]

    def _check(self, other: "AltForm"):
        if not isinstance(other, AltForm):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return AltForm(self.degree, self.components + other.components)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return AltForm(self.degree, self.components - other.components)

    def __neg__(self):
        return AltForm(self.degree, -self.components)

    def __mul__(self, scalar):
        if isinstance(scalar, AltForm):
            return NotImplemented
        return AltForm(self.degree, float(scalar) * self.components)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return AltForm(self.degree, self.components / float(scalar))

    def __xor__(self, other):
        return wedge(self, other)

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.components))) if self.components.size else 0.0

    def allclose(self, other: "AltForm", atol: float = TOL) -> bool:
        self._check(other)
        return bool(np.all(np.abs(self.components - other.components) <= atol))

    def terms(self, atol: float = 0.0) -> dict[tuple[int, ...], float]:
        return {I: float(c) for I, c in zip(basis(self.degree), self.components)
                if abs(c) > atol}

    def __repr__(self):
        t = self.terms(1e-14)
        if not t:
            return f"AltForm({self.degree}, 0)"
        body = " ".join(f"{c:+.6g}*e{''.join(map(str, I))}" for I, c in t.items())
        return f"AltForm({self.degree}, {body})"


def monomial(*idx: int, coeff: float = 1.0) -> AltForm:
    """``coeff * e^{idx}``; unsorted indices pick up the permutation sign."""
    return AltForm.from_dict(len(idx), {idx: coeff})


def volume() -> AltForm:
    return AltForm(DIM, [1.0])


def inner(a: AltForm, b: AltForm) -> float:
    a._check(b)
    return float(a.components @ b.components)


def wedge(a: AltForm, b: AltForm) -> AltForm:
    p, q = a.degree, b.degree
    if p + q > DIM:
        raise ValueError(f"wedge of degrees {p} and {q} exceeds dimension {DIM}")
    ia, ib, ir, sg = _wedge_table(p, q)
    out = np.zeros(math.comb(DIM, p + q))
    np.add.at(out, ir, sg * a.components[ia] * b.components[ib])
    return AltForm(p + q, out)


def hodge_star(a: AltForm) -> AltForm:
    """Star defined by ``w ^ *v = <w, v> Vol``."""
    target, sign = _star_table(a.degree)
    out = np.zeros(math.comb(DIM, DIM - a.degree))
    out[target] = sign * a.components
    return AltForm(DIM - a.degree, out)


def interior(v, a: AltForm) -> AltForm:
    """Contraction ``v _| a`` with a frame index or a 7-vector."""
    if a.degree < 1:
        raise ValueError("cannot contract a 0-form")
    if isinstance(v, (int, np.integer)):
        vec = np.zeros(DIM)
        vec[int(v)] = 1.0
    else:
        vec = np.asarray(v, dtype=float)
    out = np.zeros(math.comb(DIM, a.degree - 1))
    rank = _rank(a.degree - 1)
    for c, I in zip(a.components, basis(a.degree)):
        if c == 0.0:
            continue
        for pos, i in enumerate(I):
            if vec[i] != 0.0:
                out[rank[I[:pos] + I[pos + 1:]]] += (-1) ** pos * vec[i] * c
    return AltForm(a.degree - 1, out)


def to_tensor(a: AltForm) -> np.ndarray:
    """Fully antisymmetric ``7 x ... x 7`` array with ``T[I] = a_I`` on sorted I."""
    p = a.degree
    T = np.zeros((DIM,) * p)
    if p == 0:
        return np.array(a.components[0])
    perms = [(perm, perm_sign(perm)) for perm in itertools.permutations(range(p))]
    for c, I in zip(a.components, basis(p)):
        if c == 0.0:
            continue
        for perm, s in perms:
            T[tuple(I[k] for k in perm)] = s * c
    return T


def from_tensor(T: np.ndarray, degree: int) -> AltForm:
    """Read the sorted-index entries of an antisymmetric tensor."""
    T = np.asarray(T)
    if degree == 0:
        return AltForm(0, [float(T)])
    idx = np.array(basis(degree)).T
    return AltForm(degree, T[tuple(idx)])


def _alternate_sum(T: np.ndarray, degree: int) -> AltForm:
    # sum_{sigma} sg(sigma) T(Y_sigma(1), ...) read on sorted indices
    out = np.zeros_like(T)
    for perm in itertools.permutations(range(degree)):
        out = out + perm_sign(perm) * np.transpose(T, perm)
    return from_tensor(out, degree)


def circ_contract(a: AltForm, Bs: Sequence[np.ndarray]) -> AltForm:
    """Raw signed contraction ``a o (B_1 ^ ... ^ B_p)``.

    ``(a o B)(Y_1..Y_p) = sum_sigma sg(sigma) a(B_1 Y_sigma1, ..., B_p Y_sigmap)``.
    Each ``B`` is a 7x7 matrix acting on column vectors of frame components.
    No normalising factor is applied: ``a o (Id ^ ... ^ Id) = p! a``.
    """
    p = a.degree
    if len(Bs) != p:
        raise ValueError(f"need {p} endomorphisms for a degree {p} form, got {len(Bs)}")
    if p == 0:
        return a
    T = to_tensor(a)
    for k, B in enumerate(Bs):
        B = np.asarray(B, dtype=float)
        if B.shape != (DIM, DIM):
            raise ValueError(f"endomorphism {k} has shape {B.shape}, expected (7, 7)")
        # slot k: T'(.., Y, ..) = T(.., B Y, ..)
        T = np.moveaxis(np.tensordot(T, B, axes=([k], [0])), -1, k)
    return _alternate_sum(T, p)


def derivation(a: AltForm, A: np.ndarray) -> AltForm:
    """``A`` acting on ``a`` as a derivation, expanded monomial by monomial.

    Each factor ``e^j`` of a monomial is replaced in turn by ``e^j o A``; the
    result equals ``circ_contract(a, [A, Id, ...]) / (p - 1)!``.
    """
    A = np.asarray(A, dtype=float)
    rows = [AltForm(1, A[j]) for j in range(DIM)]
    out = AltForm.zero(a.degree)
    for idx, c in a.terms().items():
        for k in range(len(idx)):
            term = AltForm(0, np.array([c]))
            for pos, j in enumerate(idx):
                term = wedge(term, rows[j] if pos == k else monomial(j))
            out = out + term
    return out


@lru_cache(maxsize=None)
def _minor_index(p: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.array(basis(p), dtype=int).reshape(-1, p)
    rows = idx[:, None, :, None]
    cols = idx[None, :, None, :]
    return rows, cols


def pullback(a: AltForm, M: np.ndarray) -> AltForm:
    """Components of ``a`` after the coframe substitution ``e^i -> sum_c M[i, c] dx^c``.

    ``(M^* a)_J = sum_I a_I det(M[I, J])``.  With ``M`` the coframe matrix this
    turns frame components into chart components; with its inverse it goes back.
    """
    p = a.degree
    if p == 0:
        return a
    M = np.asarray(M, dtype=float)
    rows, cols = _minor_index(p)
    minors = np.linalg.det(M[rows, cols])  # [I, J]
    return AltForm(p, a.components @ minors)


def d_from_partials(partials: np.ndarray, degree: int) -> AltForm:
    """Exterior derivative ``sum_c dx^c ^ d_c w`` from ``partials[c] = d_c w`` components."""
    partials = np.asarray(partials, dtype=float).reshape(DIM, -1)
    out = AltForm.zero(degree + 1)
    for c in range(DIM):
        out = out + wedge(monomial(c), AltForm(degree, partials[c]))
    return out


# -- frame-constant forms of the sphere bundle ------------------------------

def theta_endo() -> np.ndarray:
    """Soldering map on the frame: ``e_i -> e_{i+3}`` for i = 1, 2, 3, else 0."""
    th = np.zeros((DIM, DIM))
    for i in (1, 2, 3):
        th[i + 3, i] = 1.0
    return th


def alpha() -> AltForm:
    return monomial(4, 5, 6)


def mu() -> AltForm:
    return monomial(0)


def beta() -> AltForm:
    return monomial(1, 4) + monomial(2, 5) + monomial(3, 6)


def alpha1() -> AltForm:
    I, th = np.eye(DIM), theta_endo()
    return 0.5 * circ_contract(alpha(), [th, I, I])


def alpha2() -> AltForm:
    I, th = np.eye(DIM), theta_endo()
    return 0.5 * circ_contract(alpha(), [th, th, I])


def base_volume() -> AltForm:
    """Pullback of the volume form of the base, ``e^{0123}``."""
    return monomial(0, 1, 2, 3)


@lru_cache(maxsize=None)
def _model_forms() -> tuple[AltForm, AltForm]:
    phi = alpha() + wedge(mu(), beta()) - alpha2()
    b2 = wedge(beta(), beta())
    star_phi = base_volume() - 0.5 * b2 - wedge(mu(), alpha1())
    return phi, star_phi


def g2_model_forms() -> tuple[AltForm, AltForm]:
    """``(phi, *phi)`` with ``*phi = e^{0123} - beta^2/2 - mu ^ alpha_1``."""
    return _model_forms()


# -- irreducible G2 decomposition --------------------------------------------

class G2Split2(NamedTuple):
    part7: AltForm
    part14: AltForm


class G2Split3(NamedTuple):
    part1: AltForm
    part7: AltForm
    part27: AltForm


def _linear_matrix(fn, degree: int) -> np.ndarray:
    cols = [fn(AltForm(degree, row)).components for row in np.eye(math.comb(DIM, degree))]
    return np.array(cols).T


@lru_cache(maxsize=None)
def _proj2() -> tuple[np.ndarray, np.ndarray]:
    phi, _ = g2_model_forms()
    T = _linear_matrix(lambda g: hodge_star(wedge(g, phi)), 2)
    I = np.eye(T.shape[0])
    # T has eigenvalue -2 on the 7-dim piece and +1 on the 14-dim piece
    return (I - T) / 3.0, (T + 2.0 * I) / 3.0


@lru_cache(maxsize=None)
def _proj3_7() -> np.ndarray:
    phi, _ = g2_model_forms()
    span = np.array([hodge_star(wedge(monomial(i), phi)).components for i in range(DIM)]).T
    gram = span.T @ span
    return span @ np.linalg.solve(gram, span.T)


def g2_project2(gamma: AltForm) -> G2Split2:
    if gamma.degree != 2:
        raise ValueError("g2_project2 expects a 2-form")
    P7, P14 = _proj2()
    return G2Split2(AltForm(2, P7 @ gamma.components), AltForm(2, P14 @ gamma.components))


def g2_project3(gamma: AltForm) -> G2Split3:
    if gamma.degree != 3:
        raise ValueError("g2_project3 expects a 3-form")
    phi, _ = g2_model_forms()
    part1 = (inner(gamma, phi) / inner(phi, phi)) * phi
    part7 = AltForm(3, _proj3_7() @ gamma.components)
    return G2Split3(part1, part7, gamma - part1 - part7)
