"""Non-halting subspace analysis.

The non-halting space splits into E1, the largest subspace that no input
letter ever pushes into a halting state, and its orthogonal complement E2,
from which amplitude can always be drained by some word.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log

import numpy as np

from .qfa import QFA, PROB_TOL
from .words import Word

RANK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal columns spanning a subspace of the automaton's state space."""

    vectors: np.ndarray
    qfa: QFA

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.vectors @ self.vectors.conj().T

    def project(self, psi: np.ndarray) -> np.ndarray:
        return self.vectors @ (self.vectors.conj().T @ psi)

    def orthonormality_defect(self) -> float:
        g = self.vectors.conj().T @ self.vectors
        return float(np.max(np.abs(g - np.eye(self.dim)), initial=0.0))

    def halting_weight(self) -> float:
        """Largest squared weight any basis vector puts on halting states."""
        if self.dim == 0:
            return 0.0
        return float(np.max(np.sum(np.abs(self.vectors[~self.qfa.non_mask]) ** 2, axis=0)))

    def same_span(self, other: np.ndarray, tol: float = RANK_TOL) -> bool:
        """True when ``other`` (columns) spans the same subspace."""
        q, _ = np.linalg.qr(np.asarray(other, dtype=complex))
        if q.shape[1] != self.dim:
            return False
        return float(np.max(np.abs(q @ q.conj().T - self.projector), initial=0.0)) <= tol


@dataclass(frozen=True)
class DecompositionReport:
    e1: SubspaceBasis
    e2: SubspaceBasis
    iterations_used: int
    dims: tuple[int, ...]


def _null_space(a: np.ndarray, tol: float) -> np.ndarray:
    n = a.shape[1]
    if a.shape[0] == 0 or n == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(a)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T


def nonhalting_basis(qfa: QFA) -> np.ndarray:
    return np.eye(qfa.dim, dtype=complex)[:, qfa.non_mask]


def decompose_nonhalting(qfa: QFA, start: np.ndarray | None = None,
                         tol: float = RANK_TOL) -> DecompositionReport:
    """Shrink E^0 = E_non by E^{j+1} = {psi in E^j : V_s psi in E^j for every letter s}.

    ``start`` replaces E^0 with another set of orthonormal columns inside
    E_non.  Rank decisions use singular values above ``tol``.
    """
    b = nonhalting_basis(qfa) if start is None else np.asarray(start, dtype=complex)
    cap = int(qfa.non_mask.sum())
    ident = np.eye(qfa.dim)
    dims = [b.shape[1]]
    used = 0
    while used < cap and b.shape[1] > 0:
        outside = ident - b @ b.conj().T
        stacked = np.vstack([outside @ qfa.ops[s] @ b for s in qfa.alphabet])
        nb = b @ _null_space(stacked, tol)
        used += 1
        dims.append(nb.shape[1])
        stable = nb.shape[1] == b.shape[1]
        b = nb
        if stable:
            break
    complement = np.diag(qfa.non_mask.astype(float)) - b @ b.conj().T
    w, v = np.linalg.eigh(complement)
    e2 = v[:, w > 0.5]
    return DecompositionReport(SubspaceBasis(b, qfa), SubspaceBasis(e2, qfa), used, tuple(dims))


def _projected_words(qfa: QFA, max_len: int, min_len: int = 0):
    """Yield (word, V'_w matrix) for every word over the input alphabet, length-lex."""
    proj = {s: qfa.projected(s) for s in qfa.alphabet}
    level = [((), np.eye(qfa.dim, dtype=complex))]
    for depth in range(max_len + 1):
        if depth >= min_len:
            yield from level
        if depth < max_len:
            level = [(w + (s,), proj[s] @ m) for w, m in level for s in qfa.alphabet]


@dataclass(frozen=True)
class InvarianceCheck:
    words_checked: int
    norm_defect: float
    leakage: float
    tol: float

    @property
    def norm_preserved(self) -> bool:
        return self.norm_defect <= self.tol

    @property
    def e2_closed(self) -> bool:
        return self.leakage <= self.tol

    @property
    def passed(self) -> bool:
        return self.norm_preserved and self.e2_closed


def verify_invariance(qfa: QFA, report: DecompositionReport, max_len: int,
                      tol: float = PROB_TOL) -> InvarianceCheck:
    """Check over all words up to ``max_len`` that V'_w keeps the norm of each
    E1 basis vector and never moves E2 into E1."""
    e1, e2 = report.e1.vectors, report.e2.vectors
    norm_defect = leakage = 0.0
    count = 0
    for _, m in _projected_words(qfa, max_len):
        count += 1
        if e1.shape[1]:
            norm_defect = max(norm_defect, float(np.max(np.abs(np.linalg.norm(m @ e1, axis=0) - 1))))
        if e1.shape[1] and e2.shape[1]:
            leak = np.linalg.norm(e1.conj().T @ (m @ e2), axis=0)
            leakage = max(leakage, float(np.max(leak)))
    return InvarianceCheck(count, norm_defect, leakage, tol)


def split_state(report: DecompositionReport, psi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonal parts of a non-halting state in E1 and E2."""
    psi = np.asarray(psi, dtype=complex)
    qfa = report.e1.qfa
    if float(np.sum(np.abs(psi[~qfa.non_mask]) ** 2)) > PROB_TOL:
        raise ValueError("state has weight on halting states")
    return report.e1.project(psi), report.e2.project(psi)


@dataclass(frozen=True)
class MeasurementDistribution:
    states: tuple[str, ...]
    probs: np.ndarray
    accept: float
    reject: float
    remain: float

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.states, map(float, self.probs)))


def measurement_distribution(qfa: QFA, psi: np.ndarray) -> MeasurementDistribution:
    p = np.abs(np.asarray(psi, dtype=complex)) ** 2
    return MeasurementDistribution(
        qfa.states, p,
        float(p[qfa.acc_mask].sum()), float(p[qfa.rej_mask].sum()), float(p[qfa.non_mask].sum()),
    )


def tv_distance(p, r) -> float:
    """Sum of absolute differences (unnormalised, so the range is [0, 2])."""
    p = p.probs if isinstance(p, MeasurementDistribution) else np.asarray(p, dtype=float)
    r = r.probs if isinstance(r, MeasurementDistribution) else np.asarray(r, dtype=float)
    if p.shape != r.shape:
        raise ValueError(f"distributions have different sizes: {p.shape} vs {r.shape}")
    return float(np.sum(np.abs(p - r)))


def random_unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def close_pair(rng: np.random.Generator, dim: int, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors at distance below ``eps``."""
    psi = random_unit_vector(rng, dim)
    # perturbation of size < eps/2 keeps the renormalised vector within eps
    nudge = random_unit_vector(rng, dim) * rng.uniform(0, eps / 2)
    phi = psi + nudge
    return psi, phi / np.linalg.norm(phi)


@dataclass(frozen=True)
class TVCheck:
    trials: int
    eps: float
    max_ratio: float
    violations: int


def tv_check(trials: int, eps: float, rng: np.random.Generator | None = None,
             dims: tuple[int, int] = (2, 8)) -> TVCheck:
    """Sample close unit-vector pairs and compare their measurement distributions.

    ``max_ratio`` is the largest observed Delta / eps; the bound says it
    stays below 2.
    """
    rng = np.random.default_rng() if rng is None else rng
    worst, bad = 0.0, 0
    for _ in range(trials):
        dim = int(rng.integers(dims[0], dims[1] + 1))
        psi, phi = close_pair(rng, dim, eps)
        assert np.linalg.norm(psi - phi) < eps
        delta = tv_distance(np.abs(psi) ** 2, np.abs(phi) ** 2)
        worst = max(worst, delta / eps)
        bad += delta >= 2 * eps
    return TVCheck(trials, eps, worst, bad)


class NonContractingError(RuntimeError):
    pass


@dataclass(frozen=True)
class ContractionEstimate:
    """Sampled lower bound on S = sup over unit psi in E2 of min_w |V'_w psi|,
    the minimum taken over words of length |Q_non|."""

    s_est: float
    psi: np.ndarray
    word: Word
    samples: int
    is_estimate: bool = True


def contraction_estimate(qfa: QFA, report: DecompositionReport, samples: int,
                         rng: np.random.Generator | None = None) -> ContractionEstimate:
    if report.e2.dim == 0:
        raise ValueError("empty E2")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng() if rng is None else rng
    e2 = report.e2.vectors
    coeffs = [random_unit_vector(rng, e2.shape[1]) for _ in range(samples)]
    probes = np.column_stack([e2] + [e2 @ c for c in coeffs])
    n = int(qfa.non_mask.sum())
    best = np.full(probes.shape[1], np.inf)
    arg: list[Word] = [()] * probes.shape[1]
    for w, m in _projected_words(qfa, n, min_len=n):
        norms = np.linalg.norm(m @ probes, axis=0)
        better = norms < best
        best = np.where(better, norms, best)
        for i in np.flatnonzero(better):
            arg[i] = w
    i = int(np.argmax(best))
    return ContractionEstimate(float(best[i]), probes[:, i], arg[i], probes.shape[1])


def vanish_word_search(qfa: QFA, report: DecompositionReport, psi: np.ndarray,
                       delta: float) -> tuple[Word, float]:
    """Find a word that drains ``psi`` (a vector in E2) below norm ``delta``.

    Each round scans every block of length 1..|Q_non| and stops at the first
    one (length-lex) that gets below ``delta``; otherwise it appends the
    length-|Q_non| block leaving the least norm and goes again.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    psi = np.asarray(psi, dtype=complex)
    if report.e1.dim and np.linalg.norm(report.e1.project(psi)) > RANK_TOL:
        raise ValueError("state is not in E2")
    norm = float(np.linalg.norm(psi))
    if norm < delta:
        return (), norm
    n = int(qfa.non_mask.sum())
    word: Word = ()
    start_norm, worst_factor = norm, 0.0
    rounds = 0
    while True:
        rounds += 1
        block, block_norm, block_state = None, np.inf, None
        for w, m in _projected_words(qfa, n, min_len=1):
            v = m @ psi
            r = float(np.linalg.norm(v))
            if r < delta:
                return word + w, r
            if len(w) == n and r < block_norm:
                block, block_norm, block_state = w, r, v
        factor = block_norm / norm
        if factor > 1 - 1e-6:
            raise NonContractingError(
                f"no block of length {n} shrinks the state (factor {factor:.9f})")
        # every round so far shrank by at most worst_factor, so this many rounds must suffice
        worst_factor = max(worst_factor, factor)
        word, psi, norm = word + block, block_state, block_norm
        if rounds >= 1 + ceil(log(delta / start_norm) / log(worst_factor)):
            raise NonContractingError(f"gave up after {rounds} rounds at norm {norm:.3e}")
