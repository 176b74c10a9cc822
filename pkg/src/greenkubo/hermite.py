"""Truncated Hermite representation of linear-Gaussian generators.

Basis functions are products of normalized probabilists' Hermite polynomials
in the scaled variables ``y_i = sqrt(beta) z_i``, orthonormal under the
Gaussian stationary law N(0, beta^-1 I).  On this basis the generator

    L = (B z) . grad + 1/2 (sigma sigma^T) : grad^2

acts through exact raising/lowering recurrences, so the assembled matrix has
no quadrature error; truncation by total degree is the only approximation,
and for linear drift the degree-n subspaces are mapped into themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterDomainError
from .models import LinearGaussianModel

SYMMETRY_TOL = 1e-10  # relative tolerance behind the symmetric/antisymmetric tags


def _grlex_key(index):
    # graded order: total degree first, earlier axes carry higher significance
    return (sum(index), tuple(-k for k in index))


@dataclass(frozen=True, eq=False)
class HermiteBasis:
    """Multi-indices of total degree <= max_degree, graded order, constant first."""

    dim: int
    max_degree: int
    beta: float
    indices: tuple = ()
    _positions: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.indices)

    def position(self, index) -> int:
        return self._positions[tuple(index)]


def build_basis(dim: int, max_degree: int, beta: float) -> HermiteBasis:
    """Enumerate the truncated basis; count is binomial(dim + N, N)."""
    if dim < 1:
        raise ParameterDomainError(f"dim must be >= 1, got {dim}")
    if max_degree < 0:
        raise ParameterDomainError(f"max_degree must be >= 0, got {max_degree}")
    if not beta > 0:
        raise ParameterDomainError(f"beta must be positive, got {beta}")

    def extend(prefix, remaining, axes_left):
        if axes_left == 0:
            yield prefix
            return
        for k in range(remaining + 1):
            yield from extend(prefix + (k,), remaining - k, axes_left - 1)

    indices = sorted(extend((), max_degree, dim), key=_grlex_key)
    assert len(indices) == math.comb(dim + max_degree, max_degree)
    positions = {idx: pos for pos, idx in enumerate(indices)}
    return HermiteBasis(dim=dim, max_degree=max_degree, beta=float(beta),
                        indices=tuple(indices), _positions=positions)


def lowering_matrix(basis: HermiteBasis, axis: int) -> np.ndarray:
    """Matrix of d/dy_axis: psi_k -> sqrt(k_axis) psi_(k - e_axis)."""
    n = basis.size
    out = np.zeros((n, n))
    for pos, idx in enumerate(basis.indices):
        k = idx[axis]
        if k > 0:
            lower = list(idx)
            lower[axis] -= 1
            out[basis.position(lower), pos] = np.sqrt(k)
    return out


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense operator on a Hermite basis with a declared symmetry tag.

    The basis is orthonormal in the stationary law, so the adjoint is the
    plain transpose and the tag is checked entrywise at construction.
    """

    basis: HermiteBasis
    entries: np.ndarray
    symmetry_tag: str = "general"

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        n = self.basis.size
        if entries.shape != (n, n):
            raise ParameterDomainError(f"entries must be {n}x{n}, got {entries.shape}")
        if self.symmetry_tag not in ("symmetric", "antisymmetric", "general"):
            raise ParameterDomainError(f"unknown symmetry tag {self.symmetry_tag!r}")
        scale = max(np.abs(entries).max(), np.finfo(float).tiny)
        if self.symmetry_tag == "symmetric":
            if np.abs(entries - entries.T).max() > SYMMETRY_TOL * scale:
                raise ParameterDomainError("matrix tagged symmetric is not symmetric")
        elif self.symmetry_tag == "antisymmetric":
            if np.abs(entries + entries.T).max() > SYMMETRY_TOL * scale:
                raise ParameterDomainError("matrix tagged antisymmetric is not antisymmetric")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)


def assemble_generator(model: LinearGaussianModel, basis: HermiteBasis) -> OperatorMatrix:
    """Assemble the generator on the basis, exactly up to rounding.

    In scaled variables the drift term ``B_ij z_j d/dz_i`` becomes
    ``B_ij y_j d/dy_i`` and the diffusion term picks up a factor ``beta``;
    both reduce to products of one ladder raise and one ladder lower per
    axis, so degree-n polynomials map to degree <= n.  Column k of the
    result holds the expansion of L applied to basis function k.
    """
    if basis.dim != model.state_dim:
        raise ParameterDomainError(
            f"basis dim {basis.dim} != model state_dim {model.state_dim}")
    if abs(basis.beta - model.inv_temp) > 1e-12 * max(1.0, model.inv_temp):
        raise ParameterDomainError("basis was built with a different beta than the model")

    d = basis.dim
    lower = [lowering_matrix(basis, i) for i in range(d)]
    B = model.drift
    Q = model.diffusion_matrix
    L = np.zeros((basis.size, basis.size))
    for i in range(d):
        for j in range(d):
            if B[i, j] != 0.0:
                L += B[i, j] * ((lower[j] + lower[j].T) @ lower[i])
            if Q[i, j] != 0.0:
                L += 0.5 * basis.beta * Q[i, j] * (lower[i] @ lower[j])
    return OperatorMatrix(basis=basis, entries=L, symmetry_tag="general")


def split_sym_antisym(L: OperatorMatrix) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Split into symmetric and antisymmetric parts; S + A reproduces L exactly.

    The symmetric part comes out fused with the model's dissipation strength;
    to sweep that coupling, assemble the model at unit dissipation and rescale
    S, which avoids reassembly (A does not depend on the coupling).
    """
    S = 0.5 * (L.entries + L.entries.T)
    A = L.entries - S
    return (OperatorMatrix(basis=L.basis, entries=S, symmetry_tag="symmetric"),
            OperatorMatrix(basis=L.basis, entries=A, symmetry_tag="antisymmetric"))


def h_inner(f: np.ndarray, g: np.ndarray, S: OperatorMatrix) -> float:
    """Dissipative inner product  <f, g> = f^T (-S) g  of coefficient vectors.

    Constants have zero seminorm here, so both arguments must be mean-zero
    (vanishing coefficient on the constant basis function).
    """
    if S.symmetry_tag != "symmetric":
        raise ParameterDomainError("h_inner needs the symmetric part of the generator")
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    for name, vec in (("f", f), ("g", g)):
        if vec.shape != (S.basis.size,):
            raise ParameterDomainError(f"{name} has wrong length {vec.shape}")
        if abs(vec[0]) > 1e-12 * max(1.0, np.abs(vec).max()):
            raise ParameterDomainError(f"{name} has a nonzero constant component")
    return float(f @ (-S.entries) @ g)


def observable_coefficients(model: LinearGaussianModel, basis: HermiteBasis) -> np.ndarray:
    """Coefficients of V_i(z) = (M z)_i; rows live on the degree-1 functions."""
    if basis.max_degree < 1:
        raise ParameterDomainError("basis needs max_degree >= 1 to hold a linear observable")
    coeffs = np.zeros((model.obs_dim, basis.size))
    root_beta = np.sqrt(basis.beta)
    for j in range(model.state_dim):
        unit = tuple(1 if a == j else 0 for a in range(basis.dim))
        coeffs[:, basis.position(unit)] = model.observable[:, j] / root_beta
    return coeffs


def _hermite_monomial_coeffs(n_max: int) -> list[np.ndarray]:
    # He_{n+1}(x) = x He_n(x) - n He_{n-1}(x), coefficients in the monomial basis
    coeffs = [np.array([1.0])]
    if n_max >= 1:
        coeffs.append(np.array([0.0, 1.0]))
    for n in range(1, n_max):
        nxt = np.zeros(n + 2)
        nxt[1:] += coeffs[n]
        nxt[:n] -= n * coeffs[n - 1]
        coeffs.append(nxt)
    return coeffs


def gram_matrix(basis: HermiteBasis) -> np.ndarray:
    """Gram matrix of the basis under its Gaussian law, by exact moment recursion.

    Expands each 1-d factor in monomials and pairs them against standard
    normal moments (odd vanish, even are double factorials).  This is an
    independent check of orthonormality: the result must be the identity.
    """
    n_max = basis.max_degree
    herm = _hermite_monomial_coeffs(n_max)
    moments = np.zeros(2 * n_max + 1)
    moments[0] = 1.0
    for n in range(2, 2 * n_max + 1, 2):
        moments[n] = (n - 1) * moments[n - 2]

    overlap = np.zeros((n_max + 1, n_max + 1))
    for a in range(n_max + 1):
        for b in range(n_max + 1):
            total = 0.0
            for i, ca in enumerate(herm[a]):
                if ca == 0.0:
                    continue
                for j, cb in enumerate(herm[b]):
                    if cb != 0.0:
                        total += ca * cb * moments[i + j]
            overlap[a, b] = total / np.sqrt(math.factorial(a) * math.factorial(b))

    gram = np.empty((basis.size, basis.size))
    for p, kp in enumerate(basis.indices):
        for q, kq in enumerate(basis.indices):
            val = 1.0
            for axis in range(basis.dim):
                val *= overlap[kp[axis], kq[axis]]
            gram[p, q] = val
    return gram


def operator_to_csv(op: OperatorMatrix, stream) -> None:
    """Row-major CSV dump; the header names the basis multi-indices."""
    labels = ["|".join(str(k) for k in idx) for idx in op.basis.indices]
    stream.write("# format: operator-v1\n")
    stream.write("row_index," + ",".join(labels) + "\n")
    for label, row in zip(labels, op.entries):
        stream.write(label + "," + ",".join(repr(v) for v in row) + "\n")
