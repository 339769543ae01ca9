"""Unit matrix groups, their algebra charts, and orbit actions.

Each supported group is parameterized by a flat real vector through a
surjective chart onto (a copy of) its Lie algebra; group elements are matrix
exponentials of chart images and inverses are always taken as ``exp(-Z)``,
never by numeric inversion.

Textual forms: groups ``so:3 | u:3 | sl:2 | lut:3 | uut:3 | id:3``; actions
``two-sided:<g>,<g>[,<op>] | similarity:<g> | left:<g> | modes:<g>;<g>;...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import mat_exp, multi_mode_product

GROUP_KINDS = ("so", "u", "sl", "lut", "uut", "id")
RIGHT_OPS = ("transpose", "conj_transpose", "inverse")


@dataclass(frozen=True)
class GroupSpec:
    """A unit matrix group: kind in {so, u, sl, lut, uut, id} and size n."""

    kind: str
    n: int

    def __post_init__(self) -> None:
        if self.kind not in GROUP_KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.n < 1:
            raise ValueError(f"group size must be positive, got {self.n}")

    def __str__(self) -> str:
        return f"{self.kind}:{self.n}"

    @property
    def is_complex(self) -> bool:
        return self.kind == "u"


def parse_group(text: str) -> GroupSpec:
    """Parse ``"so:3"`` style group syntax."""
    parts = text.strip().split(":")
    if len(parts) != 2:
        raise ValueError(f"bad group syntax {text!r}, expected kind:n")
    try:
        n = int(parts[1])
    except ValueError as exc:
        raise ValueError(f"bad group size in {text!r}") from exc
    return GroupSpec(parts[0].strip(), n)


def lie_dim(spec: GroupSpec) -> int:
    """Number of chart parameters for the group."""
    n = spec.n
    if spec.kind == "so":
        return n * (n - 1) // 2
    if spec.kind == "u":
        return n * n
    if spec.kind == "sl":
        # Deliberately non-injective: n^2 params for the (n^2 - 1)-dim group.
        return n * n
    if spec.kind in ("lut", "uut"):
        return n * (n - 1) // 2
    return 0  # id


def _strict_lower_indices(n: int) -> list[tuple[int, int]]:
    # Column-major position order, matching the package-wide vec convention.
    return [(i, j) for j in range(n) for i in range(j + 1, n)]


def param_to_algebra(spec: GroupSpec, params: np.ndarray) -> np.ndarray:
    """Map a flat parameter vector into the group's Lie algebra."""
    params = np.asarray(params, dtype=float)
    if params.ndim != 1 or params.size != lie_dim(spec):
        raise ValueError(
            f"params length mismatch for {spec}: expected {lie_dim(spec)}, got {params.size}"
        )
    n = spec.n
    if spec.kind == "so":
        z = np.zeros((n, n))
        for val, (i, j) in zip(params, _strict_lower_indices(n)):
            z[i, j] = val
        return z - z.T
    if spec.kind == "u":
        z = np.zeros((n, n), dtype=complex)
        z[np.diag_indices(n)] = 1j * params[:n]
        pairs = params[n:]
        for k, (i, j) in enumerate(_strict_lower_indices(n)):
            re, im = pairs[2 * k], pairs[2 * k + 1]
            z[i, j] = re + 1j * im
            z[j, i] = -re + 1j * im
        return z
    if spec.kind == "sl":
        x = params.reshape((n, n), order="F")
        z = x.copy()
        z[0, 0] -= np.trace(x)
        return z
    if spec.kind == "lut":
        z = np.zeros((n, n))
        for val, (i, j) in zip(params, _strict_lower_indices(n)):
            z[i, j] = val
        return z
    if spec.kind == "uut":
        z = np.zeros((n, n))
        for val, (i, j) in zip(params, _strict_lower_indices(n)):
            z[j, i] = val
        return z
    return np.zeros((n, n))  # id


def embed(spec: GroupSpec, params: np.ndarray) -> np.ndarray:
    """Group element ``exp(Z)`` for the chart image Z."""
    return mat_exp(param_to_algebra(spec, params))


def embed_inverse(spec: GroupSpec, params: np.ndarray) -> np.ndarray:
    """Exact group inverse ``exp(-Z)`` of :func:`embed` at the same params."""
    return mat_exp(-param_to_algebra(spec, params))


def is_member(spec: GroupSpec, g: np.ndarray, tol: float = 1e-8) -> bool:
    """Check membership of a matrix in the group within ``tol``."""
    g = np.asarray(g)
    n = spec.n
    if g.shape != (n, n):
        return False
    if spec.kind != "u" and np.max(np.abs(np.imag(g))) > tol:
        return False
    gr = np.real(g) if spec.kind != "u" else g
    eye = np.eye(n)
    if spec.kind == "so":
        return (
            np.linalg.norm(gr.T @ gr - eye) <= tol
            and abs(np.linalg.det(gr) - 1.0) <= max(tol, 1e-9)
        )
    if spec.kind == "u":
        return np.linalg.norm(g.conj().T @ g - eye) <= tol
    if spec.kind == "sl":
        return abs(np.linalg.det(gr) - 1.0) <= max(tol, 1e-9)
    if spec.kind == "lut":
        return (
            np.max(np.abs(np.triu(gr, 1))) <= tol
            and np.max(np.abs(np.diag(gr) - 1.0)) <= tol
        )
    if spec.kind == "uut":
        return (
            np.max(np.abs(np.tril(gr, -1))) <= tol
            and np.max(np.abs(np.diag(gr) - 1.0)) <= tol
        )
    return bool(np.max(np.abs(gr - eye)) <= tol)  # id


def _split(params: np.ndarray, dims: Sequence[int]) -> list[np.ndarray]:
    params = np.asarray(params, dtype=float)
    total = int(sum(dims))
    if params.ndim != 1 or params.size != total:
        raise ValueError(f"params length mismatch: expected {total}, got {params.size}")
    out = []
    at = 0
    for d in dims:
        out.append(params[at : at + d])
        at += d
    return out


@dataclass(frozen=True)
class TwoSided:
    """Action ``M -> L @ M @ op(R)`` with L from ``left`` and R from ``right``.

    ``right_op`` is one of transpose / conj_transpose / inverse; the inverse is
    realized as exp(-Z), so no matrix is ever inverted numerically.
    """

    left: GroupSpec
    right: GroupSpec
    right_op: str = "transpose"

    def __post_init__(self) -> None:
        if self.right_op not in RIGHT_OPS:
            raise ValueError(f"unknown right_op {self.right_op!r}")

    @property
    def dim(self) -> int:
        return lie_dim(self.left) + lie_dim(self.right)

    def split(self, params: np.ndarray) -> list[np.ndarray]:
        return _split(params, [lie_dim(self.left), lie_dim(self.right)])

    def element_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        pl, pr = self.split(params)
        return embed(self.left, pl), embed(self.right, pr)

    def inverse_element_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        pl, pr = self.split(params)
        return embed_inverse(self.left, pl), embed_inverse(self.right, pr)

    def applied_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        pl, pr = self.split(params)
        left = embed(self.left, pl)
        if self.right_op == "transpose":
            right = embed(self.right, pr).T
        elif self.right_op == "conj_transpose":
            right = embed(self.right, pr).conj().T
        else:
            right = embed_inverse(self.right, pr)
        return left, right

    @staticmethod
    def apply_matrices(mats: Sequence[np.ndarray], data: np.ndarray) -> np.ndarray:
        left, right = mats
        return left @ data @ right

    def apply(self, params: np.ndarray, data: np.ndarray) -> np.ndarray:
        data = np.asarray(data)
        if data.shape != (self.left.n, self.right.n):
            raise ValueError(
                f"data shape {data.shape} does not match action ({self.left.n}, {self.right.n})"
            )
        return self.apply_matrices(self.applied_matrices(params), data)


@dataclass(frozen=True)
class Similarity:
    """Action ``M -> G^-1 @ M @ G``."""

    spec: GroupSpec

    @property
    def dim(self) -> int:
        return lie_dim(self.spec)

    def split(self, params: np.ndarray) -> list[np.ndarray]:
        return _split(params, [lie_dim(self.spec)])

    def element_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        (p,) = self.split(params)
        return (embed(self.spec, p),)

    def inverse_element_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        (p,) = self.split(params)
        return (embed_inverse(self.spec, p),)

    def applied_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        (p,) = self.split(params)
        return embed_inverse(self.spec, p), embed(self.spec, p)

    @staticmethod
    def apply_matrices(mats: Sequence[np.ndarray], data: np.ndarray) -> np.ndarray:
        left, right = mats
        return left @ data @ right

    def apply(self, params: np.ndarray, data: np.ndarray) -> np.ndarray:
        data = np.asarray(data)
        n = self.spec.n
        if data.shape != (n, n):
            raise ValueError(f"data shape {data.shape} does not match similarity on n={n}")
        return self.apply_matrices(self.applied_matrices(params), data)


@dataclass(frozen=True)
class LeftOnly:
    """Action ``M -> G^-1 @ M`` (reported factor is G itself)."""

    spec: GroupSpec

    @property
    def dim(self) -> int:
        return lie_dim(self.spec)

    def split(self, params: np.ndarray) -> list[np.ndarray]:
        return _split(params, [lie_dim(self.spec)])

    def element_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        (p,) = self.split(params)
        return (embed(self.spec, p),)

    def inverse_element_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        (p,) = self.split(params)
        return (embed_inverse(self.spec, p),)

    def applied_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        (p,) = self.split(params)
        return (embed_inverse(self.spec, p),)

    @staticmethod
    def apply_matrices(mats: Sequence[np.ndarray], data: np.ndarray) -> np.ndarray:
        (left,) = mats
        return left @ data

    def apply(self, params: np.ndarray, data: np.ndarray) -> np.ndarray:
        data = np.asarray(data)
        if data.ndim != 2 or data.shape[0] != self.spec.n:
            raise ValueError(f"data shape {data.shape} does not match left action n={self.spec.n}")
        return self.apply_matrices(self.applied_matrices(params), data)


@dataclass(frozen=True)
class TensorModes:
    """Action ``T -> T x_0 G_0 x_1 G_1 ...`` with one group per mode."""

    specs: tuple[GroupSpec, ...]

    def __init__(self, specs: Sequence[GroupSpec]) -> None:
        object.__setattr__(self, "specs", tuple(specs))

    @property
    def dim(self) -> int:
        return sum(lie_dim(s) for s in self.specs)

    def split(self, params: np.ndarray) -> list[np.ndarray]:
        return _split(params, [lie_dim(s) for s in self.specs])

    def element_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        return tuple(embed(s, p) for s, p in zip(self.specs, self.split(params)))

    def inverse_element_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        return tuple(embed_inverse(s, p) for s, p in zip(self.specs, self.split(params)))

    def applied_matrices(self, params: np.ndarray) -> tuple[np.ndarray, ...]:
        return self.element_matrices(params)

    @staticmethod
    def apply_matrices(mats: Sequence[np.ndarray], data: np.ndarray) -> np.ndarray:
        return multi_mode_product(data, list(mats))

    def apply(self, params: np.ndarray, data: np.ndarray) -> np.ndarray:
        data = np.asarray(data)
        if data.ndim != len(self.specs):
            raise ValueError(f"tensor order {data.ndim} does not match {len(self.specs)} groups")
        for mode, s in enumerate(self.specs):
            if data.shape[mode] != s.n:
                raise ValueError(f"mode {mode} has size {data.shape[mode]}, group is {s}")
        return self.apply_matrices(self.applied_matrices(params), data)


OrbitAction = TwoSided | Similarity | LeftOnly | TensorModes


def apply_action(action: OrbitAction, params: np.ndarray, data: np.ndarray) -> np.ndarray:
    """Apply an orbit action at the given chart parameters."""
    return action.apply(params, data)


def parse_action(text: str) -> OrbitAction:
    """Parse textual action syntax (see module docstring)."""
    text = text.strip()
    if text.startswith("two-sided:"):
        rest = text[len("two-sided:") :]
        parts = [p.strip() for p in rest.split(",")]
        if len(parts) == 2:
            left, right = parse_group(parts[0]), parse_group(parts[1])
            op = "conj_transpose" if (left.is_complex or right.is_complex) else "transpose"
            return TwoSided(left, right, op)
        if len(parts) == 3:
            return TwoSided(parse_group(parts[0]), parse_group(parts[1]), parts[2])
        raise ValueError(f"bad two-sided action syntax {text!r}")
    if text.startswith("similarity:"):
        return Similarity(parse_group(text[len("similarity:") :]))
    if text.startswith("left:"):
        return LeftOnly(parse_group(text[len("left:") :]))
    if text.startswith("modes:"):
        groups = [parse_group(p) for p in text[len("modes:") :].split(";") if p.strip()]
        if not groups:
            raise ValueError(f"bad modes action syntax {text!r}")
        return TensorModes(groups)
    raise ValueError(f"unknown action syntax {text!r}")
