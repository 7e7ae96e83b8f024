"""Dense pure states, local operations, reductions and spectra.

Conventions used throughout the package:

* A state on K subsystems with local dimensions ``dims = (d_1, ..., d_K)``
  is stored as a flat complex vector in row-major product-basis order,
  i.e. the *first* subsystem's index is the most significant digit.
  ``amps.reshape(dims)`` therefore gives the amplitude tensor with one
  axis per subsystem.
* Sites are indexed 0..K-1 in the Python API.  Text formats and reports
  label sites 1..K.
* Entropies are in nats (natural logarithm).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
ORTHONORMALITY_TOL = 1e-10
UNITARITY_TOL = 1e-10
RANK_RTOL = 1e-10  # a Schmidt coefficient counts toward the rank above RANK_RTOL * max


class StateFormatError(ValueError):
    """Malformed state file; carries the offending 1-based line number."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized pure state of a multipartite system.

    Attributes
    ----------
    dims : tuple of int
        Local dimensions (d_1, ..., d_K).
    amps : ndarray
        Flat complex amplitudes of length prod(dims), unit 2-norm.
    norm_factor : float
        The 2-norm of the raw input amplitudes that was divided out at
        construction time.
    """

    dims: tuple
    amps: np.ndarray
    norm_factor: float = 1.0

    @property
    def num_sites(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem."""
        return self.amps.reshape(self.dims)

    def overlap(self, other: "PureState") -> complex:
        if self.dims != other.dims:
            raise ValueError(f"dimension mismatch: {self.dims} vs {other.dims}")
        return complex(np.vdot(self.amps, other.amps))

    def fidelity(self, other: "PureState") -> float:
        return abs(self.overlap(other)) ** 2


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    dim: int
    entries: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues sorted descending (ties keep eigh output order)."""
        return np.sort(np.linalg.eigvalsh(self.entries))[::-1]

    def purity(self) -> float:
        return float(np.sum(np.abs(self.entries) ** 2))


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Schmidt data of a bipartite split: |psi> = sum_i sqrt(lambdas[i]) |u_i>|v_i>."""

    lambdas: np.ndarray        # descending, non-negative, sums to 1
    left_basis: np.ndarray     # columns are |u_i>
    right_basis: np.ndarray    # columns are |v_i>
    rank: int


@dataclass(frozen=True)
class Bipartition:
    """Split of sites 0..K-1 into a non-empty proper subset and its complement."""

    left_sites: tuple
    right_sites: tuple

    @classmethod
    def of(cls, left_sites, num_sites: int) -> "Bipartition":
        left = tuple(sorted(set(int(s) for s in left_sites)))
        if not left:
            raise ValueError("left part must be non-empty")
        if any(s < 0 or s >= num_sites for s in left):
            raise ValueError(f"site index out of range 0..{num_sites - 1}")
        right = tuple(s for s in range(num_sites) if s not in left)
        if not right:
            raise ValueError("left part must be a proper subset")
        return cls(left, right)


@dataclass(frozen=True)
class SpectraReport:
    eigenvalues: np.ndarray
    von_neumann_entropy: float
    linear_entropy: float
    purity: float


def _as_complex_vector(amplitudes) -> np.ndarray:
    v = np.asarray(amplitudes, dtype=complex).ravel()
    return v


def new_state(dims, amplitudes) -> PureState:
    """Build a normalized PureState from raw amplitudes.

    Raises ValueError on an amplitude-count mismatch or an all-zero vector.
    """
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValueError(f"local dimensions must be positive, got {dims}")
    v = _as_complex_vector(amplitudes)
    expected = int(np.prod(dims))
    if v.size != expected:
        raise ValueError(f"expected {expected} amplitudes for dims {dims}, got {v.size}")
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise ValueError("zero vector cannot be normalized")
    v = v / nrm
    v.setflags(write=False)
    return PureState(dims=dims, amps=v, norm_factor=nrm)


def basis_state(dims, digits) -> PureState:
    """Product basis state |d_1 d_2 ... d_K>."""
    dims = tuple(int(d) for d in dims)
    idx = basis_index(dims, digits)
    v = np.zeros(int(np.prod(dims)), dtype=complex)
    v[idx] = 1.0
    return new_state(dims, v)


def basis_index(dims, digits) -> int:
    """Flat index of a basis string, first subsystem most significant."""
    digits = [int(d) for d in digits]
    if len(digits) != len(dims):
        raise ValueError(f"expected {len(dims)} digits, got {len(digits)}")
    idx = 0
    for d, n in zip(digits, dims):
        if d < 0 or d >= n:
            raise ValueError(f"digit {d} out of range for local dimension {n}")
        idx = idx * n + d
    return idx


def ghz_state(num_qubits: int) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2)."""
    if num_qubits < 2:
        raise ValueError("GHZ needs at least 2 qubits")
    v = np.zeros(2 ** num_qubits, dtype=complex)
    v[0] = v[-1] = 1.0
    return new_state((2,) * num_qubits, v)


def w_state(num_qubits: int) -> PureState:
    """Equal superposition of the weight-1 bitstrings."""
    if num_qubits < 2:
        raise ValueError("W needs at least 2 qubits")
    v = np.zeros(2 ** num_qubits, dtype=complex)
    for i in range(num_qubits):
        v[1 << i] = 1.0
    return new_state((2,) * num_qubits, v)


def dicke_state(num_qubits: int, num_excitations: int) -> PureState:
    """Symmetric state with a fixed number of |1> excitations."""
    K, k = int(num_qubits), int(num_excitations)
    if not 0 <= k <= K:
        raise ValueError(f"excitation count {k} out of range 0..{K}")
    v = np.zeros(2 ** K, dtype=complex)
    for bits in product((0, 1), repeat=K):
        if sum(bits) == k:
            v[basis_index((2,) * K, bits)] = 1.0
    return new_state((2,) * K, v)


def product_state(local_vectors) -> PureState:
    """Tensor product of per-site vectors."""
    v = np.array([1.0], dtype=complex)
    dims = []
    for x in local_vectors:
        x = _as_complex_vector(x)
        dims.append(x.size)
        v = np.kron(v, x)
    return new_state(tuple(dims), v)


def apply_local(state: PureState, operators, mode: str = "unitary") -> PureState:
    """Apply one local operator per site.

    mode="unitary" requires each operator to be unitary (residual <= 1e-10)
    and returns the transformed state without renormalizing; mode="slocc"
    requires invertibility and renormalizes afterwards.
    """
    if mode not in ("unitary", "slocc"):
        raise ValueError(f"unknown mode {mode!r}")
    ops = [np.asarray(op, dtype=complex) for op in operators]
    if len(ops) != state.num_sites:
        raise ValueError(f"need {state.num_sites} operators, got {len(ops)}")
    for k, (op, d) in enumerate(zip(ops, state.dims)):
        if op.shape != (d, d):
            raise ValueError(f"operator {k} has shape {op.shape}, expected {(d, d)}")
        if mode == "unitary":
            resid = np.abs(op.conj().T @ op - np.eye(d)).max()
            if resid > UNITARITY_TOL:
                raise ValueError(f"operator {k} is not unitary (residual {resid:.2e})")
        else:
            sv = np.linalg.svd(op, compute_uv=False)
            if sv[-1] <= 1e-12 * sv[0]:
                raise ValueError(f"operator {k} is singular in SLOCC mode")
    T = state.tensor
    for k, op in enumerate(ops):
        T = np.tensordot(op, T, axes=([1], [k]))
        T = np.moveaxis(T, 0, k)
    v = np.ascontiguousarray(T.ravel())
    if mode == "unitary":
        # norm preserved by unitarity; renormalization is deliberately skipped
        v.setflags(write=False)
        return PureState(dims=state.dims, amps=v, norm_factor=1.0)
    return new_state(state.dims, v)


def _matricize(state: PureState, kept_sites) -> np.ndarray:
    """Reshape amplitudes to (dim of kept sites) x (dim of the rest)."""
    kept = tuple(kept_sites)
    rest = tuple(s for s in range(state.num_sites) if s not in kept)
    perm = kept + rest
    d_keep = int(np.prod([state.dims[s] for s in kept])) if kept else 1
    return np.transpose(state.tensor, perm).reshape(d_keep, -1)


def partial_trace(state: PureState, kept_sites) -> DensityMatrix:
    """Reduced density matrix on the kept sites (trace out the complement)."""
    kept = tuple(sorted(set(int(s) for s in kept_sites)))
    if not kept:
        raise ValueError("kept_sites must be non-empty")
    if any(s < 0 or s >= state.num_sites for s in kept):
        raise ValueError("site index out of range")
    if len(kept) == state.num_sites:
        raise ValueError("kept_sites must be a proper subset")
    M = _matricize(state, kept)
    rho = M @ M.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    rho.setflags(write=False)
    return DensityMatrix(dim=rho.shape[0], entries=rho)


def validate_density_matrix(dm: DensityMatrix,
                            herm_tol: float = HERMITICITY_TOL,
                            trace_tol: float = HERMITICITY_TOL,
                            eig_floor: float = EIGENVALUE_FLOOR) -> None:
    """Raise ValueError unless dm is Hermitian, unit trace and PSD within tolerance."""
    rho = dm.entries
    if rho.shape != (dm.dim, dm.dim):
        raise ValueError("entries shape does not match dim")
    if np.abs(rho - rho.conj().T).max() > herm_tol:
        raise ValueError("matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > trace_tol or abs(np.trace(rho).imag) > trace_tol:
        raise ValueError("trace is not 1")
    if np.linalg.eigvalsh(rho).min() < eig_floor:
        raise ValueError("matrix has a negative eigenvalue")


def schmidt(state: PureState, bipartition: Bipartition) -> SchmidtDecomposition:
    """Schmidt decomposition across a bipartition.

    The lambdas are the common eigenvalue spectrum of the two reductions,
    sorted descending; the bases are orthonormal vector families on the
    left and right factors.
    """
    M = _matricize(state, bipartition.left_sites)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    lam = s ** 2
    lam = lam / lam.sum()
    rank = int(np.sum(s > RANK_RTOL * s[0])) if s[0] > 0 else 0
    lam.setflags(write=False)
    # |psi> = sum_i sqrt(lam_i) |u_i>|v_i> with u_i = U[:, i], v_i = Vh[i, :]
    return SchmidtDecomposition(lambdas=lam, left_basis=U,
                                right_basis=Vh.T, rank=rank)


def spectra_report(dm: DensityMatrix) -> SpectraReport:
    """Eigenvalues (descending), von Neumann entropy (nats), linear entropy, purity."""
    lam = dm.eigenvalues()
    clipped = np.clip(lam, 0.0, None)
    purity = float(np.sum(np.abs(dm.entries) ** 2))
    pos = clipped[clipped > 0]
    s_vn = float(-(pos * np.log(pos)).sum())
    return SpectraReport(eigenvalues=lam, von_neumann_entropy=s_vn,
                         linear_entropy=1.0 - purity, purity=purity)


def bipartite_entropy(state: PureState, bipartition: Bipartition) -> float:
    """Von Neumann entropy of either reduction across the bipartition."""
    dec = schmidt(state, bipartition)
    lam = dec.lambdas[dec.lambdas > 0]
    return float(-(lam * np.log(lam)).sum())


def random_state(dims, seed) -> PureState:
    """Fubini-Study-uniform sample: i.i.d. complex Gaussian amplitudes, normalized."""
    dims = tuple(int(d) for d in dims)
    rng = np.random.default_rng(seed)
    n = int(np.prod(dims))
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return new_state(dims, v)


def random_states(dims, count: int, seed) -> list:
    """Batch of independent Fubini-Study samples from one seeded generator."""
    dims = tuple(int(d) for d in dims)
    rng = np.random.default_rng(seed)
    n = int(np.prod(dims))
    out = []
    for _ in range(count):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        out.append(new_state(dims, v))
    return out


def page_expected_entropy(size_x: int, size_xbar: int, local_dim: int) -> float:
    """Mean reduction entropy of a random pure state: |X| ln N - N^(|X|-|Xbar|)/2.

    This is the leading asymptotic form; the omitted correction is of order
    N^(-|X|-|Xbar|)/2.
    """
    if size_x > size_xbar:
        raise ValueError("size_x must not exceed size_xbar")
    if local_dim < 2:
        raise ValueError("local dimension must be at least 2")
    if size_x < 1:
        raise ValueError("size_x must be positive")
    return size_x * math.log(local_dim) - 0.5 * float(local_dim) ** (size_x - size_xbar)


def haar_unitary(dim: int, rng) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# ---------------------------------------------------------------------------
# State file format (shared by all modules and the CLI):
#   line 1:  dims d1 d2 ... dK
#   then:    <basis-string> <real> <imag>     (omitted strings are zero)
#   '#' starts a comment; the loader normalizes.
# ---------------------------------------------------------------------------

def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def read_state_file(path) -> PureState:
    """Parse a state file; raises StateFormatError with a line number on bad input."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    dims = None
    amps = None
    seen = set()
    for lineno, raw in enumerate(lines, start=1):
        text = _strip_comment(raw).strip()
        if not text:
            continue
        fields = text.split()
        if dims is None:
            if fields[0] != "dims":
                raise StateFormatError("first non-comment line must start with 'dims'", lineno)
            try:
                dims = tuple(int(x) for x in fields[1:])
            except ValueError:
                raise StateFormatError("non-integer dimension", lineno) from None
            if not dims or any(d < 2 for d in dims):
                raise StateFormatError("dims must list integers >= 2", lineno)
            amps = np.zeros(int(np.prod(dims)), dtype=complex)
            continue
        if len(fields) != 3:
            raise StateFormatError(f"expected 'basis re im', got {len(fields)} fields", lineno)
        digit_str, re_s, im_s = fields
        if len(digit_str) != len(dims) or not digit_str.isdigit():
            raise StateFormatError(f"basis string {digit_str!r} must have {len(dims)} digits", lineno)
        digits = [int(c) for c in digit_str]
        for d, n in zip(digits, dims):
            if d >= n:
                raise StateFormatError(f"digit {d} out of range for local dimension {n}", lineno)
        if digit_str in seen:
            raise StateFormatError(f"duplicate basis string {digit_str!r}", lineno)
        seen.add(digit_str)
        try:
            val = complex(float(re_s), float(im_s))
        except ValueError:
            raise StateFormatError("amplitude fields must be numbers", lineno) from None
        amps[basis_index(dims, digits)] = val
    if dims is None:
        raise StateFormatError("no 'dims' line found")
    if amps is None or not np.any(amps):
        raise StateFormatError("zero vector: no non-zero amplitudes given")
    return new_state(dims, amps)


def write_state_file(path, state: PureState, threshold: float = 0.0) -> None:
    """Write a state in the text format; amplitudes with |a| <= threshold are omitted."""
    dims = state.dims
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("dims " + " ".join(str(d) for d in dims) + "\n")
        for idx, a in enumerate(state.amps):
            if abs(a) <= threshold:
                continue
            digits = []
            rem = idx
            for d in reversed(dims):
                digits.append(rem % d)
                rem //= d
            label = "".join(str(x) for x in reversed(digits))
            fh.write(f"{label} {float(a.real)!r} {float(a.imag)!r}\n")
