"""Gaussian pointer model: first-order shifts, exact coupling, sampling.

Units use hbar = 1 throughout.  A weak measurement couples observable A_i to
the momentum p_i of pointer i via U = exp(-i sum_i g_i A_i x p_i), and reads
out either pointer position or momentum.  To first order in g the conditional
readout means shift by

    dq_i = g_i Re W      and      dp_i = 2 g_i Im W (Delta p_i)^2,

with W the weak value for the post-selected outcome.  The exact finite-g
evolution is available on a discretized pointer grid so the first-order model
can be validated against it.
"""

import io
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import (
    DimensionMismatchError,
    PreconditionError,
    ResourceLimitError,
    UndefinedShiftError,
)
from .qcore import (
    ATOL_EXACT,
    PROB_FLOOR,
    Observable,
    OrthonormalBasis,
    StateVector,
)
from .weakval import WeakValueTable, weak_value_table, _as_density_matrix

# Joint system-pointer state may not exceed d * N^n = 2^22 complex amplitudes.
SIZE_LIMIT = 1 << 22
# Trials are generated in fixed blocks, each with its own (seed, block) RNG,
# so the merged stream never depends on how blocks are assigned to workers.
BLOCK_TRIALS = 1 << 14

QUAD_POSITION = 0
QUAD_MOMENTUM = 1
_QUAD_NAMES = ("q", "p")


@dataclass(frozen=True)
class PointerConfig:
    """Per-pointer couplings and Gaussian readout parameters.

    All arrays have length n_pointers.  Each pointer is a pure Gaussian with
    sigma_q * sigma_p = 1/2 (minimum uncertainty); couplings g may be zero
    (no interaction) but never negative.
    """

    g: np.ndarray
    mean_q: np.ndarray
    mean_p: np.ndarray
    sigma_q: np.ndarray
    sigma_p: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("g", "mean_q", "mean_p", "sigma_q", "sigma_p"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            arrays[name] = arr
        n = arrays["g"].size
        if any(arr.size != n for arr in arrays.values()):
            raise DimensionMismatchError("pointer parameter arrays have unequal lengths")
        if n < 1:
            raise ValueError("need at least one pointer")
        if np.any(arrays["g"] < 0):
            raise ValueError("couplings g must be >= 0")
        if np.any(arrays["sigma_q"] <= 0) or np.any(arrays["sigma_p"] <= 0):
            raise ValueError("pointer spreads must be positive")
        purity = arrays["sigma_q"] * arrays["sigma_p"]
        if np.max(np.abs(purity - 0.5)) > ATOL_EXACT:
            raise ValueError("pointers must satisfy sigma_q * sigma_p = 1/2 (pure Gaussian)")
        for name, arr in arrays.items():
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def uniform(cls, n_pointers: int, g: float = 0.05, sigma_q: float = 1.0,
                mean_q: float = 0.0, mean_p: float = 0.0) -> "PointerConfig":
        """n identical pointers; sigma_p is fixed by the purity constraint."""
        ones = np.ones(n_pointers)
        return cls(
            g=g * ones,
            mean_q=mean_q * ones,
            mean_p=mean_p * ones,
            sigma_q=sigma_q * ones,
            sigma_p=(0.5 / sigma_q) * ones,
        )

    @property
    def n_pointers(self) -> int:
        return self.g.size


@dataclass(frozen=True)
class PointerShift:
    """Conditional readout-mean shifts, one entry per pointer.

    ``probability`` carries the exact post-selection probability when the
    shifts come from the full joint evolution; first-order predictions leave
    it unset.
    """

    dq: np.ndarray
    dp: np.ndarray
    probability: float | None = None

    def __post_init__(self):
        dq = np.atleast_1d(np.asarray(self.dq, dtype=float))
        dp = np.atleast_1d(np.asarray(self.dp, dtype=float))
        if dq.size != dp.size:
            raise DimensionMismatchError("dq and dp lengths differ")
        dq.setflags(write=False)
        dp.setflags(write=False)
        object.__setattr__(self, "dq", dq)
        object.__setattr__(self, "dp", dp)


@dataclass(frozen=True)
class PointerGrid:
    """Symmetric position grid [-extent, extent) with n_points samples.

    n_points must be a power of two, at least 64, so the conjugate momentum
    grid comes from a radix-2 DFT of the position grid.
    """

    n_points: int = 256
    extent: float = 10.0

    def __post_init__(self):
        n = self.n_points
        if n < 64 or (n & (n - 1)) != 0:
            raise ValueError(f"n_points must be a power of two >= 64, got {n}")
        if self.extent <= 0:
            raise ValueError("extent must be positive")

    @classmethod
    def for_config(cls, cfg: PointerConfig, n_points: int = 256) -> "PointerGrid":
        return cls(n_points=n_points, extent=10.0 * float(cfg.sigma_q.max()))

    @property
    def dx(self) -> float:
        return 2.0 * self.extent / self.n_points

    def positions(self) -> np.ndarray:
        return -self.extent + self.dx * np.arange(self.n_points)

    def momenta(self) -> np.ndarray:
        # Angular momenta conjugate to the position grid, FFT-ordered.
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)


@dataclass(frozen=True)
class NoiseModel:
    """Readout corruption applied at sampling time.

    readout_sigma_scale multiplies the Gaussian readout spreads (0 gives
    noiseless records centered on the model means); systematic_offset is
    added to every position readout before estimation sees it.
    """

    readout_sigma_scale: float = 1.0
    systematic_offset: float = 0.0

    def __post_init__(self):
        if self.readout_sigma_scale < 0:
            raise ValueError("readout_sigma_scale must be >= 0")


@dataclass(frozen=True)
class ExperimentRecord:
    """One pointer readout from one trial."""

    trial: int
    outcome: int
    pointer: int
    quadrature: str  # "q" or "p"
    readout: float


@dataclass(frozen=True)
class RecordStream:
    """Columnar batch of experiment records, ordered trial-major.

    Iteration yields ExperimentRecord objects; bulk consumers should use the
    column arrays directly.
    """

    trial: np.ndarray
    outcome: np.ndarray
    pointer: np.ndarray
    quadrature: np.ndarray
    readout: np.ndarray
    n_trials: int = 0

    def __post_init__(self):
        cols = {
            "trial": np.asarray(self.trial, dtype=np.int64),
            "outcome": np.asarray(self.outcome, dtype=np.int64),
            "pointer": np.asarray(self.pointer, dtype=np.int64),
            "quadrature": np.asarray(self.quadrature, dtype=np.uint8),
            "readout": np.asarray(self.readout, dtype=np.float64),
        }
        size = cols["trial"].size
        if any(arr.size != size for arr in cols.values()):
            raise DimensionMismatchError("record columns have unequal lengths")
        n_trials = self.n_trials
        if n_trials == 0 and size:
            n_trials = int(cols["trial"].max()) + 1
        for name, arr in cols.items():
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "n_trials", n_trials)

    def __len__(self) -> int:
        return self.trial.size

    def __iter__(self):
        for t, j, i, c, r in zip(self.trial, self.outcome, self.pointer,
                                 self.quadrature, self.readout):
            yield ExperimentRecord(int(t), int(j), int(i), _QUAD_NAMES[c], float(r))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("trial,outcome_j,pointer,quadrature,readout\n")
        # repr of a Python float round-trips exactly; numpy scalars do not.
        for t, j, i, c, r in zip(self.trial.tolist(), self.outcome.tolist(),
                                 self.pointer.tolist(), self.quadrature.tolist(),
                                 self.readout.tolist()):
            buf.write(f"{t},{j},{i},{_QUAD_NAMES[c]},{r!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "RecordStream":
        trials, outcomes, pointers, quads, readouts = [], [], [], [], []
        lines = iter(text.splitlines())
        header = next(lines, "").strip()
        if header != "trial,outcome_j,pointer,quadrature,readout":
            raise ValueError(f"unexpected record CSV header: {header!r}")
        for line in lines:
            if not line:
                continue
            t, j, i, c, r = line.split(",")
            trials.append(int(t))
            outcomes.append(int(j))
            pointers.append(int(i))
            quads.append(_QUAD_NAMES.index(c))
            readouts.append(float(r))
        return cls(
            trial=np.array(trials, dtype=np.int64),
            outcome=np.array(outcomes, dtype=np.int64),
            pointer=np.array(pointers, dtype=np.int64),
            quadrature=np.array(quads, dtype=np.uint8),
            readout=np.array(readouts, dtype=np.float64),
        )


def first_order_shifts(W: complex, cfg: PointerConfig, pointer_index: int) -> PointerShift:
    """First-order readout shifts for one pointer given weak value W."""
    i = int(pointer_index)
    if not 0 <= i < cfg.n_pointers:
        raise IndexError(f"pointer index {i} out of range for {cfg.n_pointers} pointers")
    g = cfg.g[i]
    return PointerShift(
        dq=[g * W.real],
        dp=[2.0 * g * W.imag * cfg.sigma_p[i] ** 2],
    )


def table_shifts(table: WeakValueTable, cfg: PointerConfig) -> tuple[np.ndarray, np.ndarray]:
    """First-order mean shifts for every (outcome j, pointer i) cell."""
    if cfg.n_pointers != table.dim:
        raise DimensionMismatchError(
            f"{cfg.n_pointers} pointers cannot cover a dim-{table.dim} table"
        )
    dq = cfg.g * table.W.real
    dp = 2.0 * cfg.g * table.W.imag * cfg.sigma_p**2
    return dq, dp


def postselect_probability(rho, post: StateVector, cfg: PointerConfig, weak_values) -> float:
    """Post-selection probability corrected to first order in the couplings.

    P = tr(Pi rho) * (1 + 2 sum_i g_i Im(W_i) <p_i>), clamped to [0, 1].
    The correction vanishes for the default zero-mean pointers.
    """
    w = np.asarray(weak_values, dtype=complex)
    if w.size != cfg.n_pointers:
        raise DimensionMismatchError("need one weak value per pointer")
    mat = _as_density_matrix(rho)
    base = np.vdot(post.amplitudes, mat @ post.amplitudes).real
    factor = 1.0 + 2.0 * float(np.sum(cfg.g * w.imag * cfg.mean_p))
    return float(min(max(base * factor, 0.0), 1.0))


def gaussian_pointer(grid: PointerGrid, mean_q: float, mean_p: float,
                     sigma_q: float) -> np.ndarray:
    """Unit-norm Gaussian pointer samples on the position grid."""
    q = grid.positions()
    psi = np.exp(-((q - mean_q) ** 2) / (4.0 * sigma_q**2) + 1j * mean_p * (q - mean_q))
    return psi / np.linalg.norm(psi)


def pointer_covariance(psi: np.ndarray, grid: PointerGrid) -> float:
    """Symmetrized covariance <{q - <q>, p - <p>}> of a grid wavefunction."""
    q = grid.positions()
    k = grid.momenta()
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    q_mean = float(np.sum(q * np.abs(psi) ** 2))
    p_psi = np.fft.ifft(k * np.fft.fft(psi))
    p_mean = float(np.vdot(psi, p_psi).real)
    return float(2.0 * np.vdot((q - q_mean) * psi, p_psi - p_mean * psi).real)


def _mixture_components(mat: np.ndarray) -> list[tuple[float, np.ndarray]]:
    vals, vecs = np.linalg.eigh(mat)
    return [(float(v), vecs[:, m]) for m, v in enumerate(vals) if v > PROB_FLOOR]


def exact_joint_evolution(rho, observables, cfg: PointerConfig, grid: PointerGrid,
                          post: StateVector) -> PointerShift:
    """Exact conditional pointer shifts under U = exp(-i sum_i g_i A_i x p_i).

    The joint state of the system and all pointers is evolved exactly on the
    discretized grid: each momentum operator is diagonal in the DFT-conjugate
    grid, so for fixed momenta (k_1..k_n) the system evolves by the d x d
    unitary exp(-i sum_i g_i k_i A_i), whether or not the A_i commute.  After
    projecting the system onto ``post``, the conditional position and
    momentum means of every pointer are compared against the initial means.

    Raises
    ------
    ResourceLimitError
        If d * n_points^n_pointers exceeds 2^22.
    UndefinedShiftError
        If the exact post-selection probability is below 1e-14.
    """
    mat = _as_density_matrix(rho)
    d = mat.shape[0]
    n = cfg.n_pointers
    if len(observables) != n:
        raise DimensionMismatchError(f"{len(observables)} observables for {n} pointers")
    for obs in observables:
        if obs.dim != d:
            raise DimensionMismatchError("observable dimension does not match the state")
    if post.dim != d:
        raise DimensionMismatchError("post-selection dimension does not match the state")
    if grid.extent < 8.0 * float(cfg.sigma_q.max()):
        raise PreconditionError(
            f"grid extent {grid.extent} is below 8 * max sigma_q = {8 * cfg.sigma_q.max()}"
        )
    N = grid.n_points
    if d * N**n > SIZE_LIMIT:
        raise ResourceLimitError(
            f"joint state size d*N^n = {d * N**n} exceeds the 2^22 limit"
        )

    k1 = grid.momenta()
    q1 = grid.positions()
    pointer_axes = tuple(range(1, n + 1))
    # Joint momentum grid, one coordinate array per pointer, FFT-ordered.
    k_coords = np.meshgrid(*([k1] * n), indexing="ij") if n > 1 else [k1]
    flat_k = [kc.reshape(-1) for kc in k_coords]
    m_points = N**n

    # Batched eigh of H(k) = sum_i g_i k_i A_i, chunked to bound memory.
    a_mats = np.stack([obs.matrix for obs in observables])
    post_amp = post.amplitudes

    pointers_init = [
        gaussian_pointer(grid, cfg.mean_q[i], cfg.mean_p[i], cfg.sigma_q[i])
        for i in range(n)
    ]
    pointer_product = reduce(np.multiply.outer, pointers_init)

    weight_k = np.zeros(m_points)
    weight_q = np.zeros((N,) * n)
    total_norm = 0.0
    chunk = 1 << 15
    for w_m, chi in _mixture_components(mat):
        joint = chi.reshape((d,) + (1,) * n) * pointer_product[None]
        phi = np.fft.fftn(joint, axes=pointer_axes).reshape(d, m_points)
        xi = np.empty(m_points, dtype=complex)
        for lo in range(0, m_points, chunk):
            hi = min(lo + chunk, m_points)
            h_batch = np.zeros((hi - lo, d, d), dtype=complex)
            for i in range(n):
                h_batch += (cfg.g[i] * flat_k[i][lo:hi])[:, None, None] * a_mats[i]
            vals, vecs = np.linalg.eigh(h_batch)
            # U(k) phi = V exp(-i Lambda) V^dag phi at each grid point.
            y = np.einsum("bts,tb->bs", vecs.conj(), phi[:, lo:hi])
            y *= np.exp(-1j * vals)
            evolved = np.einsum("bst,bt->sb", vecs, y)
            xi[lo:hi] = post_amp.conj() @ evolved
        total_norm += w_m * float(np.vdot(xi, xi).real)
        weight_k += w_m * np.abs(xi) ** 2
        zeta = np.fft.ifftn(xi.reshape((N,) * n), axes=tuple(range(n)))
        weight_q += w_m * np.abs(zeta) ** 2

    prob = total_norm / m_points  # Parseval: initial FFT norm is N^n per unit state
    if prob <= PROB_FLOOR:
        raise UndefinedShiftError(
            f"exact post-selection probability {prob:.3e} is below {PROB_FLOOR}"
        )

    weight_k = weight_k.reshape((N,) * n)
    dq = np.empty(n)
    dp = np.empty(n)
    for i in range(n):
        other = tuple(ax for ax in range(n) if ax != i)
        marg_p = weight_k.sum(axis=other) if other else weight_k
        marg_q = weight_q.sum(axis=other) if other else weight_q
        dp[i] = float(np.sum(k1 * marg_p) / marg_p.sum()) - cfg.mean_p[i]
        dq[i] = float(np.sum(q1 * marg_q) / marg_q.sum()) - cfg.mean_q[i]
    return PointerShift(dq=dq, dp=dp, probability=prob)


def _sample_stream(P: np.ndarray, dq: np.ndarray, dp: np.ndarray, cfg: PointerConfig,
                   shots: int, seed: int, noise: NoiseModel | None) -> RecordStream:
    """Draw ``shots`` trials from outcome law P with per-cell readout means.

    dq/dp have shape (d, n_pointers).  Even trials read positions, odd trials
    momenta, every pointer in the same trial using the same quadrature.  The
    stream is generated in fixed-size blocks seeded by (seed, block), so it
    is identical no matter how many workers consume the blocks.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    noise = noise or NoiseModel()
    n = cfg.n_pointers
    d = P.size
    cum = np.cumsum(P)
    cum[-1] = 1.0
    sigma_q_eff = cfg.sigma_q * noise.readout_sigma_scale
    sigma_p_eff = cfg.sigma_p * noise.readout_sigma_scale

    trial_col = np.empty(shots * n, dtype=np.int64)
    outcome_col = np.empty(shots * n, dtype=np.int64)
    pointer_col = np.empty(shots * n, dtype=np.int64)
    quad_col = np.empty(shots * n, dtype=np.uint8)
    readout_col = np.empty(shots * n, dtype=np.float64)
    pointer_tile = np.arange(n, dtype=np.int64)

    for block in range((shots + BLOCK_TRIALS - 1) // BLOCK_TRIALS):
        lo = block * BLOCK_TRIALS
        hi = min(lo + BLOCK_TRIALS, shots)
        nb = hi - lo
        rng = np.random.default_rng([seed, block])
        outcomes = np.searchsorted(cum, rng.random(nb), side="right")
        z = rng.standard_normal((nb, n))
        trials = np.arange(lo, hi, dtype=np.int64)
        is_q = (trials % 2) == 0

        mean = np.where(is_q[:, None],
                        cfg.mean_q + dq[outcomes] + noise.systematic_offset,
                        cfg.mean_p + dp[outcomes])
        spread = np.where(is_q[:, None], sigma_q_eff, sigma_p_eff)
        readout = mean + spread * z

        sl = slice(lo * n, hi * n)
        trial_col[sl] = np.repeat(trials, n)
        outcome_col[sl] = np.repeat(outcomes, n)
        pointer_col[sl] = np.tile(pointer_tile, nb)
        quad_col[sl] = np.repeat(np.where(is_q, QUAD_POSITION, QUAD_MOMENTUM), n).astype(np.uint8)
        readout_col[sl] = readout.reshape(-1)

    return RecordStream(trial=trial_col, outcome=outcome_col, pointer=pointer_col,
                        quadrature=quad_col, readout=readout_col, n_trials=shots)


def sample_records(rho, basis_a: OrthonormalBasis, basis_b: OrthonormalBasis,
                   cfg: PointerConfig, shots: int, seed: int,
                   noise: NoiseModel | None = None) -> RecordStream:
    """Simulate a full tomography run: one pointer per projector of basis A.

    Each trial draws its post-selection outcome j from the exact outcome law,
    then emits one readout per pointer from a Gaussian centered on the
    first-order shifted mean for (j, i).  Masked (zero-probability) outcomes
    are never drawn.
    """
    table = weak_value_table(rho, basis_a, basis_b)
    if cfg.n_pointers != table.dim:
        raise DimensionMismatchError(
            f"need {table.dim} pointers (one per basis-A projector), got {cfg.n_pointers}"
        )
    dq, dp = table_shifts(table, cfg)
    return _sample_stream(table.P, dq, dp, cfg, shots, seed, noise)


def sample_observable_records(rho, observable: Observable, basis_b: OrthonormalBasis,
                              cfg: PointerConfig, shots: int, seed: int,
                              noise: NoiseModel | None = None) -> RecordStream:
    """Simulate a run with a single pointer coupled to one observable.

    Outcomes still range over all of basis B; the lone pointer's readout mean
    for outcome j follows the weak value of ``observable`` at that outcome.
    Rows whose post-selection probability vanishes are never drawn.
    """
    if cfg.n_pointers != 1:
        raise DimensionMismatchError("single-observable sampling uses exactly one pointer")
    mat = _as_density_matrix(rho)
    d = mat.shape[0]
    bv = basis_b.vectors
    P = np.einsum("ij,ji->i", bv.conj().T, mat @ bv).real
    numer = np.einsum("ij,ji->i", bv.conj().T, observable.matrix @ mat @ bv)
    w = np.zeros(d, dtype=complex)
    defined = P > PROB_FLOOR
    w[defined] = numer[defined] / P[defined]
    dq = (cfg.g[0] * w.real)[:, None]
    dp = (2.0 * cfg.g[0] * w.imag * cfg.sigma_p[0] ** 2)[:, None]
    return _sample_stream(np.clip(P, 0.0, 1.0), dq, dp, cfg, shots, seed, noise)


def _cell_statistics(records: RecordStream, dim: int, n_pointers: int):
    """Counts, means, and standard errors per (outcome, pointer, quadrature)."""
    idx = ((records.outcome * n_pointers + records.pointer) * 2
           + records.quadrature.astype(np.int64))
    n_cells = dim * n_pointers * 2
    counts = np.bincount(idx, minlength=n_cells)
    sums = np.bincount(idx, weights=records.readout, minlength=n_cells)
    sumsq = np.bincount(idx, weights=records.readout**2, minlength=n_cells)
    shape = (dim, n_pointers, 2)
    counts = counts.reshape(shape)
    sums = sums.reshape(shape)
    sumsq = sumsq.reshape(shape)
    means = np.divide(sums, counts, out=np.zeros(shape), where=counts > 0)
    # Unbiased per-cell variance; standard error of the cell mean.
    var = np.divide(sumsq - counts * means**2, counts - 1,
                    out=np.zeros(shape), where=counts > 1)
    stderr = np.sqrt(np.divide(np.clip(var, 0.0, None), counts,
                               out=np.zeros(shape), where=counts > 1))
    return counts, means, stderr


def estimate_weak_values(records: RecordStream, cfg: PointerConfig, dim: int) -> WeakValueTable:
    """Invert the first-order shift model on a record stream.

    Produces an estimated weak-value table: Re W[j,i] from position cells,
    Im W[j,i] from momentum cells, P[j] from outcome frequencies, and
    per-entry standard errors.  Rows with any empty (pointer, quadrature)
    cell are masked undefined; cells with fewer than two records report a
    zero standard error.
    """
    n = cfg.n_pointers
    if n != dim:
        raise DimensionMismatchError(f"need {dim} pointers for a dim-{dim} table, got {n}")
    if np.any(cfg.g <= 0):
        raise PreconditionError("estimation divides by g; all couplings must be positive")
    counts, means, stderr = _cell_statistics(records, dim, n)
    per_trial = records.pointer == 0
    trials_per_outcome = np.bincount(records.outcome[per_trial], minlength=dim)
    # Each trial contributes one pointer-0 record, so this counts trials.
    n_trials = trials_per_outcome.sum()
    if n_trials == 0:
        raise ValueError("record stream is empty")
    P = trials_per_outcome / n_trials
    defined = counts.min(axis=(1, 2)) > 0

    im_scale = 2.0 * cfg.g * cfg.sigma_p**2
    re = (means[:, :, QUAD_POSITION] - cfg.mean_q) / cfg.g
    im = (means[:, :, QUAD_MOMENTUM] - cfg.mean_p) / im_scale
    W = re + 1j * im
    W[~defined] = 0.0
    return WeakValueTable(
        dim=dim, W=W, P=P, defined=defined,
        stderr_re=stderr[:, :, QUAD_POSITION] / cfg.g,
        stderr_im=stderr[:, :, QUAD_MOMENTUM] / im_scale,
    )


@dataclass(frozen=True)
class ColumnEstimate:
    """Estimated weak values of a single observable across outcomes."""

    w: np.ndarray
    P: np.ndarray
    defined: np.ndarray
    stderr_re: np.ndarray
    stderr_im: np.ndarray
    n_trials: int


def estimate_weak_value_column(records: RecordStream, cfg: PointerConfig,
                               dim: int) -> ColumnEstimate:
    """Single-pointer counterpart of estimate_weak_values."""
    if cfg.n_pointers != 1:
        raise DimensionMismatchError("column estimation expects a single pointer")
    if cfg.g[0] <= 0:
        raise PreconditionError("estimation divides by g; the coupling must be positive")
    counts, means, stderr = _cell_statistics(records, dim, 1)
    trials_per_outcome = np.bincount(records.outcome, minlength=dim)
    n_trials = int(trials_per_outcome.sum())
    if n_trials == 0:
        raise ValueError("record stream is empty")
    im_scale = 2.0 * cfg.g[0] * cfg.sigma_p[0] ** 2
    re = (means[:, 0, QUAD_POSITION] - cfg.mean_q[0]) / cfg.g[0]
    im = (means[:, 0, QUAD_MOMENTUM] - cfg.mean_p[0]) / im_scale
    w = re + 1j * im
    defined = counts[:, 0].min(axis=1) > 0
    w[~defined] = 0.0
    return ColumnEstimate(
        w=w,
        P=trials_per_outcome / n_trials,
        defined=defined,
        stderr_re=stderr[:, 0, QUAD_POSITION] / cfg.g[0],
        stderr_im=stderr[:, 0, QUAD_MOMENTUM] / im_scale,
        n_trials=n_trials,
    )
