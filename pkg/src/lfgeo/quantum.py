"""Dense statevector simulation of the extended Wigner's-friend scenario.

A four-qubit register (Alice's particle, Charlie's record, Bob's particle,
Debbie's record) carries the protocol: each friend writes their outcome
into a record qubit via a controlled copy in their measurement basis; the
superobserver either reads the record ("opens the vault", setting 1) or
undoes the friend unitary and measures the particle directly (settings
>= 2).  Behaviors produced here are float-valued; the polytope pipeline
receives them through Behavior.rationalized().
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .behavior import Behavior, Inequality, Scenario, StructuralError
from .polytope import CapExceededError

ATOL_STATE = 1e-12
DEFAULT_GRID_CAP = 2 * 10**8


@dataclass(frozen=True)
class PureState:
    """Unit vector over the computational basis of ``qubit_count`` qubits."""

    amplitudes: np.ndarray
    qubit_count: int

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (2 ** self.qubit_count,):
            raise StructuralError(
                f"state needs {2 ** self.qubit_count} amplitudes, got {amp.shape}")
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > ATOL_STATE:
            raise StructuralError(f"state norm {norm} deviates from 1 beyond {ATOL_STATE}")
        object.__setattr__(self, "amplitudes", amp)


def singlet_state() -> PureState:
    amp = np.zeros(4, dtype=complex)
    amp[1] = 1 / math.sqrt(2)   # |01>
    amp[2] = -1 / math.sqrt(2)  # |10>
    return PureState(amp, 2)


def schmidt_state(chi: float) -> PureState:
    """cos(chi)|00> + sin(chi)|11>; chi = pi/4 is maximally entangled."""
    amp = np.zeros(4, dtype=complex)
    amp[0] = math.cos(chi)
    amp[3] = math.sin(chi)
    return PureState(amp, 2)


@dataclass(frozen=True)
class QubitMeasurement:
    """Projective qubit measurement along the Bloch direction
    (sin theta cos phi, sin theta sin phi, cos theta); outcome 1 projects
    onto +direction, outcome 2 onto -direction."""

    theta: float
    phi: float = 0.0

    def direction(self) -> np.ndarray:
        st, ct = math.sin(self.theta), math.cos(self.theta)
        sp, cp = math.sin(self.phi), math.cos(self.phi)
        return np.array([st * cp, st * sp, ct])

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        nx, ny, nz = self.direction()
        pauli = nx * np.array([[0, 1], [1, 0]], dtype=complex) \
            + ny * np.array([[0, -1j], [1j, 0]]) \
            + nz * np.array([[1, 0], [0, -1]], dtype=complex)
        eye = np.eye(2, dtype=complex)
        return (eye + pauli) / 2, (eye - pauli) / 2

    def basis_unitary(self) -> np.ndarray:
        """Columns are the +/- direction eigenvectors (maps the
        computational basis to the measurement basis)."""
        ct2, st2 = math.cos(self.theta / 2), math.sin(self.theta / 2)
        ph = complex(math.cos(self.phi), math.sin(self.phi))
        plus = np.array([ct2, st2 * ph])
        minus = np.array([-st2, ct2 * ph])
        return np.column_stack([plus, minus])


@dataclass(frozen=True)
class EwfsConfig:
    """Full protocol configuration.  Setting 1 for each superobserver is
    "open the vault" and carries no measurement direction; alice_settings
    and bob_settings hold the directions for settings 2, 3, ..."""

    shared_state: PureState
    charlie_basis: QubitMeasurement
    debbie_basis: QubitMeasurement
    alice_settings: tuple
    bob_settings: tuple

    def __post_init__(self):
        if self.shared_state.qubit_count != 2:
            raise StructuralError("shared state must be two qubits")
        object.__setattr__(self, "alice_settings", tuple(self.alice_settings))
        object.__setattr__(self, "bob_settings", tuple(self.bob_settings))

    @property
    def scenario(self) -> Scenario:
        return Scenario(1 + len(self.alice_settings), 1 + len(self.bob_settings), 2, 2)

    def effective_alice(self) -> list[QubitMeasurement]:
        """Measurements equivalent to each Alice setting on the particle
        alone: the vault readout reproduces Charlie's basis."""
        return [self.charlie_basis, *self.alice_settings]

    def effective_bob(self) -> list[QubitMeasurement]:
        return [self.debbie_basis, *self.bob_settings]


def born_behavior(state: PureState, alice: Sequence[QubitMeasurement],
                  bob: Sequence[QubitMeasurement]) -> Behavior:
    """p(a,b|x,y) = <psi| Pi_a^x (x) Pi_b^y |psi> on a two-qubit state."""
    if state.qubit_count != 2:
        raise StructuralError("born_behavior needs a two-qubit state")
    if not alice or not bob:
        raise StructuralError("measurement lists must be nonempty")
    psi = state.amplitudes.reshape(2, 2)
    sc = Scenario(len(alice), len(bob), 2, 2)
    table = {}
    for x, ma in enumerate(alice, start=1):
        pa = ma.projectors()
        for y, mb in enumerate(bob, start=1):
            pb = mb.projectors()
            for a in (1, 2):
                for b in (1, 2):
                    out = pa[a - 1] @ psi @ pb[b - 1].T
                    table[(a, b, x, y)] = float(np.real(np.vdot(psi, out)))
    return Behavior(sc, table)


# ---------------------------------------------------------------------------
# EWFS register simulation
# ---------------------------------------------------------------------------

def _friend_unitary(basis: QubitMeasurement) -> np.ndarray:
    """Controlled copy in the friend's basis on (particle, record):
    |k_basis>|0> -> |k_basis>|k>."""
    U = basis.basis_unitary()
    V = np.zeros((4, 4), dtype=complex)
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    for k in range(2):
        ket = U[:, k]
        proj = np.outer(ket, ket.conj())
        V += np.kron(proj, np.linalg.matrix_power(X, k))
    return V


def _apply_two_qubit(op: np.ndarray, psi: np.ndarray, q0: int, q1: int) -> np.ndarray:
    """Apply a 4x4 operator to qubits (q0, q1) of a 4-qubit state."""
    t = psi.reshape([2] * 4)
    t = np.moveaxis(t, (q0, q1), (0, 1))
    t = (op.reshape(2, 2, 2, 2) .reshape(4, 4) @ t.reshape(4, -1)).reshape(2, 2, 2, 2)
    t = np.moveaxis(t, (0, 1), (q0, q1))
    return t.reshape(-1)


def _apply_one_qubit(op: np.ndarray, psi: np.ndarray, q: int) -> np.ndarray:
    t = psi.reshape([2] * 4)
    t = np.moveaxis(t, q, 0)
    t = (op @ t.reshape(2, -1)).reshape([2] * 4)
    t = np.moveaxis(t, 0, q)
    return t.reshape(-1)


_Z_PROJECTORS = (np.diag([1.0 + 0j, 0.0]), np.diag([0.0 + 0j, 1.0]))


def ewfs_behavior(cfg: EwfsConfig) -> Behavior:
    """Simulate the full protocol on the four-qubit register.

    Register order: qubit 0 Alice's particle, 1 Charlie's record, 2 Bob's
    particle, 3 Debbie's record.  Setting 1 reads the record in the
    computational basis; settings >= 2 undo the friend unitary and measure
    the particle.
    """
    sc = cfg.scenario
    # initial state: shared pair on (0, 2), records |0> on (1, 3)
    pair = cfg.shared_state.amplitudes.reshape(2, 2)
    psi = np.zeros([2] * 4, dtype=complex)
    psi[:, 0, :, 0] = pair
    psi = psi.reshape(-1)

    v_c = _friend_unitary(cfg.charlie_basis)
    v_d = _friend_unitary(cfg.debbie_basis)
    psi = _apply_two_qubit(v_c, psi, 0, 1)
    psi = _apply_two_qubit(v_d, psi, 2, 3)

    table = {}
    for x in range(1, sc.x_count + 1):
        if x == 1:
            psi_x = psi
            alice_projs = [_Z_PROJECTORS[k] for k in range(2)]
            alice_qubit = 1  # Charlie's record
        else:
            psi_x = _apply_two_qubit(v_c.conj().T, psi, 0, 1)
            alice_projs = list(cfg.alice_settings[x - 2].projectors())
            alice_qubit = 0
        for y in range(1, sc.y_count + 1):
            if y == 1:
                psi_xy = psi_x
                bob_projs = [_Z_PROJECTORS[k] for k in range(2)]
                bob_qubit = 3  # Debbie's record
            else:
                psi_xy = _apply_two_qubit(v_d.conj().T, psi_x, 2, 3)
                bob_projs = list(cfg.bob_settings[y - 2].projectors())
                bob_qubit = 2
            for a in (1, 2):
                branch_a = _apply_one_qubit(alice_projs[a - 1], psi_xy, alice_qubit)
                for b in (1, 2):
                    branch = _apply_one_qubit(bob_projs[b - 1], branch_a, bob_qubit)
                    table[(a, b, x, y)] = float(np.real(np.vdot(branch, branch)))
    return Behavior(sc, table)


# ---------------------------------------------------------------------------
# Optimization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OptimizationResult:
    config: EwfsConfig
    value: float
    trace: tuple  # best value after each sweep (monotone nondecreasing)


def _config_from_params(params: np.ndarray, x_count: int, y_count: int) -> EwfsConfig:
    chi = float(params[0])
    angles = params[1:]
    charlie = QubitMeasurement(float(angles[0]))
    debbie = QubitMeasurement(float(angles[1]))
    alice = tuple(QubitMeasurement(float(t)) for t in angles[2:2 + x_count - 1])
    bob = tuple(QubitMeasurement(float(t)) for t in angles[2 + x_count - 1:])
    return EwfsConfig(schmidt_state(chi), charlie, debbie, alice, bob)


def _objective(ineq: Inequality, params: np.ndarray, x_count: int, y_count: int) -> float:
    cfg = _config_from_params(params, x_count, y_count)
    beh = born_behavior(cfg.shared_state, cfg.effective_alice(), cfg.effective_bob())
    total = 0.0
    for idx, c in ineq.coeffs.items():
        total += float(c) * beh.p[idx]
    return total


def optimize_violation(ineq: Inequality, steps: int, seed: int,
                       initial: Optional[Sequence[float]] = None) -> OptimizationResult:
    """Coordinate ascent over all angles and the Schmidt angle.

    Each coordinate line is an exact sinusoid (the functional is linear in
    the projectors, hence in (cos t, sin t) of any single angle, and in
    (cos 2chi, sin 2chi) of the state parameter), so the line search solves
    it in closed form from three probes and accepts only improvements.
    Deterministic given (ineq, steps, seed, initial).
    """
    sc = ineq.scenario
    if (sc.a_count, sc.b_count) != (2, 2):
        raise StructuralError("optimizer needs binary outcomes")
    if not sc.requires_vault_settings():
        raise StructuralError("optimizer needs at least 2 settings per party")
    if steps < 1:
        raise StructuralError("steps must be positive")
    nang = sc.x_count + sc.y_count
    rng = np.random.default_rng(seed)
    if initial is not None:
        params = np.asarray(initial, dtype=float).copy()
        if params.shape != (1 + nang,):
            raise StructuralError(f"initial needs {1 + nang} parameters")
    else:
        params = np.concatenate([[math.pi / 4], rng.uniform(0, 2 * math.pi, nang)])

    def f(p):
        return _objective(ineq, p, sc.x_count, sc.y_count)

    best = f(params)
    trace = []
    for _ in range(steps):
        for j in range(len(params)):
            period_half = math.pi / 2 if j == 0 else math.pi  # chi enters as 2*chi
            base = params[j]
            probes = [base, base + period_half / 2, base + period_half]
            vals = []
            for t in probes:
                params[j] = t
                vals.append(f(params))
            alpha = (vals[0] + vals[2]) / 2
            beta = (vals[0] - vals[2]) / 2
            gamma = vals[1] - alpha
            phase = math.atan2(gamma, beta)
            t_star = base + phase * period_half / math.pi
            params[j] = t_star
            v_star = f(params)
            candidates = [(vals[0], base), (vals[1], probes[1]),
                          (vals[2], probes[2]), (v_star, t_star)]
            v_best, t_best = max(candidates, key=lambda kv: kv[0])
            if v_best > best:
                best = v_best
                params[j] = t_best
            else:
                params[j] = base
        trace.append(best)
    cfg = _config_from_params(params, sc.x_count, sc.y_count)
    return OptimizationResult(config=cfg, value=best, trace=tuple(trace))


def config_to_json(cfg: EwfsConfig) -> dict:
    return {
        "state": {
            "qubit_count": cfg.shared_state.qubit_count,
            "amplitudes": [[float(z.real), float(z.imag)]
                           for z in cfg.shared_state.amplitudes],
        },
        "charlie_basis": {"theta": cfg.charlie_basis.theta, "phi": cfg.charlie_basis.phi},
        "debbie_basis": {"theta": cfg.debbie_basis.theta, "phi": cfg.debbie_basis.phi},
        "alice_settings": [{"theta": m.theta, "phi": m.phi} for m in cfg.alice_settings],
        "bob_settings": [{"theta": m.theta, "phi": m.phi} for m in cfg.bob_settings],
    }


def config_from_json(data: dict) -> EwfsConfig:
    st = data["state"]
    amp = np.array([complex(re, im) for re, im in st["amplitudes"]])
    meas = lambda d: QubitMeasurement(float(d["theta"]), float(d.get("phi", 0.0)))
    return EwfsConfig(
        shared_state=PureState(amp, int(st["qubit_count"])),
        charlie_basis=meas(data["charlie_basis"]),
        debbie_basis=meas(data["debbie_basis"]),
        alice_settings=tuple(meas(d) for d in data["alice_settings"]),
        bob_settings=tuple(meas(d) for d in data["bob_settings"]),
    )


def optimization_to_json(res: OptimizationResult, ineq_id: str,
                         seed: int, steps: int) -> dict:
    return {"value": res.value, "config": config_to_json(res.config),
            "ineq_id": ineq_id, "seed": seed, "steps": steps}


def grid_seed_params(ineq: Inequality, resolution: int,
                     cap: int = DEFAULT_GRID_CAP) -> np.ndarray:
    """Optimizer parameters matching the best tsirelson_grid point.

    The grid models the singlet; the optimizer's state family is
    cos(chi)|00> + sin(chi)|11>.  At chi = pi/4 that state's z-x-plane
    correlator is cos(theta_a - theta_b), which matches the singlet's
    -cos(theta_a - theta_b) after shifting every Bob angle by pi, so the
    returned parameters reproduce the grid value exactly.
    """
    _, angles = tsirelson_grid(ineq, resolution, cap=cap, return_point=True)
    sc = ineq.scenario
    alice = list(angles[:sc.x_count])
    bob = [t + math.pi for t in angles[sc.x_count:]]
    return np.array([math.pi / 4, alice[0], bob[0], *alice[1:], *bob[1:]])


def tsirelson_grid(ineq: Inequality, resolution: int,
                   cap: int = DEFAULT_GRID_CAP, return_point: bool = False):
    """Brute-force oracle: singlet state fixed, z-x-plane angles on a
    uniform grid over [0, 2*pi), Alice's setting-1 angle pinned to 0 (a
    global rotation of all angles leaves every singlet correlator
    unchanged, so this loses no generality).  Returns the maximum of the
    functional over the grid (with the maximizing angles when
    ``return_point`` is set).
    """
    sc = ineq.scenario
    if (sc.a_count, sc.b_count) != (2, 2):
        raise StructuralError("grid oracle needs binary outcomes")
    if resolution < 1:
        raise StructuralError("resolution must be positive")
    dims = sc.x_count - 1 + sc.y_count
    if resolution ** dims > cap:
        raise CapExceededError(
            f"grid size {resolution}^{dims} exceeds cap {cap}")

    # singlet in the z-x plane: p(a,b|x,y) = (1 + (-1)^(a+b) E)/4 with
    # E = -cos(theta_x - theta_y); the functional is affine in the E's.
    base = 0.0
    K = np.zeros((sc.x_count, sc.y_count))
    for (a, b, x, y), c in ineq.coeffs.items():
        c = float(c)
        base += c / 4
        K[x - 1, y - 1] += -c / 4 * ((-1) ** (a + b))

    grid = np.arange(resolution) * (2 * math.pi / resolution)
    alice_axes = [np.array([0.0])] + [grid] * (sc.x_count - 1)
    bob_axes = [grid] * sc.y_count

    # accumulate sum_xy K_xy * cos(tx - ty) over the mesh, chunked over the
    # first non-trivial axis to bound memory
    mesh_axes = alice_axes + bob_axes
    shape = tuple(len(ax) for ax in mesh_axes)
    best = -np.inf
    best_point = None
    chunk_axis = 1 if sc.x_count > 1 else None
    chunks = [None]
    if chunk_axis is not None:
        chunks = range(shape[chunk_axis])
    for ci in chunks:
        axes = list(mesh_axes)
        if ci is not None:
            axes[chunk_axis] = np.array([mesh_axes[chunk_axis][ci]])
        grids = np.meshgrid(*axes, indexing="ij", sparse=True)
        total = np.broadcast_to(np.float64(base),
                                tuple(len(ax) for ax in axes)).copy()
        for x in range(sc.x_count):
            for y in range(sc.y_count):
                k = K[x, y]
                if k != 0.0:
                    total += k * np.cos(grids[x] - grids[sc.x_count + y])
        cbest = float(np.max(total))
        if cbest > best:
            best = cbest
            if return_point:
                idx = np.unravel_index(int(np.argmax(total)), total.shape)
                best_point = tuple(float(ax[i]) for ax, i in zip(axes, idx))
    if return_point:
        return best, best_point
    return best
