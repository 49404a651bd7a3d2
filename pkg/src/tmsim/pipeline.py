"""Recognition pipeline: sensor array, noise model, training and evaluation.

The network is three layers of hardware.  A 4x2 dual-readout sensor
crossbar turns a force pattern into 6 line currents (2 column sums, 4 row
sums); a 6x14 differential-pair crossbar with rectifying line amplifiers
forms the hidden layer; a 14xN differential crossbar feeding the analog
softmax chain forms the output layer.

Training happens on the software twin of this stack with plain mini-batch
gradient descent.  The eight sensor-layer memristor states are free
parameters constrained to [0, 1]; their gradient flows through the series
conductance composition, differentiated by central differences.  Dense
weights map onto conductance pairs afterwards (``map_network``); the dense
biases are realized as line-amplifier output offsets rather than extra
conductances.

Sensor readouts are normalized before entering the hidden layer: dividing
by ``feature_norm_current`` scales the contribution of one pressed dot
(at full memristor conductance) to ``pipeline.dot_gain`` feature units.
Additive Gaussian noise with the dimensionless variances of the noise
grid is applied to these normalized features, during training
(augmentation) and at evaluation, so ``dot_gain`` fixes the signal
amplitude relative to the noise.  The dense layers then see the noisy
features divided by ``dot_gain`` (unit increment per dot), which keeps
their inputs O(1) regardless of the gain setting; the rescaling is
absorbed by the trained weights.  The binary variant thresholds the noisy
normalized features at half of each feature's noiseless maximum and
trains on the resulting bits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .analog_blocks import SoftmaxParams
from .braille import BrailleGroup, label_to_group, symbols
from .config import SimConfig
from .crossbar import (
    CrossbarSpec,
    Readout,
    ReadoutVector,
    ideal_dual_readout,
    solve_nodal,
    weights_to_differential,
)
from .devices import CellConfig, CellState, MemristorModel, SwitchModel

__all__ = [
    "NetworkArch",
    "NoiseSpec",
    "TrainHyper",
    "TrainedNetwork",
    "HardwareNetwork",
    "EvalEntry",
    "EvalReport",
    "TrainingError",
    "build_sensor_crossbar",
    "sensor_layer_forward",
    "feature_norm_current",
    "add_noise",
    "train",
    "map_network",
    "forward",
    "evaluate",
    "split_holdout",
    "sweep_point",
    "run_sweep",
    "SweepRow",
    "network_to_json",
    "network_from_json",
    "eval_report_to_csv",
]

NETWORK_SCHEMA_VERSION = 1

SENSOR_ROWS = 4
SENSOR_COLS = 2
N_FEATURES = SENSOR_COLS + SENSOR_ROWS  # column readouts then row readouts


class TrainingError(RuntimeError):
    """Training diverged or was fed an inconsistent dataset."""


@dataclass(frozen=True)
class NetworkArch:
    """Output labels plus layer sizes (inputs are the 6 sensor readouts)."""

    labels: tuple[str, ...]
    n_inputs: int = N_FEATURES
    n_hidden: int = 14

    def __post_init__(self) -> None:
        if len(self.labels) < 2:
            raise ValueError("need at least two output labels")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("output labels must be unique")

    @property
    def n_out(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian noise on the normalized signal: variance + stream seed."""

    sigma2: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sigma2 < 0.0:
            raise ValueError(f"sigma2 must be non-negative, got {self.sigma2}")


@dataclass(frozen=True)
class TrainHyper:
    lr: float = 0.05
    epochs: int = 500
    batch_size: int = 32
    seed: int = 0
    sigma2: float = 0.0  # noise augmentation variance during training
    mode: str = "analog"

    def __post_init__(self) -> None:
        if self.mode not in ("analog", "binary"):
            raise ValueError(f"mode must be 'analog' or 'binary', got {self.mode!r}")
        if self.lr <= 0.0 or self.epochs < 1 or self.batch_size < 1 or self.sigma2 < 0.0:
            raise ValueError("bad hyperparameters")

    @classmethod
    def from_config(cls, cfg: SimConfig, seed: int = 0, sigma2: float = 0.0, mode: str = "analog") -> "TrainHyper":
        return cls(lr=cfg.train.lr, epochs=cfg.train.epochs, batch_size=cfg.train.batch_size,
                   seed=seed, sigma2=sigma2, mode=mode)


@dataclass(frozen=True)
class TrainedNetwork:
    arch: NetworkArch
    mode: str
    w_hidden: np.ndarray  # (6, n_hidden)
    b_hidden: np.ndarray  # (n_hidden,)
    w_out: np.ndarray  # (n_hidden, n_out)
    b_out: np.ndarray  # (n_out,)
    sensor_states: np.ndarray  # (4, 2) memristor states in [0, 1]
    binary_threshold: np.ndarray | None = None  # (6,), binary mode only


@dataclass(frozen=True)
class HardwareNetwork:
    """Differential-conductance realization of a trained network.

    ``amp_hidden``/``amp_out`` are the transimpedance gains of the line
    amplifiers; they default to the reciprocal of the programming scale, so
    the mapped MACs reproduce the software activations exactly and argmax
    decisions are unchanged.
    """

    network: TrainedNetwork
    cfg: SimConfig
    gp_hidden: np.ndarray
    gm_hidden: np.ndarray
    scale_hidden: float
    gp_out: np.ndarray
    gm_out: np.ndarray
    scale_out: float
    amp_hidden: float
    amp_out: float


@dataclass(frozen=True)
class EvalEntry:
    group: str  # group name, or "overall" for the whole dataset
    sigma2: float
    accuracy: float  # percent
    n_items: int
    confusions: tuple[tuple[tuple[str, str], int], ...]  # ((true, predicted), count)


@dataclass(frozen=True)
class EvalReport:
    mode: str
    seed: int
    entries: tuple[EvalEntry, ...]

    def accuracy(self, group: str, sigma2: float) -> float:
        for entry in self.entries:
            if entry.group == group and entry.sigma2 == sigma2:
                return entry.accuracy
        raise KeyError(f"no entry for ({group!r}, sigma2={sigma2})")


# ---------------------------------------------------------------------------
# sensor layer


def _check_sensor_arrays(forces: np.ndarray, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    forces = np.asarray(forces, dtype=float)
    states = np.asarray(states, dtype=float)
    if forces.shape != (SENSOR_ROWS, SENSOR_COLS):
        raise ValueError(f"forces must be {SENSOR_ROWS}x{SENSOR_COLS}, got {forces.shape}")
    if states.shape != (SENSOR_ROWS, SENSOR_COLS):
        raise ValueError(f"states must be {SENSOR_ROWS}x{SENSOR_COLS}, got {states.shape}")
    if np.any(forces < 0.0):
        raise ValueError("forces must be non-negative")
    if np.any((states < 0.0) | (states > 1.0)):
        raise ValueError("memristor states must lie in [0, 1]")
    return forces, states


def build_sensor_crossbar(
    forces: np.ndarray, states: np.ndarray, cfg: SimConfig, parasitic: bool = False
) -> CrossbarSpec:
    """4x2 dual-readout 2T1M1S array for one force pattern.

    ``parasitic`` swaps in the calibrated wire resistance and switch
    off-conductance so ``solve_nodal`` exposes the sneak-path droop.
    """
    forces, states = _check_sensor_arrays(forces, states)
    g_off = cfg.parasitics.switch_g_off if parasitic else cfg.switch_g_off
    wire = cfg.parasitics.wire_resistance if parasitic else 0.0
    switch = SwitchModel(g_on=cfg.switch_g_on, g_off=g_off, selected=True)
    cells = tuple(
        tuple(
            CellState(
                config=CellConfig.TWO_T1M1S,
                memristor=replace(cfg.memristor, state_w=float(states[k, l])),
                vl_switch=switch,
                hl_switch=switch,
                sensor=cfg.sensor,
                force_f=float(forces[k, l]),
            )
            for l in range(SENSOR_COLS)
        )
        for k in range(SENSOR_ROWS)
    )
    return CrossbarSpec(
        m=SENSOR_ROWS,
        n=SENSOR_COLS,
        cells=cells,
        wire_resistance_per_segment=wire,
        readout=Readout.VL_AND_HL,
        termination_conductance=cfg.parasitics.termination_conductance,
    )


def sensor_layer_forward(
    forces: np.ndarray, states: np.ndarray, cfg: SimConfig, fidelity: str = "ideal"
) -> np.ndarray:
    """Raw line currents of the sensor array: 2 column readouts then 4 row readouts."""
    if fidelity not in ("ideal", "nodal"):
        raise ValueError(f"fidelity must be 'ideal' or 'nodal', got {fidelity!r}")
    spec = build_sensor_crossbar(forces, states, cfg, parasitic=(fidelity == "nodal"))
    if fidelity == "ideal":
        rv = ideal_dual_readout(cfg.sensor.v_supply, spec)
    else:
        rv = solve_nodal(spec, cfg.sensor.v_supply)
    return rv.concatenated()


def _cell_u(states, force, cfg: SimConfig):
    """Series cell conductance, vectorized over states/forces arrays."""
    g_s = cfg.sensor.sensitivity_k * force + cfg.sensor.bias_c
    g_off = 1.0 / cfg.memristor.r_off
    g_m = g_off + states * (1.0 / cfg.memristor.r_on - g_off)
    return 1.0 / (1.0 / g_s + 1.0 / g_m + 1.0 / cfg.switch_g_on)


def feature_norm_current(cfg: SimConfig) -> float:
    """Current of one normalized feature unit.

    One pressed dot at full memristor conductance raises its column and row
    readout by ``dot_gain`` feature units above the unpressed floor.
    """
    u_on = _cell_u(1.0, cfg.f_press, cfg)
    u_off = _cell_u(1.0, 0.0, cfg)
    return cfg.sensor.v_supply * (u_on - u_off) / cfg.dot_gain


def _batch_features(dots: np.ndarray, states: np.ndarray, cfg: SimConfig) -> np.ndarray:
    """Normalized sensor features for a batch of dot masks, shape (N, 6).

    Algebraically identical to running ``sensor_layer_forward`` per item and
    normalizing, but in one broadcast evaluation.
    """
    u_on = _cell_u(states, cfg.f_press, cfg)
    u_off = _cell_u(states, 0.0, cfg)
    conduct = dots * u_on + (1.0 - dots) * u_off  # (N, 4, 2)
    raw = np.concatenate([conduct.sum(axis=1), conduct.sum(axis=2)], axis=1) * cfg.sensor.v_supply
    return raw / feature_norm_current(cfg)


def add_noise(x: np.ndarray, noise: NoiseSpec) -> np.ndarray:
    """Additive i.i.d. Gaussian noise of variance sigma2 on a normalized signal."""
    x = np.asarray(x, dtype=float)
    if noise.sigma2 == 0.0:
        return x.copy()
    rng = np.random.default_rng(noise.seed)
    return x + np.sqrt(noise.sigma2) * rng.standard_normal(x.shape)


# ---------------------------------------------------------------------------
# training


def _dataset_arrays(dataset, arch: NetworkArch) -> tuple[np.ndarray, np.ndarray]:
    if not dataset:
        raise TrainingError("dataset is empty")
    label_index = {label: i for i, label in enumerate(arch.labels)}
    dots = np.zeros((len(dataset), SENSOR_ROWS, SENSOR_COLS))
    targets = np.zeros(len(dataset), dtype=int)
    for i, (grid, label) in enumerate(dataset):
        if label not in label_index:
            raise TrainingError(f"dataset label {label!r} is not in the architecture's outputs")
        grid = np.asarray(grid, dtype=float)
        if grid.shape != (SENSOR_ROWS, SENSOR_COLS):
            raise TrainingError(f"item {i}: force grid must be 4x2, got {grid.shape}")
        dots[i] = grid > 0.0
        targets[i] = label_index[label]
    return dots, targets


def _stable_softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


# central-difference step for the memristor state gradient, relative to the
# unit-width state range
_STATE_DIFF_STEP = 1.0e-6

# The sensor states follow the dense weights with a damped step.  The bulk of
# the loss pushes every state toward full conductance (more signal); the few
# symbol pairs that need state diversity push back much more weakly because
# they are a small fraction of any batch.  Damping keeps the initial
# increment ladder from being flattened before the dense layers have learned
# to exploit it.
_STATE_LR_FACTOR = 0.02


def _state_increment_ladder(cfg: SimConfig, rng: np.random.Generator) -> np.ndarray:
    """Initial sensor states with mutually distinct pressed-dot increments.

    Cells with equal states make symmetric dot patterns (same per-row and
    per-column pressed counts) indistinguishable, and the gradient toward
    distinct states vanishes near full conductance where the series
    composition saturates.  Starting the eight cells on an even ladder of
    increment values (assignment permuted per seed) breaks that symmetry
    from the first step; gradient descent then refines the rungs.
    """
    w_grid = np.linspace(0.0, 1.0, 2001)
    increments = _cell_u(w_grid, cfg.f_press, cfg) - _cell_u(w_grid, 0.0, cfg)
    targets = np.linspace(increments[0], increments[-1], SENSOR_ROWS * SENSOR_COLS)
    states = np.interp(targets, increments, w_grid)
    return rng.permutation(states).reshape(SENSOR_ROWS, SENSOR_COLS)


def _state_sensitivity(states: np.ndarray, force: float, cfg: SimConfig) -> np.ndarray:
    up = _cell_u(states + _STATE_DIFF_STEP, force, cfg)
    down = _cell_u(states - _STATE_DIFF_STEP, force, cfg)
    return (up - down) / (2.0 * _STATE_DIFF_STEP)


def train(dataset, arch: NetworkArch, hyper: TrainHyper, cfg: SimConfig) -> TrainedNetwork:
    """Mini-batch gradient descent on the software twin of the hardware stack.

    Analog mode trains the dense layers and the eight sensor memristor
    states (projected back into [0, 1] after every step).  Binary mode
    fixes the states at full conductance -- the hard threshold passes no
    gradient -- and trains the dense layers on thresholded features.

    Raises:
        TrainingError: on divergence (non-finite loss) or dataset/arch
            mismatch.
    """
    dots, targets = _dataset_arrays(dataset, arch)
    n_items = len(dataset)
    rng = np.random.default_rng(hyper.seed)

    w1 = rng.normal(0.0, np.sqrt(2.0 / arch.n_inputs), (arch.n_inputs, arch.n_hidden))
    b1 = np.zeros(arch.n_hidden)
    w2 = rng.normal(0.0, np.sqrt(2.0 / arch.n_hidden), (arch.n_hidden, arch.n_out))
    b2 = np.zeros(arch.n_out)

    if hyper.mode == "analog":
        states = _state_increment_ladder(cfg, rng)
        threshold = None
    else:
        states = np.ones((SENSOR_ROWS, SENSOR_COLS))
        noiseless = _batch_features(dots, states, cfg)
        threshold = 0.5 * noiseless.max(axis=0)

    sigma = np.sqrt(hyper.sigma2)
    onehot = np.eye(arch.n_out)[targets]
    # d(network input)/d(cell conductance): every feature is a plain sum of
    # cell conductances (its column for features 0..1, its row for 2..5)
    # scaled by v_supply, the normalization and the O(1) input division
    feat_scale = cfg.sensor.v_supply / (feature_norm_current(cfg) * cfg.dot_gain)

    for epoch in range(hyper.epochs):
        order = rng.permutation(n_items)
        for start in range(0, n_items, hyper.batch_size):
            batch = order[start : start + hyper.batch_size]
            a = dots[batch]
            feats = _batch_features(a, states, cfg)
            x = feats if sigma == 0.0 else feats + sigma * rng.standard_normal(feats.shape)
            if threshold is not None:
                x = (x >= threshold).astype(float)
            else:
                x = x / cfg.dot_gain

            pre1 = x @ w1 + b1
            hidden = np.maximum(pre1, 0.0)
            logits = hidden @ w2 + b2
            probs = _stable_softmax(logits)
            picked = probs[np.arange(len(batch)), targets[batch]]
            loss = -np.log(np.maximum(picked, 1e-300)).mean()
            if not np.isfinite(loss):
                raise TrainingError(f"loss diverged at epoch {epoch}: {loss}")

            dz = (probs - onehot[batch]) / len(batch)
            dw2 = hidden.T @ dz
            db2 = dz.sum(axis=0)
            dhidden = dz @ w2.T
            dpre1 = dhidden * (pre1 > 0.0)
            dw1 = x.T @ dpre1
            db1 = dpre1.sum(axis=0)

            if hyper.mode == "analog":
                dx = dpre1 @ w1.T  # (B, 6)
                dcell = (dx[:, None, :SENSOR_COLS] + dx[:, SENSOR_COLS:, None]) * feat_scale
                du_on = (dcell * a).sum(axis=0)
                du_off = (dcell * (1.0 - a)).sum(axis=0)
                sens_on = _state_sensitivity(states, cfg.f_press, cfg)
                sens_off = _state_sensitivity(states, 0.0, cfg)
                dstates = du_on * sens_on + du_off * sens_off
                # descend in increment space: the state-to-increment map is
                # steep near 0 and nearly flat near 1, so raw state steps
                # either overshoot the sensitive region or stall; dividing by
                # the squared sensitivity equals gradient descent on the
                # increment itself
                cond = np.maximum((sens_on - sens_off) * feat_scale, 1e-2)
                step = hyper.lr * _STATE_LR_FACTOR * dstates / cond**2
                states = np.clip(states - step, 0.0, 1.0)

            w1 -= hyper.lr * dw1
            b1 -= hyper.lr * db1
            w2 -= hyper.lr * dw2
            b2 -= hyper.lr * db2

    return TrainedNetwork(
        arch=arch,
        mode=hyper.mode,
        w_hidden=w1,
        b_hidden=b1,
        w_out=w2,
        b_out=b2,
        sensor_states=states,
        binary_threshold=threshold,
    )


# ---------------------------------------------------------------------------
# hardware mapping and inference


def _layer_scale(weights: np.ndarray, span: float) -> float:
    peak = float(np.abs(weights).max())
    return span / peak if peak > 0.0 else span


def map_network(tn: TrainedNetwork, cfg: SimConfig) -> HardwareNetwork:
    """Program dense weights onto differential conductance pairs.

    Each layer uses the largest scale that keeps its extreme weight exactly
    at the memristor span, and an amplifier gain of 1/scale so mapped
    activations equal the software ones.
    """
    span = 1.0 / cfg.memristor.r_on - 1.0 / cfg.memristor.r_off
    scale_hidden = _layer_scale(tn.w_hidden, span)
    scale_out = _layer_scale(tn.w_out, span)
    gp_hidden, gm_hidden = weights_to_differential(
        tn.w_hidden, cfg.memristor.r_on, cfg.memristor.r_off, scale_hidden
    )
    gp_out, gm_out = weights_to_differential(
        tn.w_out, cfg.memristor.r_on, cfg.memristor.r_off, scale_out
    )
    return HardwareNetwork(
        network=tn,
        cfg=cfg,
        gp_hidden=gp_hidden,
        gm_hidden=gm_hidden,
        scale_hidden=scale_hidden,
        gp_out=gp_out,
        gm_out=gm_out,
        scale_out=scale_out,
        amp_hidden=1.0 / scale_hidden,
        amp_out=1.0 / scale_out,
    )


def _hardware_logits(hw: HardwareNetwork, x: np.ndarray) -> np.ndarray:
    """Differential MACs and amplifier stages up to the softmax input."""
    i_hidden = x @ (hw.gp_hidden - hw.gm_hidden)
    v_hidden = np.maximum(hw.amp_hidden * i_hidden + hw.network.b_hidden, 0.0)
    i_out = v_hidden @ (hw.gp_out - hw.gm_out)
    return hw.amp_out * i_out + hw.network.b_out


def _circuit_probabilities(logits: np.ndarray, params: SoftmaxParams) -> np.ndarray:
    """Batched equivalent of the analog softmax chain, normalized by r_f * i_s."""
    scaled = logits / params.v_t
    shifted = scaled - scaled.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return (params.r_sum / params.r_f) * e / e.sum(axis=-1, keepdims=True)


def forward(
    hw: HardwareNetwork,
    forces: np.ndarray,
    noise: NoiseSpec | None = None,
    mode: str | None = None,
) -> tuple[np.ndarray, str]:
    """Single-pattern inference through the mapped hardware chain.

    Returns the softmax-circuit output normalized by r_f * i_s (so it sums
    to 1) and the predicted label.
    """
    tn = hw.network
    if mode is not None and mode != tn.mode:
        raise ValueError(f"network was trained in {tn.mode!r} mode, cannot run {mode!r}")
    raw = sensor_layer_forward(forces, tn.sensor_states, hw.cfg)
    x = raw / feature_norm_current(hw.cfg)
    if noise is not None:
        x = add_noise(x, noise)
    if tn.mode == "binary":
        assert tn.binary_threshold is not None
        x = (x >= tn.binary_threshold).astype(float)
    else:
        x = x / hw.cfg.dot_gain
    logits = _hardware_logits(hw, x[None, :])[0]
    probs = _circuit_probabilities(logits, hw.cfg.softmax)
    return probs, tn.arch.labels[int(np.argmax(probs))]


def _confusion_pairs(true_labels, predicted_labels) -> tuple[tuple[tuple[str, str], int], ...]:
    counts: dict[tuple[str, str], int] = {}
    for t, p in zip(true_labels, predicted_labels):
        if t != p:
            counts[(t, p)] = counts.get((t, p), 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return tuple(ranked)


def evaluate(
    network: TrainedNetwork | HardwareNetwork,
    dataset,
    sigma2_grid: Sequence[float],
    seed: int = 0,
    cfg: SimConfig | None = None,
) -> EvalReport:
    """Accuracy of the mapped network over a noise grid.

    Per grid point, every item receives one fresh noise draw from a stream
    derived from (seed, grid index); reports are bit-identical across runs
    with equal arguments.
    """
    if isinstance(network, TrainedNetwork):
        if cfg is None:
            raise ValueError("evaluate needs cfg when given an unmapped TrainedNetwork")
        hw = map_network(network, cfg)
    else:
        hw = network
    tn = hw.network
    dots, targets = _dataset_arrays(dataset, tn.arch)
    labels = [label for _, label in dataset]
    groups = [label_to_group(label).value for label in labels]
    feats = _batch_features(dots, tn.sensor_states, hw.cfg)

    entries: list[EvalEntry] = []
    for j, sigma2 in enumerate(sigma2_grid):
        if sigma2 < 0.0:
            raise ValueError(f"sigma2 must be non-negative, got {sigma2}")
        rng = np.random.default_rng([seed, j])
        x = feats + np.sqrt(sigma2) * rng.standard_normal(feats.shape) if sigma2 > 0.0 else feats
        if tn.mode == "binary":
            assert tn.binary_threshold is not None
            x = (x >= tn.binary_threshold).astype(float)
        else:
            x = x / hw.cfg.dot_gain
        logits = _hardware_logits(hw, x)
        probs = _circuit_probabilities(logits, hw.cfg.softmax)
        predicted_idx = probs.argmax(axis=1)
        predicted = [tn.arch.labels[i] for i in predicted_idx]
        correct = predicted_idx == targets

        present_groups = sorted(set(groups))
        scopes = [("overall", np.ones(len(dataset), dtype=bool))]
        if len(present_groups) > 1:
            scopes += [(g, np.array([gi == g for gi in groups])) for g in present_groups]
        for name, mask in scopes:
            n = int(mask.sum())
            acc = 100.0 * float(correct[mask].sum()) / n
            confusions = _confusion_pairs(
                [l for l, m in zip(labels, mask) if m],
                [p for p, m in zip(predicted, mask) if m],
            )
            entries.append(EvalEntry(group=name, sigma2=float(sigma2), accuracy=acc,
                                     n_items=n, confusions=confusions))
    return EvalReport(mode=tn.mode, seed=seed, entries=tuple(entries))


# ---------------------------------------------------------------------------
# sweep protocol


@dataclass(frozen=True)
class SweepRow:
    group_set: str
    sigma2: float
    mode: str
    seed: int
    accuracy: float
    n_test: int


def split_holdout(dataset, copies: int, holdout: int = 1):
    """Split by per-label occurrence: last ``holdout`` copies become the test set."""
    if not 0 < holdout < copies:
        raise ValueError(f"need 0 < holdout < copies, got holdout={holdout}, copies={copies}")
    seen: dict[str, int] = {}
    train_items, test_items = [], []
    for grid, label in dataset:
        seen[label] = seen.get(label, 0) + 1
        (train_items if seen[label] <= copies - holdout else test_items).append((grid, label))
    return train_items, test_items


def _arch_for(group_names: Sequence[str]) -> NetworkArch:
    selected = list(BrailleGroup) if "fusion" in group_names else [BrailleGroup(g) for g in group_names]
    labels = tuple(sym.label for g in selected for sym in symbols(g))
    return NetworkArch(labels=labels)


def sweep_point(
    group_names: Sequence[str],
    sigma2: float,
    mode: str,
    seed: int,
    cfg: SimConfig,
    copies: int = 5,
    holdout: int = 1,
) -> SweepRow:
    """Train at one (group set, noise, mode) grid point and score the held-out copy."""
    from .braille import build_dataset  # local import keeps module load light

    groups_arg = "fusion" if "fusion" in group_names else list(group_names)
    dataset = build_dataset(groups_arg, copies=copies, seed=seed, f_press=cfg.f_press)
    train_items, test_items = split_holdout(dataset, copies=copies, holdout=holdout)
    arch = _arch_for(group_names)
    hyper = TrainHyper.from_config(cfg, seed=seed, sigma2=sigma2, mode=mode)
    tn = train(train_items, arch, hyper, cfg)
    report = evaluate(tn, test_items, [sigma2], seed=seed, cfg=cfg)
    accuracy = report.accuracy("overall", sigma2)
    return SweepRow(
        group_set="+".join(group_names),
        sigma2=sigma2,
        mode=mode,
        seed=seed,
        accuracy=accuracy,
        n_test=len(test_items),
    )


def run_sweep(
    group_sets: Sequence[Sequence[str]],
    sigma2_grid: Sequence[float],
    modes: Sequence[str],
    seeds: Sequence[int],
    cfg: SimConfig,
    copies: int = 5,
    holdout: int = 1,
) -> list[SweepRow]:
    """Cartesian sweep over group sets, noise grid, modes and seeds."""
    rows = []
    for group_names in group_sets:
        for mode in modes:
            for sigma2 in sigma2_grid:
                for seed in seeds:
                    rows.append(
                        sweep_point(group_names, sigma2, mode, seed, cfg, copies, holdout)
                    )
    return rows


# ---------------------------------------------------------------------------
# serialization


def network_to_json(tn: TrainedNetwork) -> str:
    payload = {
        "schema_version": NETWORK_SCHEMA_VERSION,
        "mode": tn.mode,
        "labels": list(tn.arch.labels),
        "n_inputs": tn.arch.n_inputs,
        "n_hidden": tn.arch.n_hidden,
        "w_hidden": tn.w_hidden.tolist(),
        "b_hidden": tn.b_hidden.tolist(),
        "w_out": tn.w_out.tolist(),
        "b_out": tn.b_out.tolist(),
        "sensor_states": tn.sensor_states.tolist(),
        "binary_threshold": None if tn.binary_threshold is None else tn.binary_threshold.tolist(),
    }
    return json.dumps(payload, indent=2)


def network_from_json(text: str) -> TrainedNetwork:
    data = json.loads(text)
    version = data.get("schema_version")
    if version != NETWORK_SCHEMA_VERSION:
        raise ValueError(f"unsupported network schema version {version!r}")
    arch = NetworkArch(labels=tuple(data["labels"]), n_inputs=data["n_inputs"], n_hidden=data["n_hidden"])
    threshold = data["binary_threshold"]
    return TrainedNetwork(
        arch=arch,
        mode=data["mode"],
        w_hidden=np.array(data["w_hidden"]),
        b_hidden=np.array(data["b_hidden"]),
        w_out=np.array(data["w_out"]),
        b_out=np.array(data["b_out"]),
        sensor_states=np.array(data["sensor_states"]),
        binary_threshold=None if threshold is None else np.array(threshold),
    )


def eval_report_to_csv(report: EvalReport) -> str:
    """Accuracy grid as CSV: one row per group, one column per noise level."""
    grid = sorted({e.sigma2 for e in report.entries})
    group_order = [g for g in ["overall", "group1", "group2", "group3", "group4"]
                   if any(e.group == g for e in report.entries)]
    lines = ["group,mode," + ",".join(f"sigma2={s:g}" for s in grid)]
    for group in group_order:
        cells = []
        for s in grid:
            try:
                cells.append(f"{report.accuracy(group, s):.2f}")
            except KeyError:
                cells.append("")
        lines.append(f"{group},{report.mode}," + ",".join(cells))
    return "\n".join(lines) + "\n"
