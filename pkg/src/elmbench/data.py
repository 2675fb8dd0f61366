"""Dataset containers, a synthetic ERP epoch generator, and CSV round-tripping.

The generator stands in for an unavailable EEG recording: non-target trials
are unit Gaussian noise, target trials carry an added positive deflection in
the window where the evoked response discriminates the classes. Trials are
laid out in (session, run, image) order, which is the contract the
session-based fold planner relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidLabel, LayoutMismatch, ParseError, SchemaError

DEFAULT_CHANNELS = 14
DEFAULT_SAMPLES = 64           # 500 ms at 128 Hz
SAMPLE_RATE_HZ = 128.0
BUMP_CENTER_MS = 310.0         # inside the 280-340 ms discriminative window
BUMP_WIDTH_MS = 25.0


@dataclass(frozen=True)
class EpochSet:
    """Per-trial multichannel segments with labels and grid coordinates."""

    data: np.ndarray    # (trials, channels, samples), microvolts
    labels: np.ndarray  # (trials,) int, 1 = target
    layout: np.ndarray  # (trials, 3) int columns (session, run, image)

    @property
    def trials(self) -> int:
        return self.data.shape[0]

    @property
    def channels(self) -> int:
        return self.data.shape[1]

    @property
    def samples(self) -> int:
        return self.data.shape[2]


@dataclass(frozen=True)
class Dataset:
    """Flat feature rows with labels and grid coordinates."""

    features: np.ndarray  # (trials, n_features)
    labels: np.ndarray    # (trials,)
    layout: np.ndarray    # (trials, 3)


def synth_epochs(seed: int, n_sessions: int = 12, runs_per_session: int = 6,
                 n_images: int = 12, snr: float = 3.0,
                 channels: int = DEFAULT_CHANNELS,
                 samples: int = DEFAULT_SAMPLES) -> EpochSet:
    """Generate a deterministic oddball-style epoch set.

    One image per session is designated the target; its trials receive a
    Gaussian-bump deflection (peak amplitude = snr, center 310 ms, width
    25 ms) on every channel, on top of unit-variance noise. All other trials
    are pure noise.
    """
    if snr <= 0.0:
        raise ValueError("snr must be positive")
    if min(n_sessions, runs_per_session, n_images, channels, samples) < 1:
        raise ValueError("grid dimensions must be positive")
    rng = np.random.default_rng(seed)
    target_image = rng.integers(0, n_images, size=n_sessions)
    trials = n_sessions * runs_per_session * n_images
    data = rng.standard_normal((trials, channels, samples))
    t_ms = np.arange(samples) * (1000.0 / SAMPLE_RATE_HZ)
    bump = snr * np.exp(-0.5 * ((t_ms - BUMP_CENTER_MS) / BUMP_WIDTH_MS) ** 2)
    layout = np.zeros((trials, 3), dtype=np.int64)
    labels = np.zeros(trials, dtype=np.int64)
    idx = 0
    for session in range(n_sessions):
        for run in range(runs_per_session):
            for image in range(n_images):
                layout[idx] = (session, run, image)
                if image == target_image[session]:
                    labels[idx] = 1
                    data[idx] += bump
                idx += 1
    return EpochSet(data=data, labels=labels, layout=layout)


# ---------------------------------------------------------------------------
# CSV schema: session,run,image,label,f0,...,f{k-1}
# ---------------------------------------------------------------------------

_META_COLUMNS = ("session", "run", "image", "label")


def write_csv(dataset: Dataset, path) -> None:
    """Emit the dataset in the schema load_csv reads.

    Feature values are written with 17 significant digits so a round trip
    reproduces them bit for bit. Rows must already be in ascending
    (session, run, image) order.
    """
    feats = np.asarray(dataset.features, dtype=float)
    if feats.ndim != 2 or feats.shape[1] < 1:
        raise SchemaError("dataset must have at least one feature column")
    if feats.shape[0] < 1:
        raise SchemaError("dataset must have at least one row")
    labels = np.asarray(dataset.labels)
    layout = np.asarray(dataset.layout)
    if labels.shape[0] != feats.shape[0] or layout.shape[0] != feats.shape[0]:
        raise SchemaError("labels/layout row count does not match features")
    keys = [tuple(row) for row in layout]
    if keys != sorted(keys):
        raise SchemaError("rows must be ordered by (session, run, image)")
    header = ",".join(_META_COLUMNS + tuple(f"f{j}" for j in range(feats.shape[1])))
    lines = [header]
    for i in range(feats.shape[0]):
        meta = f"{layout[i, 0]},{layout[i, 1]},{layout[i, 2]},{labels[i]}"
        vals = ",".join(f"{x:.17g}" for x in feats[i])
        lines.append(meta + "," + vals)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_csv(path) -> Dataset:
    """Parse a dataset file, validating labels, values, and row ordering."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = lines[0].split(",")
    if tuple(header[:4]) != _META_COLUMNS:
        raise SchemaError(
            f"{path}: header must start with {','.join(_META_COLUMNS)}")
    feat_names = header[4:]
    if not feat_names:
        raise SchemaError(f"{path}: no feature columns in header")
    expected = [f"f{j}" for j in range(len(feat_names))]
    if feat_names != expected:
        raise SchemaError(f"{path}: feature columns must be f0..f{len(feat_names) - 1}")
    n_cols = len(header)
    rows = len(lines) - 1
    features = np.zeros((rows, len(feat_names)))
    labels = np.zeros(rows, dtype=np.int64)
    layout = np.zeros((rows, 3), dtype=np.int64)
    for r, line in enumerate(lines[1:], start=1):
        cells = line.split(",")
        if len(cells) != n_cols:
            raise ParseError(f"{path}: row {r} has {len(cells)} cells, expected {n_cols}")
        try:
            layout[r - 1] = [int(cells[0]), int(cells[1]), int(cells[2])]
        except ValueError as exc:
            raise ParseError(f"{path}: row {r}: bad index cell ({exc})") from exc
        try:
            label = int(cells[3])
        except ValueError as exc:
            raise ParseError(f"{path}: row {r}, column label: {exc}") from exc
        if label not in (0, 1):
            raise InvalidLabel(f"{path}: row {r}: label must be 0 or 1, got {label}")
        labels[r - 1] = label
        for c, cell in enumerate(cells[4:]):
            try:
                val = float(cell)
            except ValueError as exc:
                raise ParseError(
                    f"{path}: row {r}, column f{c}: {exc}") from exc
            if not np.isfinite(val):
                raise ParseError(
                    f"{path}: row {r}, column f{c}: non-finite value {cell}")
            features[r - 1, c] = val
    keys = [tuple(row) for row in layout]
    if keys != sorted(keys):
        raise SchemaError(f"{path}: rows are not ordered by (session, run, image)")
    return Dataset(features=features, labels=labels, layout=layout)


def grid_shape(layout: np.ndarray) -> tuple[int, int, int]:
    """Recover (sessions, runs, images) from layout columns; validate the grid."""
    layout = np.asarray(layout)
    n_sessions = len(np.unique(layout[:, 0]))
    runs = len(np.unique(layout[:, 1]))
    n_images = len(np.unique(layout[:, 2]))
    if n_sessions * runs * n_images != layout.shape[0]:
        raise LayoutMismatch(
            f"{layout.shape[0]} trials do not fill a "
            f"{n_sessions}x{runs}x{n_images} grid")
    return n_sessions, runs, n_images
