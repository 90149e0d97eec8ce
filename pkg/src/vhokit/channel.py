"""Stochastic WLAN cell model.

The coverage boundary is treated as a Gaussian random radius (shadow fading
makes the effective cell edge fluctuate around its mean), and received signal
strength follows the log-distance path loss model with an optional zero-mean
Gaussian shadowing term on top.  A small Monte-Carlo expectation primitive
with deterministic substreams rounds out the module.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

MAX_REJECTION_ROUNDS = 1000


@dataclass(frozen=True)
class CellModel:
    """Stochastic WLAN cell: radius distribution plus signal propagation.

    Parameters
    ----------
    mean_radius : float
        Mean of the cell radius distribution (m).
    sigma_radius : float
        Standard deviation of the cell radius (m).  Zero gives an ideal
        circular cell.
    tx_power_dbm : float
        Transmit power of the AP (dBm).
    ref_distance : float
        Reference distance d0 of the path loss model (m).
    ref_path_loss_db : float
        Path loss at the reference distance (dB).
    path_loss_exponent : float
        Path loss exponent (dimensionless, > 0).
    shadow_sigma_db : float
        Standard deviation of the zero-mean Gaussian shadowing term (dB).
    """

    mean_radius: float
    sigma_radius: float = 0.0
    tx_power_dbm: float = 20.0
    ref_distance: float = 1.0
    ref_path_loss_db: float = 40.0
    path_loss_exponent: float = 3.0
    shadow_sigma_db: float = 0.0

    def __post_init__(self):
        if self.mean_radius <= 0:
            raise ValueError("mean_radius must be > 0")
        if self.sigma_radius < 0:
            raise ValueError("sigma_radius must be >= 0")
        if self.ref_distance <= 0:
            raise ValueError("ref_distance must be > 0")
        if self.path_loss_exponent <= 0:
            raise ValueError("path_loss_exponent must be > 0")
        if self.shadow_sigma_db < 0:
            raise ValueError("shadow_sigma_db must be >= 0")
        if self.sigma_radius >= self.mean_radius / 3.0:
            # Soft bound: keeps the negative-radius rejection rate below ~0.14%.
            warnings.warn(
                "sigma_radius >= mean_radius/3: radius distribution is heavily "
                "truncated at zero; results still valid but rejection rate grows",
                stacklevel=2,
            )


@dataclass(frozen=True)
class RngStream:
    """Deterministic random substream identified by (seed, stream_id).

    Built on counter-based Philox: distinct stream ids jump the counter far
    apart, so streams are independent and a (seed, stream_id) pair always
    reproduces the identical sequence regardless of what other streams did.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this substream."""
        bitgen = np.random.Philox(key=self.seed & 0xFFFFFFFFFFFFFFFF)
        if self.stream_id:
            bitgen = bitgen.jumped(self.stream_id)
        return np.random.Generator(bitgen)

    def substream(self, stream_id: int) -> "RngStream":
        """Derive a sibling stream under the same seed."""
        return RngStream(self.seed, stream_id)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


def sample_radius(cell: CellModel, rng) -> float:
    """Draw one cell radius: Normal(mean, sigma^2) truncated to r > 0.

    Negative draws are rejected and resampled; raises after
    MAX_REJECTION_ROUNDS consecutive rejections (pathological sigma).
    """
    gen = _as_generator(rng)
    if cell.sigma_radius == 0.0:
        return cell.mean_radius
    for _ in range(MAX_REJECTION_ROUNDS):
        r = gen.normal(cell.mean_radius, cell.sigma_radius)
        if r > 0.0:
            return float(r)
    raise RuntimeError(
        f"radius sampler rejected {MAX_REJECTION_ROUNDS} consecutive draws "
        f"(mean={cell.mean_radius}, sigma={cell.sigma_radius})"
    )


def sample_radii(cell: CellModel, rng, n: int, counters: dict | None = None) -> np.ndarray:
    """Vectorized truncated-Gaussian radius draws.

    ``counters['radius_rejections']`` is incremented with the number of
    rejected (resampled) draws when a counter dict is supplied.
    """
    gen = _as_generator(rng)
    if cell.sigma_radius == 0.0:
        return np.full(n, cell.mean_radius)
    r = gen.normal(cell.mean_radius, cell.sigma_radius, n)
    rejections = 0
    for _ in range(MAX_REJECTION_ROUNDS):
        bad = r <= 0.0
        nbad = int(bad.sum())
        if nbad == 0:
            break
        rejections += nbad
        r[bad] = gen.normal(cell.mean_radius, cell.sigma_radius, nbad)
    else:
        raise RuntimeError("radius sampler exceeded the rejection-round limit")
    if counters is not None:
        counters["radius_rejections"] = counters.get("radius_rejections", 0) + rejections
    return r


def rss_at_distance(cell: CellModel, distance, shadowing=None):
    """Received signal strength (dBm) at a distance from the AP.

    RSS = tx_power - PL(d0) - 10*beta*log10(d/d0), plus a zero-mean Gaussian
    shadowing term when ``shadowing`` is an RngStream/Generator (omit or pass
    None for the deterministic mean path loss).  The shadowing term is
    additive on the received power here; the equivalent convention folds it
    into the loss with the opposite sign, which only flips the sign of a
    zero-mean variable.  Accepts scalars or arrays; distances inside the
    reference distance are rejected because the model is undefined there.
    """
    d = np.asarray(distance, dtype=float)
    if np.any(d < cell.ref_distance):
        raise ValueError(
            f"distance {distance} is inside the reference distance "
            f"{cell.ref_distance}; path loss model undefined"
        )
    rss = (
        cell.tx_power_dbm
        - cell.ref_path_loss_db
        - 10.0 * cell.path_loss_exponent * np.log10(d / cell.ref_distance)
    )
    if shadowing is not None and cell.shadow_sigma_db > 0.0:
        gen = _as_generator(shadowing)
        rss = rss + gen.normal(0.0, cell.shadow_sigma_db, size=d.shape if d.shape else None)
    return float(rss) if np.ndim(distance) == 0 else rss


def monte_carlo_expectation(g, cell: CellModel, n: int, rng) -> float:
    """Estimate E[g(R)] over the cell radius distribution by averaging
    g over n independent radius draws.  Deterministic given the stream.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = _as_generator(rng)
    r = sample_radii(cell, gen, n)
    try:
        values = np.asarray(g(r), dtype=float)
        if values.shape != r.shape:
            raise ValueError
    except (TypeError, ValueError):
        # g is scalar-only; fall back to mapping it.
        values = np.fromiter((g(x) for x in r), dtype=float, count=n)
    return float(values.mean())
