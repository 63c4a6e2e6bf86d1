"""Evaluation configuration: truncation budgets, t-integration split,
principal-value ladder, and tolerances.

Every numerical result in the package is a pure function of its inputs and
an EvalConfig. Configs serialize to JSON with strict parsing (unknown keys
are rejected at any depth) and hash to a short digest that verification
reports embed for reproducibility.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, fields


class TruncationError(RuntimeError):
    """A series or spectral sum would need more terms than its hard cap."""


class NumericalError(RuntimeError):
    """An evaluation failed its internal convergence or sanity check."""


def _check_keys(d: dict, allowed, where: str) -> None:
    unknown = set(d) - set(allowed)
    if unknown:
        raise ValueError(f"unknown key(s) in {where}: {sorted(unknown)}")


@dataclass(frozen=True)
class SeriesTruncation:
    """Budget for direct series summation of the Poisson kernel.

    n_max(t) is chosen so that the tail of (n+1)^p exp(-t(n+tau)),
    p = alpha+beta+2+3j, falls below tail_tol. Exceeding n_cap raises
    TruncationError instead of truncating silently.
    """

    t_min: float = 5e-3
    tail_tol: float = 1e-12
    n_cap: int = 20000

    def __post_init__(self):
        if self.t_min <= 0 or self.tail_tol <= 0 or self.n_cap < 1:
            raise ValueError("SeriesTruncation fields must be positive")

    def n_max_for(self, alpha: float, beta: float, t: float, j: int = 0) -> int:
        if t <= 0:
            raise ValueError("t must be positive")
        tau = 0.5 * (alpha + beta + 1.0)
        p = max(alpha + beta + 2.0 + 3.0 * j, 0.0)

        def log_term(n):
            return p * math.log(n + 1.0) - t * (n + tau)

        def tail_ok(n):
            # geometric majorant: ratio of consecutive terms beyond n
            ratio = math.exp(-t) * ((n + 3.0) / (n + 2.0)) ** p
            if ratio >= 1.0:
                return False
            top = log_term(n + 1)
            if top > 700.0:
                return False
            return math.exp(top) / (1.0 - ratio) < self.tail_tol

        lo, hi = 1, 2
        while not tail_ok(hi):
            hi *= 2
            if hi > 8 * self.n_cap:
                raise TruncationError(
                    f"series needs more than {self.n_cap} terms at t={t:g}, j={j}"
                )
        lo = hi // 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if tail_ok(mid):
                hi = mid
            else:
                lo = mid
        if hi > self.n_cap:
            raise TruncationError(
                f"series needs {hi} > n_cap={self.n_cap} terms at t={t:g}, j={j}"
            )
        return hi


@dataclass(frozen=True)
class TSplitConfig:
    """Split of the Gamma-weighted t-integral defining the kernels.

    The region [t_stop, split_point] is integrated by Gauss-Legendre with
    near_nodes points; [split_point, inf) is evaluated in closed form per
    series term through the regularized upper incomplete gamma function, so
    the far tail bound holds exactly. far_nodes is kept as the resolution
    of the far-region self-check quadrature.
    """

    split_point: float = 1.0
    near_nodes: int = 64
    far_nodes: int = 64
    tail_rate_c: float = 1.0

    def __post_init__(self):
        if self.split_point <= 0 or self.near_nodes < 4 or self.far_nodes < 4:
            raise ValueError("invalid TSplitConfig")
        if self.tail_rate_c <= 0:
            raise ValueError("tail_rate_c must be positive")


@dataclass(frozen=True)
class KernelNearfield:
    """Two-regime kernel evaluation knobs.

    Distances >= d_switch use the t-integration path with the small-t
    remainder modeled by a Chebyshev fit on [t_stop, 0.45*d]; smaller
    distances use a smoothed spectral sum with window length
    M = window_const / d, capped at n_cap.
    """

    d_switch: float = 0.15
    t_stop: float = 6e-3
    window_const: float = 400.0
    fit_degree: int = 24
    fit_samples: int = 64
    n_cap: int = 20_000_000

    def __post_init__(self):
        if not (0 < self.t_stop < 0.1 and 0 < self.d_switch < 1):
            raise ValueError("invalid KernelNearfield")
        if self.fit_degree < 4 or self.fit_samples <= self.fit_degree:
            raise ValueError("fit_samples must exceed fit_degree")
        if self.window_const < 50 or self.n_cap < 10000:
            raise ValueError("invalid spectral window settings")

    @property
    def d_floor(self) -> float:
        """Smallest diagonal distance the spectral path can resolve."""
        return self.window_const / self.n_cap


@dataclass(frozen=True)
class PvLadder:
    """Excision ladder for principal-value row integrals."""

    eps_seq: tuple = tuple(2.0 ** (-k) for k in range(3, 13))
    extrapolation: str = "richardson"

    def __post_init__(self):
        eps = tuple(float(e) for e in self.eps_seq)
        object.__setattr__(self, "eps_seq", eps)
        if len(eps) < 3 or any(e <= 0 for e in eps):
            raise ValueError("eps_seq must hold at least 3 positive values")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("eps_seq must be strictly decreasing")
        if self.extrapolation not in ("none", "richardson"):
            raise ValueError("extrapolation must be 'none' or 'richardson'")


@dataclass(frozen=True)
class SingularQuad:
    """Panelization of phi-integrals with a diagonal or endpoint kink."""

    delta0: float = 1e-3          # innermost half-width around phi = theta
    panel_nodes: int = 12         # Gauss-Legendre nodes per panel
    boundary_levels: int = 48     # dyadic grading depth toward 0 and pi
    diag_levels: int = 14         # dyadic grading depth toward the diagonal
    max_panel_width: float = 0.12  # wider panels are subdivided uniformly

    def __post_init__(self):
        if self.delta0 <= 0 or self.panel_nodes < 2:
            raise ValueError("invalid SingularQuad")
        if self.boundary_levels < 4 or self.diag_levels < 2:
            raise ValueError("grading depths too small")
        if self.max_panel_width <= 0:
            raise ValueError("max_panel_width must be positive")


@dataclass(frozen=True)
class Tolerances:
    representation: float = 1e-5
    identities: float = 1e-8
    pv_zero: float = 1e-6

    def __post_init__(self):
        if min(self.representation, self.identities, self.pv_zero) <= 0:
            raise ValueError("tolerances must be positive")


_SECTIONS = {
    "series": SeriesTruncation,
    "tsplit": TSplitConfig,
    "nearfield": KernelNearfield,
    "pv": PvLadder,
    "singular": SingularQuad,
    "tolerances": Tolerances,
}


@dataclass(frozen=True)
class EvalConfig:
    series: SeriesTruncation = field(default_factory=SeriesTruncation)
    tsplit: TSplitConfig = field(default_factory=TSplitConfig)
    nearfield: KernelNearfield = field(default_factory=KernelNearfield)
    pv: PvLadder = field(default_factory=PvLadder)
    singular: SingularQuad = field(default_factory=SingularQuad)
    tolerances: Tolerances = field(default_factory=Tolerances)

    @staticmethod
    def from_dict(d: dict) -> "EvalConfig":
        if not isinstance(d, dict):
            raise ValueError("eval config must be a JSON object")
        _check_keys(d, _SECTIONS, "eval config")
        parts = {}
        for name, cls in _SECTIONS.items():
            if name not in d:
                continue
            sub = d[name]
            if not isinstance(sub, dict):
                raise ValueError(f"section {name!r} must be an object")
            allowed = [f.name for f in fields(cls)]
            _check_keys(sub, allowed, f"section {name!r}")
            kwargs = dict(sub)
            if name == "pv" and "eps_seq" in kwargs:
                kwargs["eps_seq"] = tuple(kwargs["eps_seq"])
            parts[name] = cls(**kwargs)
        return EvalConfig(**parts)

    def to_dict(self) -> dict:
        out = {}
        for name, cls in _SECTIONS.items():
            sec = getattr(self, name)
            sub = {}
            for f in fields(cls):
                v = getattr(sec, f.name)
                sub[f.name] = list(v) if isinstance(v, tuple) else v
            out[name] = sub
        return out

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


DEFAULT_CONFIG = EvalConfig()
