"""Brute-force finite-volume ground truth for the hard-core model.

Volumes are rooted trees of depth n stored in BFS order, so a
configuration is an int64 bit mask with vertex v on bit v and the ball
V_{n-1} on the low bits.  Weights are computed exactly as residues mod
p^N and only wrapped into p-adic numbers for the final divisions.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import kernels
from .errors import CapExceededError, InvalidParameterError, PadicZeroDivisionError
from .model import BoundaryField, ModelParams
from .padic import INF, PadicNumber

DEFAULT_CAP = 24


class Topology(str, enum.Enum):
    KBRANCH = "kbranch"  # every vertex, the root included, has k children
    FULL_CAYLEY = "full"  # the root has k + 1 children

    @classmethod
    def parse(cls, s) -> Topology:
        if isinstance(s, cls):
            return s
        aliases = {"kbranch": cls.KBRANCH, "k-branch": cls.KBRANCH,
                   "full": cls.FULL_CAYLEY, "fullcayley": cls.FULL_CAYLEY, "cayley": cls.FULL_CAYLEY}
        try:
            return aliases[str(s).lower().replace("_", "")]
        except KeyError:
            raise InvalidParameterError(f"unknown topology {s!r}") from None


def level_sizes(k: int, n: int, topology=Topology.KBRANCH) -> list[int]:
    topology = Topology.parse(topology)
    if topology is Topology.KBRANCH:
        return [k**m for m in range(n + 1)]
    return [1] + [(k + 1) * k ** (m - 1) for m in range(1, n + 1)]


def volume_size(k: int, n: int, topology=Topology.KBRANCH) -> int:
    return sum(level_sizes(k, n, topology))


@dataclass(frozen=True, eq=False)
class FiniteVolume:
    """Ball V_n of the (k-branch or full) Cayley tree."""

    k: int
    depth: int
    topology: Topology
    parent: np.ndarray  # parent[v], -1 for the root; BFS order
    offsets: tuple  # W_m occupies vertices offsets[m] .. offsets[m+1]-1

    @property
    def size(self) -> int:
        return int(self.parent.shape[0])

    def level(self, m: int) -> range:
        return range(self.offsets[m], self.offsets[m + 1])

    def level_mask(self, m: int) -> int:
        lo, hi = self.offsets[m], self.offsets[m + 1]
        return ((1 << hi) - 1) ^ ((1 << lo) - 1)

    def ball_mask(self, m: int) -> int:
        """Bits of V_m."""
        return (1 << self.offsets[m + 1]) - 1

    @property
    def boundary_mask(self) -> int:
        return self.level_mask(self.depth)

    def children(self, v: int) -> list[int]:
        return [int(c) for c in np.flatnonzero(self.parent == v)]

    def edges(self) -> list[tuple[int, int]]:
        return [(int(self.parent[v]), v) for v in range(1, self.size)]


def build_volume(k: int, n: int, topology=Topology.KBRANCH, cap: int | None = DEFAULT_CAP) -> FiniteVolume:
    """Depth-n ball; `cap` bounds |V_n| (None disables the check)."""
    topology = Topology.parse(topology)
    if k < 1 or n < 0:
        raise InvalidParameterError(f"need k >= 1 and n >= 0, got k={k}, n={n}")
    size = volume_size(k, n, topology)
    if cap is not None and size > cap:
        raise CapExceededError(f"|V_{n}| = {size} exceeds the enumeration cap {cap}")
    parent = [-1]
    offsets = [0, 1]
    for m in range(1, n + 1):
        lo, hi = offsets[m - 1], offsets[m]
        fan = k + 1 if (m == 1 and topology is Topology.FULL_CAYLEY) else k
        for v in range(lo, hi):
            parent += [v] * fan
        offsets.append(len(parent))
    return FiniteVolume(k, n, topology, np.asarray(parent, dtype=np.int64), tuple(offsets))


# -- counting ----------------------------------------------------------------


def count_admissible_dp(k: int, n: int, topology=Topology.KBRANCH) -> int:
    """|Omega_n| by the two-state subtree recursion, exact for any size."""
    topology = Topology.parse(topology)
    if n == 0:
        return 2
    occ, vac = 1, 1  # a leaf
    for _ in range(n - 1):
        occ, vac = vac**k, (occ + vac) ** k
    fan = k + 1 if topology is Topology.FULL_CAYLEY else k
    return vac**fan + (occ + vac) ** fan


def count_admissible(vol: FiniteVolume) -> int:
    return count_admissible_dp(vol.k, vol.depth, vol.topology)


def omega_count_closed_form(k: int, n: int) -> int:
    """Closed form 2^((k+1)(k^n-1)/(k-1)) + 1 for the full Cayley ball."""
    if k < 2:
        raise InvalidParameterError("closed form needs k >= 2")
    if n < 0:
        raise InvalidParameterError("n must be >= 0")
    return 2 ** ((k + 1) * (k**n - 1) // (k - 1)) + 1


def omega_norm(k: int, n: int, p: int) -> Fraction:
    """p-adic norm of the closed-form count."""
    return PadicNumber.from_rational(omega_count_closed_form(k, n), 1, p, 64).norm()


def integer_norm(m: int, p: int) -> Fraction:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return Fraction(1, p**v)


@dataclass(frozen=True, eq=False)
class AdmissibleConfiguration:
    volume: FiniteVolume
    mask: int

    def __getitem__(self, v: int) -> int:
        return (self.mask >> v) & 1

    @property
    def assignment(self) -> list[int]:
        return [(self.mask >> v) & 1 for v in range(self.volume.size)]

    def is_admissible(self) -> bool:
        return all(not (self[a] and self[b]) for a, b in self.volume.edges())

    def restrict(self, m: int) -> AdmissibleConfiguration:
        """Restriction to V_m (needs m < depth)."""
        sub = build_volume(self.volume.k, m, self.volume.topology, cap=None)
        return AdmissibleConfiguration(sub, self.mask & self.volume.ball_mask(m))


def admissible_masks(vol: FiniteVolume) -> np.ndarray:
    """Sorted int64 masks of every admissible configuration."""
    if vol.size > kernels.MAX_MASK_BITS:
        raise CapExceededError(f"{vol.size} vertices do not fit in a 64-bit mask")
    return kernels.admissible_masks(vol.parent, count_admissible(vol))


def enumerate_admissible(vol: FiniteVolume) -> Iterator[AdmissibleConfiguration]:
    for m in admissible_masks(vol):
        yield AdmissibleConfiguration(vol, int(m))


# -- weights and measures ----------------------------------------------------


def _boundary_value(boundary: BoundaryField, params: ModelParams, n: int) -> PadicNumber:
    if boundary.prime != params.p:
        raise InvalidParameterError("boundary and parameters over different primes")
    return boundary.at_level(n)


def _weight_precision(params: ModelParams, z: PadicNumber) -> int:
    return min(params.fugacity.absprec, z.absprec)


def measure_weight(config: AdmissibleConfiguration, params: ModelParams,
                   boundary: BoundaryField) -> PadicNumber:
    """lambda^(#occupied in V_n) * z_n^(#vacant in W_n)."""
    vol = config.volume
    z = _boundary_value(boundary, params, vol.depth)
    occupied = bin(config.mask).count("1")
    vacant = len(vol.level(vol.depth)) - bin(config.mask & vol.boundary_mask).count("1")
    return params.fugacity**occupied * z**vacant


@dataclass
class WeightHistogram:
    """Counts of configurations by (#occupied, #vacant boundary sites)."""

    volume: FiniteVolume
    occupied: np.ndarray
    vacant: np.ndarray
    counts: np.ndarray
    group: np.ndarray | None = None  # restriction to V_{n-1}, when requested


def weight_histogram(vol: FiniteVolume, masks: np.ndarray | None = None,
                     by_restriction: bool = False) -> WeightHistogram:
    if masks is None:
        masks = admissible_masks(vol)
    occ = kernels.popcount(masks)
    vac = len(vol.level(vol.depth)) - kernels.popcount(masks, vol.boundary_mask)
    cols = [occ, vac]
    if by_restriction:
        cols.insert(0, masks & vol.ball_mask(vol.depth - 1))
    keys, counts = np.unique(np.stack(cols, axis=1), axis=0, return_counts=True)
    if by_restriction:
        return WeightHistogram(vol, keys[:, 1], keys[:, 2], counts, keys[:, 0])
    return WeightHistogram(vol, keys[:, 0], keys[:, 1], counts)


def _weight_residues(hist: WeightHistogram, lam: int, z: int, mod: int) -> list[int]:
    lam_pows = [pow(lam, a, mod) for a in range(int(hist.occupied.max(initial=0)) + 1)]
    z_pows = [pow(z, b, mod) for b in range(int(hist.vacant.max(initial=0)) + 1)]
    return [lam_pows[int(a)] * z_pows[int(b)] % mod for a, b in zip(hist.occupied, hist.vacant)]


def _partition_residue(hist: WeightHistogram, params: ModelParams, z: PadicNumber, prec: int):
    p = params.p
    mod = p**prec
    w = _weight_residues(hist, params.fugacity.residue(prec), z.residue(prec), mod)
    total = sum(int(c) * wi for c, wi in zip(hist.counts, w)) % mod
    return w, PadicNumber.from_residue(total, p, prec)


def partition_function(vol: FiniteVolume, params: ModelParams, boundary: BoundaryField,
                       hist: WeightHistogram | None = None) -> PadicNumber:
    """Z_n = sum of measure_weight over all admissible configurations."""
    z = _boundary_value(boundary, params, vol.depth)
    if hist is None:
        hist = weight_histogram(vol)
    _, Z = _partition_residue(hist, params, z, _weight_precision(params, z))
    if Z.is_zero():
        raise PadicZeroDivisionError(
            f"Z_{vol.depth} ≡ 0 mod {params.p}^{Z.absprec}: cancellation beyond working precision")
    return Z


def mu_n(config: AdmissibleConfiguration, params: ModelParams, boundary: BoundaryField,
         Z: PadicNumber | None = None) -> PadicNumber:
    if Z is None:
        Z = partition_function(config.volume, params, boundary)
    return measure_weight(config, params, boundary) / Z


@dataclass
class MeasureSummary:
    Z: PadicNumber
    normalization_valuation: float
    norm_min: Fraction
    norm_max: Fraction

    @property
    def normalization_ok(self) -> bool:
        return self.normalization_valuation == INF


def measure_summary(vol: FiniteVolume, params: ModelParams, boundary: BoundaryField) -> MeasureSummary:
    """Z_n, the defect of sum(mu_n) = 1 and the range of |mu_n|_p."""
    p = params.p
    z = _boundary_value(boundary, params, vol.depth)
    prec = _weight_precision(params, z)
    hist = weight_histogram(vol)
    w, Z = _partition_residue(hist, params, z, prec)
    if Z.is_zero():
        raise PadicZeroDivisionError(f"Z_{vol.depth} ≡ 0 mod {p}^{prec}")
    total = PadicNumber.zero(p, prec)
    norms = []
    for c, wi in zip(hist.counts, w):
        mu = PadicNumber.from_residue(wi, p, prec) / Z
        norms.append(mu.norm())
        total = total + mu * int(c)
    return MeasureSummary(Z, (total - 1).valuation, min(norms), max(norms))


# -- compatibility -----------------------------------------------------------


@dataclass
class CompatibilityResult:
    min_deviation_valuation: float
    working_precision: int
    base_configurations: int
    worst_base_mask: int | None = None

    @property
    def compatible(self) -> bool:
        return self.min_deviation_valuation >= self.working_precision


def check_compatibility(params: ModelParams, boundary: BoundaryField, n: int,
                        topology=Topology.KBRANCH, cap: int | None = DEFAULT_CAP) -> CompatibilityResult:
    """min over sigma in Omega_{V_{n-1}} of
    v(sum_omega mu_n(sigma v omega) - mu_{n-1}(sigma))."""
    if n < 1:
        raise InvalidParameterError("compatibility needs n >= 1")
    p = params.p
    big = build_volume(params.k, n, topology, cap)
    small = build_volume(params.k, n - 1, topology, cap)
    z_big = _boundary_value(boundary, params, n)
    z_small = _boundary_value(boundary, params, n - 1)
    prec = min(_weight_precision(params, z_big), _weight_precision(params, z_small))

    hist_big = weight_histogram(big, by_restriction=True)
    w_big, Z_big = _partition_residue(hist_big, params, z_big, prec)
    small_masks = admissible_masks(small)
    hist_small = weight_histogram(small, small_masks)
    _, Z_small = _partition_residue(hist_small, params, z_small, prec)
    for name, Z in (("n", Z_big), ("n-1", Z_small)):
        if Z.is_zero():
            raise PadicZeroDivisionError(f"Z_{name} ≡ 0 mod {p}^{prec}")

    mod = p**prec
    sums: dict[int, int] = {}
    for g, c, wi in zip(hist_big.group, hist_big.counts, w_big):
        g = int(g)
        sums[g] = (sums.get(g, 0) + int(c) * wi) % mod
    lam = params.fugacity.residue(prec)
    zs = z_small.residue(prec)
    occ = kernels.popcount(small_masks)
    vac = len(small.level(n - 1)) - kernels.popcount(small_masks, small.boundary_mask)

    worst, worst_mask, working = INF, None, prec
    for m, a, b in zip(small_masks, occ, vac):
        m = int(m)
        lhs = PadicNumber.from_residue(sums.get(m, 0), p, prec) / Z_big
        rhs = PadicNumber.from_residue(pow(lam, int(a), mod) * pow(zs, int(b), mod), p, prec) / Z_small
        dev = lhs - rhs
        working = min(working, dev.absprec)
        if dev.valuation < worst:
            worst, worst_mask = dev.valuation, m
    return CompatibilityResult(worst, working, len(small_masks), worst_mask)


# -- reports -----------------------------------------------------------------


def _boundary_text(data: dict, digits: int = 6) -> str:
    vals = [PadicNumber.from_json(v) for v in data["values"]]
    p = vals[0].prime
    m = min([digits] + [v.absprec for v in vals])
    return f"{data['kind']} " + ", ".join(str(v.residue(m)) for v in vals) + f" (mod {p}^{m})"


def _frac_json(x: Fraction) -> str:
    return str(x)


def _val_json(v):
    return "inf" if v == INF else int(v)


@dataclass
class OracleReport:
    check: str
    k: int
    n: int
    topology: str
    p: int | None = None
    boundary: dict | None = None
    omega_count: int | None = None
    omega_norm: str | None = None
    normalization_ok: bool | None = None
    min_deviation_valuation: object = None
    mu_norm_range: list | None = None
    extra: dict = field(default_factory=dict)
    holds: bool = True

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "k": self.k,
            "n": self.n,
            "topology": self.topology,
            "p": self.p,
            "boundary": self.boundary,
            "omega_count": self.omega_count,
            "omega_norm": self.omega_norm,
            "normalization_ok": self.normalization_ok,
            "min_deviation_valuation": self.min_deviation_valuation,
            "mu_norm_range": self.mu_norm_range,
            "holds": self.holds,
        }
        out.update(self.extra)
        return out

    @classmethod
    def from_json(cls, data: dict) -> OracleReport:
        data = dict(data)
        known = {f for f in cls.__dataclass_fields__ if f != "extra"}
        base = {k: data.pop(k) for k in list(data) if k in known}
        return cls(**base, extra=data)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def render_text(self) -> str:
        head = f"oracle {self.check}  k={self.k} n={self.n} topology={self.topology}"
        if self.p is not None:
            head += f" p={self.p}"
        lines = [head]
        for key, val in self.to_json().items():
            if key in ("check", "k", "n", "topology", "p", "holds") or val is None:
                continue
            if key == "boundary":
                val = _boundary_text(val)
            lines.append(f"  {key}: {val}")
        lines.append("result: " + ("holds" if self.holds else "FAILS"))
        return "\n".join(lines)


def count_report(k: int, n: int, topology=Topology.FULL_CAYLEY, p: int | None = None,
                 cap: int | None = DEFAULT_CAP) -> OracleReport:
    """DP count against enumeration (within cap) and the closed form."""
    topology = Topology.parse(topology)
    dp = count_admissible_dp(k, n, topology)
    extra = {"dp_count": dp, "vertices": volume_size(k, n, topology)}
    holds = True
    if cap is None or extra["vertices"] <= cap:
        enumerated = int(admissible_masks(build_volume(k, n, topology, cap)).shape[0])
        extra["enumerated_count"] = enumerated
        holds &= enumerated == dp
    else:
        extra["enumerated_count"] = "skipped (|V_n| above cap)"
    if topology is Topology.FULL_CAYLEY and k >= 2:
        closed = omega_count_closed_form(k, n)
        extra["closed_form_count"] = closed
        extra["closed_form_match"] = closed == dp
        holds &= closed == dp
    rep = OracleReport("count", k, n, topology.value, p, omega_count=dp, extra=extra, holds=holds)
    if p is not None:
        rep.omega_norm = _frac_json(integer_norm(dp, p))
        if "closed_form_count" in extra:
            extra["closed_form_norm"] = _frac_json(integer_norm(extra["closed_form_count"], p))
    return rep


def compat_report(params: ModelParams, boundary: BoundaryField, n: int,
                  topology=Topology.KBRANCH, cap: int | None = DEFAULT_CAP) -> OracleReport:
    topology = Topology.parse(topology)
    res = check_compatibility(params, boundary, n, topology, cap)
    return OracleReport(
        "compat", params.k, n, topology.value, params.p, boundary.to_json(),
        omega_count=count_admissible_dp(params.k, n, topology),
        min_deviation_valuation=_val_json(res.min_deviation_valuation),
        extra={"working_precision": res.working_precision,
               "base_configurations": res.base_configurations,
               "compatible": res.compatible},
        holds=res.compatible,
    )


def norms_report(params: ModelParams, boundary: BoundaryField, n: int,
                 topology=Topology.FULL_CAYLEY, cap: int | None = DEFAULT_CAP) -> OracleReport:
    """Range of |mu_n|_p over all configurations against the p = 3 dichotomy:
    min |mu_n|_3 >= 3, and |mu_n|_p = 1 for p != 3."""
    topology = Topology.parse(topology)
    p = params.p
    vol = build_volume(params.k, n, topology, cap)
    s = measure_summary(vol, params, boundary)
    count = count_admissible(vol)
    lo, hi = s.norm_min, s.norm_max
    holds = (lo >= p) if p == 3 else (lo == 1 and hi == 1)
    holds = holds and s.normalization_ok
    rep = OracleReport(
        "norms", params.k, n, topology.value, p, boundary.to_json(),
        omega_count=count, omega_norm=_frac_json(integer_norm(count, p)),
        normalization_ok=s.normalization_ok,
        mu_norm_range=[_frac_json(lo), _frac_json(hi)],
        extra={"Z_valuation": _val_json(s.Z.valuation)},
        holds=holds,
    )
    if topology is Topology.FULL_CAYLEY and params.k >= 2:
        rep.extra["closed_form_norm"] = _frac_json(omega_norm(params.k, n, p))
    return rep
