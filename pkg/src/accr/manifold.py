"""Almost contact B-metric structures defined by expression charts.

A structure file supplies, as expression strings over the chart
coordinates, the metric g, the endomorphism phi (phi[i][j] is the
coefficient of d/dx_i in phi(d/dx_j)), the Reeb field xi and the 1-form
eta on an open coordinate box.  The loader parses everything eagerly and
rejects structurally broken files; numerical validation of the defining
identities is a separate step so that deliberately broken structures can
still be probed.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    ManifoldParseError,
    UnboundConstant,
    UnknownBuiltin,
)
from .expr import Expression, parse
from .tensor import signature_of

__all__ = [
    "Chart",
    "AccRStructure",
    "StructureValues",
    "FieldJets",
    "StructureJets",
    "ValidationReport",
    "AssociatedMetric",
    "load_manifold",
    "builtin_structure",
    "builtin_names",
    "validate_structure",
    "associated_metric",
    "latin_hypercube",
    "sample_points",
    "check_bindings",
    "METRIC_G",
    "METRIC_GTILDE",
]

METRIC_G = "g"
METRIC_GTILDE = "gtilde"

_REQUIRED_KEYS = {"n", "coordinates", "domain", "g", "phi", "xi", "eta"}
_OPTIONAL_KEYS = {"constants", "frame", "name"}


@dataclass(frozen=True)
class Chart:
    """Coordinate names, open domain box, and declared constant names."""

    n: int
    coordinates: tuple[str, ...]
    domain: tuple[tuple[float, float], ...]
    constants: tuple[str, ...]

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def require_inside(self, point: Sequence[float]) -> None:
        if len(point) != self.dim:
            raise DimensionMismatch(f"point has {len(point)} components, chart has {self.dim}")
        for name, value, (lo, hi) in zip(self.coordinates, point, self.domain):
            if not lo < float(value) < hi:
                raise DomainError(f"coordinate {name}={value} outside open interval ({lo}, {hi})")


class StructureValues(NamedTuple):
    g: np.ndarray
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray


class FieldJets(NamedTuple):
    """Componentwise value, first and second coordinate derivatives.

    Derivative axes are appended last: partial[..., m] = d_m value[...],
    second[..., m, l] = d_l d_m value[...] (symmetric in m, l).
    """

    value: np.ndarray
    partial: np.ndarray
    second: np.ndarray


class StructureJets(NamedTuple):
    g: FieldJets
    phi: FieldJets
    xi: FieldJets
    eta: FieldJets


@dataclass(frozen=True)
class AccRStructure:
    """An almost contact B-metric structure presented in one chart."""

    chart: Chart
    g: tuple[tuple[Expression, ...], ...]
    phi: tuple[tuple[Expression, ...], ...]
    xi: tuple[Expression, ...]
    eta: tuple[Expression, ...]
    frame: tuple[tuple[Expression, ...], ...] | None = None
    name: str | None = None
    source_sha256: str | None = None

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def n(self) -> int:
        return self.chart.n

    def referenced_constants(self) -> frozenset[str]:
        found: set[str] = set()
        for expression in self._all_expressions():
            found |= expression.referenced_constants()
        return frozenset(found)

    def _all_expressions(self):
        for row in self.g:
            yield from row
        for row in self.phi:
            yield from row
        yield from self.xi
        yield from self.eta
        if self.frame is not None:
            for row in self.frame:
                yield from row

    def values_at(self, point, bindings: Mapping[str, float] | None = None) -> StructureValues:
        """Structure component values at an interior chart point."""
        self.chart.require_inside(point)
        b = bindings or {}
        return StructureValues(
            g=_eval_grid(self.g, point, b),
            phi=_eval_grid(self.phi, point, b),
            xi=_eval_grid(self.xi, point, b),
            eta=_eval_grid(self.eta, point, b),
        )

    def jets_at(self, point, bindings: Mapping[str, float] | None = None) -> StructureJets:
        """All structure components with first and second derivatives."""
        self.chart.require_inside(point)
        b = bindings or {}
        return StructureJets(
            g=_eval_grid_jets(self.g, point, b),
            phi=_eval_grid_jets(self.phi, point, b),
            xi=_eval_grid_jets(self.xi, point, b),
            eta=_eval_grid_jets(self.eta, point, b),
        )

    def frame_at(self, point, bindings: Mapping[str, float] | None = None) -> np.ndarray:
        """Evaluate the declared phi-adapted frame (columns e_1..e_2n, xi)."""
        if self.frame is None:
            raise ManifoldParseError("structure declares no frame")
        self.chart.require_inside(point)
        return _eval_grid(self.frame, point, bindings or {})


def _eval_grid(exprs, point, bindings) -> np.ndarray:
    if isinstance(exprs[0], Expression):
        return np.array([e.eval_number(point, bindings) for e in exprs])
    return np.array([[e.eval_number(point, bindings) for e in row] for row in exprs])


def _eval_grid_jets(exprs, point, bindings) -> FieldJets:
    if isinstance(exprs[0], Expression):
        jet_list = [e.eval_jet(point, bindings) for e in exprs]
        value = np.array([j.value for j in jet_list])
        partial = np.array([j.grad for j in jet_list])
        second = np.array([j.hess for j in jet_list])
        return FieldJets(value, partial, second)
    jet_rows = [[e.eval_jet(point, bindings) for e in row] for row in exprs]
    value = np.array([[j.value for j in row] for row in jet_rows])
    partial = np.array([[j.grad for j in row] for row in jet_rows])
    second = np.array([[j.hess for j in row] for row in jet_rows])
    return FieldJets(value, partial, second)


# -- loading --------------------------------------------------------------


def load_manifold(data: bytes | str) -> AccRStructure:
    """Parse a JSON structure definition into an AccRStructure."""
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifoldParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ManifoldParseError("top level must be a JSON object")
    sha = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return _structure_from_dict(raw, sha)


def _structure_from_dict(raw: dict, sha: str | None) -> AccRStructure:
    missing = _REQUIRED_KEYS - raw.keys()
    if missing:
        raise ManifoldParseError(f"missing field: {', '.join(sorted(missing))}")
    unknown = raw.keys() - _REQUIRED_KEYS - _OPTIONAL_KEYS
    if unknown:
        raise ManifoldParseError(f"unknown field: {', '.join(sorted(unknown))}")

    n = raw["n"]
    if not isinstance(n, int) or n < 1:
        raise ManifoldParseError("n must be a positive integer")
    coords = raw["coordinates"]
    if not isinstance(coords, list) or not all(isinstance(c, str) for c in coords):
        raise ManifoldParseError("coordinates must be a list of names")
    if len(set(coords)) != len(coords):
        raise ManifoldParseError("coordinate names must be distinct")
    if len(coords) != 2 * n + 1:
        raise DimensionMismatch(
            f"{len(coords)} coordinates given, but dimension must be 2n+1 = {2 * n + 1}"
        )
    dim = 2 * n + 1

    domain_raw = raw["domain"]
    if not isinstance(domain_raw, dict) or set(domain_raw) != set(coords):
        raise ManifoldParseError("domain must give one open interval per coordinate")
    domain = []
    for c in coords:
        iv = domain_raw[c]
        if (
            not isinstance(iv, list)
            or len(iv) != 2
            or not all(isinstance(x, (int, float)) for x in iv)
            or not np.isfinite(iv).all()
            or not iv[0] < iv[1]
        ):
            raise ManifoldParseError(f"domain[{c}] must be a finite interval [lo, hi] with lo < hi")
        domain.append((float(iv[0]), float(iv[1])))

    constants_raw = raw.get("constants", [])
    if not isinstance(constants_raw, list) or not all(isinstance(c, str) for c in constants_raw):
        raise ManifoldParseError("constants must be a list of names")
    if set(constants_raw) & set(coords):
        raise ManifoldParseError("constant names must not collide with coordinates")
    constants = tuple(sorted(set(constants_raw)))

    chart = Chart(n=n, coordinates=tuple(coords), domain=tuple(domain), constants=constants)

    def parse_entry(text, where):
        if not isinstance(text, str):
            raise ManifoldParseError(f"{where} must be an expression string")
        return parse(text, chart.coordinates, constants)

    def parse_matrix(key):
        rows = raw[key]
        if not isinstance(rows, list) or len(rows) != dim or any(
            not isinstance(r, list) or len(r) != dim for r in rows
        ):
            raise ManifoldParseError(f"{key} must be a {dim}x{dim} matrix of expression strings")
        return tuple(
            tuple(parse_entry(rows[i][j], f"{key}[{i}][{j}]") for j in range(dim))
            for i in range(dim)
        )

    def parse_vector(key):
        entries = raw[key]
        if not isinstance(entries, list) or len(entries) != dim:
            raise ManifoldParseError(f"{key} must be a list of {dim} expression strings")
        return tuple(parse_entry(entries[i], f"{key}[{i}]") for i in range(dim))

    g = parse_matrix("g")
    for i in range(dim):
        for j in range(i + 1, dim):
            if g[i][j].ast != g[j][i].ast:
                raise ManifoldParseError(
                    f"metric entries g[{i}][{j}] and g[{j}][{i}] differ; "
                    "symmetric input is required, not silently symmetrized"
                )
    phi = parse_matrix("phi")
    xi = parse_vector("xi")
    eta = parse_vector("eta")
    frame = parse_matrix("frame") if "frame" in raw else None

    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        raise ManifoldParseError("name must be a string")

    return AccRStructure(
        chart=chart, g=g, phi=phi, xi=xi, eta=eta, frame=frame, name=name, source_sha256=sha
    )


# -- builtins --------------------------------------------------------------

# Cone over a flat 2-dimensional fiber carrying a Norden metric.  The free
# constants feed soliton potentials (c for g, ct for the associated metric)
# and the closed-form comparisons (kprime is the fiber curvature parameter;
# the shipped fiber is flat, so pair it with kprime = 0).
_CONE = {
    "name": "cone-flat-fiber",
    "n": 1,
    "coordinates": ["t", "u", "v"],
    "domain": {"t": [0.5, 5.0], "u": [-3.0, 3.0], "v": [-3.0, 3.0]},
    "constants": ["c", "ct", "kprime"],
    "g": [["1", "0", "0"], ["0", "t^2", "0"], ["0", "0", "-t^2"]],
    "phi": [["0", "0", "0"], ["0", "0", "-1"], ["0", "1", "0"]],
    "xi": ["1", "0", "0"],
    "eta": ["1", "0", "0"],
    "frame": [["0", "0", "1"], ["1/t", "0", "0"], ["0", "1/t", "0"]],
}

# Flat structure with parallel phi: every covariant derivative vanishes.
_FLAT = {
    "name": "flat-cosymplectic",
    "n": 1,
    "coordinates": ["t", "x", "y"],
    "domain": {"t": [-2.0, 2.0], "x": [-2.0, 2.0], "y": [-2.0, 2.0]},
    "constants": [],
    "g": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]],
    "phi": [["0", "0", "0"], ["0", "0", "-1"], ["0", "1", "0"]],
    "xi": ["1", "0", "0"],
    "eta": ["1", "0", "0"],
    "frame": [["0", "0", "1"], ["1", "0", "0"], ["0", "1", "0"]],
}

_BUILTINS = {d["name"]: d for d in (_CONE, _FLAT)}


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTINS))


def builtin_structure(name: str) -> AccRStructure:
    try:
        raw = _BUILTINS[name]
    except KeyError:
        raise UnknownBuiltin(
            f"no builtin named {name!r}; available: {', '.join(builtin_names())}"
        ) from None
    canonical = json.dumps(raw, sort_keys=True)
    sha = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    return _structure_from_dict(raw, sha)


# -- structural validation --------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    """Max residuals of the defining identities over the sample set."""

    residuals: dict[str, float]
    signature: tuple[int, int]
    expected_signature: tuple[int, int]
    tolerance: float

    @property
    def passed(self) -> bool:
        return (
            all(r <= self.tolerance for r in self.residuals.values())
            and self.signature == self.expected_signature
        )

    def failing(self) -> list[str]:
        bad = [k for k, r in self.residuals.items() if r > self.tolerance]
        if self.signature != self.expected_signature:
            bad.append("signature")
        return bad


def validate_structure(
    S: AccRStructure,
    samples: Sequence[Sequence[float]],
    bindings: Mapping[str, float] | None = None,
    tol: float = 1e-9,
) -> ValidationReport:
    """Check the defining identities of an almost contact B-metric structure.

    Residuals are max-norms over all samples of:
      phi(xi) = 0, phi^2 = -id + eta(x) xi, eta(phi(x)) = 0, eta(xi) = 1,
      g(phi x, phi y) = -g(x, y) + eta(x) eta(y), g(x, xi) = eta(x),
      g(xi, xi) = 1.
    The metric signature must be (n+1, n) at every sample.
    """
    dim = S.dim
    eye = np.eye(dim)
    residuals = {
        "phi(xi) = 0": 0.0,
        "phi^2 = -id + eta(x) xi": 0.0,
        "eta(phi(x)) = 0": 0.0,
        "eta(xi) = 1": 0.0,
        "g(phi x, phi y) = -g(x, y) + eta(x) eta(y)": 0.0,
        "g(x, xi) = eta(x)": 0.0,
        "g(xi, xi) = 1": 0.0,
    }
    signature = (S.n + 1, S.n)
    for point in samples:
        g, phi, xi, eta = S.values_at(point, bindings)

        def bump(key, arr):
            residuals[key] = max(residuals[key], float(np.max(np.abs(arr))))

        bump("phi(xi) = 0", phi @ xi)
        bump("phi^2 = -id + eta(x) xi", phi @ phi + eye - np.outer(xi, eta))
        bump("eta(phi(x)) = 0", eta @ phi)
        bump("eta(xi) = 1", eta @ xi - 1.0)
        bump(
            "g(phi x, phi y) = -g(x, y) + eta(x) eta(y)",
            np.einsum("ai,bj,ab->ij", phi, phi, g) + g - np.outer(eta, eta),
        )
        bump("g(x, xi) = eta(x)", g @ xi - eta)
        bump("g(xi, xi) = 1", xi @ g @ xi - 1.0)
        signature = signature_of(g)
        if signature != (S.n + 1, S.n):
            break
    return ValidationReport(
        residuals=residuals,
        signature=signature,
        expected_signature=(S.n + 1, S.n),
        tolerance=tol,
    )


# -- associated metric -------------------------------------------------------


@dataclass(frozen=True)
class AssociatedMetric:
    """Evaluator for the associated B-metric gg(x, y) = g(x, phi y) + eta(x) eta(y)."""

    structure: AccRStructure

    def components_at(self, point, bindings: Mapping[str, float] | None = None) -> np.ndarray:
        g, phi, xi, eta = self.structure.values_at(point, bindings)
        gt = np.einsum("is,sj->ij", g, phi) + np.outer(eta, eta)
        return (gt + gt.T) / 2.0

    def jets_at(self, point, bindings: Mapping[str, float] | None = None) -> FieldJets:
        """Jets of the associated metric, assembled by the product rule."""
        sj = self.structure.jets_at(point, bindings)
        g, dg, d2g = sj.g
        phi, dphi, d2phi = sj.phi
        eta, deta, d2eta = sj.eta
        value = np.einsum("is,sj->ij", g, phi) + np.outer(eta, eta)
        partial = (
            np.einsum("ism,sj->ijm", dg, phi)
            + np.einsum("is,sjm->ijm", g, dphi)
            + np.einsum("im,j->ijm", deta, eta)
            + np.einsum("i,jm->ijm", eta, deta)
        )
        second = (
            np.einsum("isml,sj->ijml", d2g, phi)
            + np.einsum("ism,sjl->ijml", dg, dphi)
            + np.einsum("isl,sjm->ijml", dg, dphi)
            + np.einsum("is,sjml->ijml", g, d2phi)
            + np.einsum("iml,j->ijml", d2eta, eta)
            + np.einsum("im,jl->ijml", deta, deta)
            + np.einsum("il,jm->ijml", deta, deta)
            + np.einsum("i,jml->ijml", eta, d2eta)
        )
        # the formula is symmetric in (i, j) only up to rounding; enforce exactly
        value = (value + value.transpose(1, 0)) / 2.0
        partial = (partial + partial.transpose(1, 0, 2)) / 2.0
        second = (second + second.transpose(1, 0, 2, 3)) / 2.0
        return FieldJets(value, partial, second)


def associated_metric(S: AccRStructure) -> AssociatedMetric:
    return AssociatedMetric(S)


# -- sampling ----------------------------------------------------------------


def latin_hypercube(chart: Chart, count: int, seed: int = 42) -> list[np.ndarray]:
    """Deterministic Latin hypercube over the open domain box.

    Each coordinate axis is split into `count` strata; one point is drawn
    from the interior of each stratum and the strata are shuffled per axis.
    Points stay strictly inside the open box.
    """
    if count <= 0:
        return []
    rng = np.random.default_rng(seed)
    dim = chart.dim
    columns = []
    for axis in range(dim):
        lo, hi = chart.domain[axis]
        perm = rng.permutation(count)
        offsets = rng.uniform(0.05, 0.95, size=count)
        fractions = (perm + offsets) / count
        columns.append(lo + fractions * (hi - lo))
    return [np.array([columns[a][k] for a in range(dim)]) for k in range(count)]


def sample_points(
    chart: Chart,
    count: int,
    seed: int = 42,
    pinned: Iterable[Sequence[float]] = (),
) -> list[np.ndarray]:
    """Pinned points first, Latin hypercube samples filling up to `count` total."""
    pinned_list = [np.asarray(p, dtype=float) for p in pinned]
    for p in pinned_list:
        chart.require_inside(p)
    if len(pinned_list) > count:
        raise ValueError(f"{len(pinned_list)} pinned points exceed sample budget {count}")
    return pinned_list + latin_hypercube(chart, count - len(pinned_list), seed)


def check_bindings(chart: Chart, bindings: Mapping[str, float], required: Iterable[str]) -> None:
    """Fail fast when a referenced constant is unbound or non-finite."""
    for name in sorted(set(required)):
        if name not in bindings:
            raise UnboundConstant(name)
        if not np.isfinite(bindings[name]):
            raise DomainError(f"constant {name} = {bindings[name]} is not finite")
