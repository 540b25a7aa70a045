"""Per-pixel tensor fields over a chart canvas.

The canvas is modeled as a grid of symmetric positive-semidefinite 2x2
tensors. Four fields are built from a single-channel image: the gradient
tensor (outer product of the Sobel gradient), the structure tensor (Gaussian
smoothed gradient tensor), the vote field (closed-form votes aggregated over
N4 neighborhoods), and its anisotropic diffusion. Degenerate points, where
the eigenvalues match, mark corners and junctions of chart objects.

Coordinates are pixel (x, y) with x = column, y = row; arrays index [y, x].

Conventions (the literal closed-form vote product c*R*K*R' is asymmetric and
slightly indefinite when K does not commute with r r^T, so a convention is
required to keep every stored tensor symmetric PSD):

* cast_vote returns the PSD projection of the symmetric part of c*R*K*R'.
  For axis-aligned votes with axis-aligned K (the dominant case in chart
  imagery) the projection is the identity.
* Gradients use the raw (unnormalized) 3x3 Sobel kernel on [0, 1]
  intensities. Full-contrast edges then produce eigenvalues far above the
  default diffusion parameter, so after diffusion only pixels whose
  eigenvalues nearly match on the delta scale keep a high junction
  likelihood; those are exactly the corner pixels and the faint
  aliasing residue the weak-point trace filter is tuned for.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .backend import get_kernels
from .errors import InvalidInputError, InvalidParameterError

#: Tensors with trace below this are homogeneous: they carry no boundary
#: information and are excluded from saliency classification.
TRACE_EPSILON = 1e-12

DEFAULT_SIGMA_D = 4.0
DEFAULT_DELTA = 0.16
DEFAULT_RHO = 1.0


@dataclass(frozen=True)
class SymTensor2:
    """Symmetric 2x2 tensor [[xx, xy], [xy, yy]]."""

    xx: float
    xy: float
    yy: float

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.xx, self.xy], [self.xy, self.yy]])

    def trace(self) -> float:
        return self.xx + self.yy

    def eigenvalues(self) -> tuple[float, float]:
        """(l0, l1) with l0 >= l1."""
        t = self.xx + self.yy
        s = np.sqrt((self.xx - self.yy) ** 2 + 4.0 * self.xy ** 2)
        return 0.5 * (t + s), 0.5 * (t - s)

    @staticmethod
    def zero() -> "SymTensor2":
        return SymTensor2(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class GradientVector:
    """Sobel gradient response at one pixel."""

    gx: float
    gy: float


@dataclass
class GradientField:
    """Per-pixel gradient arrays; gx[y, x], gy[y, x]."""

    gx: np.ndarray
    gy: np.ndarray

    @property
    def height(self) -> int:
        return self.gx.shape[0]

    @property
    def width(self) -> int:
        return self.gx.shape[1]

    def at(self, x: int, y: int) -> GradientVector:
        return GradientVector(float(self.gx[y, x]), float(self.gy[y, x]))


@dataclass(frozen=True)
class EigenDecomp2:
    """Eigendecomposition of a SymTensor2, l0 >= l1, v0 and v1 orthonormal."""

    l0: float
    l1: float
    v0: tuple[float, float]
    v1: tuple[float, float]


@dataclass(frozen=True)
class SaliencyPixel:
    """Curve/junction likelihoods; cl + cp = 1 unless homogeneous."""

    cl: float
    cp: float
    homogeneous: bool


@dataclass(frozen=True)
class DegeneratePoint:
    """Pixel whose tensor eigenvalues nearly match (junction response)."""

    x: int
    y: int
    cp: float
    norm_trace: float


class TensorField:
    """width x height grid of SymTensor2, stored as (H, W, 3) [xx, xy, yy]."""

    def __init__(self, data: np.ndarray):
        if data.ndim != 3 or data.shape[2] != 3:
            raise InvalidInputError("tensor field data must have shape (H, W, 3)")
        self.data = np.ascontiguousarray(data, dtype=np.float64)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def xx(self) -> np.ndarray:
        return self.data[:, :, 0]

    @property
    def xy(self) -> np.ndarray:
        return self.data[:, :, 1]

    @property
    def yy(self) -> np.ndarray:
        return self.data[:, :, 2]

    def trace(self) -> np.ndarray:
        return self.data[:, :, 0] + self.data[:, :, 2]

    def tensor_at(self, x: int, y: int) -> SymTensor2:
        xx, xy, yy = self.data[y, x]
        return SymTensor2(float(xx), float(xy), float(yy))

    def min_eigenvalues(self) -> np.ndarray:
        t = self.trace()
        s = np.sqrt((self.xx - self.yy) ** 2 + 4.0 * self.xy ** 2)
        return 0.5 * (t - s)

    @staticmethod
    def zeros(width: int, height: int) -> "TensorField":
        return TensorField(np.zeros((height, width, 3)))

    @staticmethod
    def from_components(xx: np.ndarray, xy: np.ndarray, yy: np.ndarray) -> "TensorField":
        return TensorField(np.stack([xx, xy, yy], axis=-1))

    # --- serialization (shared with the visualization module and tests) ---

    def to_json(self) -> str:
        return json.dumps(
            {
                "width": self.width,
                "height": self.height,
                "tensors": [round(float(v), 17) for v in self.data.reshape(-1)],
            }
        )

    @staticmethod
    def from_json(text: str) -> "TensorField":
        obj = json.loads(text)
        data = np.array(obj["tensors"], dtype=np.float64).reshape(
            obj["height"], obj["width"], 3
        )
        return TensorField(data)

    def save_npz(self, path) -> None:
        np.savez_compressed(path, data=self.data)

    @staticmethod
    def load_npz(path) -> "TensorField":
        with np.load(path) as f:
            return TensorField(f["data"])


# ---------------------------------------------------------------------------
# field construction


def compute_gradient(image: np.ndarray) -> GradientField:
    """Per-pixel Sobel gradient of a single-channel image in [0, 1].

    Border pixels use replicate padding.
    """
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2 or image.size == 0:
        raise InvalidInputError("expected a non-empty single-channel image")
    gx, gy = get_kernels().sobel_gradient(image)
    return GradientField(gx, gy)


def gradient_tensor(g: GradientField) -> TensorField:
    """Rank-1 outer product g g^T at every pixel."""
    return TensorField.from_components(g.gx * g.gx, g.gx * g.gy, g.gy * g.gy)


def gaussian_kernel1d(rho: float) -> np.ndarray:
    """Zero-mean Gaussian taps truncated at radius ceil(3*rho), sum 1."""
    radius = int(np.ceil(3.0 * rho))
    ks = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-(ks * ks) / (2.0 * rho * rho))
    return w / w.sum()


def structure_tensor(tg: TensorField, rho: float = DEFAULT_RHO) -> TensorField:
    """Gaussian smoothing (std rho) of each tensor component."""
    if rho <= 0:
        raise InvalidParameterError(f"rho must be > 0, got {rho}")
    weights = gaussian_kernel1d(rho)
    blur = get_kernels().separable_blur
    return TensorField.from_components(
        blur(np.ascontiguousarray(tg.xx), weights),
        blur(np.ascontiguousarray(tg.xy), weights),
        blur(np.ascontiguousarray(tg.yy), weights),
    )


def _psd_project(m: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(m)
    vals = np.maximum(vals, 0.0)
    return (vecs * vals) @ vecs.T


def cast_vote(
    receiver: tuple[float, float],
    voter: tuple[float, float],
    k: SymTensor2,
    sigma_d: float = DEFAULT_SIGMA_D,
) -> SymTensor2:
    """Closed-form tensor vote cast at `receiver` by `voter` carrying tensor k.

    Evaluates c * R * K * R' with d = voter - receiver, r = d/|d|,
    R = I - 2 r r^T, R' = (I - r r^T / 2) R and decay
    c = exp(-|d|^2 / sigma_d), then returns the PSD projection of the
    symmetric part (see module docstring).
    """
    if sigma_d <= 0:
        raise InvalidParameterError(f"sigma_d must be > 0, got {sigma_d}")
    d = np.array([voter[0] - receiver[0], voter[1] - receiver[1]], dtype=np.float64)
    dist_sq = float(d @ d)
    if dist_sq == 0.0:
        raise InvalidInputError("receiver and voter coincide; vote direction undefined")
    r = d / np.sqrt(dist_sq)
    rrt = np.outer(r, r)
    eye = np.eye(2)
    big_r = eye - 2.0 * rrt
    big_r_prime = (eye - 0.5 * rrt) @ big_r
    c = np.exp(-dist_sq / sigma_d)
    s = c * (big_r @ k.as_matrix() @ big_r_prime)
    sym = 0.5 * (s + s.T)
    proj = _psd_project(sym)
    return SymTensor2(float(proj[0, 0]), float(proj[0, 1]), float(proj[1, 1]))


def tensor_vote_field(tg: TensorField, sigma_d: float = DEFAULT_SIGMA_D) -> TensorField:
    """Aggregate closed-form votes from in-bounds N4 neighbors at every pixel.

    Each neighbor votes with its own gradient tensor; all N4 neighbors sit at
    unit distance so the decay is the constant exp(-1/sigma_d). Votes sum in
    the fixed order left, right, up, down.
    """
    if sigma_d <= 0:
        raise InvalidParameterError(f"sigma_d must be > 0, got {sigma_d}")
    c = float(np.exp(-1.0 / sigma_d))
    xx, xy, yy = get_kernels().vote_field(
        np.ascontiguousarray(tg.xx),
        np.ascontiguousarray(tg.xy),
        np.ascontiguousarray(tg.yy),
        c,
    )
    return TensorField.from_components(xx, xy, yy)


def multichannel_vote_field(
    fields: list[TensorField], sigma_d: float = DEFAULT_SIGMA_D
) -> TensorField:
    """Sum of vote fields over per-channel gradient tensors."""
    if not fields:
        raise InvalidInputError("need at least one channel field")
    out = tensor_vote_field(fields[0], sigma_d).data
    for field in fields[1:]:
        out = out + tensor_vote_field(field, sigma_d).data
    return TensorField(out)


def anisotropic_diffuse(tv: TensorField, delta: float = DEFAULT_DELTA) -> TensorField:
    """Remap eigenvalues l -> exp(-l/delta), keeping eigenvectors.

    Inverts eigenvalue order: the post-diffusion major axis is the
    pre-diffusion minor axis, moving tensors from normal to tangent space.
    The remapped eigenvalues lie in (0, 1]; input eigenvalues below 0 (PSD
    tolerance leakage) are clamped before the map. Reconstruction rounding
    keeps the stored tensors PSD only within the module tolerance.
    """
    if delta <= 0:
        raise InvalidParameterError(f"delta must be > 0, got {delta}")
    xx, xy, yy = get_kernels().diffuse(
        np.ascontiguousarray(tv.xx),
        np.ascontiguousarray(tv.xy),
        np.ascontiguousarray(tv.yy),
        float(delta),
    )
    return TensorField.from_components(xx, xy, yy)


# ---------------------------------------------------------------------------
# eigen analysis and saliency


def eigendecompose(t: SymTensor2) -> EigenDecomp2:
    """Eigendecomposition with l0 >= l1; v1 is v0 rotated by 90 degrees."""
    l0, l1, vx, vy = get_kernels("numpy").eigh2(
        np.array([[t.xx]]), np.array([[t.xy]]), np.array([[t.yy]])
    )
    v0 = (float(vx[0, 0]), float(vy[0, 0]))
    return EigenDecomp2(float(l0[0, 0]), float(l1[0, 0]), v0, (-v0[1], v0[0]))


def eigen_field(field: TensorField):
    """(l0, l1, v0x, v0y) arrays for the whole field, l0 >= l1."""
    return get_kernels().eigh2(
        np.ascontiguousarray(field.xx),
        np.ascontiguousarray(field.xy),
        np.ascontiguousarray(field.yy),
    )


def saliency(decomp: EigenDecomp2) -> SaliencyPixel:
    """Curve and junction likelihoods of one eigendecomposition."""
    tr = decomp.l0 + decomp.l1
    if tr < TRACE_EPSILON:
        return SaliencyPixel(0.0, 0.0, True)
    return SaliencyPixel((decomp.l0 - decomp.l1) / tr, 2.0 * decomp.l1 / tr, False)


def saliency_maps(
    field: TensorField, homogeneity_trace: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(cl, cp, homogeneous) maps of a field.

    Homogeneity is decided on `homogeneity_trace` when given (the trace of the
    pre-diffusion field; diffusion maps zero tensors to the identity, so the
    diffused trace cannot flag them), otherwise on the field's own trace.
    """
    l0, l1, _, _ = eigen_field(field)
    tr_own = l0 + l1
    src = homogeneity_trace if homogeneity_trace is not None else tr_own
    homog = src < TRACE_EPSILON
    safe = np.where((tr_own > 0) & ~homog, tr_own, 1.0)
    cl = np.where(homog, 0.0, (l0 - l1) / safe)
    cp = np.where(homog, 0.0, 2.0 * l1 / safe)
    return cl, cp, homog


def detect_degenerate_points(
    field: TensorField,
    tau_cp: float,
    tau_wd: float,
    trace_field: TensorField | None = None,
) -> list[DegeneratePoint]:
    """Pixels with junction saliency above tau_cp and unity-normalized trace
    at least tau_wd, sorted by (y, x).

    `trace_field` supplies the strength measure (trace) and the homogeneity
    mask; pass the pre-diffusion vote field when `field` is the diffused one,
    since diffusion inverts the trace ordering. Defaults to `field` itself.
    Normalization maps the minimum trace over the canvas to 0 and the maximum
    to 1; if every trace is equal the result is empty with a warning.
    """
    if not (0.0 < tau_cp < 1.0):
        raise InvalidParameterError(f"tau_cp must be in (0, 1), got {tau_cp}")
    if not (0.0 <= tau_wd < 1.0):
        raise InvalidParameterError(f"tau_wd must be in [0, 1), got {tau_wd}")
    strength = trace_field if trace_field is not None else field
    traces = strength.trace()
    _, cp, _ = saliency_maps(field, homogeneity_trace=traces)

    tmin = float(traces.min())
    tmax = float(traces.max())
    if tmax - tmin <= 0.0:
        warnings.warn(
            "all tensor traces are equal; trace normalization undefined",
            stacklevel=2,
        )
        return []
    norm = (traces - tmin) / (tmax - tmin)

    mask = (cp > tau_cp) & (norm >= tau_wd)
    ys, xs = np.nonzero(mask)  # row-major: sorted by (y, x)
    return [
        DegeneratePoint(int(x), int(y), float(cp[y, x]), float(norm[y, x]))
        for y, x in zip(ys, xs)
    ]
