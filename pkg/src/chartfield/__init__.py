"""Chart data extraction from raster images via tensor field degenerate points."""

from .errors import (
    ChartFieldError,
    EmptyCanvasError,
    EmptyTableError,
    InvalidInputError,
    InvalidParameterError,
)


def __getattr__(name):
    # lazy high-level API: keeps `import chartfield` light (cv2, scipy, PIL
    # load only when the pipeline layers are actually used)
    lazy = {
        "Params": ("chartfield.params", "Params"),
        "load_params": ("chartfield.params", "load_params"),
        "run_extract": ("chartfield.pipeline", "run_extract"),
        "load_image": ("chartfield.pipeline", "load_image"),
        "extract_canvas": ("chartfield.preprocess", "extract_canvas"),
        "DataTable": ("chartfield.extract", "DataTable"),
        "dbscan": ("chartfield.clustering", "dbscan"),
        "centroids": ("chartfield.clustering", "centroids"),
        "FixtureSpec": ("chartfield.fixtures", "FixtureSpec"),
        "render_fixture": ("chartfield.fixtures", "render_fixture"),
        "emd_1d": ("chartfield.emd", "emd_1d"),
        "emd_2d": ("chartfield.emd", "emd_2d"),
        "normalize_table": ("chartfield.emd", "normalize_table"),
    }
    if name in lazy:
        import importlib

        module, attr = lazy[name]
        return getattr(importlib.import_module(module), attr)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
from .tensorfield import (
    DegeneratePoint,
    EigenDecomp2,
    GradientField,
    GradientVector,
    SaliencyPixel,
    SymTensor2,
    TensorField,
    anisotropic_diffuse,
    cast_vote,
    compute_gradient,
    detect_degenerate_points,
    eigendecompose,
    gradient_tensor,
    saliency,
    saliency_maps,
    structure_tensor,
    tensor_vote_field,
)

__version__ = "0.1.0"

__all__ = [
    "ChartFieldError",
    "DegeneratePoint",
    "EigenDecomp2",
    "EmptyCanvasError",
    "EmptyTableError",
    "GradientField",
    "GradientVector",
    "InvalidInputError",
    "InvalidParameterError",
    "SaliencyPixel",
    "SymTensor2",
    "TensorField",
    "anisotropic_diffuse",
    "cast_vote",
    "compute_gradient",
    "detect_degenerate_points",
    "eigendecompose",
    "gradient_tensor",
    "saliency",
    "saliency_maps",
    "structure_tensor",
    "tensor_vote_field",
    "__version__",
]
