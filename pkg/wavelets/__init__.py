import numpy as np

from common.errors import NonpositiveLambdaMax
from wavelets.bank import KernelBank, dilation_bank, frame_bounds, identity_bank, select_scales
from wavelets.kernels import (
    DILATION_KERNELS,
    KernelFamily,
    KernelSpec,
    cubic_spline_kernel,
    iterated_sine_kernel,
    meyer_kernel,
)
from wavelets.sgwt import (
    WaveletCoefficients,
    WaveletFrame,
    analyze,
    build_frame,
    extract_features,
    feature_layout,
    synthesize_tight,
)
from wavelets.warping import HANN, WarpingFunction, empirical_cdf_warping, tight_bound, warped_translate_bank

__all__ = [
    "KernelFamily",
    "KernelSpec",
    "KernelBank",
    "WarpingFunction",
    "WaveletFrame",
    "WaveletCoefficients",
    "cubic_spline_kernel",
    "meyer_kernel",
    "iterated_sine_kernel",
    "empirical_cdf_warping",
    "warped_translate_bank",
    "tight_bound",
    "select_scales",
    "frame_bounds",
    "dilation_bank",
    "identity_bank",
    "make_bank",
    "build_frame",
    "analyze",
    "extract_features",
    "feature_layout",
    "synthesize_tight",
    "HANN",
]


def make_bank(spec: KernelSpec, eigenvalues) -> KernelBank:
    """
    Arma el banco de la familia de `spec` calibrado a unos autovalores.

    Las familias por dilatación solo usan λ_max; warped_translate usa la
    distribución completa para el warping y toma n_bands como R.
    """
    spec = spec if isinstance(spec, KernelSpec) else KernelSpec.from_dict(spec)
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    if spec.family is KernelFamily.WARPED_TRANSLATE:
        warp = empirical_cdf_warping(eigenvalues)
        return warped_translate_bank(warp, spec.n_bands, spec.params.get("coeffs", HANN))
    if spec.family in DILATION_KERNELS:
        lambda_max = float(eigenvalues.max()) if eigenvalues.size else 0.0
        if lambda_max <= 0:
            raise NonpositiveLambdaMax(f"El espectro no tiene autovalores positivos (λ_max={lambda_max}).")
        return dilation_bank(spec.family, lambda_max, spec.n_bands)
    raise ValueError(f"Familia sin constructor: {spec.family}")
