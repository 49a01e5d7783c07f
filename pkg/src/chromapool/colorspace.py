"""sRGB / CIELAB conversions and perceptual color distances.

All functions assume the sRGB working space with a D65 reference white and
are vectorized: they accept any array-like with a trailing axis of size 3
(single colors, pixel rows, whole images) and broadcast against each other.

The reference white is derived from the conversion matrix itself (the XYZ of
RGB (255,255,255)), so pure white maps to exactly L=100, a=0, b=0 and the
round trip through Lab is exact at the gamut corners.
"""

from __future__ import annotations

import numpy as np

# sRGB primaries to XYZ under D65 (Bruce Lindbloom's sRGB matrix).
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ],
    dtype=np.float64,
)
_XYZ_TO_RGB = np.linalg.inv(_RGB_TO_XYZ)
# XYZ of RGB (1,1,1); using the row sums keeps white exactly neutral in Lab.
_WHITE = _RGB_TO_XYZ.sum(axis=1)

# CIE constants (exact rational forms).
_EPSILON = 216.0 / 24389.0
_KAPPA = 24389.0 / 27.0

_POW25_7 = 25.0**7


def _srgb_transfer_inverse(channel: np.ndarray) -> np.ndarray:
    """Gamma-encoded sRGB in [0,1] to linear light."""
    return np.where(
        channel <= 0.04045,
        channel / 12.92,
        ((channel + 0.055) / 1.055) ** 2.4,
    )


def _srgb_transfer(linear: np.ndarray) -> np.ndarray:
    """Linear light in [0,1] to gamma-encoded sRGB."""
    return np.where(
        linear <= 0.0031308,
        12.92 * linear,
        1.055 * np.power(linear, 1.0 / 2.4) - 0.055,
    )


def rgb_to_lab(rgb) -> np.ndarray:
    """Convert 8-bit sRGB values to CIELAB.

    Args:
        rgb: array-like with shape (..., 3), channel values in [0, 255].

    Returns:
        float64 array of shape (..., 3) holding (L, a, b); L lies in
        [0, 100] for in-gamut inputs.
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.shape[-1] != 3:
        raise ValueError(f"expected trailing axis of size 3, got shape {rgb.shape}")
    linear = _srgb_transfer_inverse(rgb / 255.0)
    xyz = linear @ _RGB_TO_XYZ.T
    t = xyz / _WHITE
    f = np.where(t > _EPSILON, np.cbrt(t), (_KAPPA * t + 16.0) / 116.0)
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    lab = np.stack([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)], axis=-1)
    return lab


def lab_to_rgb(lab) -> np.ndarray:
    """Convert CIELAB values to 8-bit sRGB, clamping out-of-gamut channels.

    The inverse of :func:`rgb_to_lab` for in-gamut colors (round trip is
    within one count per channel); out-of-gamut Lab values are clamped per
    channel to [0, 255].
    """
    lab = np.asarray(lab, dtype=np.float64)
    if lab.shape[-1] != 3:
        raise ValueError(f"expected trailing axis of size 3, got shape {lab.shape}")
    l, a, b = lab[..., 0], lab[..., 1], lab[..., 2]
    fy = (l + 16.0) / 116.0
    fx = fy + a / 500.0
    fz = fy - b / 200.0

    def _finv(f):
        f3 = f**3
        return np.where(f3 > _EPSILON, f3, (116.0 * f - 16.0) / _KAPPA)

    xr = _finv(fx)
    yr = np.where(l > _KAPPA * _EPSILON, ((l + 16.0) / 116.0) ** 3, l / _KAPPA)
    zr = _finv(fz)
    xyz = np.stack([xr, yr, zr], axis=-1) * _WHITE
    linear = xyz @ _XYZ_TO_RGB.T
    # Clamping in linear light before the transfer equals clamping the final
    # channels (the transfer is monotone and maps [0,1] onto [0,1]).
    srgb = _srgb_transfer(np.clip(linear, 0.0, 1.0))
    return np.clip(np.rint(srgb * 255.0), 0, 255).astype(np.uint8)


def lab_euclidean(x, y) -> float | np.ndarray:
    """Plain Euclidean (CIE76-style) distance between Lab colors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    d = np.sqrt(np.sum((x - y) ** 2, axis=-1))
    return float(d) if d.ndim == 0 else d


def ciede2000(x, y) -> float | np.ndarray:
    """CIEDE2000 color difference with kL = kC = kH = 1.

    Follows the implementation notes of Sharma, Wu and Dalal (2005),
    including the hue-angle degeneracies for achromatic colors. Broadcasts
    over leading axes.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    l1, a1, b1 = x[..., 0], x[..., 1], x[..., 2]
    l2, a2, b2 = y[..., 0], y[..., 1], y[..., 2]

    c1 = np.hypot(a1, b1)
    c2 = np.hypot(a2, b2)
    cbar = 0.5 * (c1 + c2)
    cbar7 = cbar**7
    g = 0.5 * (1.0 - np.sqrt(cbar7 / (cbar7 + _POW25_7)))
    a1p = (1.0 + g) * a1
    a2p = (1.0 + g) * a2
    c1p = np.hypot(a1p, b1)
    c2p = np.hypot(a2p, b2)

    h1p = np.degrees(np.arctan2(b1, a1p)) % 360.0
    h2p = np.degrees(np.arctan2(b2, a2p)) % 360.0

    dlp = l2 - l1
    dcp = c2p - c1p

    hdiff = h2p - h1p
    dhp = np.where(
        c1p * c2p == 0.0,
        0.0,
        np.where(
            np.abs(hdiff) <= 180.0,
            hdiff,
            np.where(hdiff > 180.0, hdiff - 360.0, hdiff + 360.0),
        ),
    )
    dhp_big = 2.0 * np.sqrt(c1p * c2p) * np.sin(np.radians(dhp) / 2.0)

    lbar = 0.5 * (l1 + l2)
    cbarp = 0.5 * (c1p + c2p)
    hsum = h1p + h2p
    hbar = np.where(
        c1p * c2p == 0.0,
        hsum,
        np.where(
            np.abs(h1p - h2p) <= 180.0,
            0.5 * hsum,
            np.where(hsum < 360.0, 0.5 * (hsum + 360.0), 0.5 * (hsum - 360.0)),
        ),
    )

    t = (
        1.0
        - 0.17 * np.cos(np.radians(hbar - 30.0))
        + 0.24 * np.cos(np.radians(2.0 * hbar))
        + 0.32 * np.cos(np.radians(3.0 * hbar + 6.0))
        - 0.20 * np.cos(np.radians(4.0 * hbar - 63.0))
    )

    lbar50sq = (lbar - 50.0) ** 2
    sl = 1.0 + 0.015 * lbar50sq / np.sqrt(20.0 + lbar50sq)
    sc = 1.0 + 0.045 * cbarp
    sh = 1.0 + 0.015 * cbarp * t

    dtheta = 30.0 * np.exp(-(((hbar - 275.0) / 25.0) ** 2))
    cbarp7 = cbarp**7
    rc = 2.0 * np.sqrt(cbarp7 / (cbarp7 + _POW25_7))
    rt = -np.sin(np.radians(2.0 * dtheta)) * rc

    tl = dlp / sl
    tc = dcp / sc
    th = dhp_big / sh
    # The cross term can push the sum a hair below zero in float arithmetic.
    de2 = np.maximum(tl**2 + tc**2 + th**2 + rt * tc * th, 0.0)
    de = np.sqrt(de2)
    return float(de) if de.ndim == 0 else de
