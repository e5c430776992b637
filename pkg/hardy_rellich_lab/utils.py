# -*- coding: utf-8 -*-

import typing as T
import math
import json

import numpy as np

# Represent a serializable report
T_DATA = T.Dict[str, T.Any]

# Radius argument accepted by the evaluators: a scalar or a node array
T_RADIUS = T.Union[float, np.ndarray]


def round_sig(x: float, digits: int = 12) -> T.Optional[T.Union[float, str]]:
    """
    Round a float to ``digits`` significant digits so serialized reports are
    byte stable. Non finite values become strings, ``None`` stays ``None``.

    Example::

        >>> round_sig(2.2500000000001234)
        2.25
        >>> round_sig(float("inf"))
        'inf'
    """
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.{digits}g}")


def normalize_floats(data: T.Any, digits: int = 12) -> T.Any:
    """
    Recursively apply :func:`round_sig` to every float (and numpy scalar or
    array) found in a JSON like structure.
    """
    if isinstance(data, dict):
        return {str(k): normalize_floats(v, digits) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [normalize_floats(v, digits) for v in data]
    if isinstance(data, np.ndarray):
        return [normalize_floats(v, digits) for v in data.tolist()]
    if isinstance(data, (bool, np.bool_)):
        return bool(data)
    if isinstance(data, (int, np.integer)):
        return int(data)
    if isinstance(data, (float, np.floating)):
        return round_sig(data, digits)
    return data


def dumps_json(data: T_DATA, digits: int = 12) -> str:
    """
    Deterministic JSON: sorted keys, fixed significant digits.
    """
    return json.dumps(
        normalize_floats(data, digits),
        sort_keys=True,
        indent=2,
        ensure_ascii=False,
    )


def downsample(
    r: np.ndarray,
    u: np.ndarray,
    max_points: int = 256,
) -> T_DATA:
    """
    Thin a sampled profile to at most ``max_points`` points (endpoints kept)
    for embedding in a report.
    """
    n = len(r)
    if n <= max_points:
        idx = np.arange(n)
    else:
        idx = np.unique(np.linspace(0, n - 1, max_points).round().astype(int))
    return dict(r=np.asarray(r)[idx].tolist(), u=np.asarray(u)[idx].tolist())
