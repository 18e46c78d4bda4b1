"""Test fixtures and factories for cone-exponents tests"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from construct import ConstructionState, construction_params, run_construction
from core import PrecisionReal, RealVector
from metrical import uniform_vector

SQRT2_DIGITS = "1.4142135623730950488016887242096980785696718753769480731766797379907324784621"


def sqrt_real(k: int, bits: int = 128) -> PrecisionReal:
    """√k as an algebraic coordinate isolated in [isqrt(k), isqrt(k) + 1]"""
    base = math.isqrt(k)
    return PrecisionReal.algebraic([1, 0, -k], base, base + 1, bits)


def make_sqrt_vector(*radicands: int, bits: int = 128) -> RealVector:
    """(√a, √b, ...) with algebraic origins"""
    return RealVector(tuple(sqrt_real(k, bits) for k in radicands))


def seeded_vector(n: int, seed: int) -> RealVector:
    """Uniform vector drawn from the Philox stream of the seed"""
    return uniform_vector(n, np.random.SeedSequence(seed))


def create_vector_spec(
    coords: Optional[List[Dict[str, Any]]] = None,
    precision_bits: int = 128,
    **kwargs,
) -> Dict[str, Any]:
    """
    Create a vector input file payload

    Args:
        coords: Coordinate entries (defaults to √2, √3)
        precision_bits: Working precision
        **kwargs: Overrides for top-level fields

    Returns:
        dict: Payload accepted by vector_from_spec
    """
    if coords is None:
        coords = [
            {"kind": "algebraic", "coeffs": [1, 0, -2], "lower": "1", "upper": "2"},
            {"kind": "algebraic", "coeffs": [1, 0, -3], "lower": "1", "upper": "2"},
        ]
    payload = {"n": len(coords), "coords": coords, "precision_bits": precision_bits}
    payload.update(kwargs)
    return payload


def write_vector_file(path: Path, payload: Optional[Dict[str, Any]] = None) -> Path:
    """Write a vector input file and return its path"""
    path.write_text(json.dumps(payload or create_vector_spec()), encoding="utf-8")
    return path


def small_construction(steps: int = 2) -> ConstructionState:
    """n = 2 construction with targets (2, 3), below the large-target threshold"""
    params = construction_params(2, ["2", "3"], allow_small_targets=True)
    return run_construction(params, steps)
