"""Code parameterisation, validation, bit budgets, rate and energy."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .dictionary import Dictionary
from .errors import (
    NonPowerOfTwoAlphabet,
    OverlappingAlphabets,
    SparsityExceedsPool,
    SpecError,
    ZeroInAlphabet,
)


@dataclass(frozen=True)
class LayerSpec:
    """One sparse layer: ``k`` nonzeros drawn from ``alphabet`` inside a pool of ``pool_size``.

    ``pool_size=None`` means the whole remaining pool.
    """

    k: int
    alphabet: tuple[float, ...]
    pool_size: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(float(a) for a in self.alphabet))


@dataclass(frozen=True)
class CodeSpec:
    n: int
    layers: tuple[LayerSpec, ...]
    dictionary: Dictionary = field(default_factory=Dictionary.identity)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))

    def to_dict(self) -> dict:
        layers = []
        for layer in self.layers:
            d = {"k": layer.k, "alphabet": [_num(a) for a in layer.alphabet]}
            if layer.pool_size is not None:
                d["pool_size"] = layer.pool_size
            layers.append(d)
        return {"n": self.n, "dictionary": self.dictionary.to_json(), "layers": layers}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "CodeSpec":
        try:
            layers = tuple(
                LayerSpec(int(d["k"]), tuple(d["alphabet"]), d.get("pool_size"))
                for d in obj["layers"]
            )
            return cls(int(obj["n"]), layers, Dictionary.from_json(obj.get("dictionary")))
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed code spec: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "CodeSpec":
        return cls.from_dict(json.loads(text))


def _num(a: float):
    return int(a) if float(a).is_integer() else a


@dataclass(frozen=True)
class ValidatedSpec:
    """A :class:`CodeSpec` whose invariants hold, with per-layer budgets precomputed."""

    spec: CodeSpec
    pool_sizes: tuple[int, ...]
    remaining: tuple[int, ...]  # N - sum_{j<l} K_j
    support_bits: tuple[int, ...]
    symbol_bits: tuple[int, ...]  # log2 |A_l|
    layer_bits: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def layers(self) -> tuple[LayerSpec, ...]:
        return self.spec.layers

    @property
    def dictionary(self) -> Dictionary:
        return self.spec.dictionary

    @property
    def total_bits(self) -> int:
        return sum(self.layer_bits)

    @property
    def num_layers(self) -> int:
        return len(self.spec.layers)


def floor_log2_comb(m: int, k: int) -> int:
    """Exact ``floor(log2(C(m, k)))`` via big-integer bit length."""
    return comb(m, k).bit_length() - 1


def validate_spec(spec: CodeSpec | ValidatedSpec) -> ValidatedSpec:
    if isinstance(spec, ValidatedSpec):
        return spec
    n = spec.n
    if not isinstance(n, int) or n < 1:
        raise SpecError(f"block length must be a positive integer, got {n!r}")
    if not spec.layers:
        raise SpecError("a code needs at least one layer")
    spec.dictionary.validate(n)

    seen: set[float] = set()
    pools, remaining, sbits, abits = [], [], [], []
    used = 0
    for i, layer in enumerate(spec.layers):
        alpha = layer.alphabet
        if len(alpha) == 0:
            raise SpecError(f"layer {i}: empty alphabet")
        if any(not math.isfinite(a) for a in alpha):
            raise SpecError(f"layer {i}: non-finite amplitude")
        if len(set(alpha)) != len(alpha):
            raise SpecError(f"layer {i}: amplitudes must be distinct")
        if any(a == 0.0 for a in alpha):
            raise ZeroInAlphabet(f"layer {i}: 0 is not a valid amplitude")
        j = len(alpha)
        if j & (j - 1):
            raise NonPowerOfTwoAlphabet(f"layer {i}: |A|={j} is not a power of two")
        if seen.intersection(alpha):
            raise OverlappingAlphabets(f"layer {i} shares amplitudes with an earlier layer")
        seen.update(alpha)

        if not isinstance(layer.k, int) or layer.k < 1:
            raise SpecError(f"layer {i}: sparsity must be a positive integer")
        free = n - used
        pool = free if layer.pool_size is None else int(layer.pool_size)
        if pool < 1 or pool > free:
            raise SparsityExceedsPool(f"layer {i}: pool size {pool} not in [1, {free}]")
        if layer.k > pool:
            raise SparsityExceedsPool(f"layer {i}: K={layer.k} exceeds pool size {pool}")
        pools.append(pool)
        remaining.append(free)
        sbits.append(floor_log2_comb(pool, layer.k))
        abits.append(j.bit_length() - 1)
        used += layer.k

    lbits = tuple(s + layer.k * a for s, a, layer in zip(sbits, abits, spec.layers))
    return ValidatedSpec(spec, tuple(pools), tuple(remaining), tuple(sbits), tuple(abits), lbits)


def layer_bit_budget(spec: CodeSpec | ValidatedSpec, layer: int) -> int:
    """``floor(log2 C(M, K)) + K log2 |A|`` for one layer, in exact integer arithmetic."""
    return validate_spec(spec).layer_bits[layer]


def code_rate(spec: CodeSpec | ValidatedSpec, exact: bool = False):
    vs = validate_spec(spec)
    r = Fraction(vs.total_bits, vs.n)
    return r if exact else float(r)


def average_symbol_energy(spec: CodeSpec | ValidatedSpec, exact: bool = False):
    """Mean energy per channel use, ``sum_l K_l * mean(a^2 over A_l) / N``."""
    vs = validate_spec(spec)
    total = Fraction(0)
    for layer in vs.layers:
        mean_sq = sum(Fraction(a) ** 2 for a in layer.alphabet) / len(layer.alphabet)
        total += layer.k * mean_sq
    es = total / vs.n
    return es if exact else float(es)


def single_layer(n: int, k: int = 1, alphabet: Sequence[float] = (1.0,)) -> CodeSpec:
    return CodeSpec(n, (LayerSpec(k, tuple(alphabet)),))


def two_layer_pm(n: int, k: int = 1, amplitude: float = 1.0) -> CodeSpec:
    """Symmetric two-layer code with ``A1={+a}``, ``A2={-a}`` and equal sparsity."""
    return CodeSpec(n, (LayerSpec(k, (amplitude,)), LayerSpec(k, (-amplitude,))))
