"""Symbolic measures on the line with a closed transform algebra.

A :class:`Measure` is an immutable description of a finite positive Borel
measure.  The primitive variants (point masses, uniform densities on interval
unions, trigonometric densities, digit-restricted Lebesgue measures,
self-similar digit measures) all admit exact closed forms for the transform

    m_hat(xi) = integral exp(-2 pi i xi x) dm(x),

and the algebra is closed under mixtures, affine images (optionally mod 1),
convolutions and polynomial window cutoffs.  Evaluation lives in
:mod:`fourierdim.transform`; this module owns the descriptions, their
validation, support bookkeeping and JSON round-tripping.

All variants are frozen dataclasses built from scalars and tuples: hashable,
comparable, safe to share across threads, and serialisable with
:func:`measure_to_dict` / :func:`measure_from_dict`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "MeasureError",
    "ScheduleError",
    "Measure",
    "Atomic",
    "UniformOnIntervals",
    "TrigDensity",
    "SelfSimilarDigit",
    "DigitBlock",
    "DigitProduct",
    "Mixture",
    "AffineImage",
    "Convolution",
    "SmoothCutDensity",
    "mass",
    "support_interval",
    "mixture",
    "affine_image",
    "convolve",
    "measure_to_dict",
    "measure_from_dict",
    "FrequencySchedule",
    "IntegerRange",
    "DyadicWindows",
    "Lacunary",
    "ExplicitFrequencies",
    "merge_schedules",
    "schedule_to_dict",
    "schedule_from_dict",
]

# Tolerance used when checking analytic side conditions on float data.
_EPS = 1e-12


class MeasureError(ValueError):
    """A measure description violates one of its invariants."""


class ScheduleError(ValueError):
    """A frequency schedule is malformed or spans too few windows."""


def _finite(value, what: str) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise MeasureError(f"{what} must be finite, got {value!r}")
    return v


def _is_integer_valued(x) -> bool:
    if isinstance(x, int):
        return True
    return isinstance(x, float) and x.is_integer()


class Measure:
    """Abstract base for all measure variants.  Instances are immutable."""

    __slots__ = ()

    @property
    def ambient_dim(self) -> int:
        raise NotImplementedError

    @property
    def variant(self) -> str:
        return type(self).__name__


def _canonical_position(pos):
    """Scalar for dimension one, tuple of floats otherwise."""
    if isinstance(pos, (int, float)):
        return _finite(pos, "atom position")
    coords = tuple(_finite(c, "atom coordinate") for c in pos)
    if len(coords) == 0:
        raise MeasureError("empty atom position")
    if len(coords) == 1:
        return coords[0]
    return coords


@dataclass(frozen=True)
class Atomic(Measure):
    """Finite sum of point masses: pairs (position, weight), weight > 0.

    Positions are floats in dimension one and coordinate tuples otherwise.
    An empty atom list is allowed as the zero measure; it only arises as the
    degenerate output of a support decomposition.
    """

    atoms: tuple = ()

    def __post_init__(self):
        canon = []
        for entry in self.atoms:
            pos, weight = entry
            w = _finite(weight, "atom weight")
            if w <= 0:
                raise MeasureError(f"atom weight must be positive, got {weight!r}")
            canon.append((_canonical_position(pos), w))
        dims = {1 if isinstance(p, float) else len(p) for p, _ in canon}
        if len(dims) > 1:
            raise MeasureError(f"atoms mix ambient dimensions {sorted(dims)}")
        object.__setattr__(self, "atoms", tuple(canon))

    @property
    def ambient_dim(self) -> int:
        if not self.atoms:
            return 1
        p = self.atoms[0][0]
        return 1 if isinstance(p, float) else len(p)


@dataclass(frozen=True)
class UniformOnIntervals(Measure):
    """Probability measure with constant density on a disjoint union of intervals."""

    intervals: tuple = ((0.0, 1.0),)

    def __post_init__(self):
        canon = sorted(
            (_finite(a, "interval endpoint"), _finite(b, "interval endpoint"))
            for a, b in self.intervals
        )
        if not canon:
            raise MeasureError("UniformOnIntervals needs at least one interval")
        for a, b in canon:
            if not b > a:
                raise MeasureError(f"interval ({a}, {b}) is empty or reversed")
        for (_, b0), (a1, _) in zip(canon, canon[1:]):
            if a1 < b0:
                raise MeasureError("intervals overlap")
        object.__setattr__(self, "intervals", tuple(canon))

    @property
    def ambient_dim(self) -> int:
        return 1

    @property
    def total_length(self) -> float:
        return math.fsum(b - a for a, b in self.intervals)


@dataclass(frozen=True)
class TrigDensity(Measure):
    """Density 1 + sum_k c_k sin(2 pi f_k x) on [0, 1].

    Terms are (amplitude, frequency) pairs with positive integer frequencies.
    Nonnegativity of the density is guaranteed by requiring sum |c_k| <= 1.
    Frequencies may be arbitrarily large Python integers; the transform
    treats integer frequencies exactly.
    """

    terms: tuple = ()

    def __post_init__(self):
        canon = []
        for amplitude, frequency in self.terms:
            c = _finite(amplitude, "trig amplitude")
            if not _is_integer_valued(frequency) or int(frequency) <= 0:
                raise MeasureError(f"trig frequency must be a positive integer, got {frequency!r}")
            canon.append((c, int(frequency)))
        if math.fsum(abs(c) for c, _ in canon) > 1.0 + _EPS:
            raise MeasureError("sum of |amplitudes| exceeds 1; density could go negative")
        object.__setattr__(self, "terms", tuple(canon))

    @property
    def ambient_dim(self) -> int:
        return 1


@dataclass(frozen=True)
class SelfSimilarDigit(Measure):
    """Stationary measure of the digit IFS x -> (x + d)/base, d drawn uniformly
    from ``allowed_digits``.  Equivalently: base-``base`` digits are i.i.d.
    uniform on the allowed set.  Satisfies

        m_hat(xi) = (1/|D|) sum_{d in D} exp(-2 pi i xi d / base) * m_hat(xi / base).
    """

    base: int = 3
    allowed_digits: tuple = (0, 2)

    def __post_init__(self):
        if self.base < 2:
            raise MeasureError("base must be at least 2")
        digits = tuple(sorted(set(int(d) for d in self.allowed_digits)))
        if not digits:
            raise MeasureError("allowed_digits is empty")
        if digits[0] < 0 or digits[-1] >= self.base:
            raise MeasureError(f"digits {digits} out of range for base {self.base}")
        object.__setattr__(self, "allowed_digits", digits)

    @property
    def ambient_dim(self) -> int:
        return 1


@dataclass(frozen=True)
class DigitBlock:
    """One forbidden binary pattern on digits offset+1 .. offset+length."""

    offset: int
    length: int
    forbidden_pattern: str

    def __post_init__(self):
        if self.offset < 0:
            raise MeasureError("block offset must be nonnegative")
        if self.length < 1:
            raise MeasureError("block length must be positive")
        if len(self.forbidden_pattern) != self.length:
            raise MeasureError("forbidden_pattern length differs from block length")
        if set(self.forbidden_pattern) - {"0", "1"}:
            raise MeasureError("forbidden_pattern must be a binary string")


@dataclass(frozen=True)
class DigitProduct(Measure):
    """Normalised Lebesgue measure on the depth-L dyadic cylinders whose binary
    digit string avoids, for every block, that block's forbidden pattern.

    Blocks act on pairwise disjoint digit ranges, so the set of admissible
    strings is a product over positions; the transform factorises into one
    character sum per free digit and per block.
    """

    depth: int
    blocks: tuple = ()
    base: int = 2

    def __post_init__(self):
        if self.base != 2:
            raise MeasureError("only base 2 digit products are supported")
        if self.depth < 1:
            raise MeasureError("depth must be positive")
        canon = tuple(
            b if isinstance(b, DigitBlock) else DigitBlock(*b) for b in self.blocks
        )
        spans = sorted((b.offset, b.offset + b.length) for b in canon)
        for lo, hi in spans:
            if hi > self.depth:
                raise MeasureError("block exceeds depth")
        for (_, hi0), (lo1, _) in zip(spans, spans[1:]):
            if lo1 < hi0:
                raise MeasureError("blocks overlap")
        object.__setattr__(self, "blocks", canon)

    @property
    def ambient_dim(self) -> int:
        return 1

    def cylinder_count(self) -> int:
        """Number of admissible depth-L cylinders."""
        free = self.depth - sum(b.length for b in self.blocks)
        count = 1 << free
        for b in self.blocks:
            count *= (1 << b.length) - 1
        return count

    def pre_normalization_mass(self) -> float:
        """Lebesgue measure of the admissible cylinder union."""
        return self.cylinder_count() / (1 << self.depth)


@dataclass(frozen=True)
class Mixture(Measure):
    """Weighted sum: mass is sum_i w_i mass(component_i), weights positive."""

    components: tuple
    weights: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        ws = tuple(_finite(w, "mixture weight") for w in self.weights)
        if len(comps) != len(ws) or not comps:
            raise MeasureError("components and weights must be nonempty and equally long")
        if any(w <= 0 for w in ws):
            raise MeasureError("mixture weights must be positive")
        dims = {c.ambient_dim for c in comps}
        if len(dims) > 1:
            raise MeasureError(f"mixture components mix dimensions {sorted(dims)}")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "weights", ws)

    @property
    def ambient_dim(self) -> int:
        return self.components[0].ambient_dim


def _canonical_scale(scale, dim: int):
    if isinstance(scale, (int, float)):
        s = scale if isinstance(scale, int) else _finite(scale, "affine scale")
        if s == 0:
            raise MeasureError("affine scale must be nonzero")
        return s
    rows = tuple(tuple(_finite(x, "matrix entry") for x in row) for row in scale)
    n = len(rows)
    if n != dim or any(len(r) != n for r in rows):
        raise MeasureError("scale matrix must be square and match the ambient dimension")
    return rows


@dataclass(frozen=True)
class AffineImage(Measure):
    """Pushforward of ``inner`` under x -> scale @ x + offset, optionally mod 1.

    With ``mod1`` set, the scale must be a nonzero integer and the inner
    measure must live on [0, 1]; the transform of the image is then defined
    at integer frequencies only, where exp(-2 pi i j (a x + b mod 1)) equals
    exp(-2 pi i j (a x + b)).
    """

    inner: Measure
    scale: object
    offset: object = 0.0
    mod1: bool = False

    def __post_init__(self):
        s = _canonical_scale(self.scale, self.inner.ambient_dim)
        if isinstance(self.offset, (int, float)):
            off = _finite(self.offset, "affine offset")
        else:
            off = tuple(_finite(x, "affine offset") for x in self.offset)
            if len(off) != self.inner.ambient_dim:
                raise MeasureError("offset dimension mismatch")
        if self.mod1:
            if not isinstance(s, (int, float)) or not _is_integer_valued(s):
                raise MeasureError("mod-1 images need an integer scalar scale")
            s = int(s)
            lo, hi = support_interval(self.inner)
            if lo < -_EPS or hi > 1.0 + _EPS:
                raise MeasureError("mod-1 images need inner support inside [0, 1]")
        elif isinstance(s, tuple):
            det = _det(s)
            norm = max(max(abs(x) for x in row) for row in s)
            if abs(det) <= 1e-12 * max(norm, 1.0) ** len(s):
                raise MeasureError("singular scale matrix")
        object.__setattr__(self, "scale", s)
        object.__setattr__(self, "offset", off)

    @property
    def ambient_dim(self) -> int:
        return self.inner.ambient_dim


def _det(rows) -> float:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0.0
    for j in range(n):
        minor = tuple(r[:j] + r[j + 1:] for r in rows[1:])
        total += ((-1) ** j) * rows[0][j] * _det(minor)
    return total


@dataclass(frozen=True)
class Convolution(Measure):
    """Convolution of the factor measures; transform is the product of factors."""

    factors: tuple

    def __post_init__(self):
        facs = tuple(self.factors)
        if len(facs) < 2:
            raise MeasureError("convolution needs at least two factors")
        dims = {f.ambient_dim for f in facs}
        if len(dims) > 1:
            raise MeasureError("convolution factors mix dimensions")
        object.__setattr__(self, "factors", facs)

    @property
    def ambient_dim(self) -> int:
        return self.factors[0].ambient_dim


@dataclass(frozen=True)
class SmoothCutDensity(Measure):
    """Inner measure multiplied by the polynomial window
    ((radius^2 - (x - center)^2)_+ / radius^2) ** order.

    The window peaks at 1, so the cut never increases mass, and the measure is
    deliberately not renormalised.  Construction happens through
    :func:`fourierdim.dimension.smooth_cut`, which also checks that the inner
    measure has an explicit atomic or density form.
    """

    inner: Measure
    center: float
    radius: float
    order: int

    def __post_init__(self):
        object.__setattr__(self, "center", _finite(self.center, "window center"))
        r = _finite(self.radius, "window radius")
        if r <= 0:
            raise MeasureError("window radius must be positive")
        object.__setattr__(self, "radius", r)
        if self.order < 1:
            raise MeasureError("window order must be a positive integer")
        if self.inner.ambient_dim != 1:
            raise MeasureError("window cutoffs are implemented on the line only")

    @property
    def ambient_dim(self) -> int:
        return 1


# ---------------------------------------------------------------------------
# mass and support


def mass(m: Measure) -> float:
    """Total mass m(R^d).  Exactly ft(m, 0)."""
    if isinstance(m, Atomic):
        return math.fsum(w for _, w in m.atoms)
    if isinstance(m, (UniformOnIntervals, TrigDensity, SelfSimilarDigit, DigitProduct)):
        return 1.0
    if isinstance(m, Mixture):
        return math.fsum(w * mass(c) for c, w in zip(m.components, m.weights))
    if isinstance(m, AffineImage):
        return mass(m.inner)
    if isinstance(m, Convolution):
        out = 1.0
        for f in m.factors:
            out *= mass(f)
        return out
    if isinstance(m, SmoothCutDensity):
        from .density import cut_mass

        return cut_mass(m)
    raise TypeError(f"unknown measure variant {type(m).__name__}")


def _digit_product_bounds(depth: int, blocks: Sequence[DigitBlock]) -> tuple:
    lo = 0.0
    hi = 0.0
    blocked = {}
    for b in blocks:
        blocked[b.offset] = b
    pos = 1
    while pos <= depth:
        b = blocked.get(pos - 1)
        if b is None:
            hi += 2.0 ** -pos
            pos += 1
            continue
        top = (1 << b.length) - 1
        if b.forbidden_pattern == "0" * b.length:
            lo += 2.0 ** -(b.offset + b.length)
        max_val = top - 1 if b.forbidden_pattern == "1" * b.length else top
        hi += max_val * 2.0 ** -(b.offset + b.length)
        pos = b.offset + b.length + 1
    return lo, min(1.0, hi + 2.0 ** -depth)


def _shifted_digit_product(m: DigitProduct, scale: int):
    """Pushforward of a digit product under x -> 2^l x mod 1, when block-aligned.

    Digits simply shift left by l places; blocks entirely inside the first l
    digits only rescale cylinder multiplicities uniformly (block constraints
    are independent across disjoint ranges), so they drop out.  Returns None
    when the dilation is not an aligned power of two.
    """
    if scale <= 0 or scale & (scale - 1):
        return None
    l = scale.bit_length() - 1
    if l == 0:
        return m
    if l >= m.depth:
        return None
    kept = []
    for b in m.blocks:
        if b.offset >= l:
            kept.append(DigitBlock(b.offset - l, b.length, b.forbidden_pattern))
        elif b.offset + b.length > l:
            return None
    return DigitProduct(m.depth - l, tuple(kept))


def support_interval(m: Measure) -> tuple:
    """Smallest closed interval containing the support (dimension one only)."""
    if m.ambient_dim != 1:
        raise MeasureError("support_interval is defined on the line only")
    if isinstance(m, Atomic):
        if not m.atoms:
            raise MeasureError("the zero measure has no support")
        xs = [p for p, _ in m.atoms]
        return min(xs), max(xs)
    if isinstance(m, UniformOnIntervals):
        return m.intervals[0][0], m.intervals[-1][1]
    if isinstance(m, (TrigDensity, SelfSimilarDigit)):
        return 0.0, 1.0
    if isinstance(m, DigitProduct):
        return _digit_product_bounds(m.depth, m.blocks)
    if isinstance(m, Mixture):
        spans = [support_interval(c) for c in m.components]
        return min(a for a, _ in spans), max(b for _, b in spans)
    if isinstance(m, AffineImage):
        if m.mod1:
            if isinstance(m.inner, DigitProduct):
                shifted = _shifted_digit_product(m.inner, m.scale)
                if shifted is not None and m.offset == 0:
                    return _digit_product_bounds(shifted.depth, shifted.blocks)
            return 0.0, 1.0
        a, b = support_interval(m.inner)
        lo = m.scale * a + m.offset
        hi = m.scale * b + m.offset
        return (hi, lo) if m.scale < 0 else (lo, hi)
    if isinstance(m, Convolution):
        lo = hi = 0.0
        for f in m.factors:
            a, b = support_interval(f)
            lo += a
            hi += b
        return lo, hi
    if isinstance(m, SmoothCutDensity):
        a, b = support_interval(m.inner)
        lo = max(a, m.center - m.radius)
        hi = min(b, m.center + m.radius)
        if not lo < hi:
            raise MeasureError("window does not meet the support of the inner measure")
        return lo, hi
    raise TypeError(f"unknown measure variant {type(m).__name__}")


# ---------------------------------------------------------------------------
# combinators


def mixture(components: Iterable[Measure], weights: Iterable[float]) -> Mixture:
    return Mixture(tuple(components), tuple(weights))


def affine_image(m: Measure, scale, offset=0.0, mod1: bool = False) -> AffineImage:
    return AffineImage(m, scale, offset, mod1)


def convolve(m1: Measure, m2: Measure) -> Convolution:
    return Convolution((m1, m2))


# ---------------------------------------------------------------------------
# JSON descriptions

_VARIANTS = {}


def _register(cls):
    _VARIANTS[cls.__name__] = cls
    return cls


for _cls in (Atomic, UniformOnIntervals, TrigDensity, SelfSimilarDigit,
             DigitProduct, Mixture, AffineImage, Convolution, SmoothCutDensity):
    _register(_cls)


def _position_to_json(pos):
    return pos if isinstance(pos, float) else list(pos)


def measure_to_dict(m: Measure) -> dict:
    """Plain-dict description with the variant name and per-variant fields."""
    d = {"variant": m.variant, "ambient_dim": m.ambient_dim}
    if isinstance(m, Atomic):
        d["atoms"] = [{"position": _position_to_json(p), "weight": w} for p, w in m.atoms]
    elif isinstance(m, UniformOnIntervals):
        d["intervals"] = [{"a": a, "b": b} for a, b in m.intervals]
    elif isinstance(m, TrigDensity):
        d["terms"] = [{"amplitude": c, "frequency": f} for c, f in m.terms]
    elif isinstance(m, SelfSimilarDigit):
        d["base"] = m.base
        d["allowed_digits"] = list(m.allowed_digits)
    elif isinstance(m, DigitProduct):
        d["base"] = m.base
        d["depth"] = m.depth
        d["blocks"] = [
            {"offset": b.offset, "length": b.length, "forbidden_pattern": b.forbidden_pattern}
            for b in m.blocks
        ]
    elif isinstance(m, Mixture):
        d["components"] = [measure_to_dict(c) for c in m.components]
        d["weights"] = list(m.weights)
    elif isinstance(m, AffineImage):
        d["inner"] = measure_to_dict(m.inner)
        d["scale"] = m.scale if isinstance(m.scale, (int, float)) else [list(r) for r in m.scale]
        d["offset"] = m.offset if isinstance(m.offset, (int, float)) else list(m.offset)
        d["mod1"] = m.mod1
    elif isinstance(m, Convolution):
        d["factors"] = [measure_to_dict(f) for f in m.factors]
    elif isinstance(m, SmoothCutDensity):
        d["inner"] = measure_to_dict(m.inner)
        d["center"] = m.center
        d["radius"] = m.radius
        d["order"] = m.order
    return d


def measure_from_dict(d: dict) -> Measure:
    try:
        variant = d["variant"]
        cls = _VARIANTS[variant]
    except KeyError as exc:
        raise MeasureError(f"unknown or missing measure variant: {exc}") from None
    if cls is Atomic:
        atoms = []
        for a in d.get("atoms", []):
            if isinstance(a, dict):
                pos, w = a["position"], a["weight"]
            else:
                pos, w = a
            if not isinstance(pos, (int, float)):
                pos = tuple(pos)
            atoms.append((pos, w))
        return Atomic(tuple(atoms))
    if cls is UniformOnIntervals:
        ivs = tuple(
            (iv["a"], iv["b"]) if isinstance(iv, dict) else (iv[0], iv[1])
            for iv in d["intervals"])
        return UniformOnIntervals(ivs)
    if cls is TrigDensity:
        terms = tuple(
            (t["amplitude"], t["frequency"]) if isinstance(t, dict) else (t[0], t[1])
            for t in d.get("terms", []))
        return TrigDensity(terms)
    if cls is SelfSimilarDigit:
        return SelfSimilarDigit(d["base"], tuple(d["allowed_digits"]))
    if cls is DigitProduct:
        return DigitProduct(
            d["depth"],
            tuple(DigitBlock(b["offset"], b["length"], b["forbidden_pattern"])
                  for b in d.get("blocks", [])),
            d.get("base", 2),
        )
    if cls is Mixture:
        return Mixture(tuple(measure_from_dict(c) for c in d["components"]), tuple(d["weights"]))
    if cls is AffineImage:
        scale = d["scale"]
        if isinstance(scale, list):
            scale = tuple(tuple(row) for row in scale)
        offset = d.get("offset", 0.0)
        if isinstance(offset, list):
            offset = tuple(offset)
        return AffineImage(measure_from_dict(d["inner"]), scale, offset, bool(d.get("mod1", False)))
    if cls is Convolution:
        return Convolution(tuple(measure_from_dict(f) for f in d["factors"]))
    if cls is SmoothCutDensity:
        return SmoothCutDensity(measure_from_dict(d["inner"]), d["center"], d["radius"], d["order"])
    raise MeasureError(f"unhandled variant {variant}")


# ---------------------------------------------------------------------------
# frequency schedules


class FrequencySchedule:
    """Deterministic generator of nonzero probe frequencies, sorted by modulus.

    Frequencies are Python ints or floats.  Integer entries may be arbitrarily
    large: the transform evaluates them through exact rational phase
    reduction, so lacunary schedules can probe far beyond 2**53.
    """

    __slots__ = ()

    def frequencies(self) -> tuple:
        raise NotImplementedError

    def window_count(self) -> int:
        """Number of distinct dyadic windows [2^e, 2^(e+1)) hit by the schedule."""
        return len({_floor_log2(abs(x)) for x in self.frequencies()})


def _floor_log2(a):
    if isinstance(a, int):
        if a <= 0:
            raise ScheduleError("frequencies must be nonzero")
        return a.bit_length() - 1
    if a <= 0.0:
        raise ScheduleError("frequencies must be nonzero")
    return math.frexp(a)[1] - 1


def _sorted_by_modulus(freqs) -> tuple:
    out = sorted(freqs, key=abs)
    for x in out:
        if x == 0:
            raise ScheduleError("schedules must not contain zero")
    return tuple(out)


@dataclass(frozen=True)
class IntegerRange(FrequencySchedule):
    j_max: int
    j_min: int = 1

    def __post_init__(self):
        if self.j_min < 1 or self.j_max < self.j_min:
            raise ScheduleError("need 1 <= j_min <= j_max")

    def frequencies(self) -> tuple:
        return tuple(range(self.j_min, self.j_max + 1))


@dataclass(frozen=True)
class DyadicWindows(FrequencySchedule):
    """samples_per_window geometric samples in [2^e, 2^(e+1)) for each exponent
    e = min_exp .. max_exp inclusive."""

    min_exp: int
    max_exp: int
    samples_per_window: int = 16

    def __post_init__(self):
        if self.max_exp < self.min_exp:
            raise ScheduleError("max_exp below min_exp")
        if self.max_exp > 1020:
            raise ScheduleError("dyadic window exponents above 1020 overflow floats; "
                                "use a Lacunary schedule with integer frequencies")
        if self.samples_per_window < 1:
            raise ScheduleError("need at least one sample per window")

    def frequencies(self) -> tuple:
        spw = self.samples_per_window
        out = []
        for e in range(self.min_exp, self.max_exp + 1):
            for i in range(spw):
                out.append(2.0 ** (e + i / spw))
        return tuple(out)


@dataclass(frozen=True)
class Lacunary(FrequencySchedule):
    """Frequencies 2^(e_k) * j for each listed exponent and j = 1 .. multipliers."""

    exponents: tuple
    multipliers: int = 1

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if not exps or any(e < 0 for e in exps):
            raise ScheduleError("exponents must be nonnegative integers")
        if not isinstance(self.multipliers, int) or self.multipliers < 1:
            raise ScheduleError("multipliers is a count and must be an int >= 1")
        object.__setattr__(self, "exponents", exps)

    def frequencies(self) -> tuple:
        out = []
        for e in self.exponents:
            base = 1 << e
            out.extend(base * j for j in range(1, self.multipliers + 1))
        return _sorted_by_modulus(set(out))


@dataclass(frozen=True)
class ExplicitFrequencies(FrequencySchedule):
    frequencies_list: tuple

    def __post_init__(self):
        object.__setattr__(self, "frequencies_list", _sorted_by_modulus(self.frequencies_list))

    def frequencies(self) -> tuple:
        return self.frequencies_list


def merge_schedules(*schedules: FrequencySchedule) -> ExplicitFrequencies:
    """Union of the given schedules as one explicit schedule (duplicates dropped)."""
    seen = []
    for s in schedules:
        seen.extend(s.frequencies())
    seen.sort(key=abs)
    out = []
    for x in seen:
        if not out or x != out[-1]:
            out.append(x)
    return ExplicitFrequencies(tuple(out))


_SCHEDULES = {
    "IntegerRange": IntegerRange,
    "DyadicWindows": DyadicWindows,
    "Lacunary": Lacunary,
    "Explicit": ExplicitFrequencies,
}


def schedule_to_dict(s: FrequencySchedule) -> dict:
    if isinstance(s, IntegerRange):
        return {"variant": "IntegerRange", "j_min": s.j_min, "j_max": s.j_max}
    if isinstance(s, DyadicWindows):
        return {"variant": "DyadicWindows", "min_exp": s.min_exp, "max_exp": s.max_exp,
                "samples_per_window": s.samples_per_window}
    if isinstance(s, Lacunary):
        return {"variant": "Lacunary", "exponents": list(s.exponents),
                "multipliers": s.multipliers}
    if isinstance(s, ExplicitFrequencies):
        return {"variant": "Explicit", "frequencies": list(s.frequencies_list)}
    raise ScheduleError(f"unknown schedule {type(s).__name__}")


def schedule_from_dict(d: dict) -> FrequencySchedule:
    try:
        variant = d["variant"]
        cls = _SCHEDULES[variant]
    except KeyError as exc:
        raise ScheduleError(f"unknown or missing schedule variant: {exc}") from None
    if cls is IntegerRange:
        return IntegerRange(d["j_max"], d.get("j_min", 1))
    if cls is DyadicWindows:
        return DyadicWindows(d["min_exp"], d["max_exp"], d.get("samples_per_window", 16))
    if cls is Lacunary:
        return Lacunary(tuple(d["exponents"]), d.get("multipliers", 1))
    return ExplicitFrequencies(tuple(d["frequencies"]))
