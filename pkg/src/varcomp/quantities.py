"""Single-phase AC circuit quantities: complex power, power factor, impedance.

Sign conventions used throughout:
  Q > 0  reactive power consumed (inductive), Q < 0 supplied (capacitive),
         under the load convention.
  X > 0  inductive reactance, X < 0 capacitive reactance.
  Shunt element at RMS voltage V consumes Q = V^2 / X.

Unit scale is carried explicitly on every power value (W/VAr or MW/MVAr)
and is never inferred; mixing scales in arithmetic is an error.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

_TWO_PI = 2.0 * math.pi


class UnitScale(str, enum.Enum):
    """Power unit scale: base (W / VAr / VA) or mega (MW / MVAr / MVA)."""

    BASE = "base"
    MEGA = "mega"

    @property
    def factor(self) -> float:
        """Multiplier that converts this scale to base units."""
        return 1.0 if self is UnitScale.BASE else 1e6


class Role(str, enum.Enum):
    """Whether a power value is consumed by a load or supplied by a source."""

    LOAD = "load"
    SOURCE = "source"


class QSign(str, enum.Enum):
    """Sign of the reactive component behind a power factor."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"


class ElementKind(str, enum.Enum):
    """Kind of a shunt reactive element."""

    INDUCTOR = "inductor"
    CAPACITOR = "capacitor"
    NONE = "none"


class LabelConvention(str, enum.Enum):
    """Lead/lag labeling rule for the source side.

    SUPPLY_LEADING (default): a source is "leading" while it supplies
    reactive power (Q_s > 0 under the load-convention bookkeeping used
    here) and "lagging" while it consumes it.  GENERATOR swaps the source
    labels to match common synchronous-machine usage (supplying reactive
    power is "lagging").  Load labels are identical under both.
    """

    SUPPLY_LEADING = "supply-leading"
    GENERATOR = "generator"


@dataclass(frozen=True)
class ComplexPower:
    """Complex power S = p + jq with an explicit unit scale and role.

    p, q are in W/VAr for UnitScale.BASE and MW/MVAr for UnitScale.MEGA.
    Positive q means reactive power consumed (inductive) when role is
    LOAD, and reactive power supplied when role is SOURCE.
    """

    p: float
    q: float
    unit_scale: UnitScale = UnitScale.BASE
    role: Role = Role.LOAD

    def __post_init__(self) -> None:
        if not (math.isfinite(self.p) and math.isfinite(self.q)):
            raise ValueError("complex power components must be finite")

    @property
    def apparent(self) -> float:
        """Apparent power |S| = sqrt(p^2 + q^2), in this value's scale."""
        return math.hypot(self.p, self.q)

    @property
    def as_complex(self) -> complex:
        return complex(self.p, self.q)

    def to_va(self) -> complex:
        """This value as a complex number in volt-amperes (base units)."""
        k = self.unit_scale.factor
        return complex(self.p * k, self.q * k)

    def with_role(self, role: Role) -> ComplexPower:
        return replace(self, role=role)

    def _check_scale(self, other: ComplexPower) -> None:
        if self.unit_scale is not other.unit_scale:
            raise ValueError(
                f"cannot combine powers with scales "
                f"{self.unit_scale.value!r} and {other.unit_scale.value!r}"
            )

    def __add__(self, other: ComplexPower) -> ComplexPower:
        if not isinstance(other, ComplexPower):
            return NotImplemented
        self._check_scale(other)
        return replace(self, p=self.p + other.p, q=self.q + other.q)

    def __sub__(self, other: ComplexPower) -> ComplexPower:
        if not isinstance(other, ComplexPower):
            return NotImplemented
        self._check_scale(other)
        return replace(self, p=self.p - other.p, q=self.q - other.q)


@dataclass(frozen=True)
class PowerFactor:
    """Power factor magnitude together with the reactive sign and role.

    magnitude = |p| / sqrt(p^2 + q^2) of the originating complex power;
    q_sign records which side of unity the operating point sits on so a
    lead/lag label can be attached later.
    """

    magnitude: float
    q_sign: QSign
    role: Role

    def __post_init__(self) -> None:
        if not 0.0 <= self.magnitude <= 1.0:
            raise ValueError(f"power factor magnitude {self.magnitude} not in [0, 1]")

    def label(self, convention: LabelConvention = LabelConvention.SUPPLY_LEADING) -> str:
        return label_power_factor(self, convention)


@dataclass(frozen=True)
class Impedance:
    """Series impedance Z = r + jx in ohms (or per-unit)."""

    r: float
    x: float

    @property
    def as_complex(self) -> complex:
        return complex(self.r, self.x)

    @property
    def admittance(self) -> complex:
        """Y = 1 / (r + jx); the round trip 1/Y reproduces (r, x)."""
        return 1.0 / self.as_complex


@dataclass(frozen=True)
class ShuntElement:
    """A shunt reactive element, identified by its signed reactance.

    reactance > 0 is an inductor, < 0 a capacitor, None means the element
    is not present.  `kind` is derived; use `ShuntElement.from_reactance`.
    """

    reactance: float | None
    kind: ElementKind

    @classmethod
    def from_reactance(cls, reactance: float | None) -> ShuntElement:
        if reactance is None:
            return cls(None, ElementKind.NONE)
        if reactance == 0.0 or not math.isfinite(reactance):
            raise ValueError("shunt reactance must be nonzero and finite")
        kind = ElementKind.INDUCTOR if reactance > 0 else ElementKind.CAPACITOR
        return cls(reactance, kind)

    @classmethod
    def absent(cls) -> ShuntElement:
        return cls(None, ElementKind.NONE)

    @property
    def present(self) -> bool:
        return self.kind is not ElementKind.NONE


@dataclass(frozen=True)
class ElementValue:
    """Physical value of a reactive element: henries or farads."""

    kind: ElementKind
    value: float  # henries for INDUCTOR, farads for CAPACITOR


def complex_power_from_spec(
    spec: dict,
    unit_scale: UnitScale = UnitScale.BASE,
    role: Role = Role.LOAD,
) -> ComplexPower:
    """Build a complex power from one of the accepted load descriptions.

    Accepted forms (keys of `spec`):
      {"p": P, "q": Q}                    explicit rectangular form
      {"s": S, "pf": m, "label": l}       apparent power with power factor
                                          magnitude and "lagging"/"leading"
      {"p": P, "pf": 1.0}                 real power at unity power factor

    For the apparent-power form, Q = +S*sqrt(1 - m^2) for a lagging load
    and -S*sqrt(1 - m^2) for a leading one.  A lag/lead label is required
    unless the power factor is exactly unity.
    """
    if not isinstance(spec, dict):
        raise ValueError("load spec must be a mapping")
    known = {"p", "q", "s", "pf", "label"}
    unknown = set(spec) - known
    if unknown:
        raise ValueError(f"unknown load spec keys: {sorted(unknown)}")

    pf = spec.get("pf")
    if pf is not None and not 0.0 < pf <= 1.0:
        raise ValueError(f"power factor {pf} outside (0, 1]")

    if "s" in spec:
        s = spec["s"]
        if "p" in spec or "q" in spec:
            raise ValueError("apparent-power spec cannot also give p or q")
        if pf is None:
            raise ValueError("apparent-power spec requires a pf")
        if s <= 0:
            raise ValueError(f"apparent power {s} must be positive")
        p = s * pf
        # sqrt(S^2 - P^2) rather than S*sqrt(1 - pf^2): identical algebra,
        # exact for exactly-representable S and P (e.g. 40 MVA at 0.8)
        q_mag = math.sqrt(max(0.0, s * s - p * p))
        if pf == 1.0:
            q = 0.0
        else:
            label = spec.get("label")
            if label == "lagging":
                q = q_mag
            elif label == "leading":
                q = -q_mag
            else:
                raise ValueError("pf below unity requires label 'lagging' or 'leading'")
        return ComplexPower(p, q, unit_scale, role)

    if "p" not in spec:
        raise ValueError("load spec needs either p or s")
    p = spec["p"]
    q = spec.get("q", 0.0)
    if pf is not None:
        if pf == 1.0:
            if q != 0.0:
                raise ValueError("unity power factor contradicts nonzero q")
            q = 0.0
        elif "q" not in spec:
            raise ValueError("p-with-pf spec is only accepted at unity pf")
    return ComplexPower(p, q, unit_scale, role)


def power_factor(s: ComplexPower) -> PowerFactor:
    """Power factor |p| / sqrt(p^2 + q^2) of a nonzero complex power."""
    if s.p == 0.0 and s.q == 0.0:
        raise ValueError("power factor undefined for zero complex power")
    magnitude = abs(s.p) / s.apparent
    if s.q > 0:
        q_sign = QSign.POSITIVE
    elif s.q < 0:
        q_sign = QSign.NEGATIVE
    else:
        q_sign = QSign.ZERO
    return PowerFactor(magnitude, q_sign, s.role)


def label_power_factor(
    pf: PowerFactor,
    convention: LabelConvention = LabelConvention.SUPPLY_LEADING,
) -> str:
    """Attach "leading" / "lagging" / "unity" to a power factor.

    Loads: consuming reactive power (q > 0) is lagging, supplying it is
    leading.  Sources under SUPPLY_LEADING: supplying reactive power
    (q > 0) is leading; GENERATOR swaps the two source labels.
    """
    convention = LabelConvention(convention)
    if pf.q_sign is QSign.ZERO:
        return "unity"
    q_positive = pf.q_sign is QSign.POSITIVE
    if pf.role is Role.LOAD:
        return "lagging" if q_positive else "leading"
    if convention is LabelConvention.SUPPLY_LEADING:
        return "leading" if q_positive else "lagging"
    return "lagging" if q_positive else "leading"


def load_impedance(v_rms: float, s: ComplexPower) -> Impedance:
    """Impedance drawing complex power s at RMS voltage v_rms.

    Z = |V|^2 / conj(S); the reverse S = |V|^2 / conj(Z) round-trips.
    """
    if v_rms <= 0:
        raise ValueError(f"v_rms {v_rms} must be positive")
    s_va = s.to_va()
    if s_va == 0:
        raise ValueError("load impedance undefined for zero complex power")
    z = v_rms * v_rms / s_va.conjugate()
    return Impedance(z.real, z.imag)


def shunt_reactive_power(v_rms: float, element: ShuntElement | float | None) -> float:
    """Reactive power consumed by a shunt element: Q = V^2 / X.

    Positive for an inductor (consumed), negative for a capacitor
    (supplied), zero when the element is absent.  `element` may be a
    ShuntElement or a bare signed reactance.
    """
    if v_rms <= 0:
        raise ValueError(f"v_rms {v_rms} must be positive")
    if element is None:
        return 0.0
    if isinstance(element, ShuntElement):
        if not element.present:
            return 0.0
        x = element.reactance
    else:
        x = float(element)
    if x == 0.0:
        raise ValueError("shunt reactance must be nonzero")
    return v_rms * v_rms / x


def shunt_reactance_for_power(v_rms: float, q: float) -> float:
    """Signed reactance whose shunt element consumes reactive power q.

    Inverse of shunt_reactive_power: X = V^2 / Q.  Supplying 5 MVAr
    (q = -5e6 VAr) at 10 kV needs X = -20 ohm, a capacitor.
    """
    if v_rms <= 0:
        raise ValueError(f"v_rms {v_rms} must be positive")
    if q == 0.0:
        raise ValueError("no finite reactance yields zero reactive power")
    return v_rms * v_rms / q


def reactance_to_element(x: float, f: float) -> ElementValue:
    """Convert a signed reactance at frequency f to an element value.

    x > 0: inductance L = x / (2*pi*f) in henries.
    x < 0: capacitance C = 1 / (2*pi*f*|x|) in farads.
    """
    if f <= 0:
        raise ValueError(f"frequency {f} must be positive")
    if x == 0.0:
        raise ValueError("zero reactance has no element value")
    if x > 0:
        return ElementValue(ElementKind.INDUCTOR, x / (_TWO_PI * f))
    return ElementValue(ElementKind.CAPACITOR, 1.0 / (_TWO_PI * f * abs(x)))


def element_to_reactance(element: ElementValue, f: float) -> float:
    """Signed reactance of an element value at frequency f."""
    if f <= 0:
        raise ValueError(f"frequency {f} must be positive")
    if element.kind is ElementKind.INDUCTOR:
        return _TWO_PI * f * element.value
    if element.kind is ElementKind.CAPACITOR:
        return -1.0 / (_TWO_PI * f * element.value)
    raise ValueError("absent element has no reactance")


def normalize_reactance_sign(x: float, kind: ElementKind) -> tuple[float, bool]:
    """Force the sign of a reactance to match its declared element kind.

    Capacitive reactances are stored negative; inputs quoting a positive
    "capacitive reactance" magnitude are flipped.  Returns the signed
    value and whether a flip happened.
    """
    if kind is ElementKind.CAPACITOR and x > 0:
        return -x, True
    if kind is ElementKind.INDUCTOR and x < 0:
        return -x, True
    return x, False
