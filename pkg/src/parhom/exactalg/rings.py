"""Exact coefficient rings: integers, rationals and prime fields.

Values are plain Python numbers.  Integers and residues mod p are ``int``;
rationals are ``int`` when integral and ``fractions.Fraction`` otherwise, which
keeps the common case (entries 0, 1, -1) on the fast integer path.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ValidationError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Ring:
    kind: str            # "Z", "Q" or "GF"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "GF"):
            raise ValidationError(f"unknown ring kind {self.kind!r}")
        if self.kind == "GF" and not is_prime(self.p):
            raise ValidationError(f"GF({self.p}): p must be prime")

    @property
    def name(self) -> str:
        return f"GF({self.p})" if self.kind == "GF" else self.kind

    def __str__(self):
        return self.name

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def modulus(self):
        return self.p if self.kind == "GF" else None

    def __call__(self, x):
        """Coerce an int, Fraction or string like "3", "-2/5" into the ring."""
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ValidationError(f"cannot parse scalar {x!r}") from exc
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, Fraction):
            if x.denominator == 1:
                x = x.numerator
            elif self.kind == "Q":
                return x
            elif self.kind == "GF":
                if x.denominator % self.p == 0:
                    raise ValidationError(f"{x} is not defined in {self.name}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            else:
                raise ValidationError(f"{x} is not an integer")
        if not isinstance(x, int):
            raise ValidationError(f"unsupported scalar {x!r}")
        return x % self.p if self.kind == "GF" else x

    def norm(self, x):
        """Canonical form of a value produced by Python arithmetic."""
        if self.kind == "GF":
            return x % self.p
        if self.kind == "Q" and type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    def is_unit(self, x) -> bool:
        if self.kind == "Z":
            return x == 1 or x == -1
        return x != 0

    def inv(self, x):
        if self.kind == "GF":
            return pow(x, -1, self.p)
        if self.kind == "Z":
            if x in (1, -1):
                return x
            raise ZeroDivisionError(f"{x} is not a unit in Z")
        if type(x) is int:
            return 1 if x == 1 else (-1 if x == -1 else Fraction(1, x))
        return self.norm(1 / x)

    def fmt(self, x) -> str:
        return str(x)


ZZ = Ring("Z")
QQ = Ring("Q")


def GF(p: int) -> Ring:
    return Ring("GF", p)


_GF_RE = re.compile(r"^\s*(?:GF|F)\s*\(?\s*(\d+)\s*\)?\s*$", re.IGNORECASE)


def parse_ring(text: str) -> Ring:
    """Accepts "Z", "Q", "GF2", "GF(3)", "F5" (case-insensitive)."""
    t = text.strip()
    if t.upper() in ("Z", "ZZ", "INTEGERS"):
        return ZZ
    if t.upper() in ("Q", "QQ", "RATIONALS"):
        return QQ
    m = _GF_RE.match(t)
    if m:
        return GF(int(m.group(1)))
    raise ValidationError(f"unknown ring {text!r}; expected Z, Q or GFp")
