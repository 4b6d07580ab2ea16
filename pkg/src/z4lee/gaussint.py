"""Exact Gaussian integers."""

from __future__ import annotations

from dataclasses import dataclass

_I_POWERS = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True, order=True, slots=True)
class GaussInt:
    re: int
    im: int = 0

    @classmethod
    def ipow(cls, k: int) -> GaussInt:
        """``i**k`` for any integer ``k``."""
        return cls(*_I_POWERS[k % 4])

    @classmethod
    def of(cls, v) -> GaussInt:
        if isinstance(v, GaussInt):
            return v
        if isinstance(v, complex):
            if v.real != int(v.real) or v.imag != int(v.imag):
                raise ValueError(f"{v} is not a Gaussian integer")
            return cls(int(v.real), int(v.imag))
        return cls(int(v), 0)

    def __add__(self, other):
        o = GaussInt.of(other)
        return GaussInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussInt.of(other)
        return GaussInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussInt.of(other) - self

    def __mul__(self, other):
        o = GaussInt.of(other)
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not Gaussian integers in general")
        r = GaussInt(1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def conjugate(self) -> GaussInt:
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(self.re, self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
