from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Dict, Iterable, Tuple

import numpy as np

from weylslice.errors import InvalidArgument

# vectorised Horner keeps every product below 2**63 only for moduli under this
_NUMPY_MOD_LIMIT = 1 << 31


def _check_modulus(q: int) -> None:
    if q < 2:
        raise InvalidArgument(f"modulus must be >= 2, got {q}")


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial c0 + c1 X + ... + ck X^k with k >= 2.

    Trailing zero coefficients are stripped, so ``degree`` is always the index
    of the last nonzero coefficient.
    """

    coeffs: Tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) - 1 < 2:
            raise InvalidArgument(
                f"polynomial must have degree >= 2, got coefficients {list(coeffs)}"
            )
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        """Build from a comma separated list ``c0,c1,...,ck``."""
        try:
            cs = [int(tok) for tok in text.split(",") if tok.strip()]
        except ValueError as exc:
            raise InvalidArgument(f"bad coefficient list {text!r}") from exc
        return cls(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mod(self, x: int, q: int) -> int:
        """phi(x) mod q by Horner's rule, reducing after every step."""
        _check_modulus(q)
        x %= q
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % q
        return acc

    def eval_mod_array(self, xs: np.ndarray, q: int) -> np.ndarray:
        """Vectorised :meth:`eval_mod`; int64 result, object dtype for q >= 2**31."""
        _check_modulus(q)
        if q >= _NUMPY_MOD_LIMIT:
            return np.array([self.eval_mod(int(x), q) for x in xs], dtype=object)
        xr = np.asarray(xs, dtype=np.int64) % q
        acc = np.zeros_like(xr)
        for c in reversed(self.coeffs):
            acc = (acc * xr + (c % q)) % q
        return acc

    def eval_object_array(self, xs: np.ndarray) -> np.ndarray:
        """Exact values as a numpy object array of Python ints."""
        acc = np.zeros(len(xs), dtype=object)
        for c in reversed(self.coeffs):
            acc = acc * xs + c
        return acc

    def __str__(self) -> str:
        terms = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if not c:
                continue
            mono = "" if j == 0 else "X" if j == 1 else f"X^{j}"
            coef = str(abs(c)) if (abs(c) != 1 or j == 0) else ""
            sign = "-" if c < 0 else "+"
            terms.append((sign, coef + mono))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        return out + "".join(f" {s} {t}" for s, t in terms[1:])


def eval_mod(phi: IntPolynomial, x: int, q: int) -> int:
    return phi.eval_mod(x, q)


class DeltaPoly:
    """The difference polynomial (phi(X+Y) - phi(X) + Y) / Y.

    The division is carried out on coefficients, so the value at Y = 0 is
    phi'(X) + 1.
    """

    def __init__(self, phi: IntPolynomial):
        self.phi = phi
        terms: Dict[Tuple[int, int], int] = {(0, 0): 1}
        for j, c in enumerate(phi.coeffs):
            for i in range(1, j + 1):
                key = (j - i, i - 1)
                terms[key] = terms.get(key, 0) + c * comb(j, i)
        self.terms = {k: v for k, v in sorted(terms.items()) if v}

    @property
    def total_degree(self) -> int:
        return max(dx + dy for dx, dy in self.terms)

    def __call__(self, m: int, h: int) -> int:
        return sum(v * m**dx * h**dy for (dx, dy), v in self.terms.items())

    def grid_mod(self, ms: np.ndarray, hs: np.ndarray, p: int) -> np.ndarray:
        """Delta(m, h) mod p on the outer grid, shape (len(ms), len(hs))."""
        if p >= _NUMPY_MOD_LIMIT:
            raise InvalidArgument("grid evaluation needs p < 2**31")
        m = (np.asarray(ms, dtype=np.int64) % p)[:, None]
        h = (np.asarray(hs, dtype=np.int64) % p)[None, :]
        max_dx = max(dx for dx, _ in self.terms)
        max_dy = max(dy for _, dy in self.terms)
        mpow = [np.ones_like(m)]
        for _ in range(max_dx):
            mpow.append(mpow[-1] * m % p)
        hpow = [np.ones_like(h)]
        for _ in range(max_dy):
            hpow.append(hpow[-1] * h % p)
        out = np.zeros((m.shape[0], h.shape[1]), dtype=np.int64)
        for (dx, dy), v in self.terms.items():
            out = (out + (v % p) * (mpow[dx] * hpow[dy] % p)) % p
        return out


def delta_poly(phi: IntPolynomial) -> DeltaPoly:
    return DeltaPoly(phi)
