# formal/monomial.py

"""Formal Green-function monomials and their power-counting exponents.

A monomial is N^t times a product of expectations; each expectation holds
atoms of three kinds:

    u(L, m)        the normalized trace of the m-th power, not averaged
    au(L, m)       the same trace with its mean subtracted
    e(L, m, x, y)  the (x, y) entry of the m-th power
"""
from collections import Counter
from dataclasses import dataclass
from typing import Any, Dict, Tuple, Union

from core.errors import DomainError


@dataclass(frozen=True)
class Underline:
    label: str
    m: int

    def text(self) -> str:
        return f"u({self.label},{self.m})"


@dataclass(frozen=True)
class AngleUnderline:
    label: str
    m: int

    def text(self) -> str:
        return f"au({self.label},{self.m})"


@dataclass(frozen=True)
class Entry:
    label: str
    m: int
    x: int
    y: int

    @property
    def diagonal(self) -> bool:
        return self.x == self.y

    def text(self) -> str:
        return f"e({self.label},{self.m},i{self.x},i{self.y})"


Atom = Union[Underline, AngleUnderline, Entry]


@dataclass(frozen=True)
class FormalMonomial:
    """N^(t0 + t_alpha*alpha) times the expectation factors."""
    t0: float
    factors: Tuple[Tuple[Atom, ...], ...]
    t_alpha: float = 0.0

    def t(self, alpha: float) -> float:
        return self.t0 + self.t_alpha * alpha

    def atoms(self):
        for factor in self.factors:
            yield from factor

    def entries(self):
        return [a for a in self.atoms() if isinstance(a, Entry)]

    @property
    def index_symbols(self) -> Tuple[int, ...]:
        return tuple(sorted({i for e in self.entries() for i in (e.x, e.y)}))

    @property
    def n(self) -> int:
        return len(self.index_symbols)


@dataclass(frozen=True)
class ExponentReport:
    nu: Tuple[int, int, int, int, int, int]
    alpha: float
    beta_exp: float
    t: float
    b0: float
    b1: float
    b: float
    bstar: float
    chi: float
    chi_tilde: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nu": list(self.nu),
            "alpha": self.alpha,
            "beta_exp": self.beta_exp,
            "t": self.t,
            "b0": self.b0,
            "b1": self.b1,
            "b": self.b,
            "bstar": self.bstar,
            "chi": self.chi,
            "chi_tilde": self.chi_tilde,
        }


def nu_counters(P: FormalMonomial) -> Tuple[int, int, int, int, int, int]:
    nu1 = sum(a.m - 1 for a in P.atoms() if isinstance(a, Underline))
    nu2 = sum(a.m - 1 for a in P.atoms() if isinstance(a, (AngleUnderline, Entry)))
    nu3 = sum(1 for a in P.atoms() if isinstance(a, Underline) and a.m >= 2)
    nu4 = sum(1 for a in P.atoms() if isinstance(a, AngleUnderline))

    # index occurrences are counted over entry atoms only
    occurrences = Counter()
    off_diagonal = set()
    for e in P.entries():
        occurrences[e.x] += 1
        occurrences[e.y] += 1
        if not e.diagonal:
            off_diagonal.update((e.x, e.y))
    nu5 = sum(1 for count in occurrences.values() if count % 2 == 1)
    nu6 = sum(1 for i, count in occurrences.items() if count % 2 == 0 and i in off_diagonal)
    return nu1, nu2, nu3, nu4, nu5, nu6


def exponents(P: FormalMonomial, alpha: float, beta_exp: float) -> ExponentReport:
    if not 0.0 <= beta_exp <= alpha < 1.0:
        raise DomainError(f"exponents need 0 <= beta_exp <= alpha < 1, got alpha={alpha}, beta_exp={beta_exp}")
    nu = nu_counters(P)
    nu1, nu2, _, nu4, nu5, nu6 = nu
    a, be = alpha, beta_exp
    return ExponentReport(
        nu=nu,
        alpha=a,
        beta_exp=be,
        t=P.t(a),
        b0=a * (nu1 + nu2) - (1 - a) * nu4 - (1 - a) * nu5 / 4.0,
        b1=a * nu2 - (1 - a) * nu4 - (1 - a) * nu5 / 4.0,
        b=-nu4 - (nu5 + nu6) / 2.0,
        bstar=be * nu2 - (1 - be) * nu4 - nu5 / 2.0 - (1 - be) * nu6 / 2.0,
        chi=min(a, 1 - a) / 2.0,
        chi_tilde=min(a - be, a / 2.0, (1 - a) / 2.0),
    )


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def format_exponent(t0: float, t_alpha: float) -> str:
    if t_alpha == 0:
        return _num(t0)
    coeff = "" if t_alpha == 1 else "-" if t_alpha == -1 else _num(t_alpha)
    text = f"{coeff}α"
    if t0 > 0:
        text += f"+{_num(t0)}"
    elif t0 < 0:
        text += f"-{_num(-t0)}"
    return "{" + text + "}"


def format_monomial(P: FormalMonomial) -> str:
    """Canonical DSL text; parse_monomial(format_monomial(P)) == P."""
    body = " ".join("E[" + " ".join(a.text() for a in factor) + "]" for factor in P.factors)
    return f"N^{format_exponent(P.t0, P.t_alpha)} {body}"


def random_monomial(rng, labels=("G", "G*", "F", "F*"), max_factors: int = 4, max_atoms: int = 4,
                    n_indices: int = 6, max_power: int = 5) -> FormalMonomial:
    """Random well-formed monomial drawn from a numpy Generator."""
    factors = []
    for _ in range(int(rng.integers(1, max_factors + 1))):
        atoms = []
        for _ in range(int(rng.integers(1, max_atoms + 1))):
            label = labels[int(rng.integers(len(labels)))]
            m = int(rng.integers(1, max_power + 1))
            kind = int(rng.integers(3))
            if kind == 0:
                atoms.append(Underline(label, m))
            elif kind == 1:
                atoms.append(AngleUnderline(label, m))
            else:
                x, y = (int(i) for i in rng.integers(1, n_indices + 1, size=2))
                atoms.append(Entry(label, m, x, y))
        factors.append(tuple(atoms))
    t_alpha = float(rng.integers(-2, 3))
    t0 = float(rng.integers(-4, 5)) / 2.0
    return FormalMonomial(t0=t0, factors=tuple(factors), t_alpha=t_alpha)
