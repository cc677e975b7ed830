"""Exact-arithmetic bridge between root configurations and couples.

Everything here runs on `fractions.Fraction`: root configurations are
multisets of non-zero exact rationals, expansion is the exact monic product
of (x - r), and the extractors read off the coefficient sign pattern and
the order of root moduli.  Floating point never enters a validation path,
so witness checks are bit-precise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .patterns import Couple, ModuliOrder, SignPattern

_EXACT_RE = re.compile(r"^[+-]?(\d+(\.\d+)?|\d+/\d+)$")


def parse_exact(text: str) -> Fraction:
    """Parse a decimal or fraction literal exactly (0.39 -> 39/100).

    Scientific notation is rejected: the stored corpora use plain decimal
    and fraction strings only, and round-tripping must be lossless.
    """
    text = text.strip()
    if not _EXACT_RE.match(text):
        raise ValueError(f"not an exact decimal/fraction literal: {text!r}")
    return Fraction(text)


def format_exact(value: Fraction) -> str:
    """Shortest faithful text form: integer, finite decimal, or p/q."""
    if value.denominator == 1:
        return str(value.numerator)
    # finite decimal expansions (denominator 2^a * 5^b) print as decimals
    den = value.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den == 1:
        scale = 0
        den = value.denominator
        while den % 2 == 0:
            den //= 2
            scale += 1
        fives = 0
        den = value.denominator
        while den % 5 == 0:
            den //= 5
            fives += 1
        digits = max(scale, fives)
        scaled = value * 10**digits
        sign = "-" if scaled < 0 else ""
        text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
        return f"{sign}{text[:-digits]}.{text[-digits:]}" if digits else str(scaled.numerator)
    return f"{value.numerator}/{value.denominator}"


class ModuliTieError(ValueError):
    """Raised when root moduli are not pairwise distinct; carries the tied
    root pairs so callers can route them to `perturb`."""

    def __init__(self, pairs: Sequence[tuple[Fraction, Fraction]]):
        self.pairs = tuple(pairs)
        listing = ", ".join(f"({format_exact(a)}, {format_exact(b)})" for a, b in self.pairs)
        super().__init__(f"tie between moduli of root pairs: {listing}")


@dataclass(frozen=True, slots=True)
class RootConfiguration:
    """A multiset of d non-zero exact rational roots, stored sorted by
    (modulus, value) so equal multisets compare equal."""

    roots: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.roots:
            raise ValueError("need at least one root")
        if any(r == 0 for r in self.roots):
            raise ValueError("zero roots are not allowed")
        ordered = tuple(sorted(self.roots, key=lambda r: (abs(r), r)))
        object.__setattr__(self, "roots", ordered)

    @classmethod
    def parse(cls, texts: Iterable[str]) -> "RootConfiguration":
        return cls(tuple(parse_exact(t) for t in texts))

    @property
    def degree(self) -> int:
        return len(self.roots)

    def __str__(self) -> str:
        return "{" + ", ".join(format_exact(r) for r in self.roots) + "}"


@dataclass(frozen=True, slots=True)
class Polynomial:
    """Monic polynomial with exact rational coefficients, leading first."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) < 2:
            raise ValueError("need degree >= 1")
        if self.coefficients[0] != 1:
            raise ValueError("polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __str__(self) -> str:
        return "[" + ", ".join(format_exact(c) for c in self.coefficients) + "]"


def expand(rc: RootConfiguration) -> Polynomial:
    """The exact monic product prod (x - r) over the configuration."""
    coeffs = [Fraction(1)]
    for root in rc.roots:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c
            nxt[i + 1] -= c * root
        coeffs = nxt
    return Polynomial(tuple(coeffs))


def sign_pattern_of(p: Polynomial) -> SignPattern:
    """Coefficient sign string, normalized to a leading +."""
    for i, c in enumerate(p.coefficients):
        if c == 0:
            raise ValueError(f"vanishing coefficient of x^{p.degree - i}")
    signs = tuple(1 if c > 0 else -1 for c in p.coefficients)
    if signs[0] == -1:
        signs = tuple(-s for s in signs)
    return SignPattern(signs)


def moduli_order_of(rc: RootConfiguration) -> ModuliOrder:
    """P/N letters of the roots in increasing modulus; raises
    `ModuliTieError` when two moduli coincide."""
    ordered = rc.roots  # already sorted by (modulus, value)
    ties = [
        (ordered[i], ordered[i + 1])
        for i in range(len(ordered) - 1)
        if abs(ordered[i]) == abs(ordered[i + 1])
    ]
    if ties:
        raise ModuliTieError(ties)
    return ModuliOrder("".join("P" if r > 0 else "N" for r in ordered))


def tied_pairs_of(rc: RootConfiguration) -> list[tuple[Fraction, Fraction]]:
    """The pairs of equal-modulus roots (empty when moduli are distinct)."""
    try:
        moduli_order_of(rc)
    except ModuliTieError as err:
        return list(err.pairs)
    return []


def perturb(rc: RootConfiguration, plan: Iterable[Fraction], eps: Fraction) -> RootConfiguration:
    """Shrink each planned root multiplicatively by (1 - eps).

    The plan must pick exactly one root out of every tied-modulus pair;
    shrinking (rather than shifting) keeps root signs and rationality.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    plan = list(plan)
    ties = tied_pairs_of(rc)
    for a, b in ties:
        picked = [r for r in (a, b) if r in plan]
        if len(picked) != 1:
            raise ValueError(
                f"plan must pick exactly one of the tied roots {format_exact(a)}, {format_exact(b)}"
            )
    remaining = list(rc.roots)
    shrunk = []
    for chosen in plan:
        remaining.remove(chosen)  # raises if the plan names an absent root
        shrunk.append(chosen * (1 - eps))
    return RootConfiguration(tuple(remaining + shrunk))


def couple_of(rc: RootConfiguration) -> Couple:
    """(sign pattern of the expansion, order of moduli); by the root-count
    bookkeeping this couple is always compatible."""
    return Couple(sign_pattern_of(expand(rc)), moduli_order_of(rc))


def plan_for_target(rc: RootConfiguration, target_order: ModuliOrder) -> list[Fraction]:
    """Derive which root of each tied pair must shrink so the configuration
    can realize `target_order`: the letter at the lower of the two tied
    ranks names the sign of the root that shrinks below its partner."""
    ties = tied_pairs_of(rc)
    if not ties:
        return []
    flat = [r for pair in ties for r in pair]
    if len(set(flat)) != len(flat):
        raise ValueError("three or more roots share a modulus; no pairwise plan exists")
    ordered = rc.roots
    plan = []
    for a, b in ties:
        if (a > 0) == (b > 0):
            raise ValueError("tied roots of equal sign cannot be ordered by any P/N target")
        rank = ordered.index(a)  # 0-based rank of the lower tied slot
        letter = target_order.letters[rank]
        partner_letter = target_order.letters[rank + 1]
        if {letter, partner_letter} != {"P", "N"}:
            raise ValueError(f"target order {target_order} does not split the tie at ranks {rank + 1},{rank + 2}")
        plan.append(a if (a > 0) == (letter == "P") else b)
    return plan


def resolve_ties(rc: RootConfiguration, target: Couple, max_halvings: int = 64) -> RootConfiguration:
    """Perturb tied moduli until the configuration realizes `target`.

    Tries eps = 2^-k for k = 1..max_halvings with the plan derived from the
    target order; every candidate is re-validated exactly.
    """
    if not tied_pairs_of(rc):
        if couple_of(rc) != target:
            raise ValueError(f"configuration realizes {couple_of(rc)}, not {target}")
        return rc
    plan = plan_for_target(rc, target.order)
    for k in range(1, max_halvings + 1):
        candidate = perturb(rc, plan, Fraction(1, 2**k))
        try:
            if couple_of(candidate) == target:
                return candidate
        except (ModuliTieError, ValueError):
            continue
    raise ValueError(f"no perturbation of {rc} realizes {target} within {max_halvings} halvings")


class WitnessError(ValueError):
    """A witness record failed exact re-validation."""


@dataclass(frozen=True, slots=True)
class Witness:
    """An exact realizability proof: roots whose expansion carries the
    claimed sign pattern while the moduli carry the claimed order.

    `seed` records the sampler seed for randomly found witnesses; witnesses
    obtained deterministically leave it unset.
    """

    couple: Couple
    roots: RootConfiguration
    polynomial: Polynomial
    provenance: str
    seed: int | None = None

    def validate(self) -> None:
        if self.polynomial != expand(self.roots):
            raise WitnessError(f"stored polynomial is not the expansion of {self.roots}")
        sp = sign_pattern_of(self.polynomial)
        if sp != self.couple.sp:
            raise WitnessError(f"expansion defines {sp}, claimed {self.couple.sp}")
        try:
            order = moduli_order_of(self.roots)
        except ModuliTieError as err:
            raise WitnessError(str(err)) from err
        if order != self.couple.order:
            raise WitnessError(f"moduli define order {order}, claimed {self.couple.order}")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except WitnessError:
            return False
        return True


def make_witness(rc: RootConfiguration, provenance: str, seed: int | None = None) -> Witness:
    """Build a validated witness for whatever couple the roots realize."""
    poly = expand(rc)
    couple = Couple(sign_pattern_of(poly), moduli_order_of(rc))
    return Witness(couple, rc, poly, provenance, seed)


# ----------------------------------------------------------------- store IO

STORE_HEADER = "hypmoduli-witness-store v1"


def _witness_line(w: Witness) -> str:
    return "\t".join(
        [
            str(w.couple.sp),
            w.couple.order.letters,
            ",".join(format_exact(r) for r in w.roots.roots),
            ",".join(format_exact(c) for c in w.polynomial.coefficients),
            w.provenance,
            "-" if w.seed is None else str(w.seed),
        ]
    )


def _parse_witness_line(line: str) -> Witness:
    parts = line.rstrip("\n").split("\t")
    if len(parts) != 6:
        raise ValueError(f"malformed witness record: {line!r}")
    sp_text, order_text, roots_text, coeff_text, provenance, seed_text = parts
    couple = Couple(SignPattern.parse(sp_text), ModuliOrder.parse(order_text))
    roots = RootConfiguration.parse(roots_text.split(","))
    coeffs = tuple(parse_exact(t) for t in coeff_text.split(","))
    seed = None if seed_text == "-" else int(seed_text)
    return Witness(couple, roots, Polynomial(coeffs), provenance, seed)


def save_witnesses(path, witnesses: Iterable[Witness]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(STORE_HEADER + "\n")
        for w in witnesses:
            fh.write(_witness_line(w) + "\n")


def append_witnesses(path, witnesses: Iterable[Witness]) -> None:
    import os

    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", encoding="utf-8") as fh:
        if fresh:
            fh.write(STORE_HEADER + "\n")
        for w in witnesses:
            fh.write(_witness_line(w) + "\n")


def load_witnesses(path) -> list[Witness]:
    """Read a store; later records win per (couple, provenance) key."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != STORE_HEADER:
            raise ValueError(f"unrecognized witness store header: {header!r}")
        records: dict[tuple[Couple, str], Witness] = {}
        for line in fh:
            if not line.strip():
                continue
            w = _parse_witness_line(line)
            records[(w.couple, w.provenance)] = w
    return list(records.values())
