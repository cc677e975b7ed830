"""Positive-evidence engine: Monte Carlo witness search, concatenation
lifting, and symmetry transport of witnesses.

The sampler is untrusted by design: it filters candidates in floating
point for speed, but a witness is only ever emitted after full exact
re-validation in `poly`.  All randomness flows through one per-target
seed derived from a master seed, so sweeps are reproducible.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .patterns import (
    Couple,
    ModuliOrder,
    SignPattern,
    canonical_order,
    descartes_counts,
    is_compatible,
    is_rigid_order,
    rigid_sign_pattern,
    signs_to_cp,
)
from .poly import (
    RootConfiguration,
    Witness,
    couple_of,
    make_witness,
)
from .symmetry import GROUP_ELEMENTS, apply_group

MC_DISTRIBUTIONS = ("mixed", "uniform", "loguniform")


@dataclass(frozen=True, slots=True)
class SamplerConfig:
    """Reproducible Monte Carlo parameters.

    `dist` picks the modulus distribution: "uniform" draws sorted U(0,1)
    moduli, "loguniform" additionally spreads each modulus by a factor
    10^U(0, log10(max_modulus)), and "mixed" (default) alternates the two
    per iteration — thin realizability regions need the spread, round
    ones don't.
    """

    seed: int = 0
    budget: int = 100_000
    dist: str = "mixed"
    max_modulus: float = 1000.0

    def __post_init__(self) -> None:
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.dist not in MC_DISTRIBUTIONS:
            raise ValueError(f"dist must be one of {MC_DISTRIBUTIONS}")
        if self.max_modulus <= 1:
            raise ValueError("max_modulus must exceed 1")


@dataclass(frozen=True, slots=True)
class Found:
    witness: Witness
    iterations: int


@dataclass(frozen=True, slots=True)
class Exhausted:
    couple: Couple
    budget: int
    sign_rejections: int  # samples that matched the order but not the signs


SearchOutcome = Found | Exhausted


def derive_seed(master_seed: int, couple: Couple) -> int:
    """Stable per-couple sampler seed: SHA-256 of (master seed, couple)."""
    digest = hashlib.sha256(f"{master_seed}:{couple}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _float_expand(roots: list[float]) -> list[float]:
    coeffs = [1.0]
    for r in roots:
        nxt = [0.0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c
            nxt[i + 1] -= c * r
        coeffs = nxt
    return coeffs


def _draw_moduli(rng: random.Random, d: int, iteration: int, cfg: SamplerConfig) -> list[float]:
    spread = cfg.dist == "loguniform" or (cfg.dist == "mixed" and iteration % 2 == 1)
    moduli = [rng.uniform(0.0, 1.0) for _ in range(d)]
    if spread:
        top = math.log10(cfg.max_modulus)
        moduli = [m * 10 ** rng.uniform(0.0, top) for m in moduli]
    moduli.sort()
    return moduli


def _signed_floats(moduli: list[float], order: ModuliOrder) -> list[float]:
    return [m if letter == "P" else -m for m, letter in zip(moduli, order.letters)]


def _matches_pattern(coeffs: list[float], sp: SignPattern) -> bool:
    return all(c != 0.0 and (c > 0) == (s > 0) for c, s in zip(coeffs, sp.signs))


def _round_for_storage(roots: tuple[Fraction, ...], target: Couple) -> RootConfiguration | None:
    rounded = tuple(Fraction(format(float(r), ".6f")) for r in roots)
    if any(r == 0 for r in rounded):
        return None
    try:
        rc = RootConfiguration(rounded)
        if couple_of(rc) == target:
            return rc
    except ValueError:
        return None
    return None


def mc_search(target: Couple, cfg: SamplerConfig) -> SearchOutcome:
    """Sample root configurations matching the target order until one's
    expansion carries the target sign pattern, or the budget runs out.

    Every draw respects the order by construction; rejection happens only
    on coefficient signs.  A float-filtered hit is re-validated exactly
    before being returned, and deterministically reproducible from
    (cfg.seed, target).
    """
    if not is_compatible(target.sp, target.order):
        raise ValueError(f"incompatible couple {target}: sign counts do not match")
    rng = random.Random(derive_seed(cfg.seed, target))
    d = target.sp.degree
    rejections = 0
    for iteration in range(cfg.budget):
        moduli = _draw_moduli(rng, d, iteration, cfg)
        if any(moduli[i] == moduli[i + 1] for i in range(d - 1)) or moduli[0] == 0.0:
            continue  # measure-zero degenerate draw
        floats = _signed_floats(moduli, target.order)
        if not _matches_pattern(_float_expand(floats), target.sp):
            rejections += 1
            continue
        exact = RootConfiguration(tuple(Fraction(f) for f in floats))
        if couple_of(exact) != target:
            rejections += 1  # float filter lied near a sign boundary
            continue
        stored = _round_for_storage(exact.roots, target) or exact
        provenance = f"mc-search(seed={cfg.seed},iteration={iteration + 1})"
        return Found(make_witness(stored, provenance, seed=cfg.seed), iteration + 1)
    return Exhausted(target, cfg.budget, rejections)


def concatenate(parent: Witness, root_sign: str, max_halvings: int = 64) -> Witness:
    """Multiply a parent witness by (x - eps) or (x + eps) for a fresh root
    of strictly smallest modulus.

    A new positive root prepends P to the order and appends the negated
    last sign to the pattern; a negative root prepends N and repeats the
    last sign.  eps starts at half the smallest parent modulus and halves
    until the exact expansion reproduces the parent's signs above the new
    constant term.
    """
    if root_sign not in ("P", "N"):
        raise ValueError("root_sign must be 'P' or 'N'")
    parent.validate()
    last = parent.couple.sp.signs[-1]
    new_sign = -last if root_sign == "P" else last
    target = Couple(
        SignPattern(parent.couple.sp.signs + (new_sign,)),
        ModuliOrder(root_sign + parent.couple.order.letters),
    )
    eps = min(abs(r) for r in parent.roots.roots) / 2
    for _ in range(max_halvings):
        root = eps if root_sign == "P" else -eps
        rc = RootConfiguration(parent.roots.roots + (root,))
        try:
            if couple_of(rc) == target:
                return make_witness(rc, f"concatenation({parent.couple})")
        except ValueError:
            pass
        eps /= 2
    raise ValueError(f"epsilon underflow while concatenating onto {parent.couple}")


def transport(parent: Witness, g: str) -> Witness:
    """Carry a witness across the symmetry group: i_m negates every root,
    i_r inverts every root; the image realizes g(parent couple)."""
    if g not in GROUP_ELEMENTS or g == "id":
        raise ValueError(f"g must be one of {[e for e in GROUP_ELEMENTS if e != 'id']}")
    roots = parent.roots.roots
    if "ir" in g:
        roots = tuple(1 / r for r in roots)
    if g.startswith("im"):
        roots = tuple(-r for r in roots)
    image = make_witness(RootConfiguration(roots), f"symmetry-transport({g},{parent.couple})")
    expected = apply_group(g, parent.couple)
    if image.couple != expected:
        raise ValueError(f"transport produced {image.couple}, expected {expected}")
    return image


# -------------------------------------------------------- staged witnessing


def rigid_witness(order: ModuliOrder) -> Witness:
    """Direct construction for a rigid order: moduli 1..d signed by the
    order letters realize the order's unique sign pattern."""
    sp = rigid_sign_pattern(order)  # raises if the order is not rigid
    roots = tuple(
        Fraction(k if letter == "P" else -k)
        for k, letter in enumerate(order.letters, start=1)
    )
    w = make_witness(RootConfiguration(roots), "rigid-construction")
    if w.couple != Couple(sp, order):
        raise ValueError(f"rigid construction realized {w.couple}, expected ({sp}, {order})")
    return w


def canonical_witness(sp: SignPattern) -> Witness:
    """Deterministic witness for (sp, canonical order of sp), built by
    concatenating one root at a time along the truncation chain.

    Dropping the constant-term sign of sp drops the first letter of its
    canonical order, so the chain recurses to degree 1 and every couple
    on it is again canonical.
    """
    if sp.degree == 1:
        root = Fraction(1) if sp.signs[1] == -1 else Fraction(-1)
        return make_witness(RootConfiguration((root,)), "rigid-construction")
    parent = canonical_witness(SignPattern(sp.signs[:-1]))
    order = canonical_order(sp)
    child = concatenate(parent, order.letters[0])
    if child.couple != Couple(sp, order):
        raise ValueError(f"canonical chain realized {child.couple}, expected ({sp}, {order})")
    return child


def _has_concat_parent(couple: Couple) -> bool:
    last_cp = signs_to_cp(couple.sp).letters[-1]
    return (last_cp == "c") == (couple.order.letters[0] == "P")


def witness_for(
    target: Couple,
    cfg: SamplerConfig | None = None,
    store: dict[Couple, Witness] | None = None,
    allow_mc: bool = True,
) -> Witness | None:
    """Staged search for a witness: stored record, rigid or canonical
    direct construction, transport of a cheaply-witnessed orbit sibling,
    recursive concatenation from the degree-(d-1) truncation, and finally
    Monte Carlo (skipped when allow_mc is false, so callers can harvest
    the deterministic stages first).  Returns None when every stage comes
    up empty."""
    cfg = cfg or SamplerConfig()
    if not is_compatible(target.sp, target.order):
        raise ValueError(f"incompatible couple {target}")
    if store and target in store and store[target].couple == target:
        return store[target]
    if target.sp.degree == 1:
        return rigid_witness(target.order) if target.order.letters in ("P", "N") else None
    if is_rigid_order(target.order) and rigid_sign_pattern(target.order) == target.sp:
        return rigid_witness(target.order)
    if target.order == canonical_order(target.sp):
        return canonical_witness(target.sp)
    for g in ("im", "ir", "imir"):
        sibling = apply_group(g, target)
        cheap = None
        if store and sibling in store:
            cheap = store[sibling]
        elif is_rigid_order(sibling.order) and rigid_sign_pattern(sibling.order) == sibling.sp:
            cheap = rigid_witness(sibling.order)
        elif sibling.order == canonical_order(sibling.sp):
            cheap = canonical_witness(sibling.sp)
        if cheap is not None:
            return transport(cheap, g)  # each group element is an involution
    if _has_concat_parent(target):
        parent_target = Couple(
            SignPattern(target.sp.signs[:-1]), ModuliOrder(target.order.letters[1:])
        )
        parent = witness_for(parent_target, cfg, store, allow_mc)
        if parent is not None:
            child = concatenate(parent, target.order.letters[0])
            if child.couple != target:
                raise ValueError(f"concatenation realized {child.couple}, expected {target}")
            return child
    if not allow_mc:
        return None
    outcome = mc_search(target, cfg)
    if isinstance(outcome, Found):
        return outcome.witness
    return None


def canonical_order_census(
    sp: SignPattern, samples: int, seed: int = 0, max_modulus: float = 1000.0
) -> dict[str, int]:
    """Sample configurations with sp's root-sign counts and random moduli,
    keep those whose expansion carries sp, and tally their orders.

    For a canonical pattern the tally should put every hit on the
    canonical order — hits elsewhere are re-checked exactly before being
    counted, so a non-canonical entry here is real evidence, not float
    noise.
    """
    pos, neg = descartes_counts(sp)
    d = sp.degree
    expected = canonical_order(sp).letters
    rng = random.Random(derive_seed(seed, Couple(sp, canonical_order(sp))))
    cfg = SamplerConfig(seed=seed, max_modulus=max_modulus)
    census: dict[str, int] = {}
    for iteration in range(samples):
        moduli = _draw_moduli(rng, d, iteration, cfg)
        if any(moduli[i] == moduli[i + 1] for i in range(d - 1)) or moduli[0] == 0.0:
            continue
        signs = ["P"] * pos + ["N"] * neg
        rng.shuffle(signs)
        letters = "".join(signs)
        floats = _signed_floats(moduli, ModuliOrder(letters))
        if not _matches_pattern(_float_expand(floats), sp):
            continue
        if letters != expected:
            exact = RootConfiguration(tuple(Fraction(f) for f in floats))
            if couple_of(exact).sp != sp:
                continue  # float artifact near a sign boundary
        census[letters] = census.get(letters, 0) + 1
    return census
