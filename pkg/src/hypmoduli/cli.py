"""Command-line interface.

Exit codes: 0 success, 1 contradiction detected, 2 invalid input,
3 budget exhausted where a definite answer was requested.

Sampler defaults resolve in order: built-in defaults, then a key=value
config file (--config), then the HYPMODULI_SEED environment variable,
then explicit flags.
"""

from __future__ import annotations

import argparse
import os
import sys

from .certify import (
    ContradictionError,
    classify_pattern,
    forced_sign,
    sample_certificate,
    verify_certificate,
)
from .patterns import (
    Couple,
    ModuliOrder,
    SignPattern,
    canonical_order,
    compatible_orders,
    descartes_counts,
    enumerate_patterns,
    is_canonical_pattern,
    is_rigid_order,
    order_to_uvector,
    rigid_sign_pattern,
)
from .poly import WitnessError, append_witnesses, load_witnesses, _witness_line
from .published import published_witnesses
from .results import counts_and_ratio, verdict_rows, verify_paper
from .search import MC_DISTRIBUTIONS, SamplerConfig, transport, witness_for
from .symmetry import orbit_of, orbits

SEED_ENV = "HYPMODULI_SEED"
CONFIG_KEYS = ("seed", "budget", "dist", "max_modulus")


def _read_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value.strip()
    return values


def _sampler_config(args) -> SamplerConfig:
    values = {"seed": 0, "budget": 100_000, "dist": "mixed", "max_modulus": 1000.0}
    if getattr(args, "config", None):
        for key, text in _read_config(args.config).items():
            values[key] = (
                text if key == "dist" else float(text) if key == "max_modulus" else int(text)
            )
    if SEED_ENV in os.environ:
        values["seed"] = int(os.environ[SEED_ENV])
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return SamplerConfig(**values)


def _parse_pattern(text: str) -> SignPattern:
    return SignPattern.parse(text)


def _parse_order(text: str) -> ModuliOrder:
    text = text.strip()
    if text.startswith("["):
        from .patterns import UVector, uvector_to_order

        parts = tuple(int(p) for p in text.strip("[]").split(","))
        return uvector_to_order(UVector(parts))
    return ModuliOrder(text)


def _default_store(degree: int) -> dict:
    if degree == 6:
        return {w.couple: w for w in published_witnesses()}
    return {}


def _load_store(path: str | None, degree: int) -> dict:
    if path is None:
        return _default_store(degree)
    return {w.couple: w for w in load_witnesses(path)}


# ------------------------------------------------------------ subcommands


def _cmd_enumerate(args) -> int:
    patterns = enumerate_patterns(args.degree, args.changes)
    for sp in patterns:
        print(f"{sp}  ({sp.composition()})")
        if args.orders:
            for order in compatible_orders(sp):
                print(f"    {order.letters}  {order_to_uvector(order)}")
    n_orders = len(compatible_orders(patterns[0])) if patterns else 0
    print(f"{len(patterns)} patterns, {n_orders} compatible orders each")
    return 0


def _cmd_orbits(args) -> int:
    for orbit in orbits(args.degree, args.changes):
        members = "; ".join(str(sp.composition()) for sp in orbit.sorted_members())
        print(f"size {orbit.size}: {members}")
    return 0


def _cmd_canonical(args) -> int:
    sp = _parse_pattern(args.pattern)
    order = canonical_order(sp)
    tag = "canonical pattern" if is_canonical_pattern(sp) else "non-canonical pattern"
    print(f"{sp} ({sp.composition()}): canonical order {order.letters} "
          f"{order_to_uvector(order)} [{tag}]")
    return 0


def _cmd_rigid(args) -> int:
    order = _parse_order(args.order)
    if not is_rigid_order(order):
        print(f"{order.letters}: not rigid")
        return 0
    sp = rigid_sign_pattern(order)
    print(f"{order.letters}: rigid, only sign pattern {sp} ({sp.composition()})")
    return 0


def _cmd_search(args) -> int:
    sp = _parse_pattern(args.pattern)
    order = _parse_order(args.order)
    cfg = _sampler_config(args)
    store = _load_store(args.store, sp.degree)
    witness = witness_for(Couple(sp, order), cfg, store)
    if witness is None:
        print(f"no witness found for ({sp.composition()}, {order.letters}) "
              f"within budget {cfg.budget}", file=sys.stderr)
        return 3
    witness.validate()
    print(_witness_line(witness))
    if args.out:
        append_witnesses(args.out, [witness])
    return 0


def _cmd_certify(args) -> int:
    order = _parse_order(args.order)
    sp = _parse_pattern(args.pattern) if args.pattern else None
    if sp is not None and sp.degree != order.degree:
        raise ValueError("pattern and order degrees differ")
    ks = [args.coeff] if args.coeff is not None else list(range(order.degree))
    found = 0
    for k in ks:
        cert = forced_sign(order, k)
        if cert is None:
            continue
        verify_certificate(cert)
        if args.samples:
            bad = sample_certificate(cert, samples=args.samples, seed=args.seed or 0)
            if bad:
                print(f"CONTRADICTION: {bad} sampled violations of {cert}", file=sys.stderr)
                return 1
        against = ""
        if sp is not None and cert.sign != sp.signs[sp.degree - k]:
            against = f"  [contradicts {sp.composition()}]"
        print(f"{cert}{against}")
        found += 1
    if not found:
        print("no forced sign (this proves nothing)")
    return 0


def _cmd_decide(args) -> int:
    cfg = _sampler_config(args)
    if args.pattern:
        patterns = [_parse_pattern(args.pattern)]
        degree = patterns[0].degree
    elif args.all:
        degree = args.degree
        patterns = [
            sp for c in range(degree + 1) for sp in enumerate_patterns(degree, c)
        ]
    else:
        raise ValueError("decide needs --pattern or --all")
    store = _load_store(args.store, degree)
    verdicts = []
    for sp in patterns:
        table = classify_pattern(sp, cfg, store)
        verdicts.extend(table.values())
    text = verdict_rows(verdicts)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    if args.evidence:
        for v in verdicts:
            if v.evidence_kind in ("forced-sign", "frontier", "propagation"):
                print(f"# {v.couple}: {v.summary()}")
    return 0


def _cmd_verify_paper(args) -> int:
    report = verify_paper()
    print(report.render())
    return 0 if report.all_couples_confirmed else 1


def _cmd_stats(args) -> int:
    print(counts_and_ratio(args.degree).render())
    return 0


def _cmd_orbit_of(args) -> int:
    sp = _parse_pattern(args.pattern)
    orbit = orbit_of(sp)
    members = "; ".join(str(m.composition()) for m in orbit.sorted_members())
    print(f"orbit of {sp.composition()} (size {orbit.size}): {members}")
    return 0


def _cmd_transport(args) -> int:
    witnesses = load_witnesses(args.witness)
    if not witnesses:
        raise ValueError(f"no witnesses in {args.witness}")
    moved = [transport(w, args.g) for w in witnesses]
    for w in moved:
        w.validate()
        print(_witness_line(w))
    if args.out:
        append_witnesses(args.out, moved)
    return 0


# ------------------------------------------------------------ entry point


def _add_sampler_flags(sub) -> None:
    sub.add_argument("--seed", type=int, default=None, help="master sampler seed")
    sub.add_argument("--budget", type=int, default=None, help="Monte Carlo iteration budget")
    sub.add_argument("--dist", choices=MC_DISTRIBUTIONS, default=None,
                     help="modulus sampling distribution")
    sub.add_argument("--max-modulus", dest="max_modulus", type=float, default=None)
    sub.add_argument("--config", default=None, help="key=value sampler defaults file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypmoduli",
        description="Classify (coefficient sign pattern, order of root moduli) "
                    "couples of hyperbolic polynomials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list sign patterns of a stratum")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--changes", type=int, required=True)
    p.add_argument("--orders", action="store_true", help="also list compatible orders")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("orbits", help="orbit decomposition of a stratum")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--changes", type=int, required=True)
    p.set_defaults(func=_cmd_orbits)

    p = sub.add_parser("canonical", help="canonical order of a sign pattern")
    p.add_argument("pattern")
    p.set_defaults(func=_cmd_canonical)

    p = sub.add_parser("rigid", help="the sign pattern forced by a rigid order")
    p.add_argument("order")
    p.set_defaults(func=_cmd_rigid)

    p = sub.add_parser("search", help="find a witness for one couple")
    p.add_argument("--pattern", required=True)
    p.add_argument("--order", required=True)
    p.add_argument("--store", default=None, help="witness store file to consult")
    p.add_argument("--out", default=None, help="append the found witness to this store")
    _add_sampler_flags(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("certify", help="forced-sign certificates for an order")
    p.add_argument("--pattern", default=None, help="flag certificates contradicting this pattern")
    p.add_argument("--order", required=True)
    p.add_argument("--coeff", type=int, default=None, help="only this coefficient index")
    p.add_argument("--samples", type=int, default=0, help="randomized soundness samples")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("decide", help="full verdict table for patterns")
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--pattern", default=None)
    p.add_argument("--all", action="store_true", help="every pattern of the degree")
    p.add_argument("--store", default=None, help="witness store file")
    p.add_argument("--out", default=None, help="write the verdict table here")
    p.add_argument("--evidence", action="store_true", help="print evidence summaries")
    _add_sampler_flags(p)
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("verify-paper", help="check published polynomials by exact expansion")
    p.set_defaults(func=_cmd_verify_paper)

    p = sub.add_parser("stats", help="realizability counts and ratios")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("orbit-of", help="symmetry orbit of a sign pattern")
    p.add_argument("pattern")
    p.set_defaults(func=_cmd_orbit_of)

    p = sub.add_parser("transport", help="apply a symmetry to stored witnesses")
    p.add_argument("--witness", required=True, help="witness store file")
    p.add_argument("--g", required=True, choices=("im", "ir", "imir"))
    p.add_argument("--out", default=None, help="append transported witnesses to this store")
    p.set_defaults(func=_cmd_transport)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ContradictionError as exc:
        print(f"CONTRADICTION: {exc}", file=sys.stderr)
        return 1
    except (ValueError, WitnessError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
