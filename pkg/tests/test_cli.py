"""End-to-end exercises of the command-line interface through main(argv)."""

import pytest

from hypmoduli.certify import ContradictionError
from hypmoduli.cli import SEED_ENV, _sampler_config, build_parser, main
from hypmoduli.patterns import Couple, ModuliOrder, SignPattern
from hypmoduli.poly import _witness_line, load_witnesses, save_witnesses
from hypmoduli.published import published_witnesses
from hypmoduli.search import SamplerConfig, transport


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# ------------------------------------------------------- informational


def test_enumerate_three_change_stratum(capsys):
    rc, out, _ = run(capsys, "enumerate", "--degree", "6", "--changes", "3")
    assert rc == 0
    assert "(3,1,2,1)" in out
    assert out.splitlines()[-1] == "20 patterns, 20 compatible orders each"
    assert len(out.splitlines()) == 21


def test_enumerate_with_orders(capsys):
    rc, out, _ = run(capsys, "enumerate", "--degree", "3", "--changes", "1", "--orders")
    assert rc == 0
    assert out == (
        "+++-  (3,1)\n"
        "    PNN  [0,2]\n"
        "    NPN  [1,1]\n"
        "    NNP  [2,0]\n"
        "++--  (2,2)\n"
        "    PNN  [0,2]\n"
        "    NPN  [1,1]\n"
        "    NNP  [2,0]\n"
        "+---  (1,3)\n"
        "    PNN  [0,2]\n"
        "    NPN  [1,1]\n"
        "    NNP  [2,0]\n"
        "3 patterns, 3 compatible orders each\n"
    )


def test_orbits_three_change_stratum(capsys):
    rc, out, _ = run(capsys, "orbits", "--degree", "6", "--changes", "3")
    assert rc == 0
    assert out == (
        "size 2: 4,1,1,1; 1,1,1,4\n"
        "size 4: 3,1,2,1; 2,3,1,1; 1,1,3,2; 1,2,1,3\n"
        "size 4: 3,1,1,2; 2,1,1,3; 1,1,4,1; 1,4,1,1\n"
        "size 2: 3,2,1,1; 1,1,2,3\n"
        "size 2: 2,1,3,1; 1,3,1,2\n"
        "size 4: 2,1,2,2; 2,2,1,2; 1,2,3,1; 1,3,2,1\n"
        "size 2: 2,2,2,1; 1,2,2,2\n"
    )


def test_canonical_command(capsys):
    rc, out, _ = run(capsys, "canonical", "+----+-")
    assert rc == 0
    assert out == "+----+- (1,4,1,1): canonical order PPNNNP [0,0,3,0] [canonical pattern]\n"
    rc, out, _ = run(capsys, "canonical", "+++-++-")
    assert rc == 0
    assert out == "+++-++- (3,1,2,1): canonical order PNPPNN [0,1,0,2] [non-canonical pattern]\n"


def test_canonical_accepts_composition_form(capsys):
    rc, out, _ = run(capsys, "canonical", "1,4,1,1")
    assert rc == 0
    assert "canonical order PPNNNP" in out


def test_rigid_command(capsys):
    rc, out, _ = run(capsys, "rigid", "PNPNPN")
    assert rc == 0
    assert out == "PNPNPN: rigid, only sign pattern ++--++- (2,2,2,1)\n"
    rc, out, _ = run(capsys, "rigid", "PPNNPN")
    assert rc == 0
    assert out == "PPNNPN: not rigid\n"


def test_rigid_accepts_uvector_form(capsys):
    rc, out, _ = run(capsys, "rigid", "[1,1,1,0]")
    assert rc == 0
    assert out == "NPNPNP: rigid, only sign pattern +--++-- (1,2,2,2)\n"


def test_orbit_of_command(capsys):
    rc, out, _ = run(capsys, "orbit-of", "+----+-")
    assert rc == 0
    assert out == "orbit of 1,4,1,1 (size 4): 3,1,1,2; 2,1,1,3; 1,1,4,1; 1,4,1,1\n"


def test_stats_degree_6(capsys):
    rc, out, _ = run(capsys, "stats", "--degree", "6")
    assert rc == 0
    assert out == (
        "degree 6: realizable/total ratio = 19/66\n"
        "  changes 0: 1 realizable of 1\n"
        "  changes 1: 18 realizable of 36\n"
        "  changes 2: 69 realizable of 225\n"
        "  changes 3: 90 realizable of 400\n"
        "  changes 4: 69 realizable of 225\n"
        "  changes 5: 18 realizable of 36\n"
        "  changes 6: 1 realizable of 1\n"
        "  three-change orbit products: 15x2 + 6x4 + 5x4 + 4x2 + 1x4 + 1x2 + 1x2 = 90\n"
        "  ratio sequence: 1, 2/3, 3/5, 3/7, 47/126, 19/66\n"
        "  successive ratios: 2/3, 9/10, 5/7, 47/54, 399/517\n"
    )


def test_stats_lower_degree_and_bad_degree(capsys):
    rc, out, _ = run(capsys, "stats", "--degree", "4")
    assert rc == 0
    assert "ratio = 3/7" in out
    assert "changes" not in out
    rc, _, err = run(capsys, "stats", "--degree", "7")
    assert rc == 2
    assert err.startswith("error:")


# ------------------------------------------------------------- search


def test_search_returns_stored_witness(tmp_path, capsys):
    out_path = tmp_path / "w.tsv"
    rc, out, _ = run(
        capsys, "search", "--pattern", "2,2,2,1", "--order", "NPPNNP",
        "--seed", "7", "--budget", "1000", "--out", str(out_path),
    )
    assert rc == 0
    assert out.endswith("\n")
    fields = out.strip().split("\t")
    assert fields[:2] == ["++--++-", "NPPNNP"]
    assert fields[-2:] == ["published-example", "-"]
    stored = load_witnesses(out_path)
    assert len(stored) == 1
    assert stored[0].couple == Couple(SignPattern.parse("++--++-"), ModuliOrder("NPPNNP"))
    stored[0].validate()


def test_search_budget_exhausted(capsys):
    rc, out, err = run(
        capsys, "search", "--pattern", "++--++-", "--order", "NPNPNP",
        "--budget", "500", "--seed", "1",
    )
    assert rc == 3
    assert out == ""
    assert "no witness found for (2,2,2,1, NPNPNP)" in err


# ------------------------------------------------------------ certify


def test_certify_flags_contradicting_pattern(capsys):
    rc, out, _ = run(
        capsys, "certify", "--order", "NNPNPP", "--coeff", "5",
        "--pattern", "++-++--", "--samples", "200", "--seed", "3",
    )
    assert rc == 0
    assert "q_5 forced negative on NNPNPP" in out
    assert "[contradicts 2,1,2,2]" in out


def test_certify_uvector_order_and_silence(capsys):
    rc, out, _ = run(capsys, "certify", "--order", "[3,0,0,0]", "--coeff", "5")
    assert rc == 0
    assert "on NNNPPP" in out
    rc, out, _ = run(capsys, "certify", "--order", "PNPPNN", "--coeff", "4")
    assert rc == 0
    assert out == "no forced sign (this proves nothing)\n"


def test_certify_full_scan(capsys):
    rc, out, _ = run(capsys, "certify", "--order", "PPNPNN")
    assert rc == 0
    ks = [line.split()[0] for line in out.splitlines()]
    assert ks == ["q_0", "q_1", "q_3", "q_5"]
    assert "strict via" in out


def test_certify_degree_mismatch(capsys):
    rc, _, err = run(capsys, "certify", "--order", "PNN", "--pattern", "++--++-")
    assert rc == 2
    assert "degrees differ" in err


# ------------------------------------------------------------- decide


def test_decide_single_pattern(tmp_path, capsys):
    argv = ["decide", "--pattern", "++--++-", "--seed", "4", "--budget", "20000"]
    rc, out, _ = run(capsys, *argv)
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "hypmoduli-verdicts v1"
    assert len(lines) == 21
    dead = {line.split("\t")[2] for line in lines[1:] if "NonRealizable" in line}
    assert dead == {"NPNPNP", "NPNNPP", "NNPPNP", "NNPNPP", "NNNPPP"}
    assert "++--++-\t2,2,2,1\tNPNPNP\t[1,1,1,0]\tNonRealizable\trigid-order\trigid-orders" in lines

    out_path = tmp_path / "verdicts.tsv"
    rc = main(argv + ["--out", str(out_path)])
    capsys.readouterr()
    assert rc == 0
    assert out_path.read_text(encoding="utf-8") == out


def test_decide_evidence_summaries(capsys):
    rc, out, _ = run(
        capsys, "decide", "--pattern", "++--++-", "--seed", "4",
        "--budget", "20000", "--evidence",
    )
    assert rc == 0
    notes = [line for line in out.splitlines() if line.startswith("# ")]
    assert notes and any("forced" in n for n in notes)


def test_decide_all_small_degree(capsys):
    rc, out, _ = run(capsys, "decide", "--all", "--degree", "2")
    assert rc == 0
    assert out == (
        "hypmoduli-verdicts v1\n"
        "+++\t3\tNN\t[2]\tRealizable\twitness\t-\n"
        "++-\t2,1\tNP\t[1,0]\tNonRealizable\trigid-order\trigid-orders\n"
        "++-\t2,1\tPN\t[0,1]\tRealizable\twitness\t-\n"
        "+-+\t1,1,1\tPP\t[0,0,0]\tRealizable\twitness\t-\n"
        "+--\t1,2\tNP\t[1,0]\tRealizable\twitness\t-\n"
        "+--\t1,2\tPN\t[0,1]\tNonRealizable\trigid-order\trigid-orders\n"
    )


def test_decide_requires_selector(capsys):
    rc, _, err = run(capsys, "decide")
    assert rc == 2
    assert "decide needs --pattern or --all" in err


# ------------------------------------------- verify-paper and transport


def test_verify_paper_command(capsys):
    rc, out, _ = run(capsys, "verify-paper")
    assert rc == 0
    assert "couples confirmed: 13/13" in out
    assert "COUPLE MISMATCH" not in out


def test_transport_round_trip(tmp_path, capsys):
    witness = next(
        w for w in published_witnesses()
        if w.couple == Couple(SignPattern.parse("+++-++-"), ModuliOrder("PPPNNN"))
    )
    src = tmp_path / "src.tsv"
    once = tmp_path / "once.tsv"
    twice = tmp_path / "twice.tsv"
    save_witnesses(src, [witness])

    rc, out, _ = run(capsys, "transport", "--witness", str(src), "--g", "im", "--out", str(once))
    assert rc == 0
    expected = transport(witness, "im")
    assert out == _witness_line(expected) + "\n"
    moved = load_witnesses(once)
    assert len(moved) == 1
    assert moved[0].couple == expected.couple
    assert moved[0].couple != witness.couple

    rc, _, _ = run(capsys, "transport", "--witness", str(once), "--g", "im", "--out", str(twice))
    assert rc == 0
    back = load_witnesses(twice)
    assert back[0].couple == witness.couple
    back[0].validate()


def test_transport_empty_store(tmp_path, capsys):
    empty = tmp_path / "empty.tsv"
    save_witnesses(empty, [])
    rc, _, err = run(capsys, "transport", "--witness", str(empty), "--g", "ir")
    assert rc == 2
    assert "no witnesses" in err


# ------------------------------------------------- sampler configuration


def _parsed(*argv):
    return build_parser().parse_args(list(argv))


def test_sampler_defaults(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)
    cfg = _sampler_config(_parsed("search", "--pattern", "p", "--order", "o"))
    assert cfg == SamplerConfig(seed=0, budget=100_000, dist="mixed", max_modulus=1000.0)


def test_sampler_precedence(tmp_path, monkeypatch):
    config = tmp_path / "sampler.cfg"
    config.write_text(
        "# sampler overrides\nseed = 5\nbudget=777\ndist=loguniform\nmax_modulus=50\n",
        encoding="utf-8",
    )
    monkeypatch.delenv(SEED_ENV, raising=False)
    base = ("search", "--pattern", "p", "--order", "o", "--config", str(config))

    cfg = _sampler_config(_parsed(*base))
    assert cfg == SamplerConfig(seed=5, budget=777, dist="loguniform", max_modulus=50.0)

    monkeypatch.setenv(SEED_ENV, "9")
    assert _sampler_config(_parsed(*base)).seed == 9

    cfg = _sampler_config(_parsed(*base, "--seed", "11", "--budget", "123"))
    assert cfg.seed == 11
    assert cfg.budget == 123
    assert cfg.dist == "loguniform"


def test_config_file_errors(tmp_path, capsys):
    bad_key = tmp_path / "bad_key.cfg"
    bad_key.write_text("speed=1\n", encoding="utf-8")
    rc, _, err = run(
        capsys, "search", "--pattern", "++--++-", "--order", "NPPNNP",
        "--config", str(bad_key),
    )
    assert rc == 2
    assert "unknown key 'speed'" in err

    bad_line = tmp_path / "bad_line.cfg"
    bad_line.write_text("seed\n", encoding="utf-8")
    rc, _, err = run(
        capsys, "search", "--pattern", "++--++-", "--order", "NPPNNP",
        "--config", str(bad_line),
    )
    assert rc == 2
    assert "expected key=value" in err


# ------------------------------------------------------------ failures


def test_invalid_pattern_exit_2(capsys):
    rc, _, err = run(capsys, "canonical", "+*-")
    assert rc == 2
    assert err.startswith("error:")


def test_contradiction_maps_to_exit_1(monkeypatch, capsys):
    def boom(degree):
        raise ContradictionError("fabricated disagreement")

    monkeypatch.setattr("hypmoduli.cli.counts_and_ratio", boom)
    rc, _, err = run(capsys, "stats", "--degree", "6")
    assert rc == 1
    assert err.startswith("CONTRADICTION: fabricated disagreement")
