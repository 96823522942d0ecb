"""Acceptance criteria.

Each test prints exactly one ``criterion k: PASS|FAIL ...`` line to the real
stdout (visible under ``pytest -v`` without ``-s``), then asserts.  Tolerances
are exact: counts must match and claim failure counts must be zero.

The expensive ledgers are module-scoped, so criteria 6-8 share one run.
"""
import time

import pytest

from bansync.core import Network, format_network, parse_config, to_bits
from bansync.dynamics import Transition, build_graph
from bansync.impact import Impact, classify_impact, classify_sensitivity
from bansync.search import (
    EnumerationSpec, replay_witness, run, verify_size2_claims, verify_size3_claims, worker_count,
)
from bansync.sequential import normal_transitions

from conftest import CONTREX, CONTREX5, EXFREE

pytestmark = pytest.mark.slow

SIZE4_SAMPLE = 10_000
SIZE4_SEED = 0

PROPERTY_CLAIMS = [
    "lemma1_loops",
    "lemma2_frustrations",
    "prop1_sign_parity",
    "prop2_corollary_total",
    "lemma3_hamiltonian",
    "lemma4_full_size",
    "prop3_prerequisites",
    "impact_coverage",
]
ORACLE_CLAIMS = ["prop2_steps_valid", "prop2_split_sequentialisable", "prop2_blocks_critical"]


@pytest.fixture
def say(capsys):
    """Print past pytest's output capture."""
    def emit(text):
        with capsys.disabled():
            print("\n" + text, flush=True)
    return emit


def report(say, k, ok, detail):
    say(f"criterion {k}: {'PASS' if ok else 'FAIL'} {detail}")
    return ok


def timed(f, *args, **kw):
    t = time.perf_counter()
    out = f(*args, **kw)
    return out, time.perf_counter() - t


@pytest.fixture(scope="module")
def exhaustive():
    """Every monotone network of size 1, 2 and 3, all claims."""
    t = time.perf_counter()
    parts = {n: run(EnumerationSpec(n), worker_count()) for n in (1, 2, 3)}
    return parts, time.perf_counter() - t


@pytest.fixture(scope="module")
def sampled4():
    return timed(run, EnumerationSpec(4, sample=SIZE4_SAMPLE, seed=SIZE4_SEED), worker_count())


@pytest.fixture(scope="module")
def size2():
    return timed(verify_size2_claims, worker_count())


@pytest.fixture(scope="module")
def size3():
    return timed(verify_size3_claims, worker_count())


def _sig_summary(sig, n):
    return sorted((a.kind, sorted(to_bits(z, n) for z in a.configs)) for a in sig.attractors)


def test_criterion_1_exfree(say):
    def go():
        net = Network.from_expressions(EXFREE)
        sig = build_graph(net, "sig")
        normals = [v.transition for v in normal_transitions(net)]
        rep = classify_impact(net, normals[0], sig) if len(normals) == 1 else None
        return net, sig, normals, rep, classify_sensitivity(net, sig=sig)

    (net, sig, normals, rep, sens), dt = timed(go)
    x11 = parse_config("11")
    checks = {
        "attractors": _sig_summary(sig, 2) == [("stable", ["00"]), ("stable", ["01"]), ("stable", ["10"])],
        "11 transient": not sig.is_recurrent(x11),
        "11 edges": {to_bits(z, 2) for z in sig.succ[x11] if z != x11} == {"01", "10"},
        "unique normal": [str(t) for t in normals] == ["11 => 00"],
        "impact F": rep is not None and rep.label is Impact.F,
        "sensitivity": sens.sensitivities == {"F"},
        "runtime": dt < 1.0,
    }
    bad = [k for k, v in checks.items() if not v]
    assert report(say, 1, not bad, f"exfree golden run ({dt:.3f} s){' failed: ' + ', '.join(bad) if bad else ''}")


def test_criterion_2_contrex(say):
    def go():
        net = Network.from_expressions(CONTREX)
        sig = build_graph(net, "sig")
        t = Transition.from_bits("1100", "0000")
        normal = t in {v.transition for v in normal_transitions(net)}
        return sig, normal, classify_impact(net, t, sig), classify_sensitivity(net, sig=sig)

    (sig, normal, rep, sens), dt = timed(go)
    unstable = {z for z in range(16) if (z & 1) or (z & 2)}
    atts = sorted((a.kind, frozenset(a.configs)) for a in sig.attractors)
    checks = {
        "two attractors": atts == [("stable", frozenset({0})), ("unstable", frozenset(unstable))],
        "12 configurations": len(unstable) == 12,
        "1100 => 0000 normal": normal,
        "impact D": rep.label is Impact.D,
        "D-sensitive": "D" in sens.sensitivities,
        "runtime": dt < 1.0,
    }
    bad = [k for k, v in checks.items() if not v]
    assert report(say, 2, not bad, f"size-4 D-impact golden run ({dt:.3f} s){' failed: ' + ', '.join(bad) if bad else ''}")


def test_criterion_3_contrex5(say):
    def go():
        net = Network.from_expressions(CONTREX5)
        return classify_impact(net, Transition.from_bits("11000", "00000"))

    rep, dt = timed(go)
    x = parse_config("11000")
    checks = {
        "impact G": rep.label is Impact.G,
        "x recurrent": rep.x_recurrent,
        "y transient": not rep.y_recurrent,
        "A_a(y) = {att_a(x)}": rep.Aa_y == (rep.sig.attractor_index(x),),
        "runtime": dt < 5.0,
    }
    bad = [k for k, v in checks.items() if not v]
    assert report(say, 3, not bad, f"size-5 G-impact golden run ({dt:.3f} s){' failed: ' + ', '.join(bad) if bad else ''}")


def test_criterion_4_size2(size2, say):
    led, dt = size2
    vs = led.records.get("very_sensitive", [])
    monotone_vs = [r for r in vs if Network(2, tuple(r[0])).structure.is_monotone]
    xor = led.claims["size2_xor_d_sensitive"]
    checks = {
        "256 networks": led.networks == 256,
        "no monotone very sensitive": not monotone_vs and led.claims["size2_monotone_not_very_sensitive"].failures == 0,
        "4 XOR/XNOR D-sensitive": xor.checked == 4 and xor.failures == 0,
        "runtime": dt < 10.0,
    }
    bad = [k for k, v in checks.items() if not v]
    assert report(say, 4, not bad, f"size 2: {led.networks} networks, {len(vs)} very sensitive, "
                              f"{len(monotone_vs)} of them monotone ({dt:.1f} s)"
                              f"{'; failed: ' + ', '.join(bad) if bad else ''}")


def test_criterion_5_size3(size3, say):
    led, dt = size3
    limit = 120.0 if worker_count() >= 8 else 600.0
    cids = ["size3_very_sensitive_is_D", "size3_normal_of_size_2", "size3_caption_instance"]
    failing = [c for c in cids if led.claims[c].failures or not led.claims[c].checked]
    ok = not failing and dt < limit
    assert report(say, 5, ok, f"size 3 monotone: {led.networks} networks, "
                         f"{led.claims['size3_very_sensitive_is_D'].checked} very sensitive, "
                         f"failing {failing or 'none'} ({dt:.1f} s, limit {limit:.0f} s)")


def _replayable(led, cid):
    ws = led.claims[cid].witnesses
    return bool(ws) and all(replay_witness(cid, w) for w in ws[:3])


def test_criterion_6_properties(exhaustive, sampled4, say):
    parts, dt3 = exhaustive
    led4, dt4 = sampled4
    lines = []
    refuted = []
    unreplayable = []
    for cid in PROPERTY_CLAIMS:
        checked = sum(p.claims[cid].checked for p in parts.values() if cid in p.claims)
        fails = sum(p.claims[cid].failures for p in parts.values() if cid in p.claims)
        c4 = led4.claims.get(cid)
        lines.append(f"{cid}: {fails}/{checked} exhaustive, "
                     f"{c4.failures if c4 else 0}/{c4.checked if c4 else 0} sampled")
        if checked == 0:
            refuted.append(f"{cid} (never checked)")
        if fails or (c4 and c4.failures):
            refuted.append(cid)
            src = next((p for p in parts.values() if cid in p.claims and p.claims[cid].failures), led4)
            if not _replayable(src, cid):
                unreplayable.append(cid)
            w = src.claims[cid].witnesses[0]
            lines.append(f"  witness ({w['detail']}):\n" + "\n".join(
                "    " + ln for ln in format_network(Network(w["n"], tuple(w["tables"]))).splitlines()))
    dt = dt3 + dt4
    say("\n".join(lines))
    ok = not refuted and dt < 900
    assert report(say, 6, ok, f"property suite over {sum(p.networks for p in parts.values())} exhaustive "
                         f"+ {led4.networks} sampled size-4 networks (seed {SIZE4_SEED}); "
                         f"refuted {refuted or 'none'}; witnesses replay: {not unreplayable} "
                         f"({dt:.0f} s)")


def test_criterion_7_oracle_equivalence(exhaustive, say):
    parts, _ = exhaustive
    tallies = {cid: (sum(p.claims[cid].checked for p in parts.values() if cid in p.claims),
                     sum(p.claims[cid].failures for p in parts.values() if cid in p.claims))
               for cid in ORACLE_CLAIMS}
    bad = [cid for cid, (checked, fails) in tallies.items() if fails or not checked]
    assert report(say, 7, not bad, "decomposition vs search on all synchronous transitions, monotone n <= 3: "
                  + ", ".join(f"{cid} {f}/{c}" for cid, (c, f) in tallies.items()))


def test_criterion_8_conservation(size2, exhaustive, sampled4, say):
    # criterion 5 classifies a subset of the exhaustive size-3 networks, already
    # covered with full impact checks by the exhaustive run
    ledgers = [size2[0], *exhaustive[0].values(), sampled4[0]]
    checked = sum(l.claims["conservation"].checked for l in ledgers if "conservation" in l.claims)
    fails = sum(l.claims["conservation"].failures for l in ledgers if "conservation" in l.claims)
    ok = checked > 0 and fails == 0
    assert report(say, 8, ok, f"conservation over {checked} classified normal transitions, {fails} violations")
