"""Command-line front end.

JSON goes to stdout (or to the file named by --json); a one-line summary
goes to stderr. Exit status: 0 when the outcome is the expected one, 1 when
a protocol run came out otherwise, 2 on usage errors.
"""

import argparse
import json
import random
import sys

from . import codec
from .attacks import ATTACKS, HonestProver, run_attack
from .cke import (
    FAILED, REWIND_CAP, RELATIONS, STRATEGIES, AbortingVerifier, CoverageFailure, HonestVerifier,
    break_csk, czk_simulate, extract_all, kei_estimate, s_key, s_proof,
)
from .group import PRESETS, GroupParams, SearchExhausted, generate_params
from .protocol import DlogClaim, Variant, keygen, stage1_sigma
from .runtime import Execution, RunRecord
from .sigma import DEFAULT_CHALLENGE_BITS, CommitOpen, Schnorr, shvzk_exact, wi_exact

EXIT_OK, EXIT_UNEXPECTED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def load_params(spec):
    if spec in PRESETS:
        return PRESETS[spec]
    try:
        with open(spec) as fh:
            params = GroupParams.from_dict(json.load(fh))
        params.validate()
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"--params: not a preset or valid params file: {spec} ({exc})")
    return params


def _emit(args, doc, summary):
    text = json.dumps(doc, indent=2, sort_keys=True)
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(summary, file=sys.stderr)


def cmd_params_gen(args):
    try:
        params = generate_params(args.bits, args.seed)
    except SearchExhausted as exc:
        raise UsageError(str(exc))
    _emit(args, params.to_dict(), f"p has {params.bits} bits, q = {params.q}")
    return EXIT_OK


def cmd_keygen(args):
    params = load_params(args.params)
    kp = keygen(params, random.Random(f"{args.seed}/keygen"))
    doc = {"params": params.to_dict(), "pk": codec.pack(kp.pk),
           "sk": {"s": codec.pack(kp.sk[0]), "b": kp.b}}
    _emit(args, doc, f"pk = ({kp.pk[0]}, {kp.pk[1]})")
    return EXIT_OK


def _honest_record(args, params, snapshots=False):
    kp = keygen(params, random.Random(f"{args.seed}/keygen"))
    ex = Execution(HonestProver(count=args.sessions), params=params, variant=args.variant,
                   keypair=kp, seed=args.seed, session_cap=max(16, args.sessions),
                   challenge_bits=args.k, snapshots=snapshots)
    return kp, ex.run()


def cmd_demo_honest(args):
    params = load_params(args.params)
    _, record = _honest_record(args, params)
    ok = len(record.accepted()) == args.sessions
    _emit(args, record.to_json(),
          f"{args.variant}: {len(record.accepted())}/{args.sessions} sessions accepted")
    return EXIT_OK if ok else EXIT_UNEXPECTED


def cmd_attack_run(args):
    params = load_params(args.params)
    outcome = run_attack(args.variant, params, args.seed, challenge_bits=args.k)
    status = "accepted" if outcome.succeeded else "rejected"
    _emit(args, outcome.to_json(),
          f"{args.variant} on {outcome.target.value}: target session {status}")
    return EXIT_OK if outcome.expected else EXIT_UNEXPECTED


def cmd_run(args):
    params = load_params(args.params)
    keys = s_key(params, random.Random(f"{args.seed}/keys"))
    strategy = STRATEGIES[args.strategy](params, keys, random.Random(f"{args.seed}/strategy"))
    ex = Execution(strategy, params=params, variant=args.variant, keypair=keys.keypair,
                   seed=args.seed, challenge_bits=args.k)
    record = ex.run()
    _emit(args, record.to_json(), f"{len(record.accepted())}/{len(record.sessions)} accepted")
    return EXIT_OK


def cmd_verify(args):
    with open(args.record) as fh:
        doc = json.load(fh)
    record = RunRecord.from_json(doc.get("record", doc))
    recorded = {s["sid"]: s["status"] for s in record.sessions}
    replayed = record.reverify()
    ok = recorded == replayed
    _emit(args, {"recorded": recorded, "replayed": replayed, "match": ok},
          "statuses reproduce" if ok else "status mismatch")
    return EXIT_OK if ok else EXIT_UNEXPECTED


def cmd_cke_run(args):
    params = load_params(args.params)
    stats = kei_estimate(args.variant, args.strategy, args.relation, args.trials, args.seed,
                         params=params, challenge_bits=args.k, rewind_cap=args.rewind_cap,
                         keep_runs=True)
    trials = []
    failed = 0
    for keys, record, report in stats.runs:
        sessions = []
        for s in report.sessions:
            row = s.to_json()
            if s.case in ("Case1", "Case2") and record.view(s.sid).c_sk is not None:
                row["break_csk"] = codec.pack(break_csk(record, s.sid))
            failed += s.case == FAILED
            sessions.append(row)
        trials.append({"seed": record.seed, "b": keys.b, "sessions": sessions})
    doc = {"variant": args.variant, "strategy": args.strategy, "relation": args.relation,
           "params": params.to_dict(), "kei": stats.to_json(), "trials": trials}
    _emit(args, doc, f"Pr[R(sk)]={stats.p_sk:.3f} Pr[R(sk')]={stats.p_sk_prime:.3f} "
                     f"gap={stats.gap:.3f} cases={dict(stats.cases)}")
    return EXIT_OK if failed == 0 else EXIT_UNEXPECTED


def cmd_extract_demo(args):
    params = load_params(args.params)
    keys = s_key(params, random.Random(f"{args.seed}/keys"))
    strategy = HonestProver(count=args.sessions)
    record = s_proof(keys, strategy, args.seed, params=params, variant=args.variant,
                     challenge_bits=args.k, session_cap=max(16, args.sessions))
    report = extract_all(record, keys, args.rewind_cap)
    checks = []
    for s, w in zip(report.sessions, strategy.witnesses):
        checks.append(s.accepted and s.case == "Case3" and s.witness == w)
    ok = all(checks)
    doc = {"record": record.to_json(), "extraction": report.to_json(),
           "witnesses_match": checks}
    _emit(args, doc, f"{sum(checks)}/{len(checks)} witnesses extracted")
    return EXIT_OK if ok else EXIT_UNEXPECTED


def wi_report(params, k=DEFAULT_CHALLENGE_BITS):
    """Exact multiset checks on a small group: SHVZK of the leaf proofs, WI of stage 1."""
    schnorr = Schnorr(params, k)
    w = 3 % params.q
    x = params.gexp(w)
    co = CommitOpen(params, k)
    cw, cr = 5 % params.q, 2 % params.q
    h = params.gexp(3)
    co_st = (params.gexp(cw), h, params.gexp(cr), params.mul(params.gexp(cw), params.exp(h, cr)))
    s0, s1 = 3 % params.q, 5 % params.q
    pk = (params.gexp(s0), params.gexp(s1))
    s1_spec = stage1_sigma(params, k)
    parts = {
        "schnorr_shvzk": shvzk_exact(schnorr, x, w),
        "commit_open_shvzk": shvzk_exact(co, co_st, (cw, cr)),
        "stage1_wi": wi_exact(s1_spec, pk, (0, s0), (1, s1)),
        "stage1_shvzk": shvzk_exact(s1_spec, pk, (0, s0)),
    }
    doc = {name: {"challenges": len(res), "multisets_equal": all(res.values())}
           for name, res in parts.items()}
    doc["multisets equal"] = all(d["multisets_equal"] for d in doc.values())
    doc["params"] = params.to_dict()
    return doc


def cmd_wi_enumerate(args):
    params = load_params(args.params)
    if params.q > 1 << 10:
        raise UsageError("exhaustive enumeration is only meant for tiny groups (use --params toy)")
    doc = wi_report(params, args.k)
    _emit(args, doc, f"multisets equal: {str(doc['multisets equal']).lower()}")
    return EXIT_OK if doc["multisets equal"] else EXIT_UNEXPECTED


def cmd_czk_simulate(args):
    params = load_params(args.params)
    kp = keygen(params, random.Random(f"{args.seed}/keygen"))
    rng = random.Random(f"{args.seed}/claims")
    claims = [DlogClaim(params.gexp(params.random_scalar(rng))) for _ in range(args.sessions)]
    cls = AbortingVerifier if args.verifier == "aborting" else HonestVerifier
    verifier = cls(Variant.FULL, params, kp, seed=args.seed, challenge_bits=args.k)
    try:
        view = czk_simulate(params, kp.pk, claims, verifier, rewind_cap=args.rewind_cap,
                            seed=args.seed, challenge_bits=args.k)
    except CoverageFailure as exc:
        _emit(args, {"error": "coverage-failure", "detail": str(exc)}, str(exc))
        return EXIT_UNEXPECTED
    replayed = view.reverify()
    doc = {"params": params.to_dict(), "pk": codec.pack(kp.pk), "phases": view.phases,
           "key_covered": view.key is not None, "rewinds": view.rewinds,
           "statuses": view.statuses, "replayed": replayed,
           "trace": [dict(dir=d, **m.to_dict()) for d, m in view.trace]}
    expected = "Accepted" if args.verifier == "honest" else "Open"
    ok = all(v == expected for v in replayed.values())
    _emit(args, doc, f"{sum(v == 'Accepted' for v in replayed.values())}/{len(claims)} "
                     f"simulated sessions accepted, {view.phases} phase(s)")
    return EXIT_OK if ok else EXIT_UNEXPECTED


def build_parser():
    variants = [v.value for v in Variant]
    ap = argparse.ArgumentParser(prog="czkcke", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, params="toy", seed=True):
        p.add_argument("--params", default=params, help="preset name (toy, demo) or JSON file")
        if seed:
            p.add_argument("--seed", default="1")
        p.add_argument("--k", type=int, default=DEFAULT_CHALLENGE_BITS,
                       help="requested challenge bits (clipped so 2^k < q)")
        p.add_argument("--json", metavar="PATH", help="write JSON here instead of stdout")

    pg = sub.add_parser("params", help="group parameters").add_subparsers(dest="action", required=True)
    p = pg.add_parser("gen", help="search for a safe-prime group")
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--seed", default=None)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_params_gen)

    p = sub.add_parser("keygen", help="verifier key pair")
    common(p)
    p.set_defaults(func=cmd_keygen)

    dg = sub.add_parser("demo", help="honest protocol runs").add_subparsers(dest="action", required=True)
    p = dg.add_parser("honest", help="honest prover against the honest verifier")
    common(p)
    p.add_argument("--variant", choices=variants, default="full")
    p.add_argument("--sessions", type=int, default=1)
    p.set_defaults(func=cmd_demo_honest)

    ag = sub.add_parser("attack", help="attacks on weakened variants").add_subparsers(dest="action", required=True)
    p = ag.add_parser("run", help="man-in-the-middle attack on its target variant")
    common(p)
    p.add_argument("--variant", choices=sorted(ATTACKS), required=True)
    p.set_defaults(func=cmd_attack_run)

    cg = sub.add_parser("cke", help="concurrent knowledge extraction").add_subparsers(dest="action", required=True)
    p = cg.add_parser("run", help="knowledge-extraction experiment with KEI statistics")
    common(p, params="demo")
    p.add_argument("--variant", choices=variants, required=True)
    p.add_argument("--strategy", choices=sorted(STRATEGIES), required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--relation", choices=sorted(RELATIONS), default="key-preimage")
    p.add_argument("--rewind-cap", type=int, default=REWIND_CAP)
    p.set_defaults(func=cmd_cke_run)

    wg = sub.add_parser("wi", help="witness indistinguishability checks").add_subparsers(dest="action", required=True)
    p = wg.add_parser("enumerate", help="exact transcript-multiset checks on a tiny group")
    common(p, seed=False)
    p.set_defaults(func=cmd_wi_enumerate)

    eg = sub.add_parser("extract", help="rewinding extraction").add_subparsers(dest="action", required=True)
    p = eg.add_parser("demo", help="honest run, then rewinding extraction of every witness")
    common(p)
    p.add_argument("--variant", choices=variants, default="full")
    p.add_argument("--sessions", type=int, default=3)
    p.add_argument("--rewind-cap", type=int, default=REWIND_CAP)
    p.set_defaults(func=cmd_extract_demo)

    zg = sub.add_parser("czk", help="zero-knowledge simulator").add_subparsers(dest="action", required=True)
    p = zg.add_parser("simulate", help="witness-free simulation against a verifier strategy")
    common(p)
    p.add_argument("--sessions", type=int, default=2)
    p.add_argument("--verifier", choices=["honest", "aborting"], default="honest")
    p.add_argument("--rewind-cap", type=int, default=REWIND_CAP)
    p.set_defaults(func=cmd_czk_simulate)

    p = sub.add_parser("run", help="one execution with a named prover strategy")
    common(p)
    p.add_argument("--strategy", choices=sorted(STRATEGIES), required=True)
    p.add_argument("--variant", choices=variants, default="full")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="re-verify every session of a saved run record")
    p.add_argument("record", help="JSON from run / demo honest / attack run")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("trials", "sessions", "rewind_cap"):
        if getattr(args, name, 1) < 1:
            parser.error(f"--{name.replace('_', '-')} must be at least 1")
    if getattr(args, "k", 1) < 1:
        parser.error("--k must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"czkcke: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
