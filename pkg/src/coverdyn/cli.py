"""Command-line interface.

Subcommands: homology, entropy, spectral, fiber, verdict, audit.
Scenarios come from --scenario FILE or --builtin NAME.  Exit codes:
0 = satisfied/complete, 2 = violated, 3 = inconclusive, 1 = error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .entropy import entropy_estimate
from .errors import CoverdynError
from .fiber import build_fiber_nerve, embed_cech_chains, intersection_axiom_audit
from .induced import eigen_sup_chain
from .nerve import build_nerve, duality_audit, homology_table, purity_audit
from .scenarios import Scenario, builtin_names, builtin_scenario, load_scenario
from .verdict import (
    INCONCLUSIVE,
    SATISFIED,
    STRUCTURED,
    TABULAR,
    VIOLATED,
    emit_report,
    resolve_spectral,
    run_verdict,
)

_COMMANDS = {
    "homology": "homology of every cover's nerve (and any raw complex)",
    "entropy": "entropy of iterated joins per cover",
    "spectral": "induced map on homology and its spectral radius",
    "fiber": "fiber nerves, fiber homology and the chain embedding check",
    "verdict": "full pipeline and the entropy-inequality verdict",
    "audit": "duality, purity, chain-embedding, eigen-sup and fiber-axiom audits",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coverdyn",
        description="cover-based homology and entropy for finite dynamical models",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in _COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--scenario", metavar="PATH", help="scenario JSON file")
        src.add_argument(
            "--builtin",
            metavar="NAME",
            help=f"builtin scenario ({', '.join(builtin_names())}; e.g. shift:k=2)",
        )
        sp.add_argument(
            "--format",
            choices=(STRUCTURED, TABULAR),
            default=STRUCTURED,
            help="output format (default structured)",
        )
        sp.add_argument("--nmax", type=int, help="override analysis.n_max")
        sp.add_argument("--window", type=int, help="override the fiber window")
        sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    return parser


def _load(args) -> Scenario:
    s = load_scenario(args.scenario) if args.scenario else builtin_scenario(args.builtin)
    analysis = s.analysis
    if args.nmax is not None:
        analysis = replace(analysis, n_max=args.nmax)
    if args.window is not None:
        analysis = replace(analysis, window=args.window)
    return replace(s, analysis=analysis)


def _groups_payload(groups) -> list:
    return [
        {"dim": p, "rank": g.rank, "torsion": list(g.torsion)} for p, g in enumerate(groups)
    ]


def _json_bytes(payload) -> bytes:
    return (json.dumps(payload, indent=2) + "\n").encode()


def _tsv(header, rows) -> bytes:
    lines = ["\t".join(header)]
    lines += ["\t".join(str(c) for c in row) for row in rows]
    return ("\n".join(lines) + "\n").encode()


def _cmd_homology(s: Scenario, fmt: str) -> bytes:
    covers = []
    rows = []
    for name, c in s.covers:
        k = build_nerve(c)
        table = homology_table(k)
        covers.append(
            {
                "cover": name,
                "simplices": [len(level) for level in k.simplices],
                "homology": _groups_payload(table),
            }
        )
        rows += [(name, p, g.rank, ",".join(map(str, g.torsion))) for p, g in enumerate(table)]
    payload = {"scenario": s.name, "covers": covers}
    if s.complex is not None:
        table = homology_table(s.complex)
        payload["complex"] = {
            "simplices": [len(level) for level in s.complex.simplices],
            "homology": _groups_payload(table),
        }
        rows += [("(complex)", p, g.rank, ",".join(map(str, g.torsion))) for p, g in enumerate(table)]
    if fmt == TABULAR:
        return _tsv(("cover", "dim", "rank", "torsion"), rows)
    return _json_bytes(payload)


def _cmd_entropy(s: Scenario, fmt: str) -> bytes:
    out = []
    for name, c in s.covers:
        seq = entropy_estimate(
            s.model, c, s.analysis.n_max, exact_limit=s.analysis.exact_limit
        )
        out.append((name, seq))
    if fmt == TABULAR:
        rows = [
            (
                name,
                f"{seq.estimate:.6f}",
                seq.stabilized_at if seq.stabilized_at is not None else "-",
                seq.truncated,
                ",".join(str(n) for n in seq.subcover_sizes),
            )
            for name, seq in out
        ]
        return _tsv(("cover", "estimate", "stabilized_at", "truncated", "subcover_sizes"), rows)
    payload = {
        "scenario": s.name,
        "covers": [
            {
                "cover": name,
                "h_values": list(seq.h_values),
                "subcover_sizes": list(seq.subcover_sizes),
                "estimate": seq.estimate,
                "stabilized_at": seq.stabilized_at,
                "truncated": seq.truncated,
            }
            for name, seq in out
        ],
        "sup": max(seq.estimate for _, seq in out),
    }
    return _json_bytes(payload)


def _cmd_spectral(s: Scenario, fmt: str) -> bytes:
    res = resolve_spectral(s.model, s.primary_cover)
    if fmt == TABULAR:
        rows = [
            (
                s.name,
                res.route,
                res.refinements,
                f"{res.summary.rho:.6f}",
                f"{res.summary.log_rho:.6f}",
                ",".join(map(str, res.summary.char_poly)),
            )
        ]
        return _tsv(("scenario", "route", "refinements", "rho", "log_rho", "char_poly"), rows)
    payload = {
        "scenario": s.name,
        "route": res.route,
        "refinements": res.refinements,
        "char_poly": list(res.summary.char_poly),
        "char_polys_per_dim": [list(p) for p in res.summary.char_polys],
        "rho": res.summary.rho,
        "log_rho": res.summary.log_rho,
        "eigen_moduli": list(res.summary.eigen_moduli),
        "note": res.note,
    }
    return _json_bytes(payload)


def _cmd_fiber(s: Scenario, fmt: str) -> bytes:
    window = s.analysis.window
    covers = []
    rows = []
    for name, c in s.covers:
        k = build_nerve(c)
        fn = build_fiber_nerve(c, s.model, window)
        table = tuple(homology_table(fn)) if fn.size(0) else ()
        emb = embed_cech_chains(k, fn)
        covers.append(
            {
                "cover": name,
                "window": window,
                "nerve_sizes": list(emb.nerve_sizes),
                "fiber_sizes": list(emb.fiber_sizes),
                "fiber_homology": _groups_payload(table),
                "embedding": {
                    "forward_holds": emb.forward_holds,
                    "forward_counterexamples": [list(v) for v in emb.forward_counterexamples],
                    "reverse_holds": emb.reverse_holds,
                    "reverse_counterexamples": [list(v) for v in emb.reverse_counterexamples],
                },
            }
        )
        rows.append(
            (
                name,
                window,
                ",".join(map(str, emb.nerve_sizes)),
                ",".join(map(str, emb.fiber_sizes)),
                emb.forward_holds,
                emb.reverse_holds,
            )
        )
    if fmt == TABULAR:
        return _tsv(
            ("cover", "window", "nerve_sizes", "fiber_sizes", "forward_holds", "reverse_holds"),
            rows,
        )
    return _json_bytes({"scenario": s.name, "covers": covers})


def _cmd_audit(s: Scenario, fmt: str) -> bytes:
    k = build_nerve(s.primary_cover)
    dual = duality_audit(k)
    pure = purity_audit(k)
    fn = build_fiber_nerve(s.primary_cover, s.model, s.analysis.window)
    emb = embed_cech_chains(k, fn)
    res = resolve_spectral(s.model, s.primary_cover)
    chain = eigen_sup_chain(res.lemma19_map)
    sets = s.primary_cover.sets
    axiom_pairs = 0
    axiom_holding = 0
    mismatched = []
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            rep = intersection_axiom_audit(s.model, sets[i], sets[j], s.analysis.window)
            axiom_pairs += 1
            if rep.holds:
                axiom_holding += 1
            else:
                mismatched.append([s.primary_cover.names[i], s.primary_cover.names[j]])
    payload = {
        "scenario": s.name,
        "duality": {
            "holds": dual.holds,
            "rows": [
                {
                    "dim": r.p,
                    "homology": {"rank": r.homology.rank, "torsion": list(r.homology.torsion)},
                    "dual_cohomology": {
                        "rank": r.cohomology_dual.rank,
                        "torsion": list(r.cohomology_dual.torsion),
                    },
                    "holds": r.holds,
                }
                for r in dual.rows
            ],
        },
        "purity": {
            "holds": pure.holds,
            "failing": [list(x.vertices) for x in pure.failing],
        },
        "chain_embedding": {
            "window": fn.window,
            "forward_holds": emb.forward_holds,
            "forward_counterexamples": [list(v) for v in emb.forward_counterexamples],
            "reverse_holds": emb.reverse_holds,
        },
        "eigen_sup": {
            "supH": chain.sup_h,
            "supZ": chain.sup_z,
            "supC": chain.sup_c,
            "holds": chain.holds,
            "divisibility_ok": chain.divisibility_ok,
        },
        "fiber_axiom": {
            "pairs": axiom_pairs,
            "holding": axiom_holding,
            "mismatched_pairs": mismatched,
        },
    }
    if s.complex is not None:
        cdual = duality_audit(s.complex)
        cpure = purity_audit(s.complex)
        payload["complex"] = {
            "duality_holds": cdual.holds,
            "purity_holds": cpure.holds,
            "homology": _groups_payload(homology_table(s.complex)),
        }
    if fmt == TABULAR:
        rows = [
            ("duality", dual.holds, ""),
            ("purity", pure.holds, f"{len(pure.failing)} failing"),
            ("chain_embedding_forward", emb.forward_holds, f"{len(emb.forward_counterexamples)} missing"),
            ("chain_embedding_reverse", emb.reverse_holds, ""),
            ("eigen_sup", chain.holds, f"{chain.sup_h:.6f}<={chain.sup_z:.6f}<={chain.sup_c:.6f}"),
            ("fiber_axiom", axiom_holding == axiom_pairs, f"{axiom_holding}/{axiom_pairs} pairs"),
        ]
        if s.complex is not None:
            rows.append(("complex_duality", payload["complex"]["duality_holds"], ""))
            rows.append(("complex_purity", payload["complex"]["purity_holds"], ""))
        return _tsv(("audit", "holds", "detail"), rows)
    return _json_bytes(payload)


def _write(data: bytes, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = _load(args)
        if args.command == "verdict":
            report = run_verdict(scenario)
            _write(emit_report(report, args.format), args.out)
            return {SATISFIED: 0, VIOLATED: 2, INCONCLUSIVE: 3}[report.verdict]
        handler = {
            "homology": _cmd_homology,
            "entropy": _cmd_entropy,
            "spectral": _cmd_spectral,
            "fiber": _cmd_fiber,
            "audit": _cmd_audit,
        }[args.command]
        _write(handler(scenario, args.format), args.out)
        return 0
    except CoverdynError as exc:
        print(f"coverdyn: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"coverdyn: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
