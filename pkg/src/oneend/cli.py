"""Batch command-line front-end.

One binary with subcommands; all reports are emitted as JSON (sorted keys,
fixed layout) so identical inputs and configuration produce byte-identical
output.  Exit codes: 0 success, 2 validation error, 3 search exhaustion,
4 cap exceeded.
"""

import argparse
import json
import os
import sys

from .errors import CapExceeded, SearchExhausted
from .words import Basis, WordError, make_peripheral_structure
from . import stallings, whitehead, gog, covers, order


class Config:
    def __init__(self, rank_cap=4, degree_cap=5040, search_degree_max=8, seed=0, fmt="json"):
        if rank_cap <= 0 or degree_cap <= 0 or search_degree_max <= 0:
            raise WordError("caps must be positive")
        self.rank_cap = rank_cap
        self.degree_cap = degree_cap
        self.search_degree_max = search_degree_max
        self.seed = seed
        self.fmt = fmt

    def header(self):
        return {
            "rank_cap": self.rank_cap,
            "degree_cap": self.degree_cap,
            "search_degree_max": self.search_degree_max,
            "seed": self.seed,
        }


def _infer_basis(words, rank=None):
    used = set()
    for w in words:
        for ch in w:
            if ch.isalpha():
                used.add(ch.lower())
    if not used and rank is None:
        raise WordError("cannot infer a basis from empty input; pass --rank")
    need = max((ord(c) - ord("a") + 1 for c in used), default=1)
    if rank is not None:
        if rank < need:
            raise WordError("rank %d too small for the letters used" % rank)
        return Basis(rank)
    return Basis(need)


def _emit(report, cfg, out=None):
    if out is None:
        out = sys.stdout
    if cfg.fmt == "json":
        out.write(json.dumps(report, sort_keys=True, indent=2))
        out.write("\n")
    elif cfg.fmt == "dot":
        out.write(report.get("dot", "") + "\n")
    else:
        _emit_text(report, out)


def _emit_text(report, out, prefix=""):
    for k in sorted(report):
        v = report[k]
        if isinstance(v, dict):
            out.write("%s%s:\n" % (prefix, k))
            _emit_text(v, out, prefix + "  ")
        else:
            out.write("%s%s: %s\n" % (prefix, k, v))


def cmd_minimize(args, cfg):
    if not args.words or any(not w for w in args.words):
        raise WordError("minimize needs nonempty words")
    basis = _infer_basis(args.words, args.rank)
    ws = [basis.parse(w) for w in args.words]
    ws_min, moves = whitehead.minimize(basis, ws, rank_cap=cfg.rank_cap)
    return {
        "config": cfg.header(),
        "input": [basis.format(w) for w in ws],
        "minimal": [basis.format(w) for w in ws_min],
        "total_length": whitehead.total_length(ws_min),
        "moves": [m.to_json(basis) for m in moves],
    }


def cmd_whitehead_graph(args, cfg):
    basis = _infer_basis(args.words, args.rank)
    g = whitehead.whitehead_graph(basis, args.words)
    report = whitehead.connectivity_report(g)
    return {
        "config": cfg.header(),
        "words": list(args.words),
        "edges": [[g.letter_name(u), g.letter_name(v)] for u, v in g.edges],
        "degrees": {g.letter_name(v): g.degree(v) for v in g.vertices},
        "connectivity": report.to_json(),
        "dot": g.to_dot(),
    }


def cmd_classify(args, cfg):
    if not args.words:
        raise WordError("classify needs words")
    basis = _infer_basis(args.words, args.rank)
    cls = whitehead.classify_pair(basis, args.words, rank_cap=cfg.rank_cap)
    report = {"config": cfg.header(), "words": list(args.words)}
    report.update(cls.to_json(basis))
    return report


def cmd_clean_cover(args, cfg):
    if not args.words:
        raise WordError("clean-cover needs words")
    basis = _infer_basis(args.words, args.rank)
    ws = [basis.parse(w) for w in args.words]
    cover = stallings.clean_subgroup(ws, within=stallings.rose(basis), degree_cap=cfg.degree_cap)
    return {
        "config": cfg.header(),
        "words": list(args.words),
        "cover": cover.to_json(),
        "degree": cover.degree,
        "clean": stallings.is_clean(cover, ws),
        "dot": cover.to_dot("clean_cover") if cover.degree <= 64 else None,
    }


def _load_cover(path):
    with open(path) as fh:
        data = json.load(fh)
    if "cover" in data:
        data = data["cover"]
    return stallings.CoverGraph.from_json(data)


def cmd_pullback(args, cfg):
    cover = _load_cover(args.cover)
    basis = cover.basis
    ps = make_peripheral_structure(basis, args.words)
    pull = stallings.pullback_structure(cover, ps)
    sub = cover.sub_basis()
    return {
        "config": cfg.header(),
        "words": list(args.words),
        "degree": cover.degree,
        "subgroup_rank": cover.subgroup_rank(),
        "classes": [list(rep.word) for rep in pull.classes()],
        "class_count": len(pull),
        "orbit_degrees": {
            basis.format(rep.word): sorted(
                ev.degree for ev in stallings.elevations(cover, rep.word)
            )
            for rep in ps.classes()
        },
    }


def cmd_splice_check(args, cfg):
    cover = _load_cover(args.cover)
    basis = cover.basis
    ws = [basis.parse(w) for w in args.words]
    spliced = whitehead.spliced_pullback_graph(cover, ws)
    direct_words = [
        ev.local_word() for w in ws for ev in stallings.elevations(cover, w)
    ]
    direct = whitehead.whitehead_graph(cover.sub_basis(), direct_words)
    equal = spliced.edge_multiset() == direct.edge_multiset()
    iso = equal or whitehead.multigraph_isomorphic(spliced, direct)
    return {
        "config": cfg.header(),
        "words": list(args.words),
        "degree": cover.degree,
        "spliced_edges": len(spliced.edges),
        "direct_edges": len(direct.edges),
        "equal_as_labeled_multigraphs": equal,
        "isomorphic": iso,
    }


def _load_gog(path):
    with open(path) as fh:
        data = json.load(fh)
    return gog.GraphOfGroups.from_json(data)


def cmd_one_ended(args, cfg):
    g = _load_gog(args.gog_file)
    problems = gog.validate(g)
    if problems:
        raise WordError("; ".join(problems))
    ok, witnesses = gog.is_one_ended(g, rank_cap=cfg.rank_cap)
    wit_json = {}
    for v, w in witnesses.items():
        entry = {k: val for k, val in w.items() if k != "witness"}
        inner = w.get("witness", {})
        if "partition" in inner:
            entry["partition"] = [list(s) for s in inner["partition"]]
        if "shortcut" in inner:
            entry["shortcut"] = inner["shortcut"]
        wit_json[v] = entry
    return {"config": cfg.header(), "one_ended": ok, "vertices": wit_json}


def cmd_build(args, cfg):
    g = _load_gog(args.gog_file)
    res = covers.build_one_ended_subgroup(
        g,
        args.vertex,
        rank_cap=cfg.rank_cap,
        degree_cap=cfg.degree_cap,
        search_degree_max=cfg.search_degree_max,
        assume_rigid=args.assume_rigid,
    )
    report = {"config": cfg.header()}
    report.update(res.to_json())
    if not args.full:
        # headline numbers only; the pre-cover and certificates can be huge
        report["precover"] = {"omitted": True, "copies": res.stats["copies"]}
        report["certificates"] = [c.kind for c in res.certificates]
        report["presentation"] = {
            "generators": len(res.presentation.generators),
            "relators": len(res.presentation.relators),
            "euler_characteristic": res.presentation.euler_characteristic(),
        }
        report["embedding"] = {"omitted": True}
    return report


def _load_marked(path):
    with open(path) as fh:
        data = json.load(fh)
    return order.MarkedSubgroup.from_json(data)


def cmd_compare(args, cfg):
    A = _load_marked(args.file_a)
    B = _load_marked(args.file_b)
    verdict = order.compare(A, B, up_to_conjugacy=args.up_to_conjugacy)
    return {
        "config": cfg.header(),
        "verdict": verdict,
        "a": {"rank": A.rank(), "classes": len(A.structure)},
        "b": {"rank": B.rank(), "classes": len(B.structure)},
    }


def cmd_descend(args, cfg):
    A = _load_marked(args.file)
    res = order.descend(A, rank_cap=cfg.rank_cap, degree_cap=cfg.degree_cap)
    report = {"config": cfg.header()}
    report.update(res.to_json())
    if res.smaller is not None and not args.full:
        report["smaller"] = {
            "rank": res.smaller.rank(),
            "classes": len(res.smaller.structure),
        }
    return report


def _add_common(parser, default=None):
    parser.add_argument("--rank-cap", type=int, default=default)
    parser.add_argument("--degree-cap", type=int, default=default)
    parser.add_argument("--search-degree-max", type=int, default=default)
    parser.add_argument("--seed", type=int, default=default, help="overridden by ONEEND_SEED")
    parser.add_argument("--format", choices=("json", "text", "dot"), default=default)
    parser.add_argument(
        "--threads", type=int, default=default, help="accepted; results do not depend on it"
    )


def make_parser():
    p = argparse.ArgumentParser(
        prog="oneend",
        description="Whitehead graphs, Stallings covers and one-ended subgroups "
        "of graphs of free groups with cyclic edge groups.",
    )
    _add_common(p)
    # the same flags are accepted after the subcommand and win when given
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, default=argparse.SUPPRESS)
    sub = p.add_subparsers(
        dest="command",
        required=True,
        parser_class=lambda **kw: argparse.ArgumentParser(parents=[common], **kw),
    )

    sp = sub.add_parser("minimize", help="Whitehead-minimize a multiword")
    sp.add_argument("words", nargs="*")
    sp.add_argument("--rank", type=int, default=None)
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("whitehead-graph", help="Whitehead graph and cut report (DOT)")
    sp.add_argument("words", nargs="+")
    sp.add_argument("--rank", type=int, default=None)
    sp.set_defaults(func=cmd_whitehead_graph, default_format="dot")

    sp = sub.add_parser("classify", help="classify a pair: decomposable/surface/rigid")
    sp.add_argument("words", nargs="*")
    sp.add_argument("--rank", type=int, default=None)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("clean-cover", help="clean finite-index regular cover")
    sp.add_argument("words", nargs="*")
    sp.add_argument("--rank", type=int, default=None)
    sp.set_defaults(func=cmd_clean_cover)

    sp = sub.add_parser("pullback", help="pullback peripheral structure to a cover")
    sp.add_argument("--cover", required=True, help="cover JSON file")
    sp.add_argument("words", nargs="+")
    sp.set_defaults(func=cmd_pullback)

    sp = sub.add_parser("splice-check", help="compare spliced and direct pullback graphs")
    sp.add_argument("--cover", required=True, help="cover JSON file")
    sp.add_argument("words", nargs="+")
    sp.set_defaults(func=cmd_splice_check)

    sp = sub.add_parser("one-ended", help="Shenitzer-variant one-endedness test")
    sp.add_argument("gog_file")
    sp.set_defaults(func=cmd_one_ended)

    sp = sub.add_parser("build", help="construct a one-ended infinite-index subgroup")
    sp.add_argument("gog_file")
    sp.add_argument("--vertex", required=True)
    sp.add_argument("--assume-rigid", action="store_true")
    sp.add_argument("--full", action="store_true", help="emit the full pre-cover bundle")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("compare", help="compare two marked subgroups")
    sp.add_argument("file_a")
    sp.add_argument("file_b")
    sp.add_argument("--up-to-conjugacy", action="store_true")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("descend", help="one descent step in the commensurability poset")
    sp.add_argument("file")
    sp.add_argument("--full", action="store_true")
    sp.set_defaults(func=cmd_descend)
    return p


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    seed = args.seed
    env_seed = os.environ.get("ONEEND_SEED")
    if env_seed is not None:
        seed = int(env_seed)
    if seed is None:
        seed = 0
    fmt = args.format or getattr(args, "default_format", None) or "json"
    try:
        cfg = Config(
            rank_cap=args.rank_cap if args.rank_cap is not None else 4,
            degree_cap=args.degree_cap if args.degree_cap is not None else 5040,
            search_degree_max=(
                args.search_degree_max if args.search_degree_max is not None else 8
            ),
            seed=seed,
            fmt=fmt,
        )
        report = args.func(args, cfg)
    except (WordError, OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except SearchExhausted as exc:
        sys.stderr.write("search exhausted: %s\n" % exc)
        return 3
    except CapExceeded as exc:
        sys.stderr.write("cap exceeded: %s\n" % exc)
        return 4
    _emit(report, cfg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
