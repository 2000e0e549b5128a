"""Command-line surface.

Exit codes: 0 ok, 1 validation failure, 2 parse error, 3 oracle
unavailable, 4 disagreement between the combinatorial decision and the
oracle (treated as a defect).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import ggm as ggm_mod
from . import oracle, structure
from .algebra import check_locally_bound
from .network import PullbackNetwork, maximal_r_free_traversals, to_dot, two_cover
from .textio import InputDocument, ParseError, format_tree_section, parse_document
from .trees import push_down, validate_tree_over_q

OK, VALIDATION_FAILURE, PARSE_ERROR, ORACLE_UNAVAILABLE, DISAGREEMENT = 0, 1, 2, 3, 4


def _load(path: str) -> InputDocument:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def _load_pair(path1: str, path2: str) -> tuple[InputDocument, InputDocument]:
    d1, d2 = _load(path1), _load(path2)
    if d1.quiver_tokens != d2.quiver_tokens:
        raise ParseError(0, "the two documents carry different QUIVER/RELATIONS sections")
    return d1, d2


def cmd_validate(args) -> int:
    doc = _load(args.file)
    bound = check_locally_bound(doc.bound_quiver)
    if not bound.ok:
        print(f"locally-bound check failed: relation-free cycle {' '.join(bound.cycle)}")
        return VALIDATION_FAILURE
    print("locally-bound check: ok")
    report = validate_tree_over_q(doc.tree)
    if not report.ok:
        print(f"tree validation failed: {report.message}; witness {report.witness}")
        return VALIDATION_FAILURE
    print("tree validation: ok")
    return OK


def _network_report(net, label: str) -> None:
    print(f"vertices: {len(net.vertices)}")
    print(f"arrows: {len(net.arrows)}")
    print(f"edges: {len(net.edges)}")
    if isinstance(net, PullbackNetwork):
        roots = " ".join(f"({n},{m})" for n, m in sorted(net.forest_roots))
        print(f"roots: {roots}")
        print(f"triangles: {len(net.triangle_set)}")
    census = maximal_r_free_traversals(net)
    print(f"maximal {label}-free traversals: {len(census)}")


def cmd_network(args) -> int:
    d1, d2 = _load_pair(args.file1, args.file2)
    if d1.tree.orientation != d2.tree.orientation:
        print(
            "refusing the mixed sink/source case: the pairing network is only "
            "defined when both trees share an orientation",
            file=sys.stderr,
        )
        return VALIDATION_FAILURE
    net = PullbackNetwork(d1.tree, d2.tree)
    shown = two_cover(net) if args.cover else net
    _network_report(shown, "R[2]" if args.cover else "R[1]")
    if args.dot:
        Path(args.dot).write_text(to_dot(shown), encoding="utf-8")
        print(f"dot written to {args.dot}")
    return OK


def _hom_description(h) -> list[str]:
    """Sparse `v_n -> ...` lines of an induced map, domain vertices ascending."""
    lines = []
    p = h.prime
    for q in sorted(h.blocks):
        block = h.blocks[q]
        for col, n in enumerate(h.domain.basis[q]):
            terms = []
            for row, m in enumerate(h.codomain.basis[q]):
                c = int(block[row, col]) % p
                if c == 0:
                    continue
                sign = "-" if c == p - 1 else "+"  # graph maps only produce +-1
                terms.append((m, sign))
            if not terms:
                continue
            text = ""
            for i, (m, sign) in enumerate(terms):
                if i == 0:
                    text = f"v{m}" if sign == "+" else f"-v{m}"
                else:
                    text += f" {sign} v{m}"
            lines.append((n, f"v{n} -> {text}"))
    return [text for _, text in sorted(lines)]


def cmd_ggms(args) -> int:
    d1, d2 = _load_pair(args.file1, args.file2)
    ggms = ggm_mod.enumerate_ggms(d1.tree, d2.tree, with_signs=args.signs)
    print(f"{len(ggms)} GGMs")
    m1, m2 = push_down(d1.tree, args.prime), push_down(d2.tree, args.prime)
    for i, g in enumerate(ggms, start=1):
        vertices = " ".join(
            f"({n},{m},{'+' if s > 0 else '-'})" for n, m, s in sorted(g.vertices)
        )
        print(f"GGM {i}: {vertices}")
        h = ggm_mod.ggm_matrix(g, m1, m2)
        for line in _hom_description(h):
            print(f"  {line}")
        if args.dot_dir:
            directory = Path(args.dot_dir)
            directory.mkdir(parents=True, exist_ok=True)
            (directory / f"ggm_{i:02d}.dot").write_text(
                ggm_mod.ggm_to_dot(g, name=f"ggm_{i}"), encoding="utf-8"
            )
    return OK


def cmd_hom(args) -> int:
    d1, d2 = _load_pair(args.file1, args.file2)
    _, rank = ggm_mod.hom_span(d1.tree, d2.tree, args.prime)
    m1, m2 = push_down(d1.tree, args.prime), push_down(d2.tree, args.prime)
    dim = oracle.hom_space(m1, m2).dimension
    verdict = "AGREE" if rank == dim else "DISAGREE"
    print(f"GGM span rank: {rank}; oracle dim: {dim}; {verdict}")
    return OK if verdict == "AGREE" else DISAGREEMENT


def cmd_indec(args) -> int:
    doc = _load(args.file)
    t = doc.tree
    cert = structure.first_certificate(t)
    if cert is None:
        print("theorem: INDECOMPOSABLE")
    else:
        parent, n1, n2, _ = cert
        print(
            f"theorem: DECOMPOSABLE; certificate: siblings {n1},{n2} "
            f"under {parent}, label {t.child_label(n1)}"
        )
    rep = push_down(t, args.prime)
    search = oracle.has_nontrivial_idempotent(oracle.hom_space(rep, rep), cap=args.cap)
    if not search.available:
        print("oracle unavailable: endomorphism space too large for the scan")
        return ORACLE_UNAVAILABLE
    oracle_decomposable = search.status == "found"
    print(f"oracle (p={args.prime}): {'DECOMPOSABLE' if oracle_decomposable else 'INDECOMPOSABLE'}")
    agree = oracle_decomposable == (cert is not None)
    print(f"verdict: {'AGREE' if agree else 'DISAGREE'}")
    return OK if agree else DISAGREEMENT


def cmd_decompose(args) -> int:
    doc = _load(args.file)
    t = doc.tree
    endo = structure.find_nonidentity_idempotent(t)
    if endo is None:
        print("INDECOMPOSABLE: nothing to split")
        print(format_tree_section(t))
        return OK
    pieces = structure.decompose_fully(t, args.prime)
    print(f"{len(pieces)} indecomposable summands")
    for i, piece in enumerate(pieces, start=1):
        print(f"SUMMAND {i} (dim {len(piece.tree.vertices)})")
        print(format_tree_section(piece))
    decomposition = structure.split(t, endo, args.prime)
    ok = oracle.verify_iso(decomposition.witness)
    print(f"witness: {'OK' if ok else 'FAILED'}")
    return OK if ok else DISAGREEMENT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtmtools",
        description="Rooted tree modules over zero-relation algebras: validate, "
        "enumerate graph maps, decide indecomposability, decompose.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pair_help = "two documents with token-identical QUIVER/RELATIONS sections"

    p = sub.add_parser("validate", help="parse and validate one document")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("network", help="pairing-network census for two documents")
    p.add_argument("file1")
    p.add_argument("file2", help=pair_help)
    p.add_argument("--dot", help="write the network in graphviz format")
    p.add_argument("--cover", action="store_true", help="report the signed double cover")
    p.set_defaults(func=cmd_network)

    p = sub.add_parser("ggms", help="enumerate generalized graph maps")
    p.add_argument("file1")
    p.add_argument("file2", help=pair_help)
    p.add_argument("-p", "--prime", type=int, default=3)
    p.add_argument("--signs", action="store_true", help="also list the sign flips")
    p.add_argument("--dot-dir", help="write one graphviz file per graph map")
    p.set_defaults(func=cmd_ggms)

    p = sub.add_parser("hom", help="graph-map span rank vs oracle Hom dimension")
    p.add_argument("file1")
    p.add_argument("file2", help=pair_help)
    p.add_argument("-p", "--prime", type=int, default=3)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("indec", help="indecomposability, cross-checked by the oracle")
    p.add_argument("file")
    p.add_argument("-p", "--prime", type=int, default=3)
    p.add_argument("--cap", type=int, default=10**7, help="oracle scan budget")
    p.set_defaults(func=cmd_indec)

    p = sub.add_parser("decompose", help="split into indecomposable summands")
    p.add_argument("file")
    p.add_argument("-p", "--prime", type=int, default=3)
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return PARSE_ERROR
    except FileNotFoundError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return PARSE_ERROR
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return VALIDATION_FAILURE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
