"""Command line interface.

Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 I/O or format
error.  Failures print one JSON object on stderr.  Outputs default to
``$THICKEMBED_OUT/<command>.json`` when ``--out`` is omitted.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .errors import ParameterError, ParseError, SpecError, ThickEmbedError

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _out_path(args, suffix=".json"):
    if args.out:
        return args.out
    return str(io.default_out_dir() / f"{args.command}{suffix}")


def _load_complex_or_embedding(args):
    if getattr(args, "embedding", None):
        E = io.read_emb(args.embedding)
        return E.complex, E
    if getattr(args, "complex", None):
        return io.read_scx(args.complex), None
    raise UsageError("one of --complex or --embedding is required")


def cmd_embed(args):
    from .embedder import PlacementParams, run_pipeline

    X = io.read_scx(args.complex)
    t = args.subdiv if args.subdiv == "auto" else int(args.subdiv)
    params = PlacementParams(ambient_dim=args.ambient, radius=args.radius, alpha0=args.alpha0,
                             max_resample_rounds=args.max_rounds, rng_seed=args.seed)
    res = run_pipeline(X, args.ambient, params, t_subdiv=t, tau=args.tau, budget=args.budget,
                       piece_length=args.piece_length, crossing=not args.no_crossing)
    io.write_json(_out_path(args), res.to_dict())
    if args.emb:
        io.write_emb(args.emb, res.embedding)


def cmd_certify(args):
    from .geometry import thickness_report, validity

    E = io.read_emb(args.embedding)
    rep = thickness_report(E, links=not args.no_links).to_dict()
    ok, _ = validity(E)
    io.write_json(_out_path(args), {"schema_version": 1, **rep, "valid": ok})


def cmd_subdivide(args):
    from .subdivision import edgewise_subdivide, subdivide_embedding

    X, E = _load_complex_or_embedding(args)
    smap = edgewise_subdivide(X, args.param)
    out = _out_path(args, ".emb" if E is not None else ".scx")
    if E is not None and out.endswith(".emb"):
        io.write_emb(out, subdivide_embedding(E, smap))
    else:
        io.write_scx(out, smap.child)
    if args.map:
        io.write_json(args.map, io.subdivision_to_dict(smap))


def cmd_link(args):
    from .complex import link
    from .geometry import link_thickness

    X, E = _load_complex_or_embedding(args)
    sigma = tuple(sorted(int(x) for x in args.simplex.replace(",", " ").split()))
    lk, parent = link(X, sigma)
    out = {"schema_version": 1, "simplex": list(sigma), "link_vertices": lk.n_vertices,
           "link_simplices": [list(s) for s in lk.simplices],
           "parent": {" ".join(map(str, s)): list(p) for s, p in parent.items()},
           "link_thickness": None, "upper": None, "witness": None}
    if E is not None:
        lt = link_thickness(E, sigma, tol=args.tol)
        out["link_thickness"] = lt.value
        out["upper"] = lt.upper
        out["witness"] = [list(w) for w in lt.witness] if lt.witness else None
    io.write_json(_out_path(args), out)


def cmd_net(args):
    from .net import greedy_net, mesh_to_metric

    S = mesh_to_metric(args.mesh)
    io.write_json(_out_path(args), greedy_net(S, args.epsilon).to_dict())


def cmd_crossing(args):
    from .embedder import crossing_profile

    E = io.read_emb(args.embedding)
    spec = {"count": args.count, "seed": args.seed} if args.count else {"pitch": args.pitch or args.radius}
    prof = crossing_profile(E, radius=args.radius, sample_spec=spec)
    io.write_json(_out_path(args), {"schema_version": 1, **prof.to_dict()})


def cmd_scale_study(args):
    from .study import run_scaling_study

    out_dir = args.out_dir or str(io.default_out_dir() / "scale-study")
    grid = [int(v) for v in args.V.split(",")]
    seeds = list(range(args.seed0, args.seed0 + args.seeds))
    study = run_scaling_study(args.family, args.ambient, grid, seeds, out_dir=out_dir,
                              workers=args.workers, alpha0=args.alpha0,
                              piece_length=args.piece_length)
    print(json.dumps(study.summary()["radius_fit"] | {"status": study.status}))


def build_parser():
    p = _Parser(prog="thickembed", description="Thick straight-line embeddings of simplicial complexes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("embed", help="random placement, subdivision, thickening, normalization")
    e.add_argument("--complex", required=True, help="input SCX file")
    e.add_argument("--ambient", type=int, required=True, help="ambient dimension n")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--alpha0", type=float, default=0.25, help="separation / link angle bound")
    e.add_argument("--subdiv", default="1", help="subdivision parameter t, or 'auto'")
    e.add_argument("--tau", type=float, default=None, help="perturbation radius (default edge_min/4)")
    e.add_argument("--radius", type=float, default=None, help="sphere radius (default V^(1/(n-k)))")
    e.add_argument("--budget", type=int, default=None, help="perturbation trial budget")
    e.add_argument("--max-rounds", type=int, default=2000, help="resampling rounds per alpha0")
    e.add_argument("--piece-length", type=float, default=4.0, help="target piece length for --subdiv auto")
    e.add_argument("--no-crossing", action="store_true", help="skip the crossing profile")
    e.add_argument("--emb", help="also write the final embedding as EMB")
    e.add_argument("--out", help="PipelineResult JSON path")
    e.set_defaults(func=cmd_embed)

    c = sub.add_parser("certify", help="thickness report of an embedding")
    c.add_argument("--embedding", required=True, help="input EMB file")
    c.add_argument("--no-links", action="store_true", help="skip link thickness")
    c.add_argument("--out")
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("subdivide", help="edgewise subdivision")
    s.add_argument("--complex", help="input SCX file")
    s.add_argument("--embedding", help="input EMB file (output may then be .emb)")
    s.add_argument("--param", type=int, required=True, help="subdivision parameter t")
    s.add_argument("--map", help="also write the SubdivisionMap JSON here")
    s.add_argument("--out")
    s.set_defaults(func=cmd_subdivide)

    lk = sub.add_parser("link", help="link of a simplex and, for embeddings, its thickness")
    lk.add_argument("--complex")
    lk.add_argument("--embedding")
    lk.add_argument("--simplex", required=True, help="vertex ids, e.g. '0 1'")
    lk.add_argument("--tol", type=float, default=1e-4)
    lk.add_argument("--out")
    lk.set_defaults(func=cmd_link)

    nt = sub.add_parser("net", help="greedy epsilon-net on mesh geodesic distances")
    nt.add_argument("--mesh", required=True, help="EMB or OFF surface mesh")
    nt.add_argument("--epsilon", type=float, required=True)
    nt.add_argument("--out")
    nt.set_defaults(func=cmd_net)

    cr = sub.add_parser("crossing", help="maximum ball crossing counts")
    cr.add_argument("--embedding", required=True)
    cr.add_argument("--radius", type=float, default=1.0)
    cr.add_argument("--pitch", type=float, default=None, help="lattice pitch of ball centers")
    cr.add_argument("--count", type=int, default=None, help="random ball centers instead of a lattice")
    cr.add_argument("--seed", type=int, default=0)
    cr.add_argument("--out")
    cr.set_defaults(func=cmd_crossing)

    st = sub.add_parser("scale-study", help="seeded scaling study with CSV / JSONL output")
    st.add_argument("--family", required=True, help="template such as 'cycle({V})'")
    st.add_argument("--ambient", type=int, default=3)
    st.add_argument("--V", required=True, help="comma separated vertex counts")
    st.add_argument("--seeds", type=int, default=20, help="seeds per V")
    st.add_argument("--seed0", type=int, default=0)
    st.add_argument("--alpha0", type=float, default=0.25)
    st.add_argument("--piece-length", type=float, default=4.0)
    st.add_argument("--workers", type=int, default=1)
    st.add_argument("--out-dir")
    st.set_defaults(func=cmd_scale_study)
    return p


def _fail(exc, code):
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if getattr(exc, "line", None) is not None:
        err["line"] = exc.line
    print(json.dumps(err), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except (UsageError, ParameterError, SpecError) as exc:
        return _fail(exc, EXIT_USAGE)
    except (io.IOFailure, ParseError) as exc:
        return _fail(exc, EXIT_IO)
    except ThickEmbedError as exc:
        return _fail(exc, EXIT_RUNTIME)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
