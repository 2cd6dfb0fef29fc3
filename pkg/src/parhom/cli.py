"""Command line front end: ``parhom COMMAND --spec problem.toml``.

Exit codes: 0 success, 1 bad input, 2 a comparison or certificate failed,
3 a size guardrail was hit.
"""

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import errors
from .exactalg import Matrix, kernel_basis, parse_ring, quotient_from_rows
from .glob import construct_phi, globalize, hom_intertwiners, verify_globalization
from .group import check_subgroup, make_group
from .homology import (ComparisonReport, compare_cohomology, compare_homology,
                       partial_cohomology, partial_homology, shapiro_check)
from .parmod import (ParRepModule, SetPartialAction, action_from_spans, b_module, diag_module,
                     global_regular_module, induced_partial_action, linearize_set_action,
                     regular_module, restricted_action, trivial_module, validate_partial_action,
                     validate_partial_rep)
from .parsemigroup import semigroup

DEFAULT_DEGREE = 3
MODULE_KINDS = ("trivial", "partial_rep", "set_action", "regular", "B", "diag",
                "restricted_translation", "partial_action", "group_algebra")


# --- problem files --------------------------------------------------------------------

@dataclass
class ProblemSpec:
    group: object
    ring: object
    module: dict = field(default_factory=dict)
    subgroup: list = None
    globalizations: list = field(default_factory=list)
    max_degree: int = DEFAULT_DEGREE
    source: str = "<none>"


_GROUP_RE = re.compile(r"^(C|D|S)(\d+)$")


def parse_group_shorthand(text):
    """"C4", "S3", "D4" or products like "C2xC2"."""
    parts = [p.strip() for p in text.split("x")]
    specs = []
    for p in parts:
        m = _GROUP_RE.match(p)
        if not m:
            raise errors.ValidationError(f"cannot read group {text!r}; try C4, D3, S3 or C2xC2")
        kind = {"C": "cyclic", "D": "dihedral", "S": "symmetric"}[m.group(1)]
        specs.append((kind, int(m.group(2))))
    return make_group(specs[0] if len(specs) == 1 else ("product", *specs))


def _load_toml(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise errors.ParseError(f"{path}: no such file") from None
    except tomllib.TOMLDecodeError as exc:
        raise errors.ParseError(f"{path}: {exc}") from None


def parse_spec(path, ring=None, group=None) -> ProblemSpec:
    """Read and validate a problem file; ``ring``/``group`` override its sections."""
    data = _load_toml(path) if path else {}
    where = path or "<command line>"
    try:
        if group is not None:
            G = parse_group_shorthand(group)
        elif "group" in data:
            G = make_group(data["group"])
        else:
            raise errors.ValidationError("no [group] section and no --group given")
    except errors.InputError as exc:
        raise type(exc)(f"{where} [group]: {exc}") from None
    try:
        R = parse_ring(ring or str(data.get("ring", "Q")))
    except errors.InputError as exc:
        raise type(exc)(f"{where} ring: {exc}") from None
    module = data.get("module", {"kind": "trivial"})
    if not isinstance(module, dict) or module.get("kind") not in MODULE_KINDS:
        raise errors.ValidationError(f"{where} [module]: kind must be one of "
                                     f"{', '.join(MODULE_KINDS)}")
    sub = data.get("subgroup")
    return ProblemSpec(G, R, module, sub, data.get("globalization", []),
                       int(data.get("max_degree", DEFAULT_DEGREE)), where)


def _element(G, key, where):
    try:
        return G.index_of(str(key))
    except errors.ValidationError as exc:
        raise errors.ValidationError(f"{where}: {exc}") from None


def _matrix(ring, rows, where, ncols=None):
    try:
        return Matrix(ring, [[ring(x) for x in r] for r in rows], ncols)
    except (ValueError, TypeError) as exc:
        raise errors.ValidationError(f"{where}: {exc}") from None
    except errors.ValidationError as exc:
        raise errors.ValidationError(f"{where}: {exc}") from None


def _vector(ring, v, where):
    return tuple(ring(x) for x in v)


def build_module(G, ring, mod: dict, side=None, where="[module]"):
    """Instantiate the [module] section over G (which may be a subgroup)."""
    kind = mod["kind"]
    side = mod.get("side", side or "left")
    if side not in ("left", "right"):
        raise errors.ValidationError(f"{where}: side must be left or right")
    if kind == "trivial":
        return trivial_module(G, ring, side)
    if kind == "regular":
        return regular_module(G, ring, side)
    if kind == "B":
        return b_module(G, ring, side)
    if kind == "group_algebra":
        return global_regular_module(G, ring, side)
    if kind == "diag":
        M = diag_module(G, ring)
        return M if side == "left" else validate_partial_rep(G, ring, M.pi, "right", "diag")
    if kind == "partial_rep":
        table = mod.get("pi", {})
        given = {_element(G, k, f"{where} pi"): v for k, v in table.items()}
        if len(given) != G.order:
            missing = [G.name(g) for g in G.elements if g not in given]
            raise errors.ValidationError(f"{where}: π required for every group element; "
                                         f"missing {', '.join(missing)}")
        pi = [_matrix(ring, given[g], f"{where} pi.{G.name(g)}") for g in G.elements]
        return validate_partial_rep(G, ring, pi, side, mod.get("label", "partial_rep"))
    if side != "left":
        raise errors.ValidationError(f"{where}: kind {kind!r} is only available as a left module")
    if kind == "restricted_translation":
        subset = [_element(G, x, f"{where} subset") for x in mod.get("subset", [])]
        return linearize_set_action(restricted_action(G, [0] + subset), ring,
                                    "restricted translation")
    if kind == "set_action":
        return linearize_set_action(_set_action(G, mod, where), ring, "set action")
    if kind == "partial_action":
        return _partial_action(G, ring, mod, where)
    raise errors.ValidationError(f"{where}: unknown kind {kind!r}")


def _set_action(G, mod, where):
    points = tuple(str(p) for p in mod.get("points", []))
    doms = {_element(G, k, f"{where} domains"): frozenset(map(str, v))
            for k, v in mod.get("domains", {}).items()}
    maps = {_element(G, k, f"{where} maps"): {str(a): str(b) for a, b in v.items()}
            for k, v in mod.get("maps", {}).items()}
    doms.setdefault(0, frozenset(points))
    maps.setdefault(0, {p: p for p in points})
    for g in G.elements:
        doms.setdefault(g, frozenset())
        maps.setdefault(g, {})
    return SetPartialAction(G, points, doms, maps)


def _partial_action(G, ring, mod, where):
    n = int(mod.get("rank", 0))
    if n <= 0:
        raise errors.ValidationError(f"{where}: partial_action needs a positive rank")
    ident = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    spans, maps = {0: ident}, {0: {v: v for v in ident}}
    for k, vecs in mod.get("domains", {}).items():
        g = _element(G, k, f"{where} domains")
        spans[g] = [_vector(ring, v, f"{where} domains.{k}") for v in vecs]
    for k, pairs in mod.get("maps", {}).items():
        g = _element(G, k, f"{where} maps")
        maps[g] = {_vector(ring, a, where): _vector(ring, b, where) for a, b in pairs}
    theta = action_from_spans(G, ring, n, spans, maps, "left", mod.get("label", "partial action"))
    report = validate_partial_action(theta)
    if not report:
        ax, g, h, detail = report.violations[0]
        raise errors.ValidationError(f"{where}: partial action axiom ({ax}) fails at "
                                     f"g={g}, h={h}: {detail}")
    return theta


# --- output helpers -------------------------------------------------------------------

def _scalar(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


def _mat_json(m: Matrix):
    return [[_scalar(x) for x in r] for r in m.rows()]


def _mat_text(m: Matrix, indent="    "):
    if m.nrows == 0 or m.ncols == 0:
        return f"{indent}({m.nrows}x{m.ncols})"
    cells = [[str(_scalar(x)) for x in r] for r in m.rows()]
    w = max(len(c) for r in cells for c in r)
    return "\n".join(indent + "[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)


def _summary(h):
    return {"betti": h.betti, "torsion": list(h.torsion)}


class Output:
    """Collects a JSON payload and the matching text lines."""

    def __init__(self, command):
        self.data = {"command": command}
        self.lines = []

    def say(self, line=""):
        self.lines.append(line)

    def emit(self, as_json, stream):
        if as_json:
            stream.write(json.dumps(self.data, indent=2, sort_keys=True) + "\n")
        else:
            stream.write("\n".join(self.lines) + "\n")


def _header(out, spec, M=None):
    G = spec.group
    out.data["group"] = {"label": G.label, "order": G.order, "names": list(G.names)}
    out.data["ring"] = spec.ring.name
    out.say(f"group {G.label} (order {G.order}) over {spec.ring.name}")
    if M is not None:
        out.data["module"] = {"label": M.label, "rank": M.rank, "side": M.side}
        out.say(f"module {M.label}: rank {M.rank}, {M.side}")


def _rows_table(out, report: ComparisonReport):
    out.data["rows"] = report.rows()
    out.data["ok"] = report.ok
    a, b = report.labels
    out.say(f"{'degree':>6}  {a:>24}  {b:>24}  match")
    for n, (x, y) in enumerate(zip(report.left, report.right)):
        same = (x.betti, x.torsion) == (y.betti, y.torsion)
        out.say(f"{n:>6}  {x.pretty():>24}  {y.pretty():>24}  {'yes' if same else 'NO'}")


# --- commands -------------------------------------------------------------------------

def cmd_validate(spec, args, out):
    M = build_module(spec.group, spec.ring, spec.module)
    _header(out, spec, M)
    if isinstance(M, ParRepModule):
        n = spec.group.order ** 2
        out.say(f"partial representation axioms hold for all {n} pairs (s, t)")
        theta = induced_partial_action(M)
    else:
        theta = M
        out.say("partial action axioms (i)-(iii) hold")
    ranks = [d.ncols for d in theta.domains]
    out.data["domain_ranks"] = {spec.group.name(g): r for g, r in enumerate(ranks)}
    out.say("domain ranks: " + ", ".join(f"{spec.group.name(g)}:{r}"
                                         for g, r in enumerate(ranks)))
    out.data["valid"] = True
    return 0


def cmd_semigroup(spec, args, out):
    G = spec.group
    sg = semigroup(G)
    S = sg.elements()
    _header(out, spec)
    nb = len(sg.idempotents())
    out.data.update({"order_S": len(S), "dim_B": nb})
    out.say(f"|S(G)| = {len(S)}")
    out.say(f"dim B = {nb}")
    if args.names:
        out.data["elements"] = [{"id": g, "name": G.name(g)} for g in G.elements]
        out.say("elements:")
        for g in G.elements:
            out.say(f"  {g}: {G.name(g)}")
    if args.table:
        label = [_selem_name(G, z) for z in S]
        out.data["normal_forms"] = label
        out.data["table"] = [[sg.index(sg.mul(x, y)) for y in S] for x in S]
        out.say("normal forms:")
        for i, s in enumerate(label):
            out.say(f"  {i}: {s}")
        out.say("products (row * column, as indices):")
        for x in S:
            out.say("  " + " ".join(str(sg.index(sg.mul(x, y))) for y in S))
    return 0


def _selem_name(G, z):
    parts = [f"e[{G.name(a)}]" for a in z.idem]
    if z.grp != 0 or not parts:
        parts.append(f"[{G.name(z.grp)}]")
    return "".join(parts)


def _globalization_checks(spec, M, out):
    """Externally supplied (W, ι) pairs from [[globalization]] tables."""
    G, ring = spec.group, spec.ring
    results = []
    for k, gl in enumerate(spec.globalizations):
        where = f"[[globalization]] #{k + 1}"
        name = gl.get("name", f"W{k + 1}")
        action = gl.get("action", {})
        mats = {_element(G, key, where): _matrix(ring, v, f"{where} action.{key}")
                for key, v in action.items()}
        if len(mats) != G.order:
            raise errors.ValidationError(f"{where}: an action matrix is needed for every element")
        iota = _matrix(ring, gl["iota"], f"{where} iota")
        rels = [_vector(ring, v, where) for v in gl.get("relators", [])]
        R = Matrix.from_columns(ring, rels, iota.nrows) if rels else None
        rep = verify_globalization(M, [mats[g] for g in G.elements], iota, R)
        q = quotient_from_rows(ring, iota.nrows, [{i: x for i, x in enumerate(v) if x}
                                                   for v in rels])
        entry = {"name": name, "injective": rep.injective, "restriction": rep.restriction,
                 "spans": rep.spans, "ok": rep.ok, "free_rank": q.free_rank,
                 "torsion": list(q.torsion)}
        results.append(entry)
        tors = " + ".join(f"Z/{d}" for d in q.torsion) or "none"
        out.say(f"globalization {name}: {'passes' if rep.ok else 'fails'} "
                f"(injective {rep.injective}, restriction {rep.restriction}, "
                f"spans {rep.spans}); rank {q.free_rank}, torsion {tors}")
    if results:
        out.data["external_globalizations"] = results


def cmd_globalize(spec, args, out):
    M = build_module(spec.group, spec.ring, spec.module)
    _header(out, spec, M)
    G = spec.group
    gl = globalize(M)
    Lam = gl.module
    K = kernel_basis(gl.iota)
    out.data["lambda_rank"] = Lam.rank
    out.data["action"] = {G.name(g): _mat_json(Lam.pi[g]) for g in G.elements}
    out.data["iota"] = _mat_json(gl.iota)
    out.data["iota_kernel_rank"] = K.ncols
    out.data["iota_kernel"] = [[_scalar(x) for x in K.col(j)] for j in range(K.ncols)]
    out.say(f"Lambda rank {Lam.rank}")
    for g in G.elements:
        out.say(f"  action of {G.name(g)}:")
        out.say(_mat_text(Lam.pi[g]))
    out.say("  iota:")
    out.say(_mat_text(gl.iota))
    out.say(f"iota kernel rank {K.ncols}")
    for j in range(K.ncols):
        out.say("  kernel vector (" + ", ".join(str(_scalar(x)) for x in K.col(j)) + ")")
    if gl.tau is not None:
        out.data["tau_iota_identity"] = True
        out.say("tau o iota = identity")
    rep = verify_globalization(M, Lam, gl.iota)
    out.data["verification"] = {"injective": rep.injective, "restriction": rep.restriction,
                                "spans": rep.spans, "ok": rep.ok}
    out.say(f"verification: injective {rep.injective}, restriction {rep.restriction}, "
            f"spans {rep.spans}")
    _globalization_checks(spec, M, out)
    return 0


def _list_rows(out, side, sums, cohom=False):
    out.data["rows"] = [{"degree": n, **_summary(h), "side": side} for n, h in enumerate(sums)]
    sym = "H^" if cohom else "H_"
    for n, h in enumerate(sums):
        out.say(f"{sym}{n} = {h.pretty()}")


def cmd_homology(spec, args, out):
    M = build_module(spec.group, spec.ring, spec.module, "left")
    _header(out, spec, M)
    _list_rows(out, "partial", partial_homology(M, args.max_degree))
    return 0


def cmd_cohomology(spec, args, out):
    M = build_module(spec.group, spec.ring, spec.module, "right")
    _header(out, spec, M)
    _list_rows(out, "partial", partial_cohomology(M, args.max_degree), cohom=True)
    return 0


def cmd_compare(spec, args, out):
    side = "left" if args.what == "homology" else "right"
    M = build_module(spec.group, spec.ring, spec.module, side)
    _header(out, spec, M)
    out.data["what"] = args.what
    fn = compare_homology if args.what == "homology" else compare_cohomology
    try:
        rep = fn(M, args.max_degree)
    except errors.TheoremViolation as exc:
        if exc.report is not None:
            _rows_table(out, exc.report)
        raise
    _rows_table(out, rep)
    return 0


def _subgroup(spec, args):
    G = spec.group
    if args.subgroup:
        ids = [int(x) for x in args.subgroup.split(",") if x.strip()]
    elif spec.subgroup is not None:
        ids = [x if isinstance(x, int) else G.index_of(str(x)) for x in spec.subgroup]
    else:
        raise errors.ValidationError("shapiro needs --subgroup or a 'subgroup' entry")
    return check_subgroup(G, ids)


def cmd_shapiro(spec, args, out):
    S = _subgroup(spec, args)
    H = S.as_group()
    M = build_module(H, spec.ring, spec.module, "left")
    _header(out, spec, M)
    out.data["subgroup"] = list(S.members)
    out.say("subgroup {" + ", ".join(spec.group.name(x) for x in S.members) + "}, "
            f"index {S.index}")
    try:
        rep = shapiro_check(spec.group, S, M, args.max_degree)
    except errors.TheoremViolation as exc:
        if exc.report is not None:
            _rows_table(out, exc.report)
        raise
    _rows_table(out, rep)
    return 0


def cmd_certify(spec, args, out):
    _header(out, spec)
    cert = construct_phi(spec.group, spec.ring)
    nd = cert.nd
    out.data.update({"dim_KG_B": nd.kgb.dim, "dim_N": len(nd.n_basis),
                     "dim_im_phi0": nd.phi0.ncols, "delta_phi_identity": cert.delta_phi_identity,
                     "phi_right_linear": cert.right_linear, "ok": cert.ok})
    out.say(f"dim KG(x)B = {nd.kgb.dim} = {nd.phi0.ncols} (im phi0) + {len(nd.n_basis)} (N)")
    out.say(f"delta o phi = identity on N: {cert.delta_phi_identity}")
    out.say(f"phi right linear: {cert.right_linear}")
    if args.show_hom:
        M = trivial_module(spec.group, spec.ring, "right")
        h = hom_intertwiners(M)
        out.data["hom_trivial_dim"] = h.dim
        out.say(f"dim Hom(Lambda(KparG), K) = {h.dim}")
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "semigroup": cmd_semigroup,
    "globalize": cmd_globalize,
    "homology": cmd_homology,
    "cohomology": cmd_cohomology,
    "compare": cmd_compare,
    "shapiro": cmd_shapiro,
    "certify-projective": cmd_certify,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="problem file (TOML)")
    common.add_argument("--group", help="group shorthand such as C2, S3 or C2xC2")
    common.add_argument("--ring", help="Z, Q or GFp; overrides the problem file")
    common.add_argument("--max-degree", type=int, default=None,
                        help=f"highest degree to report (default {DEFAULT_DEGREE})")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--subgroup", help='subgroup element ids, e.g. "0,2"')
    p = argparse.ArgumentParser(prog="parhom",
                                description="Partial group (co)homology and globalization.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "semigroup":
            sp.add_argument("--names", action="store_true", help="list element names")
            sp.add_argument("--table", action="store_true", help="print the product table")
        if name == "compare":
            sp.add_argument("what", choices=["homology", "cohomology"])
        if name == "certify-projective":
            sp.add_argument("--show-hom", action="store_true",
                            help="also solve for Hom(Lambda(KparG), K)")
    return p


def run_command(spec: ProblemSpec, command, **params):
    """Run one command on a parsed problem; returns (exit code, Output).

    ``params`` are the command options (``max_degree``, ``what``, ``subgroup``,
    ``names``, ``table``, ``show_hom``).
    """
    args = argparse.Namespace(max_degree=None, what="homology", subgroup=None, names=False,
                              table=False, show_hom=False)
    vars(args).update(params)
    out = Output(command)
    try:
        if args.max_degree is None:
            args.max_degree = spec.max_degree
        if args.max_degree < 0:
            raise errors.ValidationError("--max-degree must be nonnegative")
        code = COMMANDS[command](spec, args, out)
    except errors.ParhomError as exc:
        code = _failure(out, exc)
    out.data["exit_code"] = code
    return code, out


def _failure(out, exc):
    out.data["error"] = {"kind": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, errors.TheoremViolation):
        out.say(f"theorem check failed: {exc}")
        return 2
    if isinstance(exc, errors.ConstructionFailed):
        out.say(f"construction failed: {exc}")
        return 2
    if isinstance(exc, errors.GuardrailError):
        out.say(f"too large: {exc}")
        return 3
    if isinstance(exc, errors.PartialRepAxiomViolation):
        out.data["error"]["violations"] = [list(v) for v in exc.violations]
    out.say(f"error: {exc}")
    return 1


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in ("spec", "ring", "group", "json",
                                                               "command")}
    try:
        spec = parse_spec(args.spec, args.ring, args.group)
    except errors.ParhomError as exc:
        out = Output(args.command)
        code = _failure(out, exc)
        out.data["exit_code"] = code
    else:
        code, out = run_command(spec, args.command, **params)
    out.emit(args.json, stdout if code in (0, 2) or args.json else stderr)
    return code


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
