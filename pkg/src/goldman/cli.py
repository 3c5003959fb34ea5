"""Command-line front end: validate group files, tabulate truncated
homology, and run the certification suites.

Usage:

    goldman validate --spec group.json
    goldman homology --surface 1,2 --box 2
    goldman verify --suite all --surface 2,3 --box 2 --seed 1

A group file is a single JSON document, either an explicit presentation

    {"generators": 3,
     "relations": [[0, 0, 2]],
     "form": [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]}

(relations and form may be omitted; the form defaults to zero) or the
surface shorthand

    {"surface": {"genus": 2, "boundary": 3}}

`--surface g,r` is the same shorthand without a file.

Gradings are selected with `--grading`, which accepts semicolon
separated coordinate vectors in the original generators ("1,0,0;0,1,0"),
may be repeated, and understands the keyword `all-in-box`.  Without it
each command picks a small deterministic default: the zero grading,
radical generators that fit in the box, then the smallest derived
elements.  Suites that sweep gradings cap the sweep (the cap is recorded
in the report); explicit vectors are always run in full.

Reports are deterministic for a fixed config and seed: no timestamps,
dictionary output is key-sorted, and worker count does not affect
ordering.  Exit status: 0 when nothing failed, 2 when some check was
inconclusive at the truncation, 1 on a refuted check or any error.
"""

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .algebra import AlgebraVector, bracket
from .complexes import Cochain, boundary, box_support, coboundary, wedge_chain
from .groups import GroupSpec, surface_presentation
from .verify import (
    CERTIFIED,
    INCONCLUSIVE,
    NOT_APPLICABLE,
    REFUTED,
    CheckResult,
    _box_size,
    _capped_radius,
    frac_str,
    serialize_chain,
    gk_cycle_check,
    h1_check,
    inner_h2_certify,
    linear_extension_check,
    main_theorem_check,
    omega_check,
    outer_h2_certify,
    surface_generator_check,
)

SUITES = ("bracket", "complex", "inner", "outer", "gk", "surface",
          "omega", "h1", "linext")

# Per-suite grading caps for default and all-in-box sweeps.  Explicit
# --grading vectors bypass these.
SWEEP_CAPS = {"inner": 3, "outer": 12, "omega": 3, "gk": 2, "h1": 200}


# ---------------------------------------------------------------------------
# Config


class UsageError(Exception):
    pass


def _parse_surface(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError("--surface expects 'g,r'")
    try:
        g, r = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError("--surface expects two integers 'g,r'")
    return g, r


def load_spec(args):
    """Build the group from --surface or --spec; returns (spec, source)."""
    if args.surface and args.spec:
        raise UsageError("give either --surface or --spec, not both")
    if args.surface:
        g, r = _parse_surface(args.surface)
        return surface_presentation(g, r), {"surface": {"genus": g, "boundary": r}}
    if not args.spec:
        raise UsageError("a group is required: --surface g,r or --spec <path>")
    try:
        with open(args.spec) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (args.spec, exc))
    except json.JSONDecodeError as exc:
        raise UsageError("parse error in %s: %s (line %d, column %d)"
                         % (args.spec, exc.msg, exc.lineno, exc.colno))
    if not isinstance(data, dict):
        raise UsageError("group file must be a JSON object")
    if "surface" in data:
        s = data["surface"]
        try:
            g, r = int(s["genus"]), int(s["boundary"])
        except (TypeError, KeyError, ValueError):
            raise UsageError('surface shorthand needs {"genus": g, "boundary": r}')
        return surface_presentation(g, r), {"surface": {"genus": g, "boundary": r}}
    if "generators" not in data:
        raise UsageError('group file needs "generators" or "surface"')
    spec = GroupSpec(int(data["generators"]),
                     relations=data.get("relations") or (),
                     form=data.get("form"),
                     names=data.get("names"))
    return spec, {"file": args.spec}


def parse_gradings(spec, grading_args):
    """Resolve --grading arguments; returns (elements or None, label).

    None means "use the command's default selection"; the string label
    is echoed in the report config.
    """
    if not grading_args:
        return None, "default"
    if any(a.strip() == "all-in-box" for a in grading_args):
        if len(grading_args) > 1:
            raise UsageError("all-in-box cannot be combined with explicit vectors")
        return "all-in-box", "all-in-box"
    picks = []
    for arg in grading_args:
        for chunk in arg.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                coords = [int(t) for t in chunk.split(",")]
            except ValueError:
                raise UsageError("bad grading vector %r" % chunk)
            if len(coords) != spec.n_generators:
                raise UsageError("grading %r needs %d coordinates"
                                 % (chunk, spec.n_generators))
            picks.append(spec.element(coords))
    if not picks:
        raise UsageError("empty grading selection")
    return picks, [list(x.coords) for x in picks]


def default_gradings(spec, radius, cap=8):
    """Zero, then small radical elements, then the smallest derived ones."""
    box = box_support(spec, radius)
    members = set(box)
    picks = [spec.zero]
    for g in spec.kernel_basis_elements():
        for cand in (g, g + g):
            if cand in members and cand not in picks and len(picks) < 4:
                picks.append(cand)
    for x in sorted(box, key=lambda e: e.sort_key()):
        if len(picks) >= cap:
            break
        if x.is_derived_element() and x not in picks:
            picks.append(x)
    return picks


def resolve_selection(spec, selection, radius, cap):
    """Turn the parse_gradings result into a concrete capped element list."""
    capped = False
    if selection is None:
        picks = default_gradings(spec, radius, cap=cap or 8)
    elif selection == "all-in-box":
        picks = sorted(box_support(spec, radius), key=lambda e: e.sort_key())
    else:
        return list(selection), False
    if cap is not None and len(picks) > cap:
        picks = picks[:cap]
        capped = True
    return picks, capped


# ---------------------------------------------------------------------------
# Seeded suites for the raw algebra (the certification suites live in
# verify; these two only need reproducible sampling)


def _random_element(spec, rng, bound=3):
    return spec.element([rng.randint(-bound, bound)
                         for _ in range(spec.n_generators)])


def _random_vector(spec, rng, terms=2):
    v = AlgebraVector.zero(spec)
    for _ in range(terms):
        v = v + AlgebraVector.basis(_random_element(spec, rng),
                                    Fraction(rng.randint(-4, 4)))
    return v


def _vector_pairs(v):
    return [[frac_str(coeff), list(coords)] for coeff, coords in v.to_pairs()]


def run_bracket_suite(spec, seed, triples=500):
    """Skew-symmetry and Jacobi on random basis triples and short combos."""
    rng = random.Random("bracket:%d" % seed)
    combos = max(1, triples // 10)
    for _ in range(triples):
        a = AlgebraVector.basis(_random_element(spec, rng))
        b = AlgebraVector.basis(_random_element(spec, rng))
        c = AlgebraVector.basis(_random_element(spec, rng))
        if not (bracket(a, b) + bracket(b, a)).is_zero():
            return CheckResult("bracket-axioms", {"seed": seed}, REFUTED,
                               {"failed": "skew", "a": _vector_pairs(a),
                                "b": _vector_pairs(b)})
        jac = (bracket(a, bracket(b, c)) + bracket(b, bracket(c, a))
               + bracket(c, bracket(a, b)))
        if not jac.is_zero():
            return CheckResult("bracket-axioms", {"seed": seed}, REFUTED,
                               {"failed": "jacobi", "a": _vector_pairs(a),
                                "b": _vector_pairs(b), "c": _vector_pairs(c)})
    for _ in range(combos):
        a, b, c = (_random_vector(spec, rng) for _ in range(3))
        jac = (bracket(a, bracket(b, c)) + bracket(b, bracket(c, a))
               + bracket(c, bracket(a, b)))
        if not (bracket(a, b) + bracket(b, a)).is_zero() or not jac.is_zero():
            return CheckResult("bracket-axioms", {"seed": seed}, REFUTED,
                               {"failed": "combination"})
    return CheckResult("bracket-axioms", {"seed": seed}, CERTIFIED,
                       {"triples": triples, "combination_triples": combos})


def _probe_cochain(spec, degree):
    """A deterministic nonlinear cochain used for duality sampling."""
    def rule(w):
        total = 0
        for i, f in enumerate(w.factors):
            row = sum((j + 2) * c for j, c in enumerate(f.coords))
            total += (i + 1) * row + row * row
        return Fraction(total)
    return Cochain(spec, degree, rule=rule)


def run_complex_suite(spec, seed, wedges=300):
    """d o d = 0 on random wedges and (d eta)(c) = eta(dc) on samples."""
    rng = random.Random("complex:%d" % seed)
    squared = 0
    for _ in range(wedges):
        p = rng.randint(2, 5)
        c = wedge_chain(spec, [_random_element(spec, rng) for _ in range(p)])
        if c.is_zero():
            continue
        if not boundary(boundary(c)).is_zero():
            return CheckResult("complex-squares-to-zero", {"seed": seed}, REFUTED,
                               {"failed": "d o d", "chain": serialize_chain(c)})
        squared += 1
    duality = 0
    for _ in range(max(1, wedges // 3)):
        p = rng.randint(1, 4)
        c = wedge_chain(spec, [_random_element(spec, rng) for _ in range(p + 1)])
        if c.is_zero():
            continue
        eta = _probe_cochain(spec, p)
        if coboundary(eta, p).evaluate(c) != eta.evaluate(boundary(c)):
            return CheckResult("complex-squares-to-zero", {"seed": seed}, REFUTED,
                               {"failed": "duality", "chain": serialize_chain(c)})
        duality += 1
    return CheckResult("complex-squares-to-zero", {"seed": seed}, CERTIFIED,
                       {"squared_wedges": squared, "duality_samples": duality})


# ---------------------------------------------------------------------------
# Certification suite drivers


def _skip(check, note):
    return CheckResult(check, {}, NOT_APPLICABLE, {"note": note})


def run_inner_suite(spec, gradings, box, enlarge):
    zs = [z for z in gradings if z.in_kernel_mu()]
    if not zs:
        return [_skip("inner-isomorphism", "no radical gradings selected")]
    # Gradings outside the capped support cannot receive any ideal
    # column (every candidate leaves the box), so report them as out of
    # reach instead of scanning to a foregone inconclusive.
    eff = _capped_radius(spec, box, 1200)
    out = []
    skipped = [list(z.coords) for z in zs
               if any(abs(z.coords[j]) > eff for j in spec.free_indices)]
    if skipped:
        out.append(CheckResult(
            "inner-isomorphism", {"box": box}, NOT_APPLICABLE,
            {"note": "grading outside the capped support; enlarge the box",
             "skipped_gradings": skipped, "effective_radius": eff}))
    for z in zs:
        if list(z.coords) in skipped:
            continue
        inner = inner_h2_certify(spec, z, box)
        checked, exhaustive = inner.scan_f_kills_boundaries()
        inner.result.details["f_boundary_scan"] = {
            "wedges": checked, "exhaustive": exhaustive}
        out.append(inner.result)
    return out


def run_outer_suite(spec, gradings, box, enlarge):
    zs = [z for z in gradings if z.is_derived_element()]
    if not zs:
        return [_skip("outer-exactness", "no derived gradings selected")]
    return [outer_h2_certify(spec, z, box) for z in zs]


def run_gk_suite(spec, gradings, box, enlarge):
    u = next((x for x in sorted(box_support(spec, box), key=lambda e: e.sort_key())
              if x.is_derived_element()), None)
    if u is None:
        return [_skip("gk-cycle", "the form vanishes; g_K is everything")]
    zs = [z for z in gradings if z.in_kernel_mu()]
    if not zs:
        zs = [spec.zero]
    return [gk_cycle_check(spec, u, z, box) for z in zs]


def run_omega_suite(spec, gradings, box, enlarge):
    if spec.mu_is_zero():
        return [_skip("omega-class", "the form vanishes; omega is identically zero")]
    zs = [z for z in gradings if z.in_kernel_mu()]
    if not zs:
        return [_skip("omega-class", "no radical gradings selected")]
    return [omega_check(spec, z, box) for z in zs]


def run_h1_suite(spec, gradings, box, enlarge, capped):
    selected = gradings if capped or gradings is not None else None
    return [h1_check(spec, box, gradings=selected, enlarge=enlarge)]


def run_surface_suite(source, box):
    if "surface" not in source:
        return [_skip("surface-generators",
                      "needs a --surface group (boundary classes are read off g, r)")]
    g, r = source["surface"]["genus"], source["surface"]["boundary"]
    return [surface_generator_check(g, r, box_radius=box)]


def run_linext_suite(spec, box, seed):
    return [linear_extension_check(spec, box, trials=120, seed=seed)]


def build_verify_tasks(spec, source, args, selection):
    """One callable per suite; results keep submission order under --jobs."""
    suites = SUITES if args.suite == "all" else (args.suite,)
    tasks = []
    notes = {}
    for name in suites:
        cap = SWEEP_CAPS.get(name)
        if name in ("inner", "outer", "omega", "gk"):
            picks, capped = resolve_selection(spec, selection, args.box, cap)
            if capped:
                notes[name] = {"gradings_capped_at": cap}
        if name == "bracket":
            tasks.append((name, lambda: [run_bracket_suite(spec, args.seed)]))
        elif name == "complex":
            tasks.append((name, lambda: [run_complex_suite(spec, args.seed)]))
        elif name == "inner":
            tasks.append((name, lambda p=picks: run_inner_suite(
                spec, p, args.box, args.enlarge)))
        elif name == "outer":
            tasks.append((name, lambda p=picks: run_outer_suite(
                spec, p, args.box, args.enlarge)))
        elif name == "gk":
            tasks.append((name, lambda p=picks: run_gk_suite(
                spec, p, args.box, args.enlarge)))
        elif name == "omega":
            tasks.append((name, lambda p=picks: run_omega_suite(
                spec, p, args.box, args.enlarge)))
        elif name == "h1":
            cap_h1 = SWEEP_CAPS["h1"]
            if selection in (None, "all-in-box") and _box_size(spec, args.box) > cap_h1:
                h1_picks, _ = resolve_selection(spec, selection, args.box, cap_h1)
                notes[name] = {"gradings_capped_at": cap_h1}
                tasks.append((name, lambda p=h1_picks: run_h1_suite(
                    spec, p, args.box, args.enlarge, True)))
            else:
                explicit = None if selection in (None, "all-in-box") else list(selection)
                tasks.append((name, lambda p=explicit: run_h1_suite(
                    spec, p, args.box, args.enlarge, False)))
        elif name == "surface":
            tasks.append((name, lambda: run_surface_suite(source, args.box)))
        elif name == "linext":
            tasks.append((name, lambda: run_linext_suite(spec, args.box, args.seed)))
    return tasks, notes


def execute_tasks(tasks, jobs):
    if jobs <= 1:
        return [(name, fn()) for name, fn in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [(name, pool.submit(fn)) for name, fn in tasks]
        return [(name, f.result()) for name, f in futures]


# ---------------------------------------------------------------------------
# Rendering


def summarize(results):
    counts = {CERTIFIED: 0, REFUTED: 0, INCONCLUSIVE: 0, NOT_APPLICABLE: 0}
    for r in results:
        counts[r["verdict"]] = counts.get(r["verdict"], 0) + 1
    return {"certified": counts[CERTIFIED],
            "refuted": counts[REFUTED],
            "inconclusive": counts[INCONCLUSIVE],
            "not_applicable": counts[NOT_APPLICABLE]}


def exit_status(summary):
    if summary["refuted"]:
        return 1
    if summary["inconclusive"]:
        return 2
    return 0


def _fmt_scalar(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _result_lines(r):
    params = " ".join("%s=%s" % (k, _fmt_scalar(v))
                      for k, v in sorted(r["params"].items()))
    head = "[%s] %s" % (r["verdict"], r["check"])
    if params:
        head += " " + params
    lines = [head]
    scalars, nested = [], []
    for k, v in sorted(r["details"].items()):
        if isinstance(v, (bool, int, str)) and len(str(v)) <= 48:
            scalars.append("%s=%s" % (k, _fmt_scalar(v)))
        elif isinstance(v, (list, dict)):
            nested.append("%s=#%d" % (k, len(v)))
        else:
            nested.append("%s=..." % k)
    for chunk in (scalars, nested):
        if chunk:
            lines.append("    " + " ".join(chunk))
    return lines


def render_text(report):
    lines = ["== goldman %s ==" % report["command"]]
    cfg = report["config"]
    src = cfg["source"]
    if "surface" in src:
        lines.append("group: surface genus %d with %d boundary circles (%s)"
                     % (src["surface"]["genus"], src["surface"]["boundary"],
                        report["group"]["group"]))
    else:
        lines.append("group: %s (%s)" % (src.get("file", "inline"),
                                         report["group"]["group"]))
    opts = ["box=%d" % cfg["box"], "enlarge=%d" % cfg["enlarge"],
            "seed=%d" % cfg["seed"]]
    if "suite" in cfg:
        opts.append("suite=%s" % cfg["suite"])
    lines.append(" ".join(opts))
    lines.append("gradings: %s" % json.dumps(cfg["gradings"]))
    if report.get("notes"):
        for suite, note in sorted(report["notes"].items()):
            lines.append("note: %s %s" % (suite, json.dumps(note, sort_keys=True)))
    lines.append("")
    if "table" in report:
        rows = [("z", "Z2", "B2", "H2", "predicted", "verdict")]
        for row in report["table"]:
            rows.append((json.dumps(row["z"]), str(row["Z2"]), str(row["B2"]),
                         str(row["H2"]),
                         "-" if row["predicted"] is None else str(row["predicted"]),
                         row["verdict"]))
        widths = [max(len(r[i]) for r in rows) for i in range(6)]
        for r in rows:
            lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        if report.get("out_of_hypothesis"):
            lines.append("")
            lines.append("the form is identically zero: the boundary vanishes and"
                         " H2 is the whole wedge space; no prediction applies")
        lines.append("")
    for r in report["results"]:
        lines.extend(_result_lines(r))
    s = report["summary"]
    lines.append("")
    lines.append("summary: %d certified, %d refuted, %d inconclusive,"
                 " %d not applicable" % (s["certified"], s["refuted"],
                                         s["inconclusive"], s["not_applicable"]))
    return "\n".join(lines) + "\n"


def render_json(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def emit(report, args):
    text = render_json(report) if args.format == "json" else render_text(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print("report written to %s" % args.out)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands


def cmd_validate(args):
    spec, source = load_spec(args)
    report = {
        "command": "validate",
        "config": {"source": source, "box": args.box, "enlarge": args.enlarge,
                   "seed": args.seed, "gradings": "n/a"},
        "group": spec.describe(),
        "results": [],
        "summary": {"certified": 0, "refuted": 0, "inconclusive": 0,
                    "not_applicable": 0},
        "exit_status": 0,
    }
    if args.format == "json":
        emit(report, args)
        return 0
    d = report["group"]
    lines = ["== goldman validate ==",
             "group: %s" % d["group"],
             "free rank: %d" % d["free_rank"],
             "torsion: %s" % (", ".join(str(t) for t in d["torsion"]) or "none"),
             "form is zero: %s" % ("yes" if d["form_is_zero"] else "no"),
             "ker mu generators: %s" % (", ".join(d["kernel_mu_generators"]) or
                                        "none (form nondegenerate)"),
             "status: ok"]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print("report written to %s" % args.out)
    else:
        sys.stdout.write(text)
    return 0


def _homology_row(result):
    d = result.details
    z = list(result.params["z"])
    if result.verdict == NOT_APPLICABLE:
        return {"z": z, "Z2": d["h2_dim"], "B2": 0, "H2": d["h2_dim"],
                "predicted": None, "verdict": result.verdict}
    if d["component"] == "outer":
        return {"z": z, "Z2": d["cycle_dim"], "B2": d["cycle_dim"], "H2": 0,
                "predicted": 0, "verdict": result.verdict}
    return {"z": z, "Z2": d["wedges_full"], "B2": d["inner"]["boundary_rank"],
            "H2": d["h2_dim"], "predicted": d["predicted"],
            "verdict": result.verdict}


def cmd_homology(args):
    spec, source = load_spec(args)
    selection, label = parse_gradings(spec, args.grading)
    gradings, capped = resolve_selection(spec, selection, args.box, cap=64)
    results = main_theorem_check(spec, gradings, args.box)
    dicts = [r.to_dict() for r in results]
    summary = summarize(dicts)
    report = {
        "command": "homology",
        "config": {"source": source, "box": args.box, "enlarge": args.enlarge,
                   "seed": args.seed, "gradings": label},
        "group": spec.describe(),
        "notes": {"homology": {"gradings_capped_at": 64}} if capped else {},
        "table": [_homology_row(r) for r in results],
        "out_of_hypothesis": spec.mu_is_zero(),
        "results": dicts,
        "summary": summary,
    }
    report["exit_status"] = exit_status(summary)
    emit(report, args)
    return report["exit_status"]


def cmd_verify(args):
    spec, source = load_spec(args)
    selection, label = parse_gradings(spec, args.grading)
    tasks, notes = build_verify_tasks(spec, source, args, selection)
    collected = execute_tasks(tasks, args.jobs)
    dicts = []
    for _, results in collected:
        dicts.extend(r.to_dict() for r in results)
    summary = summarize(dicts)
    report = {
        "command": "verify",
        "config": {"source": source, "box": args.box, "enlarge": args.enlarge,
                   "seed": args.seed, "suite": args.suite, "gradings": label},
        "group": spec.describe(),
        "notes": notes,
        "results": dicts,
        "summary": summary,
    }
    report["exit_status"] = exit_status(summary)
    emit(report, args)
    return report["exit_status"]


# ---------------------------------------------------------------------------
# Entry point


class _Parser(argparse.ArgumentParser):
    """Usage problems exit 1; status 2 is reserved for inconclusive runs."""

    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(
        prog="goldman",
        description="exact truncated homology certification for the "
                    "Goldman bracket on a finitely generated abelian group")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--spec", metavar="PATH", help="JSON group file")
        p.add_argument("--surface", metavar="G,R",
                       help="surface shorthand: genus,boundary")
        p.add_argument("--box", type=int, default=2, metavar="M",
                       help="truncation box radius (default 2)")
        p.add_argument("--enlarge", type=int, default=3, metavar="K",
                       help="search box enlargement factor (default 3)")
        p.add_argument("--grading", action="append", default=[], metavar="VECS",
                       help="semicolon separated coordinate vectors, or all-in-box")
        p.add_argument("--seed", type=int, default=0, metavar="N",
                       help="seed for sampled checks (default 0)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", metavar="PATH", help="write the report here")
        p.add_argument("--jobs", type=int, default=1, metavar="N",
                       help="worker threads for independent suites (default 1)")

    common(sub.add_parser("validate", help="check a group file and print its structure"))
    common(sub.add_parser("homology", help="truncated H2 table per grading"))
    p_verify = sub.add_parser("verify", help="run certification suites")
    common(p_verify)
    p_verify.add_argument("--suite", choices=SUITES + ("all",), default="all")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.box < 1 or args.enlarge < 1 or args.jobs < 1:
            raise UsageError("--box, --enlarge and --jobs must be at least 1")
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "homology":
            return cmd_homology(args)
        return cmd_verify(args)
    except (UsageError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
