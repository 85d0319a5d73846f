"""Command-line front end.

Every subcommand writes one JSON document (to ``--out`` or stdout) and a
one-line summary to stderr.  Exit codes: 0 success, 1 the mathematics said
no (a named condition failed, a cap ran out, a predicate is false), 2 bad
input.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import redirect_stderr
from pathlib import Path

from .certificates import Certificate, verify_certificate
from .errors import CapExceeded, ConditionFailed, InputError, LNDError, Rejected
from .poly import B, Ring

EXIT_OK, EXIT_REJECTED, EXIT_INPUT = 0, 1, 2

COMMANDS = (
    "certify-lnd", "jacobian", "jacobian2", "commute", "irreducible", "equivalent", "partner",
    "decompose", "level", "psi", "c-construct", "mc-chain", "phi-search", "slice-construct",
    "family-e", "family-ex1", "nontriang", "rank3", "lscor", "verify", "batch",
)


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # raise instead of exiting so batch entries stay isolated
    def error(self, message):
        raise _ArgError(message)


# input helpers


def _ring(args) -> Ring:
    return Ring.parse(args.ring, args.field)


def _poly(ring: Ring, text, what: str):
    if text is None:
        raise InputError(f"missing --{what}")
    return ring(text)


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _derivation_from_obj(obj, ring: Ring):
    from .derivations import Derivation

    if isinstance(obj, dict) and obj.get("schema"):
        obj = obj.get("subject", {}).get("derivation")
    if isinstance(obj, dict) and "images" in obj:
        return Derivation.from_dict(obj)
    if isinstance(obj, dict):
        return Derivation.from_map(ring, {k: str(v) for k, v in obj.items()})
    raise InputError("a derivation is a map variable -> image")


def _derivation(args, ring: Ring, prefix: str = "d"):
    from .derivations import Derivation

    path = getattr(args, f"{prefix}_file")
    images = getattr(args, f"{prefix}_image")
    if path and images:
        raise InputError("give either a derivation file or images, not both")
    if path:
        return _derivation_from_obj(_load_json(path), ring)
    if images:
        m = {}
        for item in images:
            var, sep, val = item.partition("=")
            if not sep:
                raise InputError(f"image {item!r} is not VAR=POLY")
            m[var.strip()] = val
        return Derivation.from_map(ring, m)
    raise InputError(f"missing derivation (--{prefix}-file or --{prefix}-image)")


def _add_derivation(p, prefix="d", label="D"):
    long = "derivation" if prefix == "d" else prefix
    p.add_argument(f"--{long}-file", f"--{prefix}-file", dest=f"{prefix}_file",
                   help=f"JSON file with {label}: {{ring, field, images}} or a variable -> image map")
    p.add_argument(f"--{long}-image", f"--{prefix}-image", dest=f"{prefix}_image", action="append", metavar="VAR=POLY",
                   help=f"one image of {label}; repeat per variable")


def _plain(command, result):
    return {"command": command, "result": result}


def _cert(cert: Certificate):
    return cert.to_dict(), (EXIT_OK if cert.ok else EXIT_REJECTED), None


def _verdict(command, v, extra=None):
    doc = {"value": bool(v), "witness": v.witness, "variable": v.variable, "reason": v.reason}
    if extra:
        doc.update(extra)
    return _plain(command, doc), (EXIT_OK if v else EXIT_REJECTED), None


# subcommand bodies; each returns (document, exit code, summary or None)


def cmd_certify_lnd(args):
    from .derivations import certify_lnd

    D = _derivation(args, _ring(args))
    return _cert(certify_lnd(D, args.cap).to_certificate())


def cmd_jacobian(args):
    from .derivations import jacobian3

    r = _ring(args)
    D = jacobian3(_poly(r, args.f, "f"), _poly(r, args.g, "g"))
    return _plain("jacobian", {"derivation": D.to_dict()}), EXIT_OK, None


def cmd_jacobian2(args):
    from .constructions import H_RING
    from .derivations import jacobian2_over_R

    r = _ring(args)
    F = _poly(r, args.F, "F")
    alpha = None
    if args.alpha is not None:
        alpha = H_RING(args.alpha) if args.alpha_of_F else r(args.alpha)
    D = jacobian2_over_R(F, alpha, tuple(args.plane.split(",")))
    return _plain("jacobian2", {"derivation": D.to_dict()}), EXIT_OK, None


def cmd_commute(args):
    from .derivations import Verdict, commutator

    r = _ring(args)
    C = commutator(_derivation(args, r), _derivation(args, r, "e"))
    v = Verdict(C.is_zero, None if C.is_zero else C.to_dict()["images"])
    return _verdict("commute", v, {"commutator": C.to_dict()})


def cmd_irreducible(args):
    from .derivations import is_irreducible

    return _verdict("irreducible", is_irreducible(_derivation(args, _ring(args))))


def cmd_equivalent(args):
    from .derivations import equivalent_check

    r = _ring(args)
    return _verdict("equivalent", equivalent_check(_derivation(args, r), _derivation(args, r, "e")))


def cmd_partner(args):
    from .derivations import build_commuting_partner

    r = _ring(args)
    E = build_commuting_partner(_derivation(args, r), args.x_var, _poly(r, args.g, "g"), args.cap)
    return _plain("partner", {"derivation": E.to_dict()}), EXIT_OK, None


def _plane_map(args):
    from .plane_autos import PlaneAutomorphism

    if args.y is None or args.z is None:
        raise InputError("need both --y and --z")
    return PlaneAutomorphism.of(args.y, args.z, args.field)


def cmd_decompose(args):
    from .plane_autos import decompose_tame, level_from_word

    word = decompose_tame(_plane_map(args))
    res = {"word": word.to_dict(), "swap_count": word.swap_count}
    if args.level:
        res["level"] = level_from_word(word)
    return _plain("decompose", res), EXIT_OK, f"swap_count {word.swap_count}"


def cmd_level(args):
    from .plane_autos import decompose_tame, level_from_word

    word = decompose_tame(_plane_map(args))
    lev = level_from_word(word)
    return _plain("level", {"level": lev, "swap_count": word.swap_count}), EXIT_OK, f"level {lev}"


def cmd_psi(args):
    from .plane_autos import psi_representative

    r = _ring(args)
    D = _derivation(args, r) if (args.d_file or args.d_image) else None
    sv = r(args.slice_value) if args.slice_value is not None else 1
    a = psi_representative(_poly(r, args.f, "f"), _poly(r, args.slice, "slice"), sv, D,
                           None if args.plane_field == "auto" else args.plane_field)
    return _plain("psi", {"automorphism": a.to_dict()}), EXIT_OK, None


def cmd_c_construct(args):
    from .constructions import c_construction
    from .derivations import Derivation

    r = _ring(args)
    if args.spec:
        spec = _load_json(args.spec)
        try:
            deltas = [_derivation_from_obj(d, r) for d in spec["derivations"]]
            fs = [r(str(c)) for c in spec["coefficients"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed c-construction spec: {exc}") from None
    else:
        if not args.partial:
            raise InputError("give --spec or --partial VAR:COEFF terms")
        deltas, fs = [], []
        for item in args.partial:
            var, sep, coeff = item.partition(":")
            if not sep:
                raise InputError(f"term {item!r} is not VAR:COEFF")
            deltas.append(Derivation.partial(r, var.strip()))
            fs.append(r(coeff))
    Delta, bound, per = c_construction(deltas, fs, None, args.cap)
    res = {"derivation": Delta.to_dict(), "bound": bound, "per_generator": per}
    return _plain("c-construct", res), EXIT_OK, f"bound {bound}"


def cmd_mc_chain(args):
    from .constructions import mc_chain_from_word
    from .plane_autos import decompose_tame

    chain = mc_chain_from_word(decompose_tame(_plane_map(args)), B, validate=False)
    return _cert(chain.to_certificate())


def cmd_phi_search(args):
    from .constructions import minimal_phi_search

    r = _ring(args)
    phi, rec = minimal_phi_search(_poly(r, args.f, "f"), _poly(r, args.g, "g"), _poly(r, args.r, "r"),
                                  args.deg_cap, args.coeff_deg_cap)
    return _plain("phi-search", {"phi": str(phi), "search": rec}), EXIT_OK, f"phi = {phi}"


def cmd_slice_construct(args):
    from .constructions import local_slice_construction

    r = _ring(args)
    sc = local_slice_construction(_derivation(args, r), _poly(r, args.f, "f"), _poly(r, args.g, "g"),
                                  _poly(r, args.r, "r"), args.deg_cap, args.coeff_deg_cap, args.cap)
    res = {
        "h": str(sc.h), "derivation": sc.delta.to_dict(), "phi": str(sc.phi), "P": str(sc.P),
        "lambda": str(sc.scalar), "phi_search": sc.phi_record,
        "nilpotency": sc.certificate.to_certificate().to_dict(),
    }
    return _plain("slice-construct", res), EXIT_OK, f"h = {sc.h}"


def cmd_family_e(args):
    from .constructions import FamilyParamsE, family_E

    params = FamilyParamsE(args.m, args.n, args.F)
    if args.rank3:
        from .rank_lab import family_rank3

        _, cert = family_rank3(params, args.cap, raise_on_fail=False)
        return _cert(cert)
    fam = family_E(params, args.cap)
    res = {
        "params": params.to_dict(), "f": str(fam.f), "g": str(fam.g), "r": str(fam.r), "h": str(fam.h),
        "derivation": fam.E.to_dict(), "nilpotency": fam.certificate.to_certificate().to_dict(),
    }
    return _plain("family-e", res), EXIT_OK, None


def cmd_family_ex1(args):
    from .constructions import FamilyParamsEx1, family_ex1

    params = FamilyParamsEx1(args.r1, args.r2, args.h1, args.h2)
    fam = family_ex1(params, args.cap)
    cert = fam.chain.to_certificate()
    cert.data["family"] = params.to_dict()
    cert.data["derivation"] = fam.D.to_dict()
    cert.data["f"], cert.data["g"] = str(fam.f), str(fam.g)
    return _cert(cert)


def cmd_nontriang(args):
    from .rank_lab import _nontriang_checks

    r = _ring(args)
    try:
        w = tuple(int(t) for t in args.weights.split(","))
    except ValueError:
        raise InputError(f"bad weights {args.weights!r}") from None
    if len(w) != 2 or not any(w):
        raise InputError("weights are two integers, not both zero")
    return _cert(_nontriang_checks(_poly(r, args.f, "f"), _poly(r, args.g, "g"), w))


def _iv_steps(args):
    from .rank_lab import PARAM_RING, family_iv_steps

    if args.family_steps:
        m, n, F = args.family_steps
        return family_iv_steps(int(m), int(n), PARAM_RING(F))
    if args.iv:
        return [{"target": t, "numerator": num, "divisor": div} for t, num, div in args.iv]
    return None


def cmd_rank3(args):
    from .derivations import apply
    from .rank_lab import rank3_certify

    r = _ring(args)
    E = _derivation(args, r)
    f, h, rr = _poly(r, args.f, "f"), _poly(r, args.h, "h"), _poly(r, args.r, "r")
    v = r(args.v) if args.v is not None else apply(E, rr)
    cands = None
    if args.candidate:
        cands = []
        for item in args.candidate:
            poly, sep, e = item.rpartition(":")
            if not sep:
                raise InputError(f"candidate {item!r} is not POLY:EXP")
            cands.append((r(poly), int(e)))
    return _cert(rank3_certify(E, f, h, rr, v, cands, args.p_deg_cap, _iv_steps(args), args.cap,
                               raise_on_fail=False))


def cmd_lscor(args):
    from .rank_lab import lscor_certify

    r = _ring(args)
    cert = lscor_certify(_derivation(args, r), _poly(r, args.f, "f"), _poly(r, args.g, "g"),
                         _poly(r, args.r, "r"), args.deg_cap, args.coeff_deg_cap, _iv_steps(args), args.cap,
                         raise_on_fail=False)
    return _cert(cert)


def cmd_verify(args):
    try:
        text = Path(args.cert).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {args.cert}: {exc}") from None
    cert = Certificate.from_json(text)
    agrees, fresh = verify_certificate(cert)
    res = {"kind": cert.kind, "agrees": agrees, "ok": fresh.ok,
           "failed": [c.name for c in fresh.failed()]}
    code = EXIT_OK if agrees and fresh.ok else EXIT_REJECTED
    return _plain("verify", res), code, f"agrees={agrees} ok={fresh.ok}"


# batch


def _entry_argv(entry):
    if isinstance(entry, list) and all(isinstance(a, str) for a in entry):
        return entry
    if isinstance(entry, dict) and isinstance(entry.get("command"), str):
        argv = [entry["command"]]
        for k, v in (entry.get("args") or {}).items():
            flag = "--" + k.replace("_", "-")
            if v is True:
                argv.append(flag)
            elif v is False or v is None:
                continue
            elif isinstance(v, list):
                for item in v:
                    argv += [flag, str(item)]
            else:
                argv += [flag, str(v)]
        return argv
    raise InputError(f"manifest entry {entry!r} is neither an argv list nor a command object")


def _run_entry(item):
    index, argv = item
    err = io.StringIO()
    with redirect_stderr(err):
        doc, code = execute(argv)
    return index, argv, doc, code, err.getvalue().strip()


def cmd_batch(args):
    raw = _load_json(args.manifest)
    if isinstance(raw, dict):
        raw = raw.get("requests")
    if not isinstance(raw, list):
        raise InputError("a manifest is a JSON list of requests (or {\"requests\": [...]})")
    work = []
    for i, entry in enumerate(raw):
        try:
            work.append((i, _entry_argv(entry)))
        except InputError as exc:
            work.append((i, ["__invalid__", str(exc)]))
    t0 = time.perf_counter()
    if args.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_entry, work))
    else:
        results = [_run_entry(w) for w in work]
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for index, argv, doc, code, diag in results:
        path = None
        if out_dir:
            path = out_dir / f"{index:04d}-{argv[0]}.json"
            path.write_text(_dump(doc), encoding="utf-8")
            path = str(path)
        entries.append({"index": index, "argv": argv, "exit_code": code, "passed": code == EXIT_OK,
                        "classification": {0: "passed", 1: "rejected", 2: "input-error"}[code],
                        "certificate": path, "diagnostic": diag or None})
    passed = sum(e["passed"] for e in entries)
    summary = {
        "total": len(entries), "passed": passed, "failed": len(entries) - passed,
        "rejected": sum(e["exit_code"] == EXIT_REJECTED for e in entries),
        "input_errors": sum(e["exit_code"] == EXIT_INPUT for e in entries),
        "requests": entries,
        "metadata": {"elapsed_seconds": round(time.perf_counter() - t0, 3), "jobs": args.jobs},
    }
    code = EXIT_OK if passed == len(entries) else EXIT_REJECTED
    return _plain("batch", summary), code, f"{passed}/{len(entries)} passed"


# parser


def _common(p, ring=True):
    if ring:
        p.add_argument("--ring", default="x,y,z", help="comma-separated variables (default x,y,z)")
        p.add_argument("--field", default="Q", help='coefficient field: Q or Q(x) (default Q)')
    p.add_argument("--cap", type=int, default=None, help="iteration cap (default LND_DEFAULT_CAP or 64)")
    p.add_argument("--out", help="write the JSON document here instead of stdout")


def _caps(p):
    p.add_argument("--deg-cap", type=int, default=6)
    p.add_argument("--coeff-deg-cap", type=int, default=None)


def _iv_args(p):
    p.add_argument("--iv", nargs=3, action="append", metavar=("TARGET", "NUMERATOR", "DIVISOR"),
                   help="localization step TARGET*DIVISOR = NUMERATOR over f, h, r, x, y, z")
    p.add_argument("--family-steps", nargs=3, metavar=("M", "N", "F"),
                   help="use the localization steps of the family with these parameters")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lnd", description="Exact computations with locally nilpotent derivations of Q[x,y,z].")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("certify-lnd", help="nilpotency certificate for D")
    _common(p)
    _add_derivation(p)

    p = sub.add_parser("jacobian", help="Jac(f, g, .)")
    _common(p)
    p.add_argument("--f")
    p.add_argument("--g")

    p = sub.add_parser("jacobian2", help="alpha * Jac(F, .) in two plane variables")
    _common(p)
    p.add_argument("--F")
    p.add_argument("--alpha")
    p.add_argument("--alpha-of-F", action="store_true", help="read --alpha as a polynomial in x, t with t = F")
    p.add_argument("--plane", default="y,z")

    for name, hlp in (("commute", "is [D, E] zero"), ("equivalent", "do D and E share a kernel")):
        p = sub.add_parser(name, help=hlp)
        _common(p)
        _add_derivation(p)
        _add_derivation(p, "e", "E")

    p = sub.add_parser("irreducible", help="is the gcd of the images a unit")
    _common(p)
    _add_derivation(p)

    p = sub.add_parser("partner", help="commuting partner Jac(x, g, .)")
    _common(p)
    _add_derivation(p)
    p.add_argument("--x-var", default="x")
    p.add_argument("--g")

    for name in ("decompose", "level", "mc-chain"):
        p = sub.add_parser(name, help=f"{name} for the plane map (y, z) -> (Y, Z)")
        _common(p, ring=False)
        p.add_argument("--field", default="Q(x)")
        p.add_argument("--y", help="image of y")
        p.add_argument("--z", help="image of z")
        if name == "decompose":
            p.add_argument("--level", action="store_true")

    p = sub.add_parser("psi", help="coset representative (f, slice/value)")
    _common(p)
    _add_derivation(p)
    p.add_argument("--f")
    p.add_argument("--slice")
    p.add_argument("--slice-value")
    p.add_argument("--plane-field", default="auto", help="Q, Q(x) or auto")

    p = sub.add_parser("c-construct", help="sum of kernel-weighted commuting derivations")
    _common(p)
    p.add_argument("--spec", help='JSON file {"derivations": [...], "coefficients": [...]}')
    p.add_argument("--partial", action="append", metavar="VAR:COEFF", help="coordinate partial with coefficient")

    p = sub.add_parser("phi-search", help="least-degree phi(f, r) in gB")
    _common(p)
    _caps(p)
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--r")

    p = sub.add_parser("slice-construct", help="Jacobian derivation from a local slice")
    _common(p)
    _caps(p)
    _add_derivation(p)
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--r")

    p = sub.add_parser("family-e", help="the rank-3 family E(m, n, F)")
    _common(p, ring=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--F", required=True, help="polynomial in t1, t2")
    p.add_argument("--rank3", action="store_true", help="emit the rank-3 certificate")

    p = sub.add_parser("family-ex1", help="the rank-2 family with its chain")
    _common(p, ring=False)
    for k in ("r1", "r2", "h1", "h2"):
        p.add_argument(f"--{k}", required=True)

    p = sub.add_parser("nontriang", help="non-triangularizability obstruction")
    _common(p)
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--weights", default="1,0")

    p = sub.add_parser("rank3", help="four-condition rank-3 certificate")
    _common(p)
    _add_derivation(p)
    _iv_args(p)
    for k in ("f", "h", "r", "v"):
        p.add_argument(f"--{k}")
    p.add_argument("--candidate", action="append", metavar="POLY:EXP")
    p.add_argument("--p-deg-cap", type=int, default=None)

    p = sub.add_parser("lscor", help="local slice construction then rank-3 certificate")
    _common(p)
    _caps(p)
    _add_derivation(p)
    _iv_args(p)
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--r")

    p = sub.add_parser("verify", help="replay a certificate")
    _common(p, ring=False)
    p.add_argument("--cert", required=True)

    p = sub.add_parser("batch", help="run a manifest of requests")
    _common(p, ring=False)
    p.add_argument("--manifest", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-dir", help="write one document per request here")
    return ap


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


def _error_doc(command, kind, exc):
    err = {"type": type(exc).__name__, "class": kind, "message": str(exc)}
    if isinstance(exc, ConditionFailed):
        err["condition"], err["witness"] = exc.condition, exc.witness
    if isinstance(exc, CapExceeded):
        err["variable"], err["cap"] = exc.variable, exc.cap
    return {"command": command, "error": err}


def _finish(doc, code, out):
    if out:
        Path(out).write_text(_dump(doc), encoding="utf-8")
    return doc, code


def execute(argv):
    """Run one request; returns (document, exit code) and writes diagnostics to stderr."""
    argv = list(argv)
    command = argv[0] if argv else None
    if command == "__invalid__":
        print(f"lnd: {argv[1]}", file=sys.stderr)
        return {"command": None, "error": {"class": "input", "message": argv[1]}}, EXIT_INPUT
    try:
        args = build_parser().parse_args(argv)
    except _ArgError as exc:
        print(f"lnd: {exc}", file=sys.stderr)
        return {"command": command, "error": {"class": "input", "message": str(exc)}}, EXIT_INPUT
    if args.command is None:
        print("lnd: a subcommand is required", file=sys.stderr)
        return {"command": None, "error": {"class": "input", "message": "no subcommand"}}, EXIT_INPUT
    out = getattr(args, "out", None)
    try:
        doc, code, summary = HANDLERS[args.command](args)
    except Rejected as exc:
        print(f"lnd {args.command}: rejected: {exc}", file=sys.stderr)
        return _finish(_error_doc(args.command, "rejected", exc), EXIT_REJECTED, out)
    except (LNDError, ZeroDivisionError) as exc:
        print(f"lnd {args.command}: input error: {exc}", file=sys.stderr)
        return _finish(_error_doc(args.command, "input", exc), EXIT_INPUT, out)
    if summary is None:
        summary = "ok" if code == EXIT_OK else "rejected"
        if doc.get("schema"):
            bad = [c["name"] for c in doc["checks"] if not c["pass"]]
            summary = f"{doc['kind']}: " + ("all checks pass" if not bad else "failed " + ", ".join(bad))
    print(f"lnd {args.command}: {summary}", file=sys.stderr)
    return _finish(doc, code, out)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        build_parser().print_help(sys.stderr)
        return EXIT_INPUT
    try:
        doc, code = execute(argv)
    except SystemExit as exc:  # -h / --help
        return exc.code or EXIT_OK
    if _out_flag(argv) is None:
        sys.stdout.write(_dump(doc))
    return code


def _out_flag(argv):
    for i, a in enumerate(argv):
        if a == "--out" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--out="):
            return a[6:]
    return None


if __name__ == "__main__":
    sys.exit(main())
