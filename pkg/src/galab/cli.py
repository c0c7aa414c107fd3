"""Command line front end: spec-file ingestion, analysis dispatch, reports, corpus runner.

Spec files are line-oriented blocks::

    ring: B
    vars: x, y, z
    relations:
    derivation:
      d(x) = 0
      d(y) = -2*z
      d(z) = x^2
    kernel_gens: x, t = x^2*y + z^2
    assert: factorial, faithfully_flat, primes(x)
    options:
      kernel_bound = 3

A header starts at column 1; indented lines continue the current block.
``#`` starts a comment.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import __version__
from .bundle import check_triviality, fiber_at_point, sing_locus
from .caps import Caps, set_caps
from .errors import GalabError, InputError, InvariantError, ParseError
from .ideal import Ideal
from .lnd import (
    Derivation,
    exp_action,
    find_local_slice,
    fixed_locus,
    is_irreducible,
    is_lnd,
    kernel_search,
)
from .poly import Polynomial, SemanticError, fresh_names, parse, render
from .ring import make_ring
from .tower import build_tower, residue_chain, verify_tower

BLOCKS = ("ring", "vars", "relations", "derivation", "kernel_gens", "assert", "options")
ASSERTIONS = ("factorial", "faithfully_flat", "free_action", "irreducible")
OPTIONS = {
    "kernel_bound": int,
    "plinth_bound": int,
    "slice_bound": int,
    "samples": int,
    "nil_cap": int,
    "assume_irreducible": bool,
}
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_HEADER = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*:(.*)\Z")
_IMAGE = re.compile(r"d\(\s*([A-Za-z][A-Za-z0-9_]*)\s*\)\s*=(.*)\Z")


# ---------------------------------------------------------------------------
# spec files


@dataclass
class Item:
    text: str
    line: int
    column: int


@dataclass
class DerivationSpec:
    label: str
    vars: tuple
    relations: list  # Polynomials
    images: dict  # var -> Polynomial
    kernel_gens: list  # (name, Polynomial)
    assertions: dict
    primes: list  # Polynomials
    options: dict
    digest: str

    def build(self):
        """``(ring, derivation)``; presentation and well-definedness are checked here."""
        B = make_ring(self.vars, self.relations, label=self.label)
        delta = Derivation(B, self.images)
        return B, delta

    @property
    def a_names(self) -> tuple:
        return tuple(n for n, _ in self.kernel_gens)

    @property
    def a_gens(self) -> tuple:
        return tuple(g for _, g in self.kernel_gens)


def _split_top(text: str, line: int, column: int) -> list:
    """Split at commas outside parentheses, keeping 1-based columns."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text + ","):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            chunk = text[start:i]
            stripped = chunk.strip()
            if stripped:
                lead = len(chunk) - len(chunk.lstrip())
                out.append(Item(stripped, line, column + start + lead))
            start = i + 1
    return out


def _strip_comment(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def parse_spec(text: str) -> DerivationSpec:
    blocks: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if not line[0].isspace():
            m = _HEADER.match(line)
            if not m or m.group(1) not in BLOCKS:
                word = line.split(":")[0].strip() or line.strip()
                raise ParseError(f"unknown block {word!r}", lineno, 1, [f"{b}:" for b in BLOCKS])
            current = m.group(1)
            if current in blocks:
                raise ParseError(f"duplicate block {current!r}", lineno, 1, [])
            rest = m.group(2)
            col = len(line) - len(rest) + 1
            blocks[current] = {"line": lineno, "chunks": []}
            if rest.strip():
                blocks[current]["chunks"].append(Item(rest, lineno, col))
            continue
        if current is None:
            raise ParseError("indented line outside any block", lineno, 1, [f"{b}:" for b in BLOCKS])
        blocks[current]["chunks"].append(Item(line, lineno, 1))

    if "vars" not in blocks:
        raise ParseError("missing 'vars:' block", 1, 1, ["vars:"])
    if "derivation" not in blocks:
        raise ParseError("missing 'derivation:' block", 1, 1, ["derivation:"])

    def items(name, split=True):
        out = []
        for ch in blocks.get(name, {"chunks": []})["chunks"]:
            out.extend(_split_top(ch.text, ch.line, ch.column) if split else
                       [Item(ch.text.strip(), ch.line, ch.column + len(ch.text) - len(ch.text.lstrip()))])
        return out

    label = "B"
    if "ring" in blocks:
        its = items("ring")
        if len(its) != 1 or not _IDENT.match(its[0].text):
            it = its[0] if its else Item("", blocks["ring"]["line"], 1)
            raise ParseError("ring label must be one identifier", it.line, it.column, ["identifier"])
        label = its[0].text

    vars = []
    for it in items("vars"):
        if not _IDENT.match(it.text):
            raise ParseError(f"bad variable name {it.text!r}", it.line, it.column, ["identifier"])
        if it.text in vars:
            raise ParseError(f"duplicate variable {it.text!r}", it.line, it.column, [])
        vars.append(it.text)
    if not vars:
        raise ParseError("no variables declared", blocks["vars"]["line"], 1, ["identifier"])
    vars = tuple(vars)

    def expr(it: Item, text=None, offset=0):
        return parse(it.text if text is None else text, vars, it.line, it.column + offset)

    def equation(it: Item):
        if "=" in it.text:
            lhs, rhs = it.text.split("=", 1)
            return expr(it, lhs) - expr(it, rhs, len(lhs) + 1)
        return expr(it)

    relations = [equation(it) for it in items("relations")]

    images: dict = {}
    for it in items("derivation", split=False):
        m = _IMAGE.match(it.text)
        if not m:
            raise ParseError("malformed derivation line", it.line, it.column, ["d(<var>) = <expr>"])
        v = m.group(1)
        if v not in vars:
            raise SemanticError(f"unknown variable {v!r}", it.line, it.column + it.text.index(v), vars)
        if v in images:
            raise SemanticError(f"duplicate image for {v}", it.line, it.column, [])
        images[v] = expr(it, m.group(2), m.start(2))
    for v in vars:
        if v not in images:
            raise SemanticError(f"missing image for {v}", blocks["derivation"]["line"], 1, [f"d({v}) = <expr>"])

    kernel_gens = []
    for i, it in enumerate(items("kernel_gens")):
        name, body, off = None, it.text, 0
        if "=" in it.text:
            lhs, rhs = it.text.split("=", 1)
            if not _IDENT.match(lhs.strip()):
                raise ParseError("kernel generator name must be an identifier", it.line, it.column, ["identifier"])
            name, body, off = lhs.strip(), rhs, len(lhs) + 1
        g = expr(it, body, off)
        if name is None:
            name = body.strip() if body.strip() in vars else f"a{i + 1}"
        if name in (n for n, _ in kernel_gens):
            raise SemanticError(f"duplicate kernel generator name {name!r}", it.line, it.column, [])
        kernel_gens.append((name, g))

    assertions = {a: False for a in ASSERTIONS}
    primes = []
    for it in items("assert"):
        if it.text in ASSERTIONS:
            assertions[it.text] = True
        elif it.text.startswith("primes(") and it.text.endswith(")"):
            inner = it.text[len("primes("):-1]
            for sub in _split_top(inner, it.line, it.column + len("primes(")):
                primes.append(expr(sub))
        else:
            raise ParseError(f"unknown assertion {it.text!r}", it.line, it.column,
                             list(ASSERTIONS) + ["primes(...)"])

    options = {}
    for it in items("options"):
        key, sep, value = it.text.partition("=")
        key = key.strip()
        if not sep or key not in OPTIONS:
            raise ParseError(f"bad option {it.text!r}", it.line, it.column, [f"{k} = ..." for k in OPTIONS])
        kind = OPTIONS[key]
        value = value.strip()
        if kind is bool:
            if value not in ("true", "false"):
                raise ParseError(f"option {key} needs true or false", it.line, it.column, ["true", "false"])
            options[key] = value == "true"
        else:
            try:
                options[key] = int(value)
            except ValueError:
                raise ParseError(f"option {key} needs an integer", it.line, it.column, ["integer"]) from None

    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return DerivationSpec(label, vars, relations, images, kernel_gens, assertions, primes, options, digest)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    command: str
    args: dict
    input_digest: str
    sections: dict
    hypotheses: dict
    tool: str = "galab"
    version: str = __version__
    timing: dict = field(default_factory=dict)  # never part of the body

    def body(self) -> dict:
        return {
            "tool": self.tool,
            "version": self.version,
            "command": self.command,
            "args": self.args,
            "input_digest": self.input_digest,
            "sections": self.sections,
            "hypotheses": self.hypotheses,
        }

    def body_json(self) -> str:
        return dump_body(self.body())

    def to_json(self) -> str:
        return json.dumps({"body": self.body(), "timing": self.timing}, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        b = data["body"] if "body" in data else data
        return cls(b["command"], b["args"], b["input_digest"], b["sections"], b["hypotheses"], b["tool"],
                   b["version"], data.get("timing", {}))

    def to_text(self) -> str:
        lines = [f"{self.tool} {self.version} {self.command}", f"input {self.input_digest[:16]}"]
        _flatten(self.sections, "", lines)
        if self.hypotheses:
            _flatten({"hypotheses": self.hypotheses}, "", lines)
        return "\n".join(lines) + "\n"


def dump_body(body: dict) -> str:
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def _flatten(obj, prefix: str, out: list):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(v, f"{prefix}.{k}" if prefix else str(k), out)
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            _flatten(v, f"{prefix}[{i}]", out)
    elif isinstance(obj, list):
        out.append(f"{prefix}: {', '.join(str(v) for v in obj)}")
    else:
        out.append(f"{prefix}: {obj}")


def _s(p) -> str:
    return render(p) if isinstance(p, Polynomial) else str(p)


def _ideal(I: Ideal) -> list:
    return [render(g) for g in I.basis()] if I.gens else []


# ---------------------------------------------------------------------------
# commands


class Session:
    def __init__(self, spec: DerivationSpec):
        self.spec = spec
        self.ring, self.delta = spec.build()
        self.a_gens = spec.a_gens
        self.a_names = spec.a_names
        self.opts = spec.options

    def opt(self, key, default):
        return self.opts.get(key, default)

    def need_kernel_gens(self):
        if not self.a_gens:
            raise InputError("this command needs a kernel_gens block")

    def element(self, text: str) -> Polynomial:
        return parse(text, self.ring.vars)


def cmd_check(S: Session, args) -> dict:
    v = is_lnd(S.delta, S.opt("nil_cap", None))
    out = {"lnd": {"verdict": v.verdict, "nil_degrees": {k: d for k, d in v.nil_degrees.items()},
                   "trivial": v.trivial}}
    if not v.is_lnd:
        return out
    irr = is_irreducible(S.delta, S.spec.primes)
    out["irreducible"] = {"verdict": irr.verdict, "witness": _s(irr.witness) if irr.witness is not None else None,
                          "method": irr.method}
    fl = fixed_locus(S.delta, S.a_gens, S.a_names)
    out["fixed_locus"] = {
        "generators": [render(g) for g in fl.generators],
        "basis": [render(g) for g in fl.basis],
        "free": fl.free,
        "trivial_action": fl.trivial,
        "contraction": [render(g) for g in fl.contraction] if fl.contraction is not None else None,
        "notes": list(fl.notes),
    }
    out["kernel_gens"] = {n: {"expr": render(g), "in_kernel": S.ring.is_zero(S.delta(g))}
                          for n, g in S.spec.kernel_gens}
    return out


def cmd_kernel(S: Session, args) -> dict:
    d = args.bound if args.bound is not None else S.opt("kernel_bound", 3)
    ks = kernel_search(S.delta, d)
    return {"kernel": {
        "bound": d,
        "generators": [render(g) for g in ks.generators],
        "dimension": ks.basis_size,
        "declared": {n: S.ring.is_zero(S.delta(g)) for n, g in S.spec.kernel_gens},
        "note": "degree-bounded search; not claimed to generate the kernel",
    }}


def cmd_plinth(S: Session, args) -> dict:
    S.need_kernel_gens()
    d = args.bound if args.bound is not None else S.opt("plinth_bound", 3)
    sl = sing_locus(S.delta, S.a_gens, S.a_names, d)
    pl = sl.plinth
    return {
        "plinth": {
            "bound": d,
            "kernel": str(pl.kernel),
            "elements": [render(e) for e in pl.elements],
            "principal": pl.principal,
            "generator": _s(pl.generator) if pl.generator is not None else None,
            "generator_in_ring": _s(pl.generator_in_ring) if pl.generator_in_ring is not None else None,
            "verdict": pl.verdict,
            "flag": pl.flag,
        },
        "sing_locus": {
            "generator": _s(sl.generator) if sl.generator is not None else None,
            "reduced": _s(sl.reduced) if sl.reduced is not None else None,
            "empty": sl.empty,
            "commentary": sl.commentary,
        },
    }


def cmd_exp(S: Session, args) -> dict:
    t = args.param
    if t is None:
        t = "t" if "t" not in S.ring.vars else fresh_names("t", 1, S.ring.vars)[0]
    phi = exp_action(S.delta, t)
    fixed = {n: phi.target.eq(phi(g), g.embed(phi.target.vars)) for n, g in S.spec.kernel_gens}
    return {"exp": {"param": t, "images": {v: render(phi.images[v]) for v in S.ring.vars},
                    "kernel_gens_fixed": fixed}}


def _prime(S: Session, args) -> Polynomial:
    if args.prime:
        return S.element(args.prime[0])
    if S.spec.primes:
        return S.spec.primes[0]
    raise InputError("no prime given: use --prime or assert primes(...)")


def cmd_tower(S: Session, args) -> dict:
    S.need_kernel_gens()
    f = _prime(S, args)
    sl = find_local_slice(S.delta, S.a_gens, S.opt("slice_bound", 2), f)
    if sl is None:
        return {"slice": {"verdict": "search exhausted"}}
    out = {"slice": {"z": render(sl.z), "value": render(sl.value), "f": render(f), "p": sl.p,
                     "beta": render(sl.beta), "is_slice": sl.is_slice}}
    z_name = render(sl.z) if render(sl.z) in S.ring.vars and render(sl.z) not in S.a_names else "z"
    T = build_tower(S.ring, S.delta, S.a_gens, sl, S.a_names,
                    assume_irreducible=S.opt("assume_irreducible", False) or S.spec.assertions["irreducible"],
                    z_name=z_name)
    rep = verify_tower(T)
    out["tower"] = {
        "nu": T.nu,
        "p": T.p,
        "mu": T.mu,
        "mu_per_var": dict(T.mu_per_var),
        "irreducibility": T.irreducibility,
        "steps": [{
            "index": s.index,
            "contraction": _ideal(s.contraction),
            "g": render(s.g),
            "ell": s.ell,
            "y": s.y_name,
            "y_in_ring": render(s.y),
            "delta_y": render(s.delta_y),
            "degree": s.top_degree,
        } for s in T.steps],
        "equations": T.equations(),
        "verification": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in rep.checks],
        "all_passed": rep.passed,
    }
    out["residue_chain"] = [{
        "index": r.index,
        "ring": str(r.ring),
        "degree": r.degree,
        "minimal_polynomial": render(r.minimal_polynomial.poly)
        if r.minimal_polynomial is not None and r.minimal_polynomial.poly is not None else None,
    } for r in residue_chain(T)]
    return out


def cmd_fibers(S: Session, args) -> dict:
    S.need_kernel_gens()
    if not args.point:
        raise InputError("fibers needs at least one --point")
    out = []
    for pt in args.point:
        fr = fiber_at_point(S.delta, S.a_gens, S.a_names, pt)
        out.append({
            "point": {k: str(v) for k, v in fr.point.items()},
            "empty": fr.empty,
            "supported": fr.supported,
            "variables": list(fr.variables),
            "constraint": render(fr.constraint) if fr.constraint is not None else None,
            "dimension": fr.dimension,
            "components": fr.components,
            "multiplicities": list(fr.multiplicities),
            "note": fr.note,
        })
    return {"fibers": out}


def cmd_bundle(S: Session, args) -> dict:
    S.need_kernel_gens()
    if not args.alpha:
        raise InputError("bundle needs --alpha")
    alpha = S.element(args.alpha)
    primes = [S.element(p) for p in args.prime] if args.prime else list(S.spec.primes)
    rep = check_triviality(S.delta, alpha, S.a_gens, S.a_names, primes or None,
                           samples=S.opt("samples", 20), bound=S.opt("slice_bound", 2),
                           assertions=S.spec.assertions)
    factors = []
    for fr in rep.factors:
        bd = fr.branching
        cert = bd.certificate
        factors.append({
            "f": render(fr.f),
            "multiplicity": fr.multiplicity,
            "m": bd.m,
            "tag": bd.tag,
            "method": bd.method,
            "lower_bound": bd.lower_bound,
            "chain_degrees": list(bd.chain_degrees),
            "certificate": None if cert is None else {
                "element": render(cert.element),
                "minimal_polynomial": render(cert.minpoly.poly),
                "tags": list(cert.minpoly.tags),
                "degree": cert.degree,
                "verified": cert.verify(),
            },
            "notes": list(bd.notes),
        })
    witness = {k: (_s(v) if isinstance(v, Polynomial) else
                   ({a: str(b) for a, b in v.items()} if isinstance(v, dict) else v))
               for k, v in rep.witness.items()}
    return {"criterion": {
        "alpha": render(rep.alpha),
        "verdict": rep.verdict,
        "witness": witness,
        "slice": render(rep.slice) if rep.slice is not None else None,
        "factors": factors,
        "hypotheses": rep.hypotheses,
        "reasons": list(rep.reasons),
        "samples": len(rep.samples),
        "notes": list(rep.notes),
    }}


COMMANDS = {
    "check": cmd_check,
    "kernel": cmd_kernel,
    "plinth": cmd_plinth,
    "exp": cmd_exp,
    "tower": cmd_tower,
    "fibers": cmd_fibers,
    "bundle": cmd_bundle,
}


def _hypotheses(spec: DerivationSpec) -> dict:
    out = {k: ("asserted" if v else "not asserted") for k, v in spec.assertions.items()}
    out["primes"] = [render(p) for p in spec.primes]
    return out


def run(text: str, command: str, args: argparse.Namespace) -> Report:
    spec = parse_spec(text)
    S = Session(spec)
    t0 = time.perf_counter()
    sections = COMMANDS[command](S, args)
    elapsed = time.perf_counter() - t0
    used = {k: v for k, v in sorted(vars(args).items()) if k in ("bound", "prime", "alpha", "point", "param")
            and v is not None}
    return Report(command, used, spec.digest, sections, _hypotheses(spec), timing={"seconds": round(elapsed, 6)})


def error_body(command: str, text: str, exc: GalabError) -> dict:
    return {
        "tool": "galab",
        "version": __version__,
        "command": command,
        "input_digest": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "error": {"kind": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code},
    }


# ---------------------------------------------------------------------------
# corpus


def corpus_dir() -> Path:
    return Path(str(resources.files("galab") / "corpus"))


def _namespace(argv: Sequence[str]) -> argparse.Namespace:
    ns = build_parser().parse_args(list(argv) + ["--spec", "-"])
    return ns


def corpus_bodies(only: Sequence[str] = (), root: Path | None = None) -> list:
    """``(golden name, exit code, expected exit, body text)`` for each manifest run."""
    root = root or corpus_dir()
    manifest = json.loads((root / "manifest.json").read_text())
    out = []
    for entry in manifest["entries"]:
        if only and entry["name"] not in only:
            continue
        text = (root / entry["spec"]).read_text()
        for run_ in entry["runs"]:
            ns = _namespace(run_["argv"])
            try:
                body, code = run(text, ns.command, ns).body(), 0
            except GalabError as e:
                body, code = error_body(ns.command, text, e), e.exit_code
            out.append((run_["golden"], code, run_.get("exit", 0), dump_body(body)))
    return out


def corpus_run(update: bool = False, only: Sequence[str] = (), root: Path | None = None) -> list:
    """Run every manifest entry; returns ``(name, status)`` pairs, status in match/mismatch/missing/updated."""
    root = root or corpus_dir()
    results = []
    for name, code, expected, produced in corpus_bodies(only, root):
        if code != expected:
            results.append((name, f"exit {code}, expected {expected}"))
            continue
        gpath = root / "golden" / name
        if update:
            gpath.parent.mkdir(parents=True, exist_ok=True)
            gpath.write_text(produced)
            results.append((name, "updated"))
        elif not gpath.exists():
            results.append((name, "missing"))
        else:
            results.append((name, "match" if gpath.read_text() == produced else "mismatch"))
    return results


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="galab", description="Locally nilpotent derivations and A^1-bundles.")
    ap.add_argument("command", choices=sorted(COMMANDS) + ["corpus"])
    ap.add_argument("subcommand", nargs="?", help="for corpus: run")
    ap.add_argument("--spec", help="spec file ('-' for stdin)")
    ap.add_argument("--bound", type=int)
    ap.add_argument("--prime", action="append", help="declared prime (repeatable)")
    ap.add_argument("--alpha")
    ap.add_argument("--point", action="append", help='rational point, e.g. "x=0,t=1" (repeatable)')
    ap.add_argument("--param", help="parameter name for exp")
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("json", "text"), default="text")
    ap.add_argument("--update", action="store_true", help="corpus: rewrite golden files")
    ap.add_argument("--entry", action="append", default=[], help="corpus: restrict to entries")
    return ap


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    previous = None
    try:
        previous = set_caps(Caps.from_env())
        if args.command == "corpus":
            if args.subcommand != "run":
                raise InputError("usage: galab corpus run [--update] [--entry NAME]")
            results = corpus_run(update=args.update, only=args.entry)
            lines = [f"{status:9s} {name}" for name, status in results]
            bad = [r for r in results if r[1] not in ("match", "updated")]
            lines.append(f"{len(results) - len(bad)}/{len(results)} golden reports ok")
            _emit("\n".join(lines) + "\n", args.out)
            if bad:
                raise InvariantError(f"{len(bad)} corpus reports differ from golden")
            return 0
        if not args.spec:
            raise InputError("--spec is required")
        text = sys.stdin.read() if args.spec == "-" else Path(args.spec).read_text(encoding="utf-8")
        rep = run(text, args.command, args)
        _emit(rep.to_json() if args.format == "json" else rep.to_text(), args.out)
        return 0
    except GalabError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RecursionError:
        print("error: expression nesting too deep", file=sys.stderr)
        return 4
    except Exception as e:  # anything else is a bug, reported as an invariant breach
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 5
    finally:
        if previous is not None:
            set_caps(previous)


if __name__ == "__main__":
    sys.exit(main())
