"""JSON job documents: the scalar grammar, object parsing, and reports.

Scalars are strings in a small exact grammar: rationals "3/2", gaussian
rationals "1/2+1/3i", polynomials "x1^2*z - 2/5".  Forms are arrays of
{"coeff": str, "basis": [1-based indices]}; matrices are row-major arrays of
scalar strings.  Reports serialize deterministically (sorted keys); the
timing field is the only non-reproducible entry.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .scalars import GaussRat, Poly, gauss_str, poly_str
from .forms import MixedForm
from .clifford import GenVector
from .charts import Chart


class JobError(ValueError):
    """Malformed input document; maps to exit code 2."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))"
)


def _tokenize(s: str, location: str):
    pos = 0
    out = []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            if s[pos:].strip() == "":
                break
            raise JobError(f"cannot read scalar {s!r} at offset {pos}", location)
        pos = m.end()
        if m.group("num"):
            out.append(("num", Fraction(m.group("num"))))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    return out


class _ScalarParser:
    def __init__(self, tokens, names, location):
        self.toks = tokens
        self.pos = 0
        self.names = tuple(names)
        self.location = location

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.pos += 1
        return t

    def _const(self, g: GaussRat) -> Poly:
        return Poly.const(self.names, g)

    def parse(self) -> Poly:
        v = self.expr()
        if self.pos != len(self.toks):
            raise JobError("trailing tokens in scalar", self.location)
        return v

    def expr(self) -> Poly:
        kind, val = self.peek()
        neg = False
        if (kind, val) == ("op", "-"):
            self.take()
            neg = True
        elif (kind, val) == ("op", "+"):
            self.take()
        acc = self.term()
        if neg:
            acc = -acc
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "+"):
                self.take()
                acc = acc + self.term()
            elif (kind, val) == ("op", "-"):
                self.take()
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                acc = acc * self.factor()
            elif kind in ("num", "name") or (kind, val) == ("op", "("):
                acc = acc * self.factor()  # implicit multiplication
            else:
                return acc

    def factor(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            base = self._const(GaussRat(val))
        elif kind == "name":
            if val == "i" and "i" not in self.names:
                base = self._const(GaussRat(0, 1))
            elif val in self.names:
                base = Poly.var(self.names, val)
            else:
                raise JobError(f"unknown variable {val!r}", self.location)
        elif (kind, val) == ("op", "("):
            base = self.expr()
            kind, val = self.take()
            if (kind, val) != ("op", ")"):
                raise JobError("missing closing parenthesis", self.location)
        elif (kind, val) == ("op", "-"):
            return -self.factor()
        else:
            raise JobError(f"unexpected token {val!r}", self.location)
        kind, val = self.peek()
        if (kind, val) == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num" or val.denominator != 1:
                raise JobError("exponent must be a nonnegative integer", self.location)
            base = base ** int(val)
        return base


def parse_scalar(s, names=(), location="scalar"):
    """Parse the scalar grammar into Poly (with names) or GaussRat (without)."""
    if isinstance(s, int):
        s = str(s)
    if not isinstance(s, str):
        raise JobError(f"scalar must be a string, got {type(s).__name__}", location)
    toks = _tokenize(s, location)
    if not toks:
        raise JobError("empty scalar", location)
    p = _ScalarParser(toks, names, location).parse()
    if not names:
        return p.const_value()
    return p


def scalar_str(x) -> str:
    if isinstance(x, Poly):
        return poly_str(x)
    return gauss_str(x)


def parse_chart(doc, location="chart") -> Chart:
    if not isinstance(doc, dict):
        raise JobError("chart must be an object", location)
    if "complex_dim" in doc:
        return Chart.complex_plane(int(doc["complex_dim"]))
    names = doc.get("vars")
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise JobError("chart.vars must be a list of names", location)
    pairs = tuple(
        (int(a) - 1, int(b) - 1) for a, b in doc.get("complex_pairs", [])
    )
    return Chart(tuple(names), pairs)


def parse_form(doc, dim: int, names=(), variance="form", location="form") -> MixedForm:
    if not isinstance(doc, list):
        raise JobError("a form is an array of {coeff, basis} terms", location)
    acc = MixedForm.zero(dim, variance)
    for idx, term in enumerate(doc):
        where = f"{location}[{idx}]"
        if not isinstance(term, dict) or "coeff" not in term or "basis" not in term:
            raise JobError("term needs coeff and basis", where)
        basis = term["basis"]
        if not isinstance(basis, list):
            raise JobError("basis must be a list of 1-based indices", where)
        coeff = parse_scalar(term["coeff"], names, where + ".coeff")
        acc = acc + MixedForm.blade(dim, [int(i) - 1 for i in basis], coeff, variance)
    return acc


def form_json(phi: MixedForm) -> list:
    out = []
    for mask in sorted(phi.terms, key=lambda x: (x.bit_count(), x)):
        out.append(
            {
                "coeff": scalar_str(phi.terms[mask]),
                "basis": [i + 1 for i in range(phi.dim) if mask & (1 << i)],
            }
        )
    return out


def parse_matrix(doc, names=(), location="matrix"):
    if not isinstance(doc, list) or not doc or not all(isinstance(r, list) for r in doc):
        raise JobError("matrix must be a non-empty row-major array", location)
    return [
        [parse_scalar(x, names, f"{location}[{i}][{j}]") for j, x in enumerate(row)]
        for i, row in enumerate(doc)
    ]


def matrix_json(mat) -> list:
    return [[scalar_str(x) for x in row] for row in mat]


def parse_section(doc, dim: int, names=(), location="section") -> GenVector:
    if not isinstance(doc, dict):
        raise JobError("section must be {vec: [...], covec: [...]}", location)
    vec = doc.get("vec", ["0"] * dim)
    covec = doc.get("covec", ["0"] * dim)
    if len(vec) != dim or len(covec) != dim:
        raise JobError(f"section components must have length {dim}", location)
    return GenVector(
        dim,
        [parse_scalar(x, names, f"{location}.vec[{i}]") for i, x in enumerate(vec)],
        [parse_scalar(x, names, f"{location}.covec[{i}]") for i, x in enumerate(covec)],
    )


def section_json(v: GenVector) -> dict:
    return {
        "vec": [scalar_str(c) for c in v.vec],
        "covec": [scalar_str(c) for c in v.covec],
    }


def parse_point(doc, chart: Chart, location="point") -> dict:
    if not isinstance(doc, list) or len(doc) != chart.dim:
        raise JobError(f"point must list {chart.dim} coordinates", location)
    return {
        n: parse_scalar(x, (), f"{location}[{i}]")
        for i, (n, x) in enumerate(zip(chart.names, doc))
    }


def point_json(chart: Chart, p: dict) -> list:
    return [gauss_str(p[n]) for n in chart.names]


# ---------------------------------------------------------------------------
# jobs and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JobSpec:
    """A parsed job: command, input document, and run options."""

    command: str
    document: dict
    seed: int | None = None
    cases: int | None = None
    degree_bound: int | None = None
    samples: list | None = None

    def __post_init__(self):
        declared = self.document.get("command")
        if declared is not None and declared != self.command:
            raise JobError(
                f"document is for {declared!r}, invoked as {self.command!r}", "command"
            )


@dataclass
class Report:
    command: str
    verdict: str  # pass | fail | error
    certificate: dict | None = None
    counterexample: dict | None = None
    seed: int | None = None
    timing_ms: float = 0.0
    tool_version: str = __version__

    def __post_init__(self):
        if self.verdict in ("pass", "fail"):
            if (self.certificate is None) == (self.counterexample is None):
                raise ValueError(
                    "pass/fail reports carry exactly one of certificate or counterexample"
                )

    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1}.get(self.verdict, 2)

    def to_json(self) -> str:
        body = {
            "command": self.command,
            "verdict": self.verdict,
            "certificate": self.certificate,
            "counterexample": self.counterexample,
            "seed": self.seed,
            "timing_ms": round(self.timing_ms, 3),
            "tool_version": self.tool_version,
        }
        return json.dumps(body, sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.verdict.upper()}"]
        if self.seed is not None:
            lines.append(f"  seed: {self.seed}")
        if self.certificate is not None:
            lines.append("  certificate:")
            lines.extend(
                f"    {k}: {json.dumps(v, sort_keys=True)}"
                for k, v in sorted(self.certificate.items())
            )
        if self.counterexample is not None:
            lines.append("  counterexample:")
            lines.extend(
                f"    {k}: {json.dumps(v, sort_keys=True)}"
                for k, v in sorted(self.counterexample.items())
            )
        lines.append(f"  time: {self.timing_ms:.1f} ms  (gcgeo {self.tool_version})")
        return "\n".join(lines)


def emit(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return report.to_json()
    if fmt == "text":
        return report.to_text()
    raise JobError(f"unknown format {fmt!r}")


def load_document(path: str) -> dict:
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise JobError(f"cannot read {path}: {e}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise JobError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}", path)
    if not isinstance(doc, dict):
        raise JobError("document must be a JSON object", path)
    return doc
