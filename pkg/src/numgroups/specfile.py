"""JSON group-spec files: parsing with located errors, and canonical serialization.

Layout::

    {
      "field": {"poly": ["1", "0", "1"],
                "integral_basis": [["1", "0"], ["0", "1"]],   # optional
                "embedding": {"re": 0.0, "im": 1.0}},          # optional
      "n": 2,
      "generators": [{"name": "A", "matrix": [[["0", "0"], ["-1", "0"]], ...]}, ...]
    }

``"quadratic_d": d`` may replace ``"field"``.  Matrix entries are arrays of
power-basis coordinates as rational strings; over a degree-1 field an entry
may be a single rational string or integer.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from ._backend import qq
from .decider import GroupSpec
from .exactfield import NumberField, quadratic_field, rational_field
from .fricke import hecke_value, pi_lambda
from .linhull import SquareMatrix
from .oklattice import _quadratic_d


class SpecError(ValueError):
    """Invalid spec file; ``where`` names the offending key path or line/column."""

    def __init__(self, where: str, message: str):
        self.where = where
        self.message = message
        super().__init__(f"{where}: {message}")


def _rational(value, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SpecError(where, f"expected a rational string like \"p/q\", got {value!r}")
    try:
        return qq(value)
    except (ValueError, ZeroDivisionError):
        raise SpecError(where, f"not a rational number: {value!r}") from None


def _expect(obj, typ, where: str, what: str):
    if not isinstance(obj, typ):
        raise SpecError(where, f"expected {what}")
    return obj


def _parse_field(doc: dict) -> NumberField:
    if "quadratic_d" in doc:
        if "field" in doc:
            raise SpecError("quadratic_d", "give either \"field\" or \"quadratic_d\", not both")
        d = doc["quadratic_d"]
        if isinstance(d, bool) or not isinstance(d, int):
            raise SpecError("quadratic_d", "expected an integer")
        try:
            return quadratic_field(d)
        except ValueError as exc:
            raise SpecError("quadratic_d", str(exc)) from None
    if "field" not in doc:
        raise SpecError("field", "missing key (or use \"quadratic_d\")")
    f = _expect(doc["field"], dict, "field", "an object")
    unknown = set(f) - {"poly", "integral_basis", "embedding"}
    if unknown:
        raise SpecError("field", f"unknown keys {sorted(unknown)}")
    poly_raw = _expect(f.get("poly"), list, "field.poly", "an array of integer strings (low degree first)")
    poly = [_rational(c, f"field.poly[{i}]") for i, c in enumerate(poly_raw)]
    basis = None
    if "integral_basis" in f:
        rows = _expect(f["integral_basis"], list, "field.integral_basis", "an array of rows")
        basis = [
            [_rational(x, f"field.integral_basis[{i}][{j}]") for j, x in enumerate(_expect(r, list, f"field.integral_basis[{i}]", "an array"))]
            for i, r in enumerate(rows)
        ]
    emb = None
    if "embedding" in f:
        e = _expect(f["embedding"], dict, "field.embedding", "an object {\"re\": ..., \"im\": ...}")
        try:
            emb = complex(float(e["re"]), float(e["im"]))
        except (KeyError, TypeError, ValueError):
            raise SpecError("field.embedding", "needs numeric \"re\" and \"im\"") from None
    if len(poly) == 2 and poly == [0, 1] and basis is None and emb is None:
        return rational_field()
    try:
        K = NumberField(poly, basis, emb)
    except ValueError as exc:
        raise SpecError("field", str(exc)) from None
    d = _quadratic_d(K)
    if d is not None and d != 1:
        try:
            Kq = quadratic_field(d)
        except ValueError:
            return K
        if Kq == K and (emb is None or emb == Kq.embedding):
            return Kq
    return K


def parse_spec(text: str, source: str = "<spec>") -> GroupSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None
    _expect(doc, dict, source, "a JSON object at the top level")
    unknown = set(doc) - {"field", "quadratic_d", "n", "generators"}
    if unknown:
        raise SpecError(source, f"unknown keys {sorted(unknown)}")
    K = _parse_field(doc)
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SpecError("n", "expected a positive integer")
    gens_raw = _expect(doc.get("generators"), list, "generators", "an array of {\"name\", \"matrix\"} objects")
    if not gens_raw:
        raise SpecError("generators", "at least one generator is required")
    labels, mats = [], []
    for k, g in enumerate(gens_raw):
        where = f"generators[{k}]"
        _expect(g, dict, where, "an object with \"name\" and \"matrix\"")
        name = g.get("name")
        if not isinstance(name, str) or not name:
            raise SpecError(f"{where}.name", "expected a non-empty string")
        rows = _expect(g.get("matrix"), list, f"{where}.matrix", f"an array of {n} rows")
        if len(rows) != n:
            raise SpecError(f"{where}.matrix", f"expected {n} rows, got {len(rows)}")
        entries = []
        for i, row in enumerate(rows):
            _expect(row, list, f"{where}.matrix[{i}]", f"an array of {n} entries")
            if len(row) != n:
                raise SpecError(f"{where}.matrix[{i}]", f"expected {n} entries, got {len(row)}")
            out_row = []
            for j, e in enumerate(row):
                ew = f"{where}.matrix[{i}][{j}]"
                if isinstance(e, list):
                    if len(e) != K.degree:
                        raise SpecError(ew, f"expected {K.degree} coordinates, got {len(e)}")
                    out_row.append(K.element([_rational(c, f"{ew}[{c_i}]") for c_i, c in enumerate(e)]))
                elif K.degree == 1:
                    out_row.append(K(_rational(e, ew)))
                else:
                    raise SpecError(ew, f"expected an array of {K.degree} coordinates")
            entries.append(out_row)
        labels.append(name)
        mats.append(SquareMatrix(K, entries))
    try:
        return GroupSpec(K, mats, labels)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError("generators", str(exc)) from None


def load_spec(path: str | Path) -> GroupSpec:
    p = Path(path)
    return parse_spec(p.read_text(encoding="utf-8"), str(p))


def field_to_json(K: NumberField) -> dict:
    d = _quadratic_d(K)
    if d is not None and d != 1:
        try:
            if quadratic_field(d) is K:
                return {"quadratic_d": d}
        except ValueError:
            pass
    f: dict = {"poly": K.defining_poly.to_json()}
    if any(K.integral_basis[i][j] != (1 if i == j else 0) for i in range(K.degree) for j in range(K.degree)):
        f["integral_basis"] = [[str(x) for x in row] for row in K.integral_basis]
    if K.embedding is not None and K.degree > 1:
        f["embedding"] = {"re": K.embedding.real, "im": K.embedding.imag}
    return {"field": f}


def spec_to_json(spec: GroupSpec) -> dict:
    doc = field_to_json(spec.field)
    doc["n"] = spec.n
    doc["generators"] = [{"name": name, "matrix": g.to_json()} for name, g in zip(spec.labels, spec.generators)]
    return doc


def serialize_spec(spec: GroupSpec) -> str:
    """Canonical text: fixed key order, two-space indent, entries as coordinate arrays."""
    doc = spec_to_json(spec)
    ordered = {k: doc[k] for k in ("quadratic_d", "field", "n", "generators") if k in doc}
    return _dump(ordered) + "\n"


def _dump(obj, indent: int = 0) -> str:
    # matrices on one line per row keeps files readable
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {_dump(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, list) and obj and all(isinstance(x, list) for x in obj) and not _is_leaf_row(obj):
        items = [f"{pad}  {_dump(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, list) and obj and all(isinstance(x, dict) for x in obj):
        items = [f"{pad}  {_dump(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return json.dumps(obj)


def _is_leaf_row(obj: list) -> bool:
    """A matrix row: list of coordinate arrays of scalars."""
    return all(isinstance(x, list) and all(not isinstance(y, (list, dict)) for y in x) for x in obj)


# ---------------------------------------------------------------------------
# Bundled examples


def bundled_builders() -> dict:
    Q = rational_field()
    Ki = quadratic_field(-1)
    K5 = quadratic_field(-5)
    out = {
        "picard": lambda: pi_lambda(Ki, Ki.gen()),
        "modular": lambda: pi_lambda(Q, 1),
        "half": lambda: pi_lambda(Q, qq("1/2")),
        "fivehalves": lambda: pi_lambda(Q, qq("5/2")),
        "unipotent": lambda: GroupSpec(Q, [SquareMatrix(Q, [[1, 1], [0, 1]])], ["T"]),
        "sqrt-minus-5": lambda: pi_lambda(K5, K5.gen()),
        "trivial": lambda: GroupSpec(Q, [SquareMatrix.identity(Q, 2)], ["I"]),
    }
    for q in (4, 5, 6, 7):
        out[f"hecke{q}"] = (lambda q=q: pi_lambda(hecke_value(q).field, hecke_value(q).lam))
    return out


def bundled_names() -> list[str]:
    return sorted(bundled_builders())


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("numgroups") / "specs" / f"{name}.json"))


def load_bundled(name: str) -> GroupSpec:
    if name not in bundled_builders():
        raise SpecError(name, f"no bundled spec named {name!r}; choose from {bundled_names()}")
    return load_spec(bundled_path(name))


def write_bundled(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, build in sorted(bundled_builders().items()):
        p = directory / f"{name}.json"
        p.write_text(serialize_spec(build()), encoding="utf-8")
        paths.append(p)
    return paths
