"""JSON problem files and reports.

Problem file (``"format": 1``)::

    {
      "format": 1,
      "graph": {"generator": "cycle", "params": {"n": 6}}
               | {"vertices": [...], "edges": [[u, v, w], ...]},
      "bundle": {"dims": {"<vertex>": d}, "default": 1},
      "connection": {"edges": {"[u, v]": <matrix>}},
      "endomorphism": {"matrices": {"<vertex>": <matrix>}, "default": c},
      "potential": {"<vertex>": v} | {"values": {...}, "default": c},
      "fields": {"<name>": {"<vertex>": <vector>}}
    }

Vertex tokens appear natively in lists (ints, strings, lists for tuples)
and as text in object keys: ``"3"`` is the integer 3, ``"[0, 1]"`` the
tuple ``(0, 1)``, anything that is not valid JSON is a name.  Complex
numbers are ``[re, im]`` pairs; bare reals are accepted on input.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .bundle import Connection, Endomorphism, HermitianBundle
from .exceptions import MagsurjError, NonScalarProblem, ProblemFormatError
from .fields import VectorField
from .gallery import GeneratorSpec, make_graph
from .graph import FiniteGraph, GraphOracle, sort_vertices
from .schroedinger import MagneticOperator, ScalarPotential, scalar_laplacian

FORMAT_VERSION = 1


def decode_token(obj):
    if isinstance(obj, bool):
        raise ProblemFormatError(f"invalid vertex token {obj!r}")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        return obj
    if isinstance(obj, list):
        return tuple(decode_token(o) for o in obj)
    raise ProblemFormatError(f"invalid vertex token {obj!r}")


def encode_token(v):
    if isinstance(v, tuple):
        return [encode_token(u) for u in v]
    return v


def decode_key(s: str):
    try:
        obj = json.loads(s)
    except ValueError:
        return s
    if isinstance(obj, (int, list)) and not isinstance(obj, bool):
        return decode_token(obj)
    if isinstance(obj, str):
        return obj
    return s


def encode_key(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, tuple):
        return json.dumps(encode_token(v))
    return str(int(v))


def _decode_number(x) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(x[0], x[1])
    raise ProblemFormatError(f"expected a number or [re, im] pair, got {x!r}")


def decode_vector(obj) -> np.ndarray:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return np.array([complex(obj)])
    if not isinstance(obj, list):
        raise ProblemFormatError(f"expected a vector, got {obj!r}")
    return np.array([_decode_number(x) for x in obj], dtype=complex)


def encode_vector(vec) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=complex)]


def decode_matrix(obj) -> np.ndarray:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return np.array([[complex(obj)]])
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ProblemFormatError(f"expected a matrix (list of rows), got {obj!r}")
    rows = [[_decode_number(x) for x in r] for r in obj]
    if len({len(r) for r in rows}) != 1:
        raise ProblemFormatError("matrix rows have unequal lengths")
    return np.array(rows, dtype=complex)


def encode_matrix(mat) -> list:
    return [encode_vector(row) for row in np.asarray(mat, dtype=complex)]


def decode_field(obj) -> VectorField:
    if not isinstance(obj, dict):
        raise ProblemFormatError("a field is an object mapping vertices to vectors")
    return VectorField({decode_key(k): decode_vector(v) for k, v in obj.items()})


def encode_field(f: VectorField) -> dict:
    return {encode_key(x): encode_vector(v) for x, v in f.items()}


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def digest(doc) -> str:
    return "sha256:" + hashlib.sha256(canonical_json(doc).encode()).hexdigest()


@dataclass
class Problem:
    graph: GraphOracle
    bundle: HermitianBundle
    connection: Connection
    endo: Endomorphism
    potential: ScalarPotential | None
    fields: dict = field(default_factory=dict)
    doc: dict = field(default_factory=dict)

    def operator(self) -> MagneticOperator:
        if self.potential is not None:
            return scalar_laplacian(self.graph, self.potential)
        return MagneticOperator(self.graph, self.bundle, self.connection, self.endo)

    @property
    def is_scalar(self) -> bool:
        return self.bundle.is_line_bundle and self.connection.is_trivial

    def scalar_potential(self) -> ScalarPotential:
        """The potential of a scalar problem, read from either stanza."""
        if self.potential is not None:
            return self.potential
        if not self.is_scalar:
            raise NonScalarProblem("problem is not scalar")
        return ScalarPotential({x: float(m[0, 0].real) for x, m in self.endo.matrices.items()},
                               self.endo.default)


def _load_graph(doc) -> GraphOracle:
    if not isinstance(doc, dict):
        raise ProblemFormatError('"graph" must be an object')
    if "generator" in doc:
        return make_graph(GeneratorSpec(doc["generator"], dict(doc.get("params", {}))))
    if "vertices" not in doc:
        raise ProblemFormatError('"graph" needs "generator" or "vertices"')
    verts = [decode_token(v) for v in doc["vertices"]]
    edges = []
    for e in doc.get("edges", []):
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise ProblemFormatError(f"edge must be [u, v] or [u, v, weight], got {e!r}")
        u, v = decode_token(e[0]), decode_token(e[1])
        edges.append((u, v, float(e[2]) if len(e) == 3 else 1.0))
    return FiniteGraph(verts, edges)


def _load_potential(doc) -> ScalarPotential:
    if not isinstance(doc, dict):
        raise ProblemFormatError('"potential" must be an object')
    if "values" in doc or "default" in doc:
        values, default = doc.get("values", {}), doc.get("default", 0.0)
    else:
        values, default = doc, 0.0
    return ScalarPotential({decode_key(k): float(v) for k, v in values.items()}, float(default))


def load_problem(doc: dict) -> Problem:
    """Build a :class:`Problem` from a parsed problem document."""
    if not isinstance(doc, dict):
        raise ProblemFormatError("problem document must be a JSON object")
    fmt = doc.get("format", FORMAT_VERSION)
    if fmt != FORMAT_VERSION:
        raise ProblemFormatError(f"unsupported format {fmt!r}")
    if "graph" not in doc:
        raise ProblemFormatError('missing "graph" stanza')
    try:
        graph = _load_graph(doc["graph"])
        bdoc = doc.get("bundle", {})
        bundle = HermitianBundle({decode_key(k): int(d) for k, d in bdoc.get("dims", {}).items()},
                                 int(bdoc.get("default", 1)))
        cdoc = doc.get("connection", {}).get("edges", {})
        if isinstance(cdoc, dict):
            items = [(decode_key(k), m) for k, m in cdoc.items()]
        else:
            items = [(decode_token([e[0], e[1]]), e[2]) for e in cdoc]
        conn_edges = {}
        for key, mat in items:
            if not (isinstance(key, tuple) and len(key) == 2):
                raise ProblemFormatError(f"connection key must be a vertex pair, got {key!r}")
            conn_edges[key] = decode_matrix(mat)
        connection = Connection(conn_edges)
        if "endomorphism" in doc and "potential" in doc:
            raise ProblemFormatError('"endomorphism" and "potential" are mutually exclusive')
        potential = _load_potential(doc["potential"]) if "potential" in doc else None
        edoc = doc.get("endomorphism", {})
        if "matrices" in edoc or "default" in edoc:
            mats, edefault = edoc.get("matrices", {}), edoc.get("default", 0.0)
        else:
            mats, edefault = edoc, 0.0
        endo = Endomorphism({decode_key(k): decode_matrix(m) for k, m in mats.items()}, float(edefault))
        fields = {name: decode_field(f) for name, f in doc.get("fields", {}).items()}
    except MagsurjError:
        raise
    except (TypeError, ValueError, KeyError, AttributeError, IndexError) as exc:
        raise ProblemFormatError(str(exc)) from exc
    for x in set(bundle.dims) | set(endo.matrices) | {v for e in conn_edges for v in e}:
        graph.check_vertex(x)
    for name, f in fields.items():
        for x, vec in f.items():
            graph.check_vertex(x)
            if vec.shape[0] != bundle.fiber_dim(x):
                raise ProblemFormatError(f"field {name!r} has wrong dimension at {x!r}")
    if potential is not None and not (bundle.is_line_bundle and connection.is_trivial):
        raise ProblemFormatError('"potential" requires the trivial line bundle')
    return Problem(graph, bundle, connection, endo, potential, fields, doc)


def load_problem_file(path) -> Problem:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemFormatError(f"{path}: {exc}") from exc
    return load_problem(doc)


def dump_problem(problem: Problem) -> dict:
    """Re-encode a problem as a canonical format-1 document.

    Generator graphs keep their generator stanza; explicit finite graphs are
    written as vertex and edge lists.
    """
    g = problem.graph
    gdoc = problem.doc.get("graph")
    if gdoc is None or "generator" not in gdoc:
        if not isinstance(g, FiniteGraph):
            raise ProblemFormatError("only finite or generator graphs can be written")
        gdoc = {"vertices": [encode_token(v) for v in g.vertices],
                "edges": [[encode_token(u), encode_token(v), w] for u, v, w in g.edges()]}
    doc: dict = {"format": FORMAT_VERSION, "graph": gdoc}
    b = problem.bundle
    doc["bundle"] = {"dims": {encode_key(x): d for x, d in b.dims.items()}, "default": b.default}
    doc["connection"] = {"edges": {json.dumps(encode_token(k)): encode_matrix(m)
                                   for k, m in problem.connection.edges.items()}}
    if problem.potential is not None:
        p = problem.potential
        doc["potential"] = {"values": {encode_key(x): v for x, v in p.values.items()},
                            "default": p.default}
    else:
        e = problem.endo
        doc["endomorphism"] = {"matrices": {encode_key(x): encode_matrix(m) for x, m in e.matrices.items()},
                               "default": e.default}
    doc["fields"] = {name: encode_field(f) for name, f in problem.fields.items()}
    return doc


def encode_vertices(vertices) -> list:
    return [encode_token(v) for v in sort_vertices(vertices)]
